use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_merge-insertion"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn sort_reads_stdin() {
    let out = run_stdin(&["sort"], "5\n-3\n\n9\n1\n7\n");
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "-3\n1\n5\n7\n9\n");
    assert_eq!(stderr(&out).trim(), "comparisons\t7");
}

#[test]
fn sort_every_algorithm_and_strategy() {
    let input: String = (0..50).map(|i| format!("{}\n", (i * 37) % 50)).collect();
    let want: String = (0..50).map(|i| format!("{i}\n")).collect();
    for algorithm in ["mi", "one-two", "combined"] {
        for strategy in ["left", "right", "center-left", "center-right"] {
            let out = run_stdin(
                &["sort", "--algorithm", algorithm, "--strategy", strategy, "--factor", "1.03"],
                &input,
            );
            assert!(out.status.success(), "{algorithm} {strategy}: {}", stderr(&out));
            assert_eq!(stdout(&out), want);
        }
    }
}

#[test]
fn sort_rejects_bad_input() {
    let dup = run_stdin(&["sort"], "1\n2\n1\n");
    assert!(!dup.status.success());
    assert!(stderr(&dup).contains("distinct"));
    let junk = run_stdin(&["sort"], "1\nx\n");
    assert!(!junk.status.success());
    assert!(stderr(&junk).contains("line 2"));
}

#[test]
fn exact_matches_known_values() {
    let out = run(&["exact", "--max", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "num_elements\tF_times_factorial\tF\tnormalized");
    let products: Vec<&str> = lines.map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(products, ["0", "2", "16", "112", "832", "6912", "62784", "623232"]);
}

#[test]
fn count_is_deterministic_and_exhaustive_small() {
    let args = ["count", "--n", "2,8,40", "--trials", "30", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let row8 = text.lines().find(|l| l.starts_with("8\t")).unwrap();
    let cells: Vec<&str> = row8.split('\t').collect();
    assert_eq!(cells[1], "40320");
    let mean: f64 = cells[2].parse().unwrap();
    assert!((mean - 623232.0 / 40320.0).abs() < 1e-12);
    assert!(stderr(&a).contains("seed: 9"));
    assert!(stderr(&a).contains("ChaCha8Rng"));
}

#[test]
fn sequential_matches_parallel() {
    let args = ["count", "--n", "300", "--trials", "40", "--seed", "3"];
    let par = run(&args);
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    let seq = run(&seq_args);
    assert_eq!(par.stdout, seq.stdout);
}

#[test]
fn dist_columns() {
    let out = run(&["dist", "-k", "2", "X1", "Y2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "j\tX1\tY2");
    assert_eq!(text.lines().count(), 5);
    let bad = run(&["dist", "-k", "2", "Z1"]);
    assert!(!bad.status.success());
}

#[test]
fn writes_tsv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bound.tsv");
    let out = run(&["bound", "--range", "10:1000:3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "num_elements\tlog_factorial\tnumeric_upper\tminus_c_xn\tworst_case");
    assert_eq!(rows.len(), 4);
}

#[test]
fn sweep_and_compare_headers() {
    let sweep = run(&["sweep-factor", "--n", "64", "--trials", "5", "--factors", "1,1.03"]);
    assert!(sweep.status.success(), "{}", stderr(&sweep));
    assert!(stdout(&sweep).starts_with("num_elements\tf1\tf1.03\n"));
    let cmp = run(&["compare-algos", "--n", "64", "--trials", "5"]);
    assert!(cmp.status.success());
    assert!(stdout(&cmp).starts_with("num_elements\tMI\tcombined\tcombined_f1.03\n"));
}

#[test]
fn errors_exit_nonzero() {
    for args in [
        &["count", "--n", "0"][..],
        &["count", "--n", "5", "--trials", "0"],
        &["--factor", "0.9", "count", "--n", "5"],
        &["count", "--range", "10:5:3"],
        &["exact", "--n", "4", "--out", "/nonexistent/dir/x.tsv"],
        &["count"],
    ] {
        let out = run(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!stderr(&out).is_empty());
    }
}
