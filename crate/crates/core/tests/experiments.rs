use merge_insertion::exact::{exact_f, to_f64};
use merge_insertion::harness::{
    emit_tsv, parse_tsv, run_experiment, stats_table, trial_counts, ExperimentConfig, TrialStats,
};
use merge_insertion::{Algorithm, Execution, Strategy};

#[test]
fn sampled_mean_covers_exact_value() {
    let n = 12;
    let exact = to_f64(&exact_f(n, Strategy::Left).unwrap());
    let trials = 400;
    let covered = (0..100u64)
        .filter(|&seed| {
            let cfg = ExperimentConfig {
                sizes: vec![n],
                trials: Some(trials),
                seed,
                ..ExperimentConfig::default()
            };
            let s = TrialStats::from_counts(n, &trial_counts(&cfg, n).unwrap());
            (s.mean - exact).abs() <= 4.0 * s.std_dev / (trials as f64).sqrt()
        })
        .count();
    assert!(covered >= 99, "covered in {covered} of 100 seeds");
}

#[test]
fn deterministic_across_runs_and_execution() {
    let cfg = ExperimentConfig {
        sizes: vec![3, 9, 100, 777],
        algorithm: Algorithm::Combined,
        trials: Some(25),
        seed: 42,
        ..ExperimentConfig::default()
    };
    let a = stats_table(&run_experiment(&cfg).unwrap()).to_tsv();
    let b = stats_table(&run_experiment(&cfg).unwrap()).to_tsv();
    let seq = ExperimentConfig {
        execution: Execution::Sequential,
        ..cfg.clone()
    };
    let c = stats_table(&run_experiment(&seq).unwrap()).to_tsv();
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn means_respect_trivial_lower_bound() {
    for algorithm in Algorithm::ALL {
        let cfg = ExperimentConfig {
            sizes: vec![1, 2, 7, 50, 300],
            algorithm,
            trials: Some(20),
            ..ExperimentConfig::default()
        };
        for s in run_experiment(&cfg).unwrap() {
            assert!(s.mean >= (s.n - 1) as f64, "{algorithm} n={}", s.n);
        }
    }
}

#[test]
fn pair_of_elements_needs_one_comparison() {
    let cfg = ExperimentConfig {
        sizes: vec![2],
        exhaustive: false,
        trials: Some(17),
        seed: 5,
        ..ExperimentConfig::default()
    };
    let s = &run_experiment(&cfg).unwrap()[0];
    assert_eq!(s.mean, 1.0);
    assert_eq!(s.trials, 17);
}

#[test]
fn tsv_file_round_trip() {
    let cfg = ExperimentConfig {
        sizes: vec![5, 64],
        trials: Some(10),
        ..ExperimentConfig::default()
    };
    let table = stats_table(&run_experiment(&cfg).unwrap());
    let path = std::env::temp_dir().join(format!("mi-roundtrip-{}.tsv", std::process::id()));
    let bytes = emit_tsv(&table, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(bytes, text.len() as u64);
    assert_eq!(parse_tsv(&text).unwrap(), table);
}

#[test]
fn write_failure_names_path() {
    let table = stats_table(&[]);
    let err = emit_tsv(&table, std::path::Path::new("/nonexistent/dir/out.tsv")).unwrap_err();
    assert!(err.to_string().contains("/nonexistent/dir/out.tsv"));
}
