use std::cmp::Ordering;
use std::collections::BTreeSet;

use merge_insertion::{Algorithm, PosSequence, Schedule, Sorter, Strategy};
use proptest::prelude::{any, prop, prop_assert, prop_assert_eq, prop_oneof, proptest, Just};
use proptest::strategy::Strategy as _;

fn strategy() -> impl proptest::strategy::Strategy<Value = Strategy> {
    prop_oneof![
        Just(Strategy::Left),
        Just(Strategy::Right),
        Just(Strategy::CenterLeft),
        Just(Strategy::CenterRight),
    ]
}

fn algorithm() -> impl proptest::strategy::Strategy<Value = Algorithm> {
    prop_oneof![
        Just(Algorithm::MergeInsertion),
        Just(Algorithm::OneTwo),
        Just(Algorithm::Combined),
    ]
}

fn distinct_keys(max: usize) -> impl proptest::strategy::Strategy<Value = Vec<i32>> {
    prop::collection::btree_set(any::<i32>(), 0..max)
        .prop_map(|s| s.into_iter().collect::<Vec<_>>())
        .prop_shuffle()
}

/// Worst case of MergeInsertion: sum of ceil(log(3k/4)) for k = 1..=n.
fn worst_case(n: usize) -> u64 {
    (1..=n as u64)
        .map(|k| (0..).find(|&c| 4u64 << c >= 3 * k).unwrap())
        .sum()
}

proptest! {
    #[test]
    fn sorts_and_preserves(
        keys in distinct_keys(300),
        alg in algorithm(),
        strat in strategy(),
        factor in prop_oneof![Just(Schedule::standard()), Just(Schedule::with_factor(103, 100).unwrap())],
    ) {
        let sorter = Sorter::new(strat, factor);
        let out = sorter.sort_by(alg, &keys, i32::cmp).unwrap();
        let mut want = keys.clone();
        want.sort_unstable();
        prop_assert_eq!(&out.sorted, &want);
        prop_assert!(out.comparisons + 1 >= keys.len() as u64);
        prop_assert_eq!(sorter.count(alg, &keys).unwrap(), out.comparisons);
    }

    #[test]
    fn merge_insertion_within_worst_case(keys in distinct_keys(400), strat in strategy()) {
        let sorter = Sorter::new(strat, Schedule::standard());
        let out = sorter.sort_by(Algorithm::MergeInsertion, &keys, i32::cmp).unwrap();
        prop_assert!(out.comparisons <= worst_case(keys.len()));
    }

    #[test]
    fn custom_comparator(words in prop::collection::btree_set("[a-z]{1,6}", 0..60)) {
        let mut input: Vec<String> = words.into_iter().collect();
        input.reverse();
        let desc = |a: &String, b: &String| -> Ordering { b.cmp(a) };
        let out = Sorter::default()
            .sort_by(Algorithm::Combined, &input, desc)
            .unwrap();
        prop_assert_eq!(out.sorted, input);
    }

    #[test]
    fn sequence_matches_vec(ops in prop::collection::vec((any::<prop::sample::Index>(), any::<u16>()), 0..400)) {
        let mut seq = PosSequence::new();
        let mut model: Vec<u16> = Vec::new();
        let mut handles = Vec::new();
        for (idx, v) in ops {
            let pos = idx.index(model.len() + 1);
            handles.push((seq.insert(pos, v).unwrap(), v));
            model.insert(pos, v);
        }
        prop_assert_eq!(seq.len(), model.len());
        prop_assert_eq!(seq.to_vec(), model.clone());
        for (h, v) in handles {
            prop_assert_eq!(*seq.item(h), v);
            prop_assert_eq!(model[seq.position(h)], v);
        }
        prop_assert!(seq.get(model.len()).is_err());
    }
}

#[test]
fn worst_case_reached_by_some_input() {
    // n = 5 needs 7 comparisons on some input, and never more
    let sorter = Sorter::default();
    let perms = permutations(5);
    let worst = perms
        .iter()
        .map(|p| sorter.count(Algorithm::MergeInsertion, p).unwrap())
        .max()
        .unwrap();
    assert_eq!(worst, worst_case(5));
    assert_eq!(worst, 7);
}

fn permutations(n: u32) -> Vec<Vec<u32>> {
    fn rec(rest: &mut BTreeSet<u32>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for v in rest.clone() {
            rest.remove(&v);
            cur.push(v);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(v);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}
