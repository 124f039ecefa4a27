//! MergeInsertion, (1,2)-Insertion and their combination.
//!
//! All sorters work on indices into the caller's slice; keys are only ever
//! touched through the comparison callback, and every callback invocation is
//! charged to the [`Tally`] exactly once. Bookkeeping (renaming after the
//! recursion, locating the partner `a_i` of the element being inserted) uses
//! positions and handles, never key comparisons.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::schedule::{optimal_point, Schedule};
use crate::sequence::PosSequence;
use crate::strategy::{ceil_log2, uniform_depth_sum, Strategy, Tally};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortOutcome<T> {
    pub sorted: Vec<T>,
    pub comparisons: u64,
}

/// One binary insertion of the MergeInsertion insertion phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InsertionRecord {
    /// Recursion depth; 0 is the outermost call.
    pub level: u32,
    pub batch: u32,
    /// 1-based index `i` of the inserted `b_i`.
    pub index: u64,
    /// Number of main-chain elements `b_i` was inserted into.
    pub chain_len: u64,
    pub comparisons: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Algorithm {
    #[default]
    MergeInsertion,
    /// (1,2)-Insertion starting from a single element.
    OneTwo,
    /// MergeInsertion on the largest optimal prefix, (1,2)-Insertion after.
    Combined,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::MergeInsertion,
        Algorithm::OneTwo,
        Algorithm::Combined,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::MergeInsertion => "mi",
            Algorithm::OneTwo => "one-two",
            Algorithm::Combined => "combined",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown algorithm '{s}' (expected mi, one-two or combined)"
                ))
            })
    }
}

/// Sorter configuration: binary-insertion strategy plus batch schedule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Sorter {
    pub strategy: Strategy,
    pub schedule: Schedule,
}

impl Sorter {
    pub fn new(strategy: Strategy, schedule: Schedule) -> Self {
        Sorter { strategy, schedule }
    }

    pub fn merge_insertion<T: Ord + Clone>(&self, input: &[T]) -> Result<SortOutcome<T>> {
        self.sort_by(Algorithm::MergeInsertion, input, T::cmp)
    }

    pub fn combined<T: Ord + Clone>(&self, input: &[T]) -> Result<SortOutcome<T>> {
        self.sort_by(Algorithm::Combined, input, T::cmp)
    }

    pub fn sort_by<T, F>(&self, algorithm: Algorithm, input: &[T], cmp: F) -> Result<SortOutcome<T>>
    where
        T: Clone,
        F: FnMut(&T, &T) -> Ordering,
    {
        let mut ctx = Ctx::new(input, cmp, *self, false);
        let order = ctx.run(algorithm);
        ctx.finish(order)
    }

    /// MergeInsertion that also reports every insertion of every recursion
    /// level.
    pub fn merge_insertion_traced_by<T, F>(
        &self,
        input: &[T],
        cmp: F,
    ) -> Result<(SortOutcome<T>, Vec<InsertionRecord>)>
    where
        T: Clone,
        F: FnMut(&T, &T) -> Ordering,
    {
        let mut ctx = Ctx::new(input, cmp, *self, true);
        let order = ctx.run(Algorithm::MergeInsertion);
        let trace = ctx.trace.take().unwrap_or_default();
        Ok((ctx.finish(order)?, trace))
    }

    /// Comparison count only; the input is not cloned.
    pub fn count<T: Ord>(&self, algorithm: Algorithm, input: &[T]) -> Result<u64> {
        let mut ctx = Ctx::new(input, T::cmp, *self, false);
        ctx.run(algorithm);
        if ctx.duplicate {
            return Err(Error::DuplicateKeys);
        }
        Ok(ctx.tally.count())
    }

    /// (1,2)-Insertion of `rest` into an already sorted `prefix`.
    ///
    /// The prefix is trusted to be sorted; checking it would cost comparisons.
    pub fn one_two_insertion_by<T, F>(
        &self,
        prefix: &[T],
        rest: &[T],
        cmp: F,
    ) -> Result<SortOutcome<T>>
    where
        T: Clone,
        F: FnMut(&T, &T) -> Ordering,
    {
        let keys: Vec<T> = prefix.iter().chain(rest).cloned().collect();
        let mut ctx = Ctx::new(&keys, cmp, *self, false);
        let p = prefix.len() as u32;
        let mut chain = PosSequence::from_vec_with_capacity((0..p).collect(), rest.len());
        let rest_ids: Vec<u32> = (p..keys.len() as u32).collect();
        let planner = PairPlanner::new(keys.len());
        ctx.one_two(&mut chain, &rest_ids, &planner);
        ctx.finish(chain.to_vec())
    }
}

/// Sorts distinct keys with MergeInsertion.
pub fn merge_insertion<T: Ord + Clone>(
    input: &[T],
    strategy: Strategy,
    schedule: Schedule,
) -> Result<SortOutcome<T>> {
    Sorter::new(strategy, schedule).merge_insertion(input)
}

/// Inserts `rest` into the sorted `prefix` with (1,2)-Insertion.
pub fn one_two_insertion<T: Ord + Clone>(
    prefix: &[T],
    rest: &[T],
    strategy: Strategy,
) -> Result<SortOutcome<T>> {
    Sorter::new(strategy, Schedule::standard()).one_two_insertion_by(prefix, rest, T::cmp)
}

/// MergeInsertion on the first `max{u_k <= n}` keys, (1,2)-Insertion after.
pub fn combined_sort<T: Ord + Clone>(input: &[T], strategy: Strategy) -> Result<SortOutcome<T>> {
    Sorter::new(strategy, Schedule::standard()).combined(input)
}

/// Largest `u_k = floor(4/3 * 2^k)` not exceeding `n` (`n >= 1`).
pub fn combined_split(n: usize) -> usize {
    let mut best = 1;
    for k in 0..62 {
        let u = optimal_point(k);
        if u > n as u64 {
            break;
        }
        best = u as usize;
    }
    best
}

struct Ctx<'a, T, F> {
    keys: &'a [T],
    cmp: F,
    tally: Tally,
    duplicate: bool,
    config: Sorter,
    trace: Option<Vec<InsertionRecord>>,
}

impl<'a, T, F> Ctx<'a, T, F>
where
    F: FnMut(&T, &T) -> Ordering,
{
    fn new(keys: &'a [T], cmp: F, config: Sorter, trace: bool) -> Self {
        assert!(keys.len() < u32::MAX as usize, "input too long");
        Ctx {
            keys,
            cmp,
            tally: Tally::new(),
            duplicate: false,
            config,
            trace: trace.then(Vec::new),
        }
    }

    #[inline]
    fn less(&mut self, a: u32, b: u32) -> bool {
        self.tally.charge();
        match (self.cmp)(&self.keys[a as usize], &self.keys[b as usize]) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => {
                self.duplicate = true;
                false
            }
        }
    }

    fn finish(self, order: Vec<u32>) -> Result<SortOutcome<T>>
    where
        T: Clone,
    {
        if self.duplicate {
            return Err(Error::DuplicateKeys);
        }
        Ok(SortOutcome {
            sorted: order.iter().map(|&i| self.keys[i as usize].clone()).collect(),
            comparisons: self.tally.count(),
        })
    }

    fn run(&mut self, algorithm: Algorithm) -> Vec<u32> {
        let n = self.keys.len();
        if n == 0 {
            return Vec::new();
        }
        match algorithm {
            Algorithm::MergeInsertion => {
                let items: Vec<u32> = (0..n as u32).collect();
                self.merge_insertion(&items, 0)
                    .into_iter()
                    .map(|i| items[i as usize])
                    .collect()
            }
            Algorithm::OneTwo => {
                let mut chain = PosSequence::from_vec_with_capacity(vec![0], n - 1);
                let rest: Vec<u32> = (1..n as u32).collect();
                let planner = PairPlanner::new(n);
                self.one_two(&mut chain, &rest, &planner);
                chain.to_vec()
            }
            Algorithm::Combined => {
                let m = combined_split(n);
                let head: Vec<u32> = (0..m as u32).collect();
                let sorted: Vec<u32> = self
                    .merge_insertion(&head, 0)
                    .into_iter()
                    .map(|i| head[i as usize])
                    .collect();
                let mut chain = PosSequence::from_vec_with_capacity(sorted, n - m);
                let rest: Vec<u32> = (m as u32..n as u32).collect();
                if !rest.is_empty() {
                    let planner = PairPlanner::new(n);
                    self.one_two(&mut chain, &rest, &planner);
                }
                chain.to_vec()
            }
        }
    }

    /// Sorts `items` (key indices) and returns the permutation it applied:
    /// entry `r` is the position in `items` of the `r`-th smallest key.
    fn merge_insertion(&mut self, items: &[u32], level: u32) -> Vec<u32> {
        let n = items.len();
        if n <= 1 {
            return (0..n as u32).collect();
        }
        let half = n / 2;
        let mut larger = Vec::with_capacity(half);
        let mut smaller = Vec::with_capacity(n - half);
        for i in 0..half {
            let (x, y) = (i as u32, (i + half) as u32);
            if self.less(items[y as usize], items[x as usize]) {
                larger.push(x);
                smaller.push(y);
            } else {
                larger.push(y);
                smaller.push(x);
            }
        }
        if n % 2 == 1 {
            smaller.push((n - 1) as u32);
        }

        let larger_keys: Vec<u32> = larger.iter().map(|&l| items[l as usize]).collect();
        let perm = self.merge_insertion(&larger_keys, level + 1);

        // Rename: a_r and b_r follow the order the recursion found.
        let a: Vec<u32> = perm.iter().map(|&p| larger[p as usize]).collect();
        let mut b: Vec<u32> = perm.iter().map(|&p| smaller[p as usize]).collect();
        if n % 2 == 1 {
            b.push((n - 1) as u32);
        }

        // Main chain b_1, a_1, ..., a_half; a_r carries build handle r.
        let mut initial = Vec::with_capacity(half + 1);
        initial.push(b[0]);
        initial.extend_from_slice(&a);
        let mut chain = PosSequence::from_vec_with_capacity(initial, b.len() - 1);

        let strategy = self.config.strategy;
        let schedule = self.config.schedule;
        for (k, first, last) in schedule.batches(b.len() as u64) {
            for i in (first..=last).rev() {
                let i = i as usize;
                let bound = if i <= half {
                    chain.position(PosSequence::<u32>::handle_at_build(i))
                } else {
                    chain.len()
                };
                let item = items[b[i - 1] as usize];
                let before = self.tally.count();
                let pos = strategy.search(0, bound, |p| {
                    let other = items[*chain.at(p) as usize];
                    self.less(item, other)
                });
                if let Some(trace) = self.trace.as_mut() {
                    trace.push(InsertionRecord {
                        level,
                        batch: k,
                        index: i as u64,
                        chain_len: bound as u64,
                        comparisons: (self.tally.count() - before) as u32,
                    });
                }
                chain
                    .insert(pos, b[i - 1])
                    .expect("search stays within the chain");
            }
        }
        chain.to_vec()
    }

    /// Inserts `rest` (key indices) into the sorted `chain` of key indices.
    fn one_two(&mut self, chain: &mut PosSequence<u32>, rest: &[u32], planner: &PairPlanner) {
        let strategy = self.config.strategy;
        let mut idx = 0;
        while idx < rest.len() {
            let m = chain.len();
            if rest.len() - idx >= 2 && planner.prefers_pair(m) {
                let (mut lo, mut hi) = (rest[idx], rest[idx + 1]);
                if self.less(hi, lo) {
                    std::mem::swap(&mut lo, &mut hi);
                }
                let p = planner.search_larger(m, strategy, |p| self.less(hi, *chain.at(p)));
                chain.insert(p, hi).expect("position within chain");
                let q = strategy.search(0, p, |p| self.less(lo, *chain.at(p)));
                chain.insert(q, lo).expect("position within chain");
                idx += 2;
            } else {
                let x = rest[idx];
                let p = strategy.search(0, m, |p| self.less(x, *chain.at(p)));
                chain.insert(p, x).expect("position within chain");
                idx += 1;
            }
        }
    }
}

/// Decides between single and pair insertion and searches for the larger
/// element of a pair.
///
/// When a pair is inserted into `m` sorted elements, the larger one lands in
/// gap `j` with probability proportional to `j + 1`. Its search tree is
/// chosen per gap count `g` among
///
/// * a two-layer tree with the short leaves on the right, or
/// * a "step": compare against the element splitting off the rightmost
///   `2^a` gaps; those are searched with a perfect tree of depth `a`, the
///   remaining gaps recursively with the same rule.
///
/// whichever has the least expected depth. A pair is inserted whenever its
/// expected cost (one comparison between the two, the larger into the full
/// chain, the smaller into the prefix below the larger) is strictly below
/// that of two consecutive single insertions. Costs are compared exactly in
/// integers.
#[derive(Clone, Debug)]
pub struct PairPlanner {
    /// `weighted[g]`: sum over gaps `j < g` of `(j + 1) * depth(j)`.
    weighted: Vec<u64>,
    /// `step[g]`: 0 for the two-layer tree, otherwise `a`.
    step: Vec<u8>,
    /// `prefix_depths[g]`: sum over `j < g` of the uniform depth sum for
    /// `j` elements.
    prefix_depths: Vec<u64>,
}

#[inline]
fn weight_sum(lo: u64, hi: u64) -> u64 {
    // sum_{j = lo}^{hi - 1} (j + 1)
    (hi * (hi + 1) - lo * (lo + 1)) / 2
}

impl PairPlanner {
    /// Plans for chains of up to `max_len` elements.
    pub fn new(max_len: usize) -> Self {
        let max_gaps = max_len + 2;
        let mut weighted = vec![0u64; max_gaps + 1];
        let mut step = vec![0u8; max_gaps + 1];
        for g in 2..=max_gaps as u64 {
            let k = ceil_log2(g) as u64;
            let short = (1u64 << k) - g;
            let mut best = k * weight_sum(0, g) - weight_sum(g - short, g);
            let mut choice = 0u8;
            let mut a = 1u32;
            while (1u64 << a) < g {
                let left = g - (1u64 << a);
                let cost = weight_sum(0, g) + a as u64 * weight_sum(left, g) + weighted[left as usize];
                if cost < best {
                    best = cost;
                    choice = a as u8;
                }
                a += 1;
            }
            weighted[g as usize] = best;
            step[g as usize] = choice;
        }
        let mut prefix_depths = vec![0u64; max_gaps + 1];
        for g in 1..=max_gaps {
            prefix_depths[g] = prefix_depths[g - 1] + uniform_depth_sum(g as u64 - 1);
        }
        PairPlanner {
            weighted,
            step,
            prefix_depths,
        }
    }

    /// Whether a pair should be inserted into a chain of `m` elements.
    pub fn prefers_pair(&self, m: usize) -> bool {
        let m64 = m as u64;
        let g = m + 1;
        let pair = weight_sum(0, m64 + 1) as u128
            + self.weighted[g] as u128
            + self.prefix_depths[g] as u128;
        let single = uniform_depth_sum(m64) as u128 * (m64 as u128 + 2)
            + uniform_depth_sum(m64 + 1) as u128 * (m64 as u128 + 1);
        2 * pair < single
    }

    /// Expected comparisons of a pair insertion into `m` elements as
    /// `(numerator, denominator)`.
    pub fn pair_cost(&self, m: usize) -> (u128, u128) {
        let g = m + 1;
        let w = weight_sum(0, m as u64 + 1) as u128;
        (w + self.weighted[g] as u128 + self.prefix_depths[g] as u128, w)
    }

    /// Finds the gap of the larger pair element in a chain of `m` elements.
    pub fn search_larger<P>(&self, m: usize, strategy: Strategy, mut is_less: P) -> usize
    where
        P: FnMut(usize) -> bool,
    {
        let mut gaps = m + 1;
        loop {
            match self.step[gaps] {
                0 => return Strategy::Right.search(0, gaps - 1, is_less),
                a => {
                    let left = gaps - (1usize << a);
                    if is_less(left - 1) {
                        gaps = left;
                    } else {
                        return strategy.search(left, left + (1usize << a) - 1, is_less);
                    }
                }
            }
        }
    }
}
