//! Binary insertion with two-layer decision trees.
//!
//! For `n` candidates every strategy yields a decision tree whose leaves sit on
//! at most two consecutive depths; they differ only in where the short leaves
//! end up. With `k = floor(log2 n)` the (1-based) pivot is
//!
//! | strategy       | pivot                              |
//! |----------------|------------------------------------|
//! | `center-left`  | `floor((n + 1) / 2)`               |
//! | `center-right` | `ceil((n + 1) / 2)`                |
//! | `left`         | `max(n - 2^k + 1, 2^(k-1))`        |
//! | `right`        | `min(2^k, n - 2^(k-1) + 1)`        |

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::sequence::PosSequence;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Strategy {
    CenterLeft,
    CenterRight,
    /// Short decision paths at the smallest gap indices.
    #[default]
    Left,
    /// Short decision paths at the largest gap indices.
    Right,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::CenterLeft,
        Strategy::CenterRight,
        Strategy::Left,
        Strategy::Right,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::CenterLeft => "center-left",
            Strategy::CenterRight => "center-right",
            Strategy::Left => "left",
            Strategy::Right => "right",
        }
    }

    /// 1-based index of the first element to compare against among `n >= 1`
    /// sorted candidates.
    #[inline]
    pub fn pivot(self, n: usize) -> usize {
        debug_assert!(n >= 1);
        if n == 1 {
            return 1;
        }
        let k = n.ilog2();
        let pow_k = 1usize << k;
        let pow_km1 = 1usize << (k - 1);
        match self {
            Strategy::CenterLeft => n.div_ceil(2),
            Strategy::CenterRight => (n + 2) / 2,
            Strategy::Left => (n + 1 - pow_k).max(pow_km1),
            Strategy::Right => pow_k.min(n + 1 - pow_km1),
        }
    }

    /// Finds the gap in `[lo, hi]` for an item, where `is_less(pos)` answers
    /// whether the item is smaller than the element at `pos`. Each call of
    /// `is_less` is one comparison.
    #[inline]
    pub fn search<F>(self, mut lo: usize, mut hi: usize, mut is_less: F) -> usize
    where
        F: FnMut(usize) -> bool,
    {
        while hi > lo {
            let c = self.pivot(hi - lo);
            let probe = lo + c - 1;
            if is_less(probe) {
                hi = probe;
            } else {
                lo = probe + 1;
            }
        }
        lo
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown strategy '{s}' (expected center-left, center-right, left or right)"
                ))
            })
    }
}

/// Comparison counter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    count: u64,
}

impl Tally {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn charge(&mut self) {
        self.count += 1;
    }

    pub fn count(&self) -> u64 {
        self.count
    }
}

/// Binary-inserts `item` into the sorted range `[lo, hi)` of `chain` and
/// returns the position it should take. Every comparison goes through `cmp`
/// and is charged to `tally`.
pub fn binary_insert<T, F>(
    item: &T,
    chain: &PosSequence<T>,
    lo: usize,
    hi: usize,
    strategy: Strategy,
    tally: &mut Tally,
    mut cmp: F,
) -> Result<usize>
where
    F: FnMut(&T, &T) -> Ordering,
{
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    if hi > chain.len() {
        return Err(Error::Range {
            pos: hi,
            len: chain.len(),
        });
    }
    let mut duplicate = false;
    let pos = strategy.search(lo, hi, |probe| {
        tally.charge();
        match cmp(item, chain.at(probe)) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => {
                duplicate = true;
                false
            }
        }
    });
    if duplicate {
        return Err(Error::DuplicateKeys);
    }
    Ok(pos)
}

/// Number of comparisons binary insertion uses for each of the `m + 1` gaps
/// of `m` sorted elements.
pub fn decision_depths(m: usize, strategy: Strategy) -> Vec<u32> {
    fn fill(n: usize, depth: u32, strategy: Strategy, out: &mut Vec<u32>) {
        if n == 0 {
            out.push(depth);
            return;
        }
        let c = strategy.pivot(n);
        fill(c - 1, depth + 1, strategy, out);
        fill(n - c, depth + 1, strategy, out);
    }
    let mut out = Vec::with_capacity(m + 1);
    fill(m, 0, strategy, &mut out);
    out
}

/// `ceil(log2(g))` for `g >= 1`.
#[inline]
pub(crate) fn ceil_log2(g: u64) -> u32 {
    debug_assert!(g >= 1);
    if g <= 1 {
        0
    } else {
        64 - (g - 1).leading_zeros()
    }
}

/// Total comparisons over all gaps when inserting into `m` elements with any
/// two-layer tree: `(m + 1) * k - short`, `k = ceil(log2(m + 1))`.
#[inline]
pub(crate) fn uniform_depth_sum(m: u64) -> u64 {
    let gaps = m + 1;
    let k = ceil_log2(gaps) as u64;
    let short = (1u64 << k) - gaps;
    gaps * k - short
}
