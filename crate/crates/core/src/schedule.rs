//! Batch boundaries of the insertion phase.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::{Error, Result};

/// `t_k = (2^(k+1) + (-1)^k) / 3`: 1, 1, 3, 5, 11, 21, 43, ...
pub fn jacobsthal_boundary(k: u32) -> u64 {
    assert!(k < 62, "batch index {k} too large");
    let p = 1i128 << (k + 1);
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    ((p + sign) / 3) as u64
}

/// `u_k = floor(4/3 * 2^k)`, the sizes at which MergeInsertion is optimal.
pub fn optimal_point(k: u32) -> u64 {
    assert!(k < 62);
    (1u64 << (k + 2)) / 3
}

/// Batch schedule `t_k`, optionally stretched to `floor(f * t_k)`.
///
/// The schedule applies at every recursion level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Schedule {
    factor: Ratio<u64>,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::standard()
    }
}

impl Schedule {
    pub fn standard() -> Self {
        Schedule {
            factor: Ratio::from_integer(1),
        }
    }

    /// Schedule with factor `numer / denom`, which must be at least 1.
    pub fn with_factor(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 || numer < denom {
            return Err(Error::Config(format!(
                "schedule factor {numer}/{denom} must be a ratio >= 1"
            )));
        }
        Ok(Schedule {
            factor: Ratio::new(numer, denom),
        })
    }

    pub fn factor(&self) -> Ratio<u64> {
        self.factor
    }

    pub fn factor_f64(&self) -> f64 {
        *self.factor.numer() as f64 / *self.factor.denom() as f64
    }

    pub fn is_standard(&self) -> bool {
        self.factor.is_integer() && *self.factor.numer() == 1
    }

    /// Upper boundary of batch `k`. Batch 1 is `b_1` alone; for `k >= 2`
    /// this is `floor(f * t_k)`.
    pub fn boundary(&self, k: u32) -> u64 {
        if k <= 1 {
            return 1;
        }
        let t = jacobsthal_boundary(k) as u128;
        let numer = *self.factor.numer() as u128;
        let denom = *self.factor.denom() as u128;
        (t * numer / denom) as u64
    }

    /// Batches `(k, first, last)` covering `b_2 ..= b_count` (1-based,
    /// inclusive). Each batch is inserted from `last` down to `first`.
    pub fn batches(&self, count: u64) -> Batches<'_> {
        Batches {
            schedule: self,
            k: 2,
            count,
        }
    }
}

pub struct Batches<'a> {
    schedule: &'a Schedule,
    k: u32,
    count: u64,
}

impl Iterator for Batches<'_> {
    type Item = (u32, u64, u64);

    fn next(&mut self) -> Option<Self::Item> {
        let start = self.schedule.boundary(self.k - 1);
        if start >= self.count {
            return None;
        }
        let end = self.schedule.boundary(self.k).min(self.count);
        let k = self.k;
        self.k += 1;
        Some((k, start + 1, end))
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factor.is_integer() {
            write!(f, "{}", self.factor.numer())
        } else {
            write!(f, "{}/{}", self.factor.numer(), self.factor.denom())
        }
    }
}

/// Parses decimal factors such as `1.03` (exactly, as 103/100) as well as
/// fractions such as `103/100`.
impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse schedule factor '{s}'"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = n.trim().parse::<u64>().map_err(|_| bad())?;
            let d = d.trim().parse::<u64>().map_err(|_| bad())?;
            return Schedule::with_factor(n, d);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 12 {
            return Err(bad());
        }
        let denom = 10u64.pow(frac.len() as u32);
        let digits = format!("{int}{frac}");
        let numer = digits.parse::<u64>().map_err(|_| bad())?;
        Schedule::with_factor(numer, denom)
    }
}
