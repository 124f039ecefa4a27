//! Exact distributions for one insertion batch.
//!
//! Batch `k` inserts `b_{s+1}, ..., b_{s+d}` with `s = t_{k-1}` and
//! `d = t_k - t_{k-1}`. Before the batch the main chain holds
//! `x_1 < ... < x_{2s}` followed by `a_{s+1} < ... < a_{s+d}`; write
//! `x_{2s+i} = a_{s+i}`, so the chain is `x_1, ..., x_{2^k}`. Over a uniformly
//! random input every linear extension of this partial order is equally
//! likely, and three random variables describe the batch:
//!
//! * `X_i`: the number of `x`'s below `b_{s+i}` once everything is sorted.
//! * `Y_i`: the number of elements `b_{s+i}` is binary-inserted into, that is
//!   `x_1 .. x_{2s+i-1}` plus whichever later-inserted `b_{s+i+1}, ...` ended
//!   up below `a_{s+i}`.
//! * `Ỹ_{i,q}`: how many of `b_{s+i+1}, ..., b_{s+i+q}` end up below
//!   `a_{s+i}`. `Y_i = Ỹ_{i,d-i} + 2s + i - 1`.
//!
//! Everything here is exact rational arithmetic.

use std::ops::RangeInclusive;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::schedule::jacobsthal_boundary;
use crate::{Error, Rational, Result};

/// `n!`, memoized process-wide.
pub fn factorial(n: u64) -> BigInt {
    static TABLE: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(vec![BigInt::one()]));
    let mut t = table.lock().unwrap_or_else(|e| e.into_inner());
    while t.len() as u64 <= n {
        let next = t.last().expect("non-empty") * BigInt::from(t.len());
        t.push(next);
    }
    t[n as usize].clone()
}

fn fact_ratio(num: u64, den: u64) -> Rational {
    Rational::new(factorial(num), factorial(den))
}

fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

fn int(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Number of elements in batch `k`: `t_k - t_{k-1}`.
pub fn batch_size(k: u32) -> u64 {
    jacobsthal_boundary(k) - jacobsthal_boundary(k - 1)
}

fn check_batch(k: u32, i: u64) -> Result<(u64, u64)> {
    if !(2..=60).contains(&k) {
        return Err(Error::domain(format!("batch index k={k} must be in 2..=60")));
    }
    let d = batch_size(k);
    if i == 0 || i > d {
        return Err(Error::domain(format!(
            "element index i={i} must be in 1..={d} for batch k={k}"
        )));
    }
    Ok((jacobsthal_boundary(k - 1), jacobsthal_boundary(k)))
}

/// `P(X_i = j)`: the probability that `b_{s+i}` ends up between `x_j` and
/// `x_{j+1}` (`j = 0`: below `x_1`).
pub fn p_x(k: u32, i: u64, j: u64) -> Result<Rational> {
    let (s, _) = check_batch(k, i)?;
    let top = (1u64 << k) - 1;
    if j > top {
        return Err(Error::domain(format!("gap index j={j} exceeds {top}")));
    }
    let denom = factorial(2 * s + 2 * i - 1);
    if j <= 2 * s {
        let r = fact_ratio(s + i - 1, s);
        Ok(pow2(2 * i as i64 - 2) * &r * &r * Rational::new(factorial(2 * s), denom))
    } else if j < 2 * s + i {
        let r = fact_ratio(s + i - 1, j - s);
        let e = 4 * s as i64 - 2 * j as i64 + 2 * i as i64 - 2;
        Ok(pow2(e) * &r * &r * Rational::new(factorial(2 * j - 2 * s), denom))
    } else {
        Ok(Rational::zero())
    }
}

/// Support of `Y_i`: `2s + i - 1 ..= 2^k - 1`.
pub fn y_support(k: u32, i: u64) -> Result<RangeInclusive<u64>> {
    let (s, _) = check_batch(k, i)?;
    Ok(2 * s + i - 1..=(1u64 << k) - 1)
}

/// `P(Y_i = j)`: the probability that `b_{s+i}` is inserted into exactly `j`
/// elements. Zero outside [`y_support`].
pub fn p_y(k: u32, i: u64, j: u64) -> Result<Rational> {
    let (s, t) = check_batch(k, i)?;
    let pow_k = 1u64 << k;
    if j + 1 < 2 * s + i || j > pow_k - 1 {
        return Ok(Rational::zero());
    }
    let excess = j + 1 - 2 * s - i;
    let mut v = pow2(excess as i64)
        * Rational::new(
            factorial(2 * t - i - j - 1),
            factorial(excess) * factorial(pow_k - j - 1),
        );
    v *= fact_ratio(i + j, 2 * t - 1);
    v *= fact_ratio(t - 1, s + i - 1);
    Ok(v)
}

fn check_tilde(q: u64, j: u64) -> Result<()> {
    if j > q {
        return Err(Error::domain(format!("count j={j} exceeds q={q}")));
    }
    Ok(())
}

/// `P(Ỹ_{i,q} = j)` from its closed form.
pub fn y_tilde(k: u32, i: u64, q: u64, j: u64) -> Result<Rational> {
    let (s, _) = check_batch(k, i)?;
    check_tilde(q, j)?;
    Ok(y_tilde_closed(s, i, q, j))
}

pub(crate) fn y_tilde_closed(s: u64, i: u64, q: u64, j: u64) -> Rational {
    let c = 2 * s + 2 * i;
    let mut v = Rational::new(
        factorial(2 * q - j),
        factorial(j) * factorial(q - j),
    );
    v *= pow2(j as i64);
    v *= fact_ratio(c + j - 1, c + 2 * q - 1);
    v *= fact_ratio(s + i + q - 1, s + i - 1);
    v
}

/// Row `P(Ỹ_{i,q} = 0..=q)` built with the two-term recurrence in `q`.
fn y_tilde_row(s: u64, i: u64, q: u64) -> Vec<Rational> {
    let c = 2 * s + 2 * i;
    let mut row = vec![Rational::one()];
    for step in 1..=q {
        let denom = c + 2 * step - 1;
        let mut next = Vec::with_capacity(step as usize + 1);
        for j in 0..=step {
            let mut v = Rational::zero();
            if j >= 1 {
                v += Rational::new(BigInt::from(c + j - 1), BigInt::from(denom))
                    * &row[j as usize - 1];
            }
            if j < step {
                v += Rational::new(BigInt::from(2 * step - j - 1), BigInt::from(denom))
                    * &row[j as usize];
            }
            next.push(v);
        }
        row = next;
    }
    row
}

/// `P(Ỹ_{i,q} = j)` evaluated with the recurrence.
pub fn p_y_recurrence(k: u32, i: u64, q: u64, j: u64) -> Result<Rational> {
    let (s, _) = check_batch(k, i)?;
    check_tilde(q, j)?;
    Ok(y_tilde_row(s, i, q).swap_remove(j as usize))
}

/// `E[Y_i]`.
pub fn mean_y(k: u32, i: u64) -> Result<Rational> {
    DistTable::y(k, i).map(|t| t.mean())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    X,
    Y,
    YTilde { q: u64 },
}

/// A finite distribution on a contiguous index range.
#[derive(Clone, Debug, PartialEq)]
pub struct DistTable {
    pub k: u32,
    pub i: u64,
    pub variable: Variable,
    start: u64,
    mass: Vec<Rational>,
}

impl DistTable {
    pub fn x(k: u32, i: u64) -> Result<Self> {
        check_batch(k, i)?;
        let mass = (0..1u64 << k)
            .map(|j| p_x(k, i, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(DistTable {
            k,
            i,
            variable: Variable::X,
            start: 0,
            mass,
        })
    }

    pub fn y(k: u32, i: u64) -> Result<Self> {
        let support = y_support(k, i)?;
        let start = *support.start();
        let mass = support.map(|j| p_y(k, i, j)).collect::<Result<Vec<_>>>()?;
        Ok(DistTable {
            k,
            i,
            variable: Variable::Y,
            start,
            mass,
        })
    }

    /// `Y_i` assembled from the `Ỹ` recurrence instead of the closed form.
    pub fn y_via_recurrence(k: u32, i: u64) -> Result<Self> {
        let (s, _) = check_batch(k, i)?;
        let row = y_tilde_row(s, i, batch_size(k) - i);
        Ok(DistTable {
            k,
            i,
            variable: Variable::Y,
            start: 2 * s + i - 1,
            mass: row,
        })
    }

    pub fn y_tilde(k: u32, i: u64, q: u64) -> Result<Self> {
        let (s, _) = check_batch(k, i)?;
        Ok(DistTable {
            k,
            i,
            variable: Variable::YTilde { q },
            start: 0,
            mass: y_tilde_row(s, i, q),
        })
    }

    pub fn support(&self) -> RangeInclusive<u64> {
        self.start..=self.start + self.mass.len() as u64 - 1
    }

    /// Probability of `j`; zero outside the support.
    pub fn get(&self, j: u64) -> Rational {
        j.checked_sub(self.start)
            .and_then(|o| self.mass.get(o as usize))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Rational)> + '_ {
        (self.start..).zip(&self.mass)
    }

    pub fn total(&self) -> Rational {
        self.mass.iter().sum()
    }

    pub fn mean(&self) -> Rational {
        self.iter().map(|(j, p)| int(j) * p).sum()
    }

    /// `P(V <= j0)`.
    pub fn cdf(&self, j0: u64) -> Rational {
        self.iter()
            .take_while(|(j, _)| *j <= j0)
            .map(|(_, p)| p.clone())
            .sum()
    }
}
