//! Analytic and numeric bounds on the comparison count. Logarithms are base 2.

use std::collections::HashMap;
use std::f64::consts::LN_2;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::probability::{batch_size, p_y, y_support};
use crate::schedule::jacobsthal_boundary;
use crate::{Error, Rational, Result};

/// Which formula a [`BoundValue`] came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    InsertionAverage,
    InsertionBound,
    NumericUpper,
    WorstCase,
    SlackConstant,
    Binomial,
    LogFactorial,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    pub formula: Formula,
}

impl BoundValue {
    fn new(value: f64, formula: Formula) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::domain(format!("{formula:?} evaluated to {value}")));
        }
        Ok(BoundValue { value, formula })
    }
}

/// `(v - n log n) / n`.
pub fn normalized(value: f64, n: u64) -> f64 {
    let n = n as f64;
    (value - n * n.log2()) / n
}

fn ceil_log2(m: u64) -> u32 {
    if m <= 1 {
        0
    } else {
        64 - (m - 1).leading_zeros()
    }
}

/// `ceil(log m) + 1 - 2^ceil(log m) / m`: the average binary-insertion cost
/// into `m - 1` elements when all `m` gaps are equally likely.
pub fn t_ins_avg(m: u64) -> Result<BoundValue> {
    if m == 0 {
        return Err(Error::domain("T_InsAvg(m) needs m >= 1"));
    }
    BoundValue::new(t_ins_avg_f64(m), Formula::InsertionAverage)
}

#[inline]
fn t_ins_avg_f64(m: u64) -> f64 {
    let k = ceil_log2(m);
    k as f64 + 1.0 - (1u64 << k) as f64 / m as f64
}

pub fn t_ins_avg_exact(m: u64) -> Result<Rational> {
    if m == 0 {
        return Err(Error::domain("T_InsAvg(m) needs m >= 1"));
    }
    let k = ceil_log2(m);
    Ok(Rational::from_integer(BigInt::from(k + 1))
        - Rational::new(BigInt::one() << k, BigInt::from(m)))
}

/// `ln(n!)` for `0..=n`, by compensated summation.
#[derive(Clone, Debug, Default)]
struct LnFactorial {
    table: Vec<f64>,
    sum: f64,
    comp: f64,
}

impl LnFactorial {
    fn ensure(&mut self, n: u64) {
        if self.table.is_empty() {
            self.table.push(0.0);
        }
        while (self.table.len() as u64) <= n {
            let term = (self.table.len() as f64).ln();
            let t = self.sum + term;
            self.comp += if self.sum.abs() >= term.abs() {
                (self.sum - t) + term
            } else {
                (term - t) + self.sum
            };
            self.sum = t;
            self.table.push(self.sum + self.comp);
        }
    }

    #[inline]
    fn get(&self, n: u64) -> f64 {
        self.table[n as usize]
    }
}

/// Expected `T_InsAvg(Y + 1)` for the element `b_{s+i}` of a batch that ends
/// at `b_{s+i+q}`, with `Y = Ỹ_{i,q} + 2s + i - 1`.
fn batch_element(lnf: &LnFactorial, s: u64, i: u64, q: u64) -> f64 {
    let c = 2 * s + 2 * i;
    let base = lnf.get(s + i + q - 1) - lnf.get(s + i - 1) - lnf.get(c + 2 * q - 1);
    let mut acc = 0.0;
    for j in 0..=q {
        let ln_p = lnf.get(2 * q - j) - lnf.get(j) - lnf.get(q - j)
            + j as f64 * LN_2
            + lnf.get(c + j - 1)
            + base;
        acc += ln_p.exp() * t_ins_avg_f64(2 * s + i + j);
    }
    acc
}

fn check_batch(k: u32, i: u64) -> Result<()> {
    if !(2..=26).contains(&k) {
        return Err(Error::domain(format!("batch index k={k} must be in 2..=26")));
    }
    let d = batch_size(k);
    if i == 0 || i > d {
        return Err(Error::domain(format!("element index i={i} must be in 1..={d}")));
    }
    Ok(())
}

/// `T_Ins(i, k) = sum_j P(Y_i = j) T_InsAvg(j + 1)`, an upper bound on the
/// average cost of inserting `b_{t_{k-1}+i}`.
pub fn t_ins(i: u64, k: u32) -> Result<BoundValue> {
    check_batch(k, i)?;
    let s = jacobsthal_boundary(k - 1);
    let q = batch_size(k) - i;
    let mut lnf = LnFactorial::default();
    lnf.ensure(2 * jacobsthal_boundary(k) + 2);
    BoundValue::new(batch_element(&lnf, s, i, q), Formula::InsertionBound)
}

/// [`t_ins`] in exact arithmetic.
pub fn t_ins_exact(i: u64, k: u32) -> Result<Rational> {
    check_batch(k, i)?;
    let mut acc = Rational::zero();
    for j in y_support(k, i)? {
        acc += p_y(k, i, j)? * t_ins_avg_exact(j + 1)?;
    }
    Ok(acc)
}

/// Memoizing evaluator of the numeric upper bound
/// `F^(n) = floor(n/2) + F^(floor(n/2)) + G^(ceil(n/2))`, where `G^` sums
/// [`t_ins`] over every inserted element, truncated last batch included.
#[derive(Clone, Debug, Default)]
pub struct NumericUpperBound {
    lnf: LnFactorial,
    batches: HashMap<(u64, u64), f64>,
    f: HashMap<u64, f64>,
}

impl NumericUpperBound {
    pub fn new() -> Self {
        Self::default()
    }

    fn batch(&mut self, s: u64, e: u64) -> f64 {
        if let Some(&v) = self.batches.get(&(s, e)) {
            return v;
        }
        self.lnf.ensure(2 * e + 2);
        let d = e - s;
        let v = (1..=d).map(|i| batch_element(&self.lnf, s, i, d - i)).sum();
        self.batches.insert((s, e), v);
        v
    }

    pub fn g(&mut self, m: u64) -> f64 {
        let mut total = 0.0;
        let mut k = 2;
        while jacobsthal_boundary(k) < m {
            total += self.batch(jacobsthal_boundary(k - 1), jacobsthal_boundary(k));
            k += 1;
        }
        let s = jacobsthal_boundary(k - 1);
        if m > s {
            total += self.batch(s, m);
        }
        total
    }

    pub fn f(&mut self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::domain("F^(n) needs n >= 1"));
        }
        if n == 1 {
            return Ok(0.0);
        }
        if let Some(&v) = self.f.get(&n) {
            return Ok(v);
        }
        let v = (n / 2) as f64 + self.f(n / 2)? + self.g(n.div_ceil(2));
        self.f.insert(n, v);
        Ok(v)
    }
}

pub fn numeric_upper_bound_f(n: u64) -> Result<BoundValue> {
    BoundValue::new(NumericUpperBound::new().f(n)?, Formula::NumericUpper)
}

/// `y = ceil(log(3n/4)) - log(3n/4)`, in `[0, 1)`.
pub fn worst_case_y(n: u64) -> f64 {
    let l = (3.0 * n as f64 / 4.0).log2();
    let y = l.ceil() - l;
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

/// Worst-case comparisons `n log n - (3 - log 3) n + n (y + 1 - 2^y)`, with
/// the lower-order `O(log n)` term dropped.
pub fn worst_case_w(n: u64) -> Result<BoundValue> {
    if n == 0 {
        return Err(Error::domain("W(n) needs n >= 1"));
    }
    let nf = n as f64;
    let y = worst_case_y(n);
    let w = nf * nf.log2() - (3.0 - 3f64.log2()) * nf + nf * (y + 1.0 - y.exp2());
    BoundValue::new(w, Formula::WorstCase)
}

/// Exact range of `(W(n) - n log n) / n`: `y + 1 - 2^y` peaks at
/// `y = -log(ln 2)`.
pub fn worst_case_normalized_range() -> (f64, f64) {
    let low = -(3.0 - 3f64.log2());
    let y = -LN_2.log2();
    (low, low + y + 1.0 - y.exp2())
}

/// `c(x)`; the average case uses at most `n log n - c(x_n) n + O(log^2 n)`
/// comparisons.
pub fn c_of_x(x: f64) -> Result<BoundValue> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::domain(format!("c(x) needs 0 <= x < 1, got {x}")));
    }
    let log3 = 3f64.log2();
    let v = (3.0 - log3) - (2.0 - x - (1.0 - x).exp2())
        + (1.0 - (-x).exp2()) * (3.0 / (x.exp2() + 1.0) - 1.0)
        + (log3 - x).exp2() / 2292.0;
    BoundValue::new(v, Formula::SlackConstant)
}

/// `x_n = log(3n) - floor(log(3n))`. The integer part comes from the bit
/// length, so the fractional part never lands on the wrong side of a power
/// of two.
pub fn x_n(n: u64) -> f64 {
    assert!(n >= 1);
    let m = 3u128 * n as u128;
    let k = 127 - m.leading_zeros();
    let x = (m as f64 / (k as f64).exp2()).log2();
    x.clamp(0.0, f64::from_bits(1f64.to_bits() - 1))
}

/// Binomial stand-in for `Y_u`, `u = floor((t_k - t_{k-1}) / 2)`, mirrored
/// at `2^k - 1`: `p(j) = C(ceil(u/2), q) p^q (1 - p)^(ceil(u/2) - q)` with
/// `q = 2^k - 1 - j` and `p = floor(u/2) / (2 t_k - 1)`.
pub fn binomial_approx_p(k: u32, j: u64) -> Result<BoundValue> {
    if !(2..=40).contains(&k) {
        return Err(Error::domain(format!("batch index k={k} must be in 2..=40")));
    }
    let top = (1u64 << k) - 1;
    let u = batch_size(k) / 2;
    let trials = u.div_ceil(2);
    if j > top || top - j > trials {
        return BoundValue::new(0.0, Formula::Binomial);
    }
    let q = top - j;
    let p = (u / 2) as f64 / (2 * jacobsthal_boundary(k) - 1) as f64;
    let v = if p == 0.0 {
        if q == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        let ln_choose = ln_gamma_int(trials) - ln_gamma_int(q) - ln_gamma_int(trials - q);
        (ln_choose + q as f64 * p.ln() + (trials - q) as f64 * (-p).ln_1p()).exp()
    };
    BoundValue::new(v, Formula::Binomial)
}

/// `ln(n!)` by summation.
fn ln_gamma_int(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// `log(n!)`, the information-theoretic lower bound, by compensated
/// summation of `log i`.
pub fn lower_bound_log_factorial(n: u64) -> BoundValue {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for i in 2..=n {
        let term = (i as f64).log2();
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
    }
    BoundValue {
        value: sum + comp,
        formula: Formula::LogFactorial,
    }
}

/// Smallest `C` with `norm F^(n) <= -c(x_n) + C log^2(n) / n` over `ns`.
pub fn fit_log_squared_constant(ns: &[u64]) -> Result<f64> {
    let mut bound = NumericUpperBound::new();
    let mut c = f64::NEG_INFINITY;
    for &n in ns {
        if n < 2 {
            continue;
        }
        let excess = normalized(bound.f(n)?, n) + c_of_x(x_n(n))?.value;
        let l = (n as f64).log2();
        c = c.max(excess * n as f64 / (l * l));
    }
    Ok(c)
}
