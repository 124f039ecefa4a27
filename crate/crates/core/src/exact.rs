//! Exact average comparison counts of MergeInsertion.
//!
//! `F(n) = floor(n/2) + F(floor(n/2)) + G(ceil(n/2))`, where `G(m)` is the
//! average cost of the insertion phase for `m` smaller elements. `G` is a sum
//! of per-batch costs, each obtained as the external path length of the
//! batch's decision tree divided by its number of leaves.
//!
//! Branches of that tree that differ only in where an element landed between
//! the same two `a`'s are merged: the remaining insertions depend only on how
//! many elements sit below `a_{s+1}` and between consecutive `a`'s. That count
//! vector is [`InsertionState::q`].

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::probability::factorial;
use crate::schedule::jacobsthal_boundary;
use crate::strategy::{decision_depths, Strategy};
use crate::{Error, Rational, Result};

/// `r` elements `b_{s+1}..b_{s+r}` left to insert; `q[0]` chain elements
/// below `a_{s+1}`, `q[i]` elements settled between `a_{s+i}` and
/// `a_{s+i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InsertionState {
    pub q: Vec<u64>,
}

impl InsertionState {
    /// State at the start of the batch `b_{s+1} ..= b_e`.
    pub fn batch(s: u64, e: u64) -> Self {
        let mut q = vec![0; (e - s) as usize];
        if let Some(first) = q.first_mut() {
            *first = 2 * s;
        }
        InsertionState { q }
    }

    pub fn r(&self) -> usize {
        self.q.len()
    }

    /// Chain elements the next insertion (of `b_{s+r}`) searches.
    pub fn elements(&self) -> u64 {
        self.q.iter().sum::<u64>() + self.q.len().saturating_sub(1) as u64
    }
}

/// External path length and leaf count of a decision tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCount {
    pub path_length: BigUint,
    pub leaves: BigUint,
}

impl PathCount {
    pub fn average(&self) -> Rational {
        Rational::new(BigInt::from(self.path_length.clone()), BigInt::from(self.leaves.clone()))
    }
}

/// Memoizing evaluator for `F`, `G` and batch costs under one strategy.
#[derive(Debug)]
pub struct ExactAnalyzer {
    strategy: Strategy,
    memoize: bool,
    states: HashMap<Vec<u64>, PathCount>,
    depths: HashMap<u64, Vec<u32>>,
    f: HashMap<u64, Rational>,
}

impl ExactAnalyzer {
    pub fn new(strategy: Strategy) -> Self {
        ExactAnalyzer {
            strategy,
            memoize: true,
            states: HashMap::new(),
            depths: HashMap::new(),
            f: HashMap::new(),
        }
    }

    /// Evaluator that recomputes every subtree.
    pub fn without_memo(strategy: Strategy) -> Self {
        ExactAnalyzer {
            memoize: false,
            ..Self::new(strategy)
        }
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    fn depths(&mut self, elements: u64) -> &[u32] {
        let strategy = self.strategy;
        self.depths
            .entry(elements)
            .or_insert_with(|| decision_depths(elements as usize, strategy))
    }

    pub fn cost_insert(&mut self, state: &InsertionState) -> PathCount {
        let r = state.r();
        if r == 0 {
            return PathCount {
                path_length: BigUint::zero(),
                leaves: BigUint::from(1u8),
            };
        }
        if self.memoize {
            if let Some(hit) = self.states.get(&state.q) {
                return hit.clone();
            }
        }
        let elements = state.elements();
        let depths = self.depths(elements).to_vec();
        let mut path_length = BigUint::zero();
        let mut leaves = BigUint::zero();
        let mut index = 0usize;
        for seg in 0..r {
            let mut child = state.q.clone();
            child[seg] += 1;
            child.truncate(r - 1);
            let sub = self.cost_insert(&InsertionState { q: child });
            for _ in 0..=state.q[seg] {
                path_length += &sub.path_length + &sub.leaves * depths[index];
                leaves += &sub.leaves;
                index += 1;
            }
        }
        let out = PathCount {
            path_length,
            leaves,
        };
        if self.memoize {
            self.states.insert(state.q.clone(), out.clone());
        }
        out
    }

    /// Average comparisons for inserting `b_{s+1} ..= b_e` after `2s`
    /// elements are already sorted. `cost(s, s) = 0`.
    pub fn cost(&mut self, s: u64, e: u64) -> Result<Rational> {
        if e < s {
            return Err(Error::domain(format!("batch end e={e} precedes start s={s}")));
        }
        Ok(self.cost_insert(&InsertionState::batch(s, e)).average())
    }

    /// Average cost of inserting `b_2, ..., b_n` batch by batch.
    pub fn exact_g(&mut self, n: u64) -> Result<Rational> {
        if n == 0 {
            return Err(Error::domain("G(n) needs n >= 1"));
        }
        let mut total = Rational::zero();
        let mut k = 2;
        while jacobsthal_boundary(k) < n {
            total += self.cost(jacobsthal_boundary(k - 1), jacobsthal_boundary(k))?;
            k += 1;
        }
        total += self.cost(jacobsthal_boundary(k - 1), n)?;
        Ok(total)
    }

    pub fn exact_f(&mut self, n: u64) -> Result<Rational> {
        if n == 0 {
            return Err(Error::domain("F(n) needs n >= 1"));
        }
        if n == 1 {
            return Ok(Rational::zero());
        }
        if let Some(v) = self.f.get(&n) {
            return Ok(v.clone());
        }
        let v = Rational::from_integer(BigInt::from(n / 2))
            + self.exact_f(n / 2)?
            + self.exact_g(n.div_ceil(2))?;
        if self.memoize {
            self.f.insert(n, v.clone());
        }
        Ok(v)
    }

    /// `F(n) * n!`, the total comparisons over all `n!` inputs.
    pub fn f_times_factorial(&mut self, n: u64) -> Result<BigInt> {
        let scaled = self.exact_f(n)? * Rational::from_integer(factorial(n));
        if !scaled.is_integer() {
            return Err(Error::domain(format!("F({n}) * {n}! is not an integer")));
        }
        Ok(scaled.to_integer())
    }
}

pub fn cost_insert(state: &InsertionState, strategy: Strategy) -> PathCount {
    ExactAnalyzer::new(strategy).cost_insert(state)
}

pub fn cost(s: u64, e: u64, strategy: Strategy) -> Result<Rational> {
    ExactAnalyzer::new(strategy).cost(s, e)
}

pub fn exact_g(n: u64, strategy: Strategy) -> Result<Rational> {
    ExactAnalyzer::new(strategy).exact_g(n)
}

pub fn exact_f(n: u64, strategy: Strategy) -> Result<Rational> {
    ExactAnalyzer::new(strategy).exact_f(n)
}

/// Decimal rendering of a rational with `digits` fractional digits
/// (truncated toward zero).
pub fn to_decimal(v: &Rational, digits: usize) -> String {
    let neg = v < &Rational::zero();
    let a = if neg { -v.clone() } else { v.clone() };
    let int = a.to_integer();
    let frac = (a - Rational::from_integer(int.clone()))
        * Rational::from_integer(BigInt::from(10u8).pow(digits as u32));
    let frac = frac.to_integer();
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0>digits$}")
    }
}

/// Nearest `f64` to a rational.
pub fn to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}
