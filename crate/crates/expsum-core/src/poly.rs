//! Sparse multivariate polynomials over the integers.
//!
//! Terms are kept in a `BTreeMap` from exponent tuples to nonzero
//! coefficients, so the canonical term order is lexicographic and
//! serialization is deterministic. Coefficient arithmetic is checked:
//! an overflow aborts loudly instead of corrupting an exact result.

use crate::error::{Error, Result};
use crate::modular::{self, Valuation};
use std::collections::BTreeMap;
use std::fmt;

/// A sparse polynomial in `n_vars` variables with integer coefficients.
///
/// Invariant: no stored zero coefficients; every exponent tuple has length
/// `n_vars`.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    n_vars: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b)
        .expect("integer overflow in polynomial coefficient arithmetic")
}

fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b)
        .expect("integer overflow in polynomial coefficient arithmetic")
}

impl MultiPoly {
    /// The zero polynomial in `n_vars` variables.
    pub fn zero(n_vars: usize) -> Self {
        MultiPoly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    /// A constant polynomial.
    pub fn constant(n_vars: usize, c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(vec![0; n_vars], c);
        }
        MultiPoly { n_vars, terms }
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, 1)
    }

    /// The variable x_i (0-based index).
    pub fn variable(n_vars: usize, i: usize) -> Self {
        assert!(i < n_vars);
        let mut exps = vec![0u32; n_vars];
        exps[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, 1);
        MultiPoly { n_vars, terms }
    }

    /// Build from (coefficient, exponents) pairs; merges duplicates and
    /// drops zeros.
    pub fn from_terms(
        n_vars: usize,
        raw: impl IntoIterator<Item = (i64, Vec<u32>)>,
    ) -> Result<Self> {
        let mut terms: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (c, exps) in raw {
            if exps.len() != n_vars {
                return Err(Error::VarCountMismatch {
                    left: n_vars,
                    right: exps.len(),
                });
            }
            let entry = terms.entry(exps).or_insert(0);
            *entry = checked_add(*entry, c);
        }
        terms.retain(|_, c| *c != 0);
        Ok(MultiPoly { n_vars, terms })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| *c == 1 && e.iter().all(|&x| x == 0))
    }

    /// Constant value if the polynomial is constant (including zero).
    pub fn as_constant(&self) -> Option<i64> {
        if self.terms.is_empty() {
            return Some(0);
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) {
                return Some(*c);
            }
        }
        None
    }

    /// Iterate terms in canonical (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, i64)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.n_vars, other.n_vars, "variable count mismatch");
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert(0);
            *entry = checked_add(*entry, *c);
        }
        terms.retain(|_, c| *c != 0);
        MultiPoly {
            n_vars: self.n_vars,
            terms,
        }
    }

    pub fn neg(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        MultiPoly {
            n_vars: self.n_vars,
            terms,
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.n_vars, other.n_vars, "variable count mismatch");
        let mut terms: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let prod = checked_mul(*ca, *cb);
                let entry = terms.entry(exps).or_insert(0);
                *entry = checked_add(*entry, prod);
            }
        }
        terms.retain(|_, c| *c != 0);
        MultiPoly {
            n_vars: self.n_vars,
            terms,
        }
    }

    pub fn scale(&self, c: i64) -> MultiPoly {
        if c == 0 {
            return MultiPoly::zero(self.n_vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, a)| (e.clone(), checked_mul(*a, c)))
            .collect();
        MultiPoly {
            n_vars: self.n_vars,
            terms,
        }
    }

    /// Formal partial derivative with respect to x_i (0-based).
    pub fn partial_derivative(&self, i: usize) -> MultiPoly {
        assert!(i < self.n_vars);
        let mut terms: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[i] -= 1;
            let coef = checked_mul(*c, e[i] as i64);
            let entry = terms.entry(exps).or_insert(0);
            *entry = checked_add(*entry, coef);
        }
        terms.retain(|_, c| *c != 0);
        MultiPoly {
            n_vars: self.n_vars,
            terms,
        }
    }

    /// Minimum p-adic valuation over the coefficients.
    pub fn ord_p(&self, p: i64) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let mut best = u32::MAX;
        for c in self.terms.values() {
            if let Valuation::Finite(k) = modular::int_valuation(*c, p) {
                best = best.min(k);
                if best == 0 {
                    break;
                }
            }
        }
        Ok(best)
    }

    /// Divide every coefficient by p^k; panics if some coefficient is not
    /// divisible (callers must ensure ord_p ≥ k).
    pub fn exact_div_pow(&self, p: i64, k: u32) -> MultiPoly {
        if k == 0 {
            return self.clone();
        }
        let mut d = 1i64;
        for _ in 0..k {
            d = checked_mul(d, p);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                assert!(c % d == 0, "coefficient {c} not divisible by {d}");
                (e.clone(), c / d)
            })
            .collect();
        MultiPoly {
            n_vars: self.n_vars,
            terms,
        }
    }

    /// Evaluate at an integer point, reducing modulo `q`.
    pub fn eval_mod(&self, x: &[i64], q: i64) -> i64 {
        debug_assert_eq!(x.len(), self.n_vars);
        let mut acc: i64 = 0;
        for (e, c) in &self.terms {
            let mut t = modular::reduce(*c, q);
            for (xi, &ei) in x.iter().zip(e.iter()) {
                if ei == 0 {
                    continue;
                }
                let base = modular::reduce(*xi, q);
                t = modular::mul_mod(t, modular::pow_mod(base, ei as u64, q), q);
            }
            acc = modular::add_mod(acc, t, q);
        }
        acc
    }

    /// Evaluate exactly over the integers (checked i128 arithmetic).
    pub fn eval_exact(&self, x: &[i64]) -> i128 {
        debug_assert_eq!(x.len(), self.n_vars);
        let mut acc: i128 = 0;
        for (e, c) in &self.terms {
            let mut t = *c as i128;
            for (xi, &ei) in x.iter().zip(e.iter()) {
                for _ in 0..ei {
                    t = t
                        .checked_mul(*xi as i128)
                        .expect("integer overflow in exact polynomial evaluation");
                }
            }
            acc = acc
                .checked_add(t)
                .expect("integer overflow in exact polynomial evaluation");
        }
        acc
    }

    /// Reduction modulo p as a polynomial: coefficients in [0, p).
    pub fn reduce_mod(&self, p: i64) -> MultiPoly {
        let mut terms: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (e, c) in &self.terms {
            let r = modular::reduce(*c, p);
            if r != 0 {
                terms.insert(e.clone(), r);
            }
        }
        MultiPoly {
            n_vars: self.n_vars,
            terms,
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    write!(f, "*x{}^{}", i + 1, ei)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
