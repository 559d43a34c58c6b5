//! Rational functions f = num/den over the integers, with formal
//! differentiation, p-adic order, and modular evaluation.
//!
//! Derivatives are kept in quotient-rule form; no multivariate gcd
//! cancellation is attempted. Evaluation only needs the denominator to be a
//! unit modulo p at the point, which is checked pointwise.

use crate::error::{Error, Result};
use crate::modular::{self, PrimePower, Residue};
use crate::poly::MultiPoly;
use std::fmt;

/// Whether the reductions of numerator and denominator modulo p are coprime.
///
/// The stationary-phase formulas assume coprimality. It is decidable cheaply
/// for one variable (Euclid over F_p) and in a few easy shapes for several
/// variables; otherwise it is reported as `Unknown` and summation proceeds,
/// skipping poles pointwise.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoprimalityStatus {
    Verified,
    Violated,
    Unknown,
}

/// A quotient num/den of integer polynomials with den not identically zero.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if num.n_vars() != den.n_vars() {
            return Err(Error::VarCountMismatch {
                left: num.n_vars(),
                right: den.n_vars(),
            });
        }
        if den.is_zero() {
            return Err(Error::InvalidInput(
                "denominator is identically zero".into(),
            ));
        }
        Ok(RationalFunc { num, den })
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        let den = MultiPoly::one(num.n_vars());
        RationalFunc { num, den }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn n_vars(&self) -> usize {
        self.num.n_vars()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Quotient-rule partial derivative with respect to x_i (0-based).
    ///
    /// Polynomial inputs (den = 1) stay polynomial.
    pub fn partial_derivative(&self, i: usize) -> RationalFunc {
        assert!(i < self.n_vars());
        if self.is_polynomial() {
            return RationalFunc {
                num: self.num.partial_derivative(i),
                den: self.den.clone(),
            };
        }
        let num = self
            .num
            .partial_derivative(i)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.partial_derivative(i)));
        let den = self.den.mul(&self.den);
        RationalFunc { num, den }
    }

    /// All first partial derivatives.
    pub fn gradient(&self) -> Vec<RationalFunc> {
        (0..self.n_vars())
            .map(|i| self.partial_derivative(i))
            .collect()
    }

    /// Matrix of second partial derivatives in quotient-rule form.
    ///
    /// Entries (i, j) and (j, i) are formally different representatives of
    /// the same function.
    pub fn hessian(&self) -> Vec<Vec<RationalFunc>> {
        let grad = self.gradient();
        grad.iter()
            .map(|gi| {
                (0..self.n_vars())
                    .map(|j| gi.partial_derivative(j))
                    .collect()
            })
            .collect()
    }

    /// ord_p(num) − ord_p(den). Well defined on the underlying function.
    pub fn ord_p(&self, p: i64) -> Result<i32> {
        let n = self.num.ord_p(p)?; // ZeroFunction for the zero numerator
        let d = self.den.ord_p(p)?;
        Ok(n as i32 - d as i32)
    }

    /// Evaluate at an integer point modulo q = p^m.
    ///
    /// Errors with `PoleModP` when the denominator vanishes mod p.
    pub fn eval_mod(&self, x: &[i64], q: PrimePower) -> Result<Residue> {
        let den_val = self.den.eval_mod(x, q.q());
        if den_val % q.p() == 0 {
            return Err(Error::PoleModP);
        }
        let num_val = self.num.eval_mod(x, q.q());
        let inv = modular::inv_mod(den_val, q.q()).expect("unit denominator");
        Ok(q.residue(modular::mul_mod(num_val, inv, q.q())))
    }

    /// Coprimality of the reductions of num and den modulo p.
    pub fn coprime_mod_p(&self, p: i64) -> CoprimalityStatus {
        let num_red = self.num.reduce_mod(p);
        let den_red = self.den.reduce_mod(p);
        if num_red.is_zero() || den_red.is_zero() {
            return CoprimalityStatus::Violated;
        }
        if den_red.as_constant().is_some() || num_red.as_constant().is_some() {
            return CoprimalityStatus::Verified;
        }
        if self.n_vars() == 1 {
            let g = univariate_gcd_mod_p(&num_red, &den_red, p);
            return if g.len() <= 1 {
                CoprimalityStatus::Verified
            } else {
                CoprimalityStatus::Violated
            };
        }
        CoprimalityStatus::Unknown
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Dense coefficient vector of a univariate polynomial mod p (ascending
/// degree, trimmed). Used only for the coprimality check.
fn univariate_dense_mod_p(f: &MultiPoly, p: i64) -> Vec<i64> {
    let deg = f.terms().map(|(e, _)| e[0]).max().unwrap_or(0) as usize;
    let mut v = vec![0i64; deg + 1];
    for (e, c) in f.terms() {
        let idx = e[0] as usize;
        v[idx] = modular::add_mod(v[idx], modular::reduce(c, p), p);
    }
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

/// Monic gcd over F_p of two univariate polynomials, as a dense vector.
fn univariate_gcd_mod_p(a: &MultiPoly, b: &MultiPoly, p: i64) -> Vec<i64> {
    let mut r0 = univariate_dense_mod_p(a, p);
    let mut r1 = univariate_dense_mod_p(b, p);
    let is_zero = |v: &Vec<i64>| v.len() == 1 && v[0] == 0;
    while !is_zero(&r1) {
        // r0 mod r1
        let lead_inv = modular::inv_mod(*r1.last().unwrap(), p).expect("nonzero lead");
        while r0.len() >= r1.len() && !is_zero(&r0) {
            let shift = r0.len() - r1.len();
            let factor = modular::mul_mod(*r0.last().unwrap(), lead_inv, p);
            if factor != 0 {
                for (i, &c) in r1.iter().enumerate() {
                    let t = modular::mul_mod(factor, c, p);
                    r0[shift + i] = modular::sub_mod(r0[shift + i], t, p);
                }
            }
            while r0.len() > 1 && *r0.last().unwrap() == 0 {
                r0.pop();
            }
            if r0.len() < r1.len() {
                break;
            }
        }
        std::mem::swap(&mut r0, &mut r1);
    }
    r0
}

/// The minimal p-adic order r over all partial derivatives, together with
/// the scaled partials p^{−r}·∂f/∂x_i.
///
/// Each scaled partial has nonnegative order and at least one has order
/// zero, so all values at non-pole points are p-integral.
pub struct ScaledGradient {
    pub r: i32,
    /// p^{−r}·∂f/∂x_i as rational functions with integral numerators.
    pub parts: Vec<RationalFunc>,
}

/// r = min_i ord_p(∂f/∂x_i) over the nonzero partials.
pub fn grad_ord(f: &RationalFunc, p: i64) -> Result<i32> {
    let mut best: Option<i32> = None;
    for i in 0..f.n_vars() {
        let d = f.partial_derivative(i);
        if d.is_zero() {
            continue;
        }
        let o = d.ord_p(p)?;
        best = Some(match best {
            None => o,
            Some(b) => b.min(o),
        });
    }
    best.ok_or(Error::AllDerivativesZero)
}

/// Compute r and the scaled gradient p^{−r}∇f.
///
/// Requires r ≥ 0, which holds whenever the reductions of numerator and
/// denominator mod p are coprime; a negative r is reported as NotApplicable.
pub fn scaled_gradient(f: &RationalFunc, p: i64) -> Result<ScaledGradient> {
    let r = grad_ord(f, p)?;
    if r < 0 {
        return Err(Error::NotApplicable(format!(
            "gradient has negative p-adic order {r} (numerator/denominator not coprime mod {p})"
        )));
    }
    let mut parts = Vec::with_capacity(f.n_vars());
    for i in 0..f.n_vars() {
        let d = f.partial_derivative(i);
        if d.is_zero() {
            parts.push(d);
            continue;
        }
        // ord_p(num of d) = ord_p(d) + ord_p(den of d) >= r, so the division
        // below is exact.
        let num = d.num().exact_div_pow(p, r as u32);
        parts.push(RationalFunc::new(num, d.den().clone()).expect("valid quotient"));
    }
    Ok(ScaledGradient { r, parts })
}
