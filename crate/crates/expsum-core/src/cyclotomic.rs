//! Exact arithmetic in the ring of integers of cyclotomic fields Q(ζ_q) for
//! odd conductors q, used as the value type of every exponential sum.
//!
//! Elements are stored on the canonical power basis {ζ^j : 0 ≤ j < φ(q)},
//! fully reduced modulo the q-th cyclotomic polynomial, so equality is
//! coefficientwise. For a prime power q = p^m the reduction is the rewrite
//! rule ζ^{(p−1)p^{m−1}+u} = −Σ_{t<p−1} ζ^{t·p^{m−1}+u} coming from
//! Σ_{t<p} ζ^{t·p^{m−1}} = 0; the general case divides by Φ_q exactly.
//!
//! Coefficients are bounded by the number of lattice points summed; they are
//! held in checked i128 arithmetic and any overflow aborts loudly rather
//! than forging an "exact" equality.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

fn checked_add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("cyclotomic coefficient overflow")
}

fn checked_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("cyclotomic coefficient overflow")
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Cyclotomic polynomial Φ_n as a dense ascending coefficient vector,
/// computed by exact division of x^n − 1 by the Φ_d for proper divisors d.
fn cyclotomic_poly_uncached(n: u64, cache: &mut HashMap<u64, Arc<Vec<i128>>>) -> Arc<Vec<i128>> {
    if let Some(hit) = cache.get(&n) {
        return hit.clone();
    }
    let result = if n == 1 {
        vec![-1i128, 1]
    } else {
        // f = x^n - 1
        let mut f = vec![0i128; n as usize + 1];
        f[0] = -1;
        f[n as usize] = 1;
        let mut d = 1u64;
        while d * d <= n {
            if n % d == 0 {
                for div in [d, n / d] {
                    if div < n {
                        let phi_d = cyclotomic_poly_uncached(div, cache);
                        f = exact_div_monic(&f, &phi_d);
                    }
                    if d * d == n {
                        break;
                    }
                }
            }
            d += 1;
        }
        f
    };
    let arc = Arc::new(result);
    cache.insert(n, arc.clone());
    arc
}

/// Exact division of polynomials with integer coefficients, divisor monic.
fn exact_div_monic(f: &[i128], g: &[i128]) -> Vec<i128> {
    debug_assert_eq!(*g.last().unwrap(), 1);
    let mut rem: Vec<i128> = f.to_vec();
    let dg = g.len() - 1;
    assert!(rem.len() > dg);
    let dq = rem.len() - 1 - dg;
    let mut quot = vec![0i128; dq + 1];
    for k in (0..=dq).rev() {
        let c = rem[k + dg];
        quot[k] = c;
        if c != 0 {
            for (i, &gi) in g.iter().enumerate() {
                rem[k + i] = checked_add(rem[k + i], -checked_mul(c, gi));
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "division was not exact");
    quot
}

struct RingData {
    q: u64,
    phi: usize,
    /// Φ_q, monic, ascending coefficients, length phi + 1.
    modulus: Arc<Vec<i128>>,
}

fn ring_data(q: u64) -> Arc<RingData> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<RingData>>>> = OnceLock::new();
    static POLY_CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i128>>>>> = OnceLock::new();
    assert!(q >= 1 && q % 2 == 1, "conductor must be odd and positive");
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&q) {
        return hit.clone();
    }
    let modulus = {
        let mut polys = POLY_CACHE
            .get_or_init(|| Mutex::new(HashMap::new()))
            .lock()
            .unwrap();
        cyclotomic_poly_uncached(q, &mut polys)
    };
    let data = Arc::new(RingData {
        q,
        phi: modulus.len() - 1,
        modulus,
    });
    cache.lock().unwrap().insert(q, data.clone());
    data
}

/// An element of Z[ζ_q] in canonical power-basis form.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloElement {
    conductor: u64,
    /// Coefficients on {ζ^j : 0 ≤ j < φ(q)}.
    coeffs: Vec<i128>,
}

impl CycloElement {
    /// The zero element of Z[ζ_q].
    pub fn zero(q: u64) -> Self {
        let ring = ring_data(q);
        CycloElement {
            conductor: q,
            coeffs: vec![0; ring.phi],
        }
    }

    /// The integer c as an element of Z[ζ_q].
    pub fn integer(q: u64, c: i128) -> Self {
        let mut e = Self::zero(q);
        e.coeffs[0] = c;
        e
    }

    pub fn one(q: u64) -> Self {
        Self::integer(q, 1)
    }

    /// ζ_q^a in canonical form (a is reduced mod q; negative a allowed).
    pub fn root_of_unity(q: u64, a: i64) -> Self {
        let exp = a.rem_euclid(q as i64) as usize;
        let mut counts = vec![0i128; exp + 1];
        counts[exp] = 1;
        Self::from_exponent_counts(q, counts)
    }

    /// Σ counts[j]·ζ_q^j reduced to canonical form. The preferred way to
    /// assemble a large sum: accumulate integer counts per exponent, then
    /// canonicalize once.
    pub fn from_exponent_counts(q: u64, mut counts: Vec<i128>) -> Self {
        let ring = ring_data(q);
        reduce_in_place(&mut counts, &ring);
        counts.resize(ring.phi, 0);
        CycloElement {
            conductor: q,
            coeffs: counts,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The integer value if the element is rational (all basis coefficients
    /// beyond ζ^0 vanish).
    pub fn as_integer(&self) -> Option<i128> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    pub fn add(&self, other: &CycloElement) -> Result<CycloElement> {
        if self.conductor != other.conductor {
            return Err(Error::ConductorMismatch {
                left: self.conductor,
                right: other.conductor,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| checked_add(a, b))
            .collect();
        Ok(CycloElement {
            conductor: self.conductor,
            coeffs,
        })
    }

    pub fn sub(&self, other: &CycloElement) -> Result<CycloElement> {
        self.add(&other.scalar_mul(-1))
    }

    pub fn neg(&self) -> CycloElement {
        self.scalar_mul(-1)
    }

    pub fn scalar_mul(&self, c: i128) -> CycloElement {
        CycloElement {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|&a| checked_mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &CycloElement) -> Result<CycloElement> {
        if self.conductor != other.conductor {
            return Err(Error::ConductorMismatch {
                left: self.conductor,
                right: other.conductor,
            });
        }
        if self.coeffs.is_empty() {
            return Ok(self.clone());
        }
        let mut counts = vec![0i128; 2 * self.coeffs.len().max(1)];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                counts[i + j] = checked_add(counts[i + j], checked_mul(a, b));
            }
        }
        Ok(Self::from_exponent_counts(self.conductor, counts))
    }

    pub fn pow(&self, e: u32) -> CycloElement {
        let mut acc = CycloElement::one(self.conductor);
        for _ in 0..e {
            acc = acc.mul(self).expect("same conductor");
        }
        acc
    }

    /// Embed into Z[ζ_target] along ζ_q = ζ_target^{target/q}.
    ///
    /// Requires q | target; this is the unique ring embedding compatible
    /// with the choice of roots of unity.
    pub fn lift_conductor(&self, target: u64) -> Result<CycloElement> {
        if target == self.conductor {
            return Ok(self.clone());
        }
        if target % self.conductor != 0 {
            return Err(Error::IncompatibleConductors {
                from: self.conductor,
                to: target,
            });
        }
        let k = (target / self.conductor) as usize;
        let mut counts = vec![0i128; self.coeffs.len() * k + 1];
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                counts[j * k] = checked_add(counts[j * k], c);
            }
        }
        Ok(Self::from_exponent_counts(target, counts))
    }

    /// Decide equality after lifting both elements into the compositum
    /// Z[ζ_lcm]. Elements over the same conductor compare coefficientwise.
    pub fn eq_lifted(&self, other: &CycloElement) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let g = gcd_u64(self.conductor, other.conductor);
        let l = self.conductor / g * other.conductor;
        let a = self.lift_conductor(l).expect("divides lcm");
        let b = other.lift_conductor(l).expect("divides lcm");
        a.coeffs == b.coeffs
    }

    /// Numerical embedding ζ_q ↦ exp(2πi/q), for reports and magnitude
    /// checks only — never for equality decisions.
    pub fn embed_complex(&self) -> Complex64 {
        let q = self.conductor as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let theta = 2.0 * std::f64::consts::PI * (j as f64) / q;
                acc += Complex64::new(theta.cos(), theta.sin()) * (c as f64);
            }
        }
        acc
    }
}

/// Reduce an exponent-indexed count vector modulo Φ_q in place. The result
/// occupies the first φ(q) slots.
fn reduce_in_place(counts: &mut Vec<i128>, ring: &RingData) {
    let phi = ring.phi;
    let modulus = &ring.modulus;
    // exponents at or above q are periodic
    if counts.len() > ring.q as usize {
        let q = ring.q as usize;
        for j in (q..counts.len()).rev() {
            let c = counts[j];
            if c != 0 {
                counts[j] = 0;
                counts[j - q] = checked_add(counts[j - q], c);
            }
        }
        counts.truncate(q);
    }
    for j in (phi..counts.len()).rev() {
        let c = counts[j];
        if c == 0 {
            continue;
        }
        counts[j] = 0;
        let base = j - phi;
        for (i, &gi) in modulus.iter().take(phi).enumerate() {
            counts[base + i] = checked_add(counts[base + i], -checked_mul(c, gi));
        }
    }
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo(q={}, [", self.conductor)?;
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "{c}·ζ^{j}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, "])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        // prime: 1 + x + ... + x^{p-1}
        let ring = ring_data(5);
        assert_eq!(*ring.modulus, vec![1, 1, 1, 1, 1]);
        // prime power p^m: Σ x^{t p^{m-1}}
        let ring9 = ring_data(9);
        assert_eq!(*ring9.modulus, vec![1, 0, 0, 1, 0, 0, 1]);
        let ring27 = ring_data(27);
        assert_eq!(ring27.phi, 18);
        assert_eq!(ring27.modulus[0], 1);
        assert_eq!(ring27.modulus[9], 1);
        assert_eq!(ring27.modulus[18], 1);
        // composite: Φ_15 has degree 8
        let ring15 = ring_data(15);
        assert_eq!(ring15.phi, 8);
        assert_eq!(*ring15.modulus, vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);
    }

    #[test]
    fn root_of_unity_examples() {
        let one = CycloElement::root_of_unity(9, 0);
        assert_eq!(one, CycloElement::one(9));
        assert_eq!(CycloElement::root_of_unity(9, 9), CycloElement::one(9));
        // ζ_3^2 = -1 - ζ_3
        let z2 = CycloElement::root_of_unity(3, 2);
        assert_eq!(z2.coeffs(), &[-1, -1]);
    }

    #[test]
    fn ring_examples() {
        let z = CycloElement::root_of_unity(9, 1);
        assert!(z.add(&z.neg()).unwrap().is_zero());
        let z8 = CycloElement::root_of_unity(9, 8);
        assert_eq!(z.mul(&z8).unwrap(), CycloElement::one(9));
        let z3 = CycloElement::root_of_unity(3, 1);
        let sq = z3.mul(&z3).unwrap();
        assert_eq!(sq.coeffs(), &[-1, -1]);
    }

    #[test]
    fn conductor_mismatch_is_an_error() {
        let a = CycloElement::root_of_unity(3, 1);
        let b = CycloElement::root_of_unity(9, 1);
        assert!(matches!(a.add(&b), Err(Error::ConductorMismatch { .. })));
    }

    #[test]
    fn lift_examples() {
        let one = CycloElement::one(3);
        assert_eq!(one.lift_conductor(27).unwrap(), CycloElement::one(27));
        let z3 = CycloElement::root_of_unity(3, 1);
        assert_eq!(
            z3.lift_conductor(9).unwrap(),
            CycloElement::root_of_unity(9, 3)
        );
        assert!(matches!(
            z3.lift_conductor(5),
            Err(Error::IncompatibleConductors { .. })
        ));
    }

    #[test]
    fn lift_is_a_ring_embedding() {
        let a = CycloElement::root_of_unity(9, 2).scalar_mul(3);
        let b = CycloElement::root_of_unity(9, 7)
            .add(&CycloElement::integer(9, -2))
            .unwrap();
        let prod = a.mul(&b).unwrap();
        let la = a.lift_conductor(27).unwrap();
        let lb = b.lift_conductor(27).unwrap();
        assert_eq!(la.mul(&lb).unwrap(), prod.lift_conductor(27).unwrap());
    }

    #[test]
    fn eq_lifted_across_conductors() {
        let one3 = CycloElement::one(3);
        let one9 = CycloElement::one(9);
        assert!(one3.eq_lifted(&one9));
        let z3 = CycloElement::root_of_unity(3, 1);
        let z9c3 = CycloElement::root_of_unity(9, 3);
        assert!(z3.eq_lifted(&z9c3));
        assert!(!z3.eq_lifted(&CycloElement::root_of_unity(9, 1)));
        // coprime conductors meet in the compositum
        let z3_in15 = CycloElement::root_of_unity(15, 5);
        assert!(z3.eq_lifted(&z3_in15));
    }

    #[test]
    fn complete_character_sums_vanish() {
        for q in [3u64, 9, 27, 5, 25, 7, 49] {
            // ζ^q = 1
            assert_eq!(
                CycloElement::root_of_unity(q, q as i64),
                CycloElement::one(q)
            );
            for a in 1..q.min(12) {
                if a % q == 0 {
                    continue;
                }
                let mut counts = vec![0i128; q as usize];
                for j in 0..q {
                    let e = (a * j % q) as usize;
                    counts[e] += 1;
                }
                let s = CycloElement::from_exponent_counts(q, counts);
                assert!(s.is_zero(), "q={q} a={a}");
            }
            // a divisible by q sums to q
            let s = CycloElement::from_exponent_counts(q, vec![q as i128]);
            assert_eq!(s.as_integer(), Some(q as i128));
        }
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let e = CycloElement::root_of_unity(27, 25).scalar_mul(7);
        let again = CycloElement::from_exponent_counts(27, e.coeffs().to_vec());
        assert_eq!(e, again);
    }

    #[test]
    fn embed_examples() {
        let one = CycloElement::one(7);
        let v = one.embed_complex();
        assert!((v.re - 1.0).abs() < 1e-12 && v.im.abs() < 1e-12);
        let z3 = CycloElement::root_of_unity(3, 1);
        let v = z3.embed_complex();
        assert!((v.re + 0.5).abs() < 1e-12);
        assert!((v.im - 0.866_025_403_784_438_6).abs() < 1e-12);
    }

    #[test]
    fn embed_is_multiplicative_numerically() {
        let a = CycloElement::root_of_unity(25, 7)
            .add(&CycloElement::integer(25, 2))
            .unwrap();
        let b = CycloElement::root_of_unity(25, 13).scalar_mul(-3);
        let prod = a.mul(&b).unwrap().embed_complex();
        let sep = a.embed_complex() * b.embed_complex();
        assert!((prod - sep).norm() < 1e-9);
    }
}
