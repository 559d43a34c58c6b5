//! Exact residue arithmetic modulo odd prime powers, p-adic valuations of
//! integers, and quadratic residue symbols.
//!
//! All moduli are kept small enough that `q * q` fits an `i64`, and every
//! product is carried out in `i128`, so no operation here can overflow
//! silently.

use crate::error::{Error, Result};
use std::fmt;

/// Largest modulus q with q*q still representable in an i64.
const MAX_MODULUS: i64 = 3_037_000_499;

/// gcd of two non-negative integers.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Canonical representative of `a` in `[0, q)`.
#[inline]
pub fn reduce(a: i64, q: i64) -> i64 {
    debug_assert!(q > 0);
    a.rem_euclid(q)
}

#[inline]
pub fn add_mod(a: i64, b: i64, q: i64) -> i64 {
    debug_assert!(0 <= a && a < q && 0 <= b && b < q);
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: i64, b: i64, q: i64) -> i64 {
    debug_assert!(0 <= a && a < q && 0 <= b && b < q);
    let s = a - b;
    if s < 0 {
        s + q
    } else {
        s
    }
}

#[inline]
pub fn mul_mod(a: i64, b: i64, q: i64) -> i64 {
    debug_assert!(0 <= a && a < q && 0 <= b && b < q);
    ((a as i128 * b as i128) % q as i128) as i64
}

/// `a^e mod q` by binary exponentiation.
pub fn pow_mod(a: i64, mut e: u64, q: i64) -> i64 {
    let mut base = reduce(a, q);
    let mut acc = 1 % q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse of `a` modulo `q ≥ 1`, or `None` when gcd(a, q) > 1.
pub fn inv_mod(a: i64, q: i64) -> Option<i64> {
    debug_assert!(q >= 1);
    let a = reduce(a, q);
    // extended Euclid on (a, q)
    let (mut r0, mut r1) = (a, q);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let k = r0 / r1;
        let r2 = r0 - k * r1;
        let s2 = s0 - k * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if r0 != 1 {
        return None;
    }
    Some(reduce(s0, q))
}

/// Deterministic primality by trial division; intended for desk-scale p.
pub fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3i64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An odd prime power modulus q = p^m with m ≥ 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: i64,
    m: u32,
    q: i64,
}

impl PrimePower {
    /// Construct p^m, verifying that p is an odd prime and that q² fits an i64.
    pub fn new(p: i64, m: u32) -> Result<Self> {
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if m < 1 {
            return Err(Error::InvalidInput("exponent m must be at least 1".into()));
        }
        let mut q: i64 = 1;
        for _ in 0..m {
            q = q
                .checked_mul(p)
                .filter(|&v| v <= MAX_MODULUS)
                .ok_or(Error::ModulusTooLarge { p, m })?;
        }
        Ok(PrimePower { p, m, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// The modulus value p^m.
    pub fn q(&self) -> i64 {
        self.q
    }

    /// p^k for 0 ≤ k ≤ m.
    pub fn pow_of(&self, k: u32) -> i64 {
        assert!(k <= self.m, "requested power exceeds the stored exponent");
        let mut v = 1i64;
        for _ in 0..k {
            v *= self.p;
        }
        v
    }

    /// The prime power p^k as a modulus in its own right (k ≥ 1).
    pub fn sub_power(&self, k: u32) -> PrimePower {
        assert!(1 <= k && k <= self.m);
        PrimePower {
            p: self.p,
            m: k,
            q: self.pow_of(k),
        }
    }

    pub fn residue(&self, value: i64) -> Residue {
        Residue {
            value: reduce(value, self.q),
            modulus: *self,
        }
    }
}

impl fmt::Debug for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.m)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.m)
    }
}

/// A canonical residue in `[0, q)` for q = p^m.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Residue {
    value: i64,
    modulus: PrimePower,
}

impl Residue {
    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn modulus(&self) -> PrimePower {
        self.modulus
    }

    pub fn add(&self, other: &Residue) -> Residue {
        assert_eq!(self.modulus, other.modulus);
        self.modulus
            .residue(add_mod(self.value, other.value, self.modulus.q))
    }

    pub fn mul(&self, other: &Residue) -> Residue {
        assert_eq!(self.modulus, other.modulus);
        self.modulus
            .residue(mul_mod(self.value, other.value, self.modulus.q))
    }

    pub fn inverse(&self) -> Result<Residue> {
        mod_inverse(self.value, self.modulus)
    }
}

/// Multiplicative inverse of `a` modulo q = p^m.
pub fn mod_inverse(a: i64, q: PrimePower) -> Result<Residue> {
    match inv_mod(a, q.q()) {
        Some(b) => Ok(q.residue(b)),
        None => Err(Error::NotInvertible {
            a: reduce(a, q.q()),
            modulus: q.q(),
        }),
    }
}

/// Jacobi symbol (n/q) for odd q ≥ 1, by quadratic reciprocity.
///
/// Returns 0 when gcd(n, q) > 1, otherwise ±1.
pub fn jacobi_symbol(n: i64, q: i64) -> i64 {
    assert!(q >= 1 && q % 2 == 1, "Jacobi symbol needs odd q >= 1");
    let mut num = reduce(n, q);
    let mut den = q;
    let mut sign = 1i64;
    loop {
        num %= den;
        if num == 0 {
            return if den == 1 { sign } else { 0 };
        }
        // pull out factors of two; (2/den) = (-1)^((den^2-1)/8)
        while num % 2 == 0 {
            num /= 2;
            if den % 8 == 3 || den % 8 == 5 {
                sign = -sign;
            }
        }
        // reciprocity for odd coprime num, den
        if num % 4 == 3 && den % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut num, &mut den);
    }
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre_symbol(a: i64, p: i64) -> i64 {
    debug_assert!(is_prime(p), "legendre_symbol needs a prime modulus");
    jacobi_symbol(a, p)
}

/// p-adic valuation of an integer.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<u32> {
        match self {
            Valuation::Finite(k) => Some(*k),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

/// Largest k with p^k | a; `Infinite` for a = 0.
pub fn int_valuation(a: i64, p: i64) -> Valuation {
    assert!(p >= 2, "valuation needs a prime p");
    if a == 0 {
        return Valuation::Infinite;
    }
    let mut a = a.abs();
    let mut k = 0u32;
    while a % p == 0 {
        a /= p;
        k += 1;
    }
    Valuation::Finite(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        let q9 = PrimePower::new(3, 2).unwrap();
        assert_eq!(mod_inverse(1, q9).unwrap().value(), 1);
        assert_eq!(mod_inverse(2, q9).unwrap().value(), 5);
        assert_eq!(
            mod_inverse(3, q9),
            Err(Error::NotInvertible { a: 3, modulus: 9 })
        );
    }

    #[test]
    fn inverse_involution() {
        let q = PrimePower::new(7, 3).unwrap();
        for a in 1..q.q() {
            if gcd(a, q.q()) == 1 {
                let b = mod_inverse(a, q).unwrap();
                let back = mod_inverse(b.value(), q).unwrap();
                assert_eq!(back.value(), a);
            }
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(1, 3), 1);
        assert_eq!(legendre_symbol(0, 5), 0);
        assert_eq!(legendre_symbol(2, 3), -1);
    }

    #[test]
    fn legendre_matches_square_enumeration() {
        // independent oracle: exhaust squares mod p
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            let mut squares = std::collections::HashSet::new();
            for x in 1..p {
                squares.insert(mul_mod(x, x, p));
            }
            for a in 0..p {
                let expected = if a == 0 {
                    0
                } else if squares.contains(&a) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre_symbol(a, p), expected, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn euler_criterion() {
        let mut p = 3i64;
        while p <= 100 {
            if is_prime(p) {
                for a in 0..p {
                    let sym = legendre_symbol(a, p);
                    let pow = pow_mod(a, ((p - 1) / 2) as u64, p);
                    let sym_as_residue = reduce(sym, p);
                    assert_eq!(sym_as_residue, pow, "a={a} p={p}");
                }
            }
            p += 2;
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_symbol(1, 15), 1);
        assert_eq!(jacobi_symbol(2, 9), 1);
        assert_eq!(jacobi_symbol(2, 15), 1);
    }

    #[test]
    fn jacobi_agrees_with_legendre_on_primes() {
        for p in [3i64, 5, 7, 11, 13, 101] {
            for n in -20..20 {
                assert_eq!(jacobi_symbol(n, p), legendre_symbol(n, p));
            }
        }
    }

    #[test]
    fn jacobi_multiplicative() {
        for q in [9i64, 15, 21, 45, 225] {
            for n1 in -10..10 {
                for n2 in -10..10 {
                    assert_eq!(
                        jacobi_symbol(n1 * n2, q),
                        jacobi_symbol(n1, q) * jacobi_symbol(n2, q),
                        "n1={n1} n2={n2} q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(int_valuation(18, 3), Valuation::Finite(2));
        assert_eq!(int_valuation(7, 3), Valuation::Finite(0));
        assert_eq!(int_valuation(0, 5), Valuation::Infinite);
        assert_eq!(int_valuation(-54, 3), Valuation::Finite(3));
    }

    #[test]
    fn prime_power_construction() {
        assert!(PrimePower::new(2, 3).is_err());
        assert!(PrimePower::new(9, 1).is_err());
        assert!(PrimePower::new(3, 0).is_err());
        // 3^40 overflows the q² bound
        assert!(matches!(
            PrimePower::new(3, 40),
            Err(Error::ModulusTooLarge { .. })
        ));
        let q = PrimePower::new(3, 4).unwrap();
        assert_eq!(q.q(), 81);
        assert_eq!(q.pow_of(2), 9);
        assert_eq!(q.sub_power(2).q(), 9);
    }
}
