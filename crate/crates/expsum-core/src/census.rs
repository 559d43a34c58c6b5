//! Solution censuses of quadratic congruences Q(x) ≡ 0 mod p^m, their
//! densities, dual forms, closed evaluation of the associated exponential
//! sums E(k, h; p^m), Gaussian-weighted counts in boxes, and the
//! convergence harness comparing the weighted count T against its main
//! term T₀.

use crate::cyclotomic::CycloElement;
use crate::engine::gauss_sum_brute;
use crate::error::{Error, Result};
use crate::modular::{self, PrimePower};
use crate::Rational;
use num_complex::Complex64;

/// A quadratic form x^t A x given by a symmetric integer matrix A, with
/// its determinant and adjugate cached exactly.
#[derive(Clone, Debug)]
pub struct QuadraticForm {
    n: usize,
    matrix: Vec<Vec<i64>>,
    det: i128,
    adjugate: Vec<Vec<i128>>,
}

fn det_i128(mat: &[Vec<i128>]) -> i128 {
    let n = mat.len();
    if n == 1 {
        return mat[0][0];
    }
    let mut acc: i128 = 0;
    for col in 0..n {
        if mat[0][col] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let sign = if col % 2 == 0 { 1 } else { -1 };
        let term = mat[0][col]
            .checked_mul(det_i128(&minor))
            .expect("determinant overflow");
        acc = acc.checked_add(sign * term).expect("determinant overflow");
    }
    acc
}

impl QuadraticForm {
    /// Build from a symmetric n×n integer matrix, n ≥ 2.
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let n = matrix.len();
        if n < 2 {
            return Err(Error::InvalidInput(
                "quadratic form needs dimension at least 2".into(),
            ));
        }
        for row in &matrix {
            if row.len() != n {
                return Err(Error::InvalidInput("matrix is not square".into()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::InvalidInput(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let wide: Vec<Vec<i128>> = matrix
            .iter()
            .map(|r| r.iter().map(|&v| v as i128).collect())
            .collect();
        let det = det_i128(&wide);
        // adjugate via cofactors: adj(A)[i][j] = (-1)^{i+j} det(minor of A
        // with row j and column i removed)
        let mut adjugate = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<i128>> = wide
                    .iter()
                    .enumerate()
                    .filter(|(r, _)| *r != j)
                    .map(|(_, row)| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != i)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                adjugate[i][j] = sign * det_i128(&minor);
            }
        }
        // A · adj(A) = det(A) · I, exactly
        for i in 0..n {
            for j in 0..n {
                let mut s: i128 = 0;
                for k in 0..n {
                    s += wide[i][k] * adjugate[k][j];
                }
                let expect = if i == j { det } else { 0 };
                assert_eq!(s, expect, "adjugate identity failed");
            }
        }
        Ok(QuadraticForm {
            n,
            matrix,
            det,
            adjugate,
        })
    }

    /// Diagonal form diag(d_1, ..., d_n).
    pub fn diagonal(diag: &[i64]) -> Result<Self> {
        let n = diag.len();
        let mut m = vec![vec![0i64; n]; n];
        for (i, &d) in diag.iter().enumerate() {
            m[i][i] = d;
        }
        Self::new(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn det(&self) -> i128 {
        self.det
    }

    pub fn adjugate(&self) -> &[Vec<i128>] {
        &self.adjugate
    }

    /// Q(x) = x^t A x, exactly.
    pub fn eval_exact(&self, x: &[i64]) -> i128 {
        debug_assert_eq!(x.len(), self.n);
        let mut acc: i128 = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                acc = acc
                    .checked_add(
                        (self.matrix[i][j] as i128)
                            .checked_mul(x[i] as i128)
                            .and_then(|v| v.checked_mul(x[j] as i128))
                            .expect("overflow evaluating quadratic form"),
                    )
                    .expect("overflow evaluating quadratic form");
            }
        }
        acc
    }

    /// Q(x) mod q.
    pub fn eval_mod(&self, x: &[i64], q: i64) -> i64 {
        let mut acc = 0i64;
        for i in 0..self.n {
            let xi = modular::reduce(x[i], q);
            for j in 0..self.n {
                let xj = modular::reduce(x[j], q);
                let a = modular::reduce(self.matrix[i][j], q);
                let t = modular::mul_mod(modular::mul_mod(a, xi, q), xj, q);
                acc = modular::add_mod(acc, t, q);
            }
        }
        acc
    }

    /// ∇Q(x) = 2Ax reduced mod q.
    pub fn gradient_mod(&self, x: &[i64], q: i64) -> Vec<i64> {
        (0..self.n)
            .map(|i| {
                let mut acc = 0i64;
                for j in 0..self.n {
                    let a = modular::reduce(2 * self.matrix[i][j], q);
                    acc =
                        modular::add_mod(acc, modular::mul_mod(a, modular::reduce(x[j], q), q), q);
                }
                acc
            })
            .collect()
    }

    /// The dual form Q'(L) = L^t adj(A)^t L.
    pub fn dual_form(&self) -> Result<QuadraticForm> {
        let mut m = vec![vec![0i64; self.n]; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.adjugate[j][i]; // transpose
                m[i][j] = i64::try_from(v).map_err(|_| {
                    Error::InvalidInput("dual form entries exceed the supported range".into())
                })?;
            }
        }
        QuadraticForm::new(m)
    }

    /// Q'(L) evaluated exactly from the cached adjugate.
    pub fn dual_value(&self, l_vec: &[i64]) -> i128 {
        debug_assert_eq!(l_vec.len(), self.n);
        let mut acc: i128 = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += self.adjugate[j][i] * (l_vec[i] as i128) * (l_vec[j] as i128);
            }
        }
        acc
    }

    fn require_nonsingular(&self, p: i64) -> Result<()> {
        if self.det.rem_euclid(p as i128) == 0 {
            return Err(Error::SingularModP { p });
        }
        Ok(())
    }
}

fn check_budget(points: u128, budget: u64) -> Result<()> {
    if points > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: points,
            budget,
        });
    }
    Ok(())
}

fn for_each_point(bound: i64, n: usize, mut body: impl FnMut(&[i64])) {
    let mut x = vec![0i64; n];
    loop {
        body(&x);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            x[i] += 1;
            if x[i] < bound {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn pow_i128(base: i64, exp: u32) -> i128 {
    let mut acc: i128 = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base as i128)
            .expect("overflow in power-of-p scale factor");
    }
    acc
}

/// Census of Q ≡ 0 mod p^m over x ≢ 0 mod p, with the m-independent
/// density b_p = #A / p^{m(n−1)} as an exact rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusResult {
    pub p: i64,
    pub m: u32,
    pub count_a: u64,
    pub b_p: Rational,
}

/// #A: solutions of Q(x) ≡ 0 mod p^m with 1 ≤ x_i ≤ p^m and x ≢ 0 mod p,
/// by exact enumeration.
pub fn count_a(q_form: &QuadraticForm, pp: PrimePower, budget: u64) -> Result<u64> {
    q_form.require_nonsingular(pp.p())?;
    let n = q_form.n();
    let q = pp.q();
    check_budget((q as u128).pow(n as u32), budget)?;
    let p = pp.p();
    let mut count = 0u64;
    for_each_point(q, n, |x| {
        if x.iter().all(|&v| v % p == 0) {
            return;
        }
        if q_form.eval_mod(x, q) == 0 {
            count += 1;
        }
    });
    Ok(count)
}

/// Census with the exact density b_p.
pub fn census(q_form: &QuadraticForm, pp: PrimePower, budget: u64) -> Result<CensusResult> {
    let count = count_a(q_form, pp, budget)?;
    let denom = pow_i128(pp.p(), pp.m() * (q_form.n() as u32 - 1));
    Ok(CensusResult {
        p: pp.p(),
        m: pp.m(),
        count_a: count,
        b_p: Rational::new(count as i128, denom),
    })
}

/// Whether #A(p^m) = p^{(n−1)(m−1)} · #A(p), computed exactly.
pub fn hensel_scaling_check(q_form: &QuadraticForm, pp: PrimePower, budget: u64) -> Result<bool> {
    let full = count_a(q_form, pp, budget)?;
    let base = count_a(q_form, pp.sub_power(1), budget)?;
    let factor = pow_i128(pp.p(), (q_form.n() as u32 - 1) * (pp.m() - 1));
    Ok(full as i128 == factor * base as i128)
}

/// E(k, h; p^m) = Σ_y e_{p^m}(h·Q(y) + k·y) by enumeration, optionally
/// restricted to y ≢ 0 mod p.
pub fn esum_brute(
    q_form: &QuadraticForm,
    k: &[i64],
    h: i64,
    pp: PrimePower,
    restrict_nonzero: bool,
    budget: u64,
) -> Result<CycloElement> {
    let n = q_form.n();
    if k.len() != n {
        return Err(Error::VarCountMismatch {
            left: n,
            right: k.len(),
        });
    }
    let q = pp.q();
    check_budget((q as u128).pow(n as u32), budget)?;
    let p = pp.p();
    let h_red = modular::reduce(h, q);
    let k_red: Vec<i64> = k.iter().map(|&v| modular::reduce(v, q)).collect();
    let mut counts = vec![0i64; q as usize];
    for_each_point(q, n, |y| {
        if restrict_nonzero && y.iter().all(|&v| v % p == 0) {
            return;
        }
        let mut phase = modular::mul_mod(h_red, q_form.eval_mod(y, q), q);
        for (ki, &yi) in k_red.iter().zip(y.iter()) {
            phase = modular::add_mod(phase, modular::mul_mod(*ki, yi, q), q);
        }
        counts[phase as usize] += 1;
    });
    Ok(CycloElement::from_exponent_counts(
        q as u64,
        counts.into_iter().map(i128::from).collect(),
    ))
}

/// Closed form for E(l₁p^r, …, l_n p^r, l·p^r; p^m) with l_vec ≢ 0 mod p
/// and l a unit mod p, valid for m − r ≥ 2 and p ∤ det A:
///
/// the phase collapses onto the unique critical point, leaving
/// e_{p^{m−r}}(C·l̄·Q'(L)) with C = −(2 det A)‾·(1 − 2̄), scaled by
/// p^{(m+r)n/2} when m − r is even, and additionally carrying
/// (det A / p)(l / p)^n G_p(1)^n with scale p^{(m+r−1)n/2} when m − r is
/// odd.
pub fn esum_closed(
    q_form: &QuadraticForm,
    l_vec: &[i64],
    l: i64,
    r: u32,
    pp: PrimePower,
) -> Result<CycloElement> {
    let n = q_form.n();
    if l_vec.len() != n {
        return Err(Error::VarCountMismatch {
            left: n,
            right: l_vec.len(),
        });
    }
    let p = pp.p();
    let m = pp.m();
    q_form.require_nonsingular(p)?;
    if (m as i64) - (r as i64) < 2 {
        return Err(Error::NotApplicable(format!(
            "closed form needs m − r ≥ 2 (m = {m}, r = {r})"
        )));
    }
    if modular::gcd(modular::reduce(l, p), p) != 1 {
        return Err(Error::NotCoprime {
            a: modular::reduce(l, p),
            modulus: p,
        });
    }
    if l_vec.iter().all(|&v| v % p == 0) {
        return Err(Error::InvalidInput("l_vec must be nonzero modulo p".into()));
    }
    let mr = m - r;
    let pmr = pp.pow_of(mr); // p^{m-r}
    let inv2 = modular::inv_mod(2, pmr).expect("odd modulus");
    let det_mod = modular::reduce((q_form.det() % pmr as i128) as i64, pmr);
    let inv_2det =
        modular::inv_mod(modular::mul_mod(2 % pmr, det_mod, pmr), pmr).expect("unit determinant");
    // C = −(2 det A)‾ (1 − 2̄) mod p^{m−r}
    let one_minus = modular::sub_mod(1 % pmr, inv2, pmr);
    let c = modular::sub_mod(0, modular::mul_mod(inv_2det, one_minus, pmr), pmr);
    let l_inv = modular::inv_mod(l, pmr).expect("unit l");
    let qp = modular::reduce((q_form.dual_value(l_vec) % pmr as i128) as i64, pmr);
    let expo = modular::mul_mod(modular::mul_mod(c, l_inv, pmr), qp, pmr);
    // e_{p^{m−r}}(expo) = e_{p^m}(expo · p^r)
    let q = pp.q();
    let phase = CycloElement::root_of_unity(q as u64, modular::mul_mod(expo, pp.pow_of(r) % q, q));
    if mr % 2 == 0 {
        let scale = pow_i128(p, (m + r) * n as u32 / 2);
        return Ok(phase.scalar_mul(scale));
    }
    let sym_det =
        modular::legendre_symbol(modular::reduce((q_form.det() % p as i128) as i64, p), p);
    let sym_l = modular::legendre_symbol(l, p);
    let sym = sym_det * sym_l.pow(n as u32);
    let scale = pow_i128(p, (m + r - 1) * n as u32 / 2);
    let gauss = gauss_sum_brute(p as u64, 1, p as u64)?
        .lift_conductor(q as u64)?
        .pow(n as u32);
    Ok(phase.mul(&gauss)?.scalar_mul(scale * sym as i128))
}

/// Exact sum of the closed form over the units l mod p^{m−r}.
///
/// Vanishes exactly whenever p^{m−r−1} ∤ Q'(L); otherwise it is bounded by
/// p^{(m+r)n/2 + (m−r)} in absolute value.
pub fn esum_h_average(
    q_form: &QuadraticForm,
    l_vec: &[i64],
    r: u32,
    pp: PrimePower,
) -> Result<CycloElement> {
    let p = pp.p();
    let m = pp.m();
    if (m as i64) - (r as i64) < 2 {
        return Err(Error::NotApplicable(format!(
            "h-average needs m − r ≥ 2 (m = {m}, r = {r})"
        )));
    }
    let pmr = pp.pow_of(m - r);
    let mut acc = CycloElement::zero(pp.q() as u64);
    for l in 1..=pmr {
        if l % p == 0 {
            continue;
        }
        acc = acc.add(&esum_closed(q_form, l_vec, l, r, pp)?)?;
    }
    Ok(acc)
}

/// The Gaussian window Φ(t) = exp(−π t²), self-dual under the Fourier
/// transform Φ̂(ξ) = ∫ Φ(t) e^{−2πitξ} dt, truncated at |t| ≥ radius.
///
/// With the default radius 8, the discarded tail satisfies
/// Φ(8) = e^{−64π} < 10^{−27} per point.
#[derive(Clone, Copy, Debug)]
pub struct GaussianWeight {
    pub trunc_radius: f64,
}

impl Default for GaussianWeight {
    fn default() -> Self {
        GaussianWeight { trunc_radius: 8.0 }
    }
}

impl GaussianWeight {
    pub fn phi(&self, t: f64) -> f64 {
        (-std::f64::consts::PI * t * t).exp()
    }

    /// Fourier transform; the Gaussian is its own transform, so Φ̂(0) = 1.
    pub fn phi_hat(&self, t: f64) -> f64 {
        self.phi(t)
    }
}

/// Number of representatives of the class v mod q inside [lo, hi].
fn reps_in_range(v: i64, q: i64, lo: i64, hi: i64) -> i64 {
    if lo > hi {
        return 0;
    }
    // smallest x ≥ lo with x ≡ v mod q
    let first = v + (lo - v).div_euclid(q) * q;
    let first = if first < lo { first + q } else { first };
    if first > hi {
        0
    } else {
        (hi - first) / q + 1
    }
}

/// Σ Φ((x − x0)/N) over x ≡ v mod q in [lo, hi].
fn class_weight(v: i64, q: i64, lo: i64, hi: i64, x0: i64, width: f64, w: &GaussianWeight) -> f64 {
    let first = {
        let f = v + (lo - v).div_euclid(q) * q;
        if f < lo {
            f + q
        } else {
            f
        }
    };
    let mut acc = 0.0;
    let mut x = first;
    while x <= hi {
        acc += w.phi((x - x0) as f64 / width);
        x += q;
    }
    acc
}

struct TreeCtx<'a> {
    q_form: &'a QuadraticForm,
    pp: PrimePower,
    lo: Vec<i64>,
    hi: Vec<i64>,
    x0: Vec<i64>,
    width: f64,
    weight: GaussianWeight,
    budget: u64,
    leaves: u64,
    acc: f64,
}

impl TreeCtx<'_> {
    /// Depth-first lift of a solution s mod p^k to all solutions mod p^m,
    /// pruned to classes with a representative in the box.
    fn descend(&mut self, s: &mut Vec<i64>, grad: &[i64], pivot: usize, k: u32) -> Result<()> {
        let p = self.pp.p();
        let n = self.q_form.n();
        if k == self.pp.m() {
            self.leaves += 1;
            if self.leaves > self.budget {
                return Err(Error::BudgetExceeded {
                    required: self.leaves as u128,
                    budget: self.budget,
                });
            }
            let mut prod = 1.0;
            for i in 0..n {
                prod *= class_weight(
                    s[i],
                    self.pp.q(),
                    self.lo[i],
                    self.hi[i],
                    self.x0[i],
                    self.width,
                    &self.weight,
                );
            }
            self.acc += prod;
            return Ok(());
        }
        let pk = self.pp.pow_of(k);
        let pk1 = self.pp.pow_of(k + 1);
        // Q(s + p^k t) ≡ 0 mod p^{k+1} ⟺ c + t·∇Q(s) ≡ 0 mod p
        let qv = modular::reduce((self.q_form.eval_exact(s) % pk1 as i128) as i64, pk1);
        debug_assert_eq!(qv % pk, 0);
        let c = qv / pk;
        let g_pivot_inv = modular::inv_mod(grad[pivot], p).expect("pivot is a unit");
        // free coordinates: all but the pivot
        let free: Vec<usize> = (0..n).filter(|&i| i != pivot).collect();
        let mut t = vec![0i64; n];
        let mut counter = vec![0i64; free.len()];
        loop {
            for (pos, &i) in free.iter().enumerate() {
                t[i] = counter[pos];
            }
            let mut dot = modular::reduce(c, p);
            for &i in &free {
                dot = modular::add_mod(
                    dot,
                    modular::mul_mod(modular::reduce(grad[i], p), t[i], p),
                    p,
                );
            }
            t[pivot] = modular::mul_mod(modular::sub_mod(0, dot, p), g_pivot_inv, p);
            // child candidate
            let mut viable = true;
            for i in 0..n {
                let child = s[i] + pk * t[i];
                if reps_in_range(child, pk1, self.lo[i], self.hi[i]) == 0 {
                    viable = false;
                    break;
                }
            }
            if viable {
                for i in 0..n {
                    s[i] += pk * t[i];
                }
                self.descend(s, grad, pivot, k + 1)?;
                for i in 0..n {
                    s[i] -= pk * t[i];
                }
            }
            // odometer over the free coordinates
            let mut pos = 0;
            loop {
                if pos == counter.len() {
                    return Ok(());
                }
                counter[pos] += 1;
                if counter[pos] < p {
                    break;
                }
                counter[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// The Gaussian-weighted solution count
/// T = Σ Φ((x₁−x₀₁)/N) ⋯ Φ((x_n−x₀n)/N) over integer points with
/// x ≢ 0 mod p and Q(x) ≡ 0 mod p^m, truncated at the window radius.
///
/// Solutions are streamed by Hensel-lifting the mod-p solution set one
/// power of p at a time, pruning classes with no representative in the
/// box, so the cost scales with the weighted points rather than the box
/// volume. The budget counts the leaf classes actually weighted.
pub fn weighted_count_t(
    q_form: &QuadraticForm,
    pp: PrimePower,
    width: f64,
    x0: &[i64],
    weight: &GaussianWeight,
    budget: u64,
) -> Result<f64> {
    let n = q_form.n();
    if x0.len() != n {
        return Err(Error::VarCountMismatch {
            left: n,
            right: x0.len(),
        });
    }
    if !(width > 0.0) {
        return Err(Error::InvalidInput("window width must be positive".into()));
    }
    let p = pp.p();
    q_form.require_nonsingular(p)?;
    let reach = weight.trunc_radius * width;
    let lo: Vec<i64> = x0.iter().map(|&c| c - reach.floor() as i64).collect();
    let hi: Vec<i64> = x0.iter().map(|&c| c + reach.floor() as i64).collect();
    let mut ctx = TreeCtx {
        q_form,
        pp,
        lo,
        hi,
        x0: x0.to_vec(),
        width,
        weight: *weight,
        budget,
        leaves: 0,
        acc: 0.0,
    };
    // mod-p solutions with x ≢ 0; each has ∇Q(x) = 2Ax ≢ 0 mod p since A
    // is nonsingular, so every node lifts p^{n−1} ways
    let mut roots: Vec<Vec<i64>> = Vec::new();
    for_each_point(p, n, |x| {
        if x.iter().all(|&v| v == 0) {
            return;
        }
        if q_form.eval_mod(x, p) == 0 {
            roots.push(x.to_vec());
        }
    });
    for root in roots {
        let grad = q_form.gradient_mod(&root, p);
        let pivot = grad
            .iter()
            .position(|&g| g != 0)
            .expect("nonsingular form has nonzero gradient at nonzero points");
        let viable = (0..n).all(|i| reps_in_range(root[i], p, ctx.lo[i], ctx.hi[i]) > 0);
        if !viable {
            continue;
        }
        let mut s = root.clone();
        ctx.descend(&mut s, &grad, pivot, 1)?;
    }
    Ok(ctx.acc)
}

/// The main term T₀ = b_p · Φ̂(0)^n · N^n / p^m, with b_p taken from the
/// mod-p census (the density is independent of m).
pub fn main_term_t0(
    q_form: &QuadraticForm,
    pp: PrimePower,
    width: f64,
    weight: &GaussianWeight,
) -> Result<f64> {
    q_form.require_nonsingular(pp.p())?;
    let n = q_form.n() as u32;
    let base = count_a(q_form, pp.sub_power(1), u64::MAX)?;
    let b_p = Rational::new(base as i128, pow_i128(pp.p(), n - 1));
    let b_p_f = *b_p.numer() as f64 / *b_p.denom() as f64;
    let hat0 = weight.phi_hat(0.0);
    Ok(b_p_f * hat0.powi(n as i32) * width.powi(n as i32) / pp.q() as f64)
}

/// One row of a convergence sweep.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub p: i64,
    pub m: u32,
    pub epsilon: f64,
    pub n_width: u64,
    pub t: f64,
    pub t0: f64,
    pub ratio: f64,
    pub deviation: f64,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Deviations non-increasing across the sweep (5% slack per step).
    pub trend_ok: bool,
    pub final_deviation: f64,
}

/// For each m: N = ⌈p^{(1/2+ε)m}⌉, T, T₀, and the deviation |T/T₀ − 1|;
/// the verdict records whether deviations are non-increasing and reports
/// the final one.
pub fn theorem2_sweep(
    q_form: &QuadraticForm,
    p: i64,
    m_list: &[u32],
    epsilon: f64,
    x0: &[i64],
    weight: &GaussianWeight,
    budget: u64,
) -> Result<SweepReport> {
    let mut rows = Vec::new();
    for &m in m_list {
        if m < 2 {
            return Err(Error::NotApplicable(
                "sweep needs m ≥ 2 (the asymptotic regime)".into(),
            ));
        }
        let pp = PrimePower::new(p, m)?;
        let width = (p as f64).powf((0.5 + epsilon) * m as f64).ceil();
        let start = std::time::Instant::now();
        let t = weighted_count_t(q_form, pp, width, x0, weight, budget)?;
        let t0 = main_term_t0(q_form, pp, width, weight)?;
        let ratio = t / t0;
        rows.push(SweepRow {
            p,
            m,
            epsilon,
            n_width: width as u64,
            t,
            t0,
            ratio,
            deviation: (ratio - 1.0).abs(),
            runtime_ms: start.elapsed().as_millis() as u64,
        });
    }
    let trend_ok = rows
        .windows(2)
        .all(|w| w[1].deviation <= w[0].deviation * 1.05 + 1e-12);
    let final_deviation = rows.last().map(|r| r.deviation).unwrap_or(0.0);
    Ok(SweepReport {
        rows,
        trend_ok,
        final_deviation,
    })
}

fn isqrt_i128(v: i128) -> i128 {
    if v < 0 {
        panic!("isqrt of negative");
    }
    if v < 2 {
        return v;
    }
    let mut x = (v as f64).sqrt() as i128;
    while x > 0 && x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    x
}

/// Exact count of integer zeros of Q in the box |x_i| ≤ half_side, by
/// scanning all but the last coordinate and solving the resulting
/// quadratic in the last one.
pub fn box_zero_count(q_form: &QuadraticForm, half_side: i64, budget: u64) -> Result<u64> {
    let n = q_form.n();
    if half_side < 0 {
        return Err(Error::InvalidInput("box size must be nonnegative".into()));
    }
    let side = 2 * half_side + 1;
    check_budget((side as u128).pow(n as u32 - 1), budget)?;
    let a_nn = q_form.matrix()[n - 1][n - 1] as i128;
    let mut count = 0u64;
    let mut x = vec![0i64; n];
    for_each_point(side, n - 1, |prefix| {
        for i in 0..n - 1 {
            x[i] = prefix[i] - half_side;
        }
        // Q(x', t) = a·t² + b·t + c with a = a_nn
        let mut b: i128 = 0;
        for i in 0..n - 1 {
            b += 2 * (q_form.matrix()[n - 1][i] as i128) * (x[i] as i128);
        }
        let mut c: i128 = 0;
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                c += (q_form.matrix()[i][j] as i128) * (x[i] as i128) * (x[j] as i128);
            }
        }
        let in_range = |t: i128| -t <= half_side as i128 && t <= half_side as i128;
        if a_nn == 0 {
            if b == 0 {
                if c == 0 {
                    count += side as u64;
                }
            } else if c % b == 0 && in_range(-c / b) {
                count += 1;
            }
            return;
        }
        let disc = b * b - 4 * a_nn * c;
        if disc < 0 {
            return;
        }
        let s = isqrt_i128(disc);
        if s * s != disc {
            return;
        }
        for root_num in [-b + s, -b - s] {
            if root_num % (2 * a_nn) == 0 {
                let t = root_num / (2 * a_nn);
                if in_range(t) {
                    count += 1;
                }
            }
            if s == 0 {
                break; // double root: count once
            }
        }
    });
    Ok(count)
}

/// Assemble T through the dual lattice: T = N^n / p^{m(n+1)} ·
/// Σ_k Π Φ̂(k_i N / p^m) e_{p^m}(−k·x0) Σ_h E(k, h; p^m), with the E-sums
/// computed exactly by brute force and only the window weights floating.
/// With k = 0 included, the sum is exactly T₀ + U.
pub fn poisson_assembly(
    q_form: &QuadraticForm,
    pp: PrimePower,
    width: f64,
    x0: &[i64],
    kmax: i64,
    weight: &GaussianWeight,
    budget: u64,
) -> Result<f64> {
    let n = q_form.n();
    if x0.len() != n {
        return Err(Error::VarCountMismatch {
            left: n,
            right: x0.len(),
        });
    }
    let q = pp.q();
    // exact E-sum tables: q^n values of k mod p^m, each summed over q
    // values of h with q^n points per E-sum
    check_budget((q as u128).pow(2 * n as u32 + 1), budget)?;
    let mut table: Vec<Complex64> = Vec::with_capacity((q as usize).pow(n as u32));
    let mut kvec = vec![0i64; n];
    loop {
        let mut acc = CycloElement::zero(q as u64);
        for h in 1..=q {
            acc = acc.add(&esum_brute(q_form, &kvec, h, pp, true, u64::MAX)?)?;
        }
        table.push(acc.embed_complex());
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            kvec[i] += 1;
            if kvec[i] < q {
                break;
            }
            kvec[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    // dual-lattice sum with Gaussian decay
    let mut hat: Vec<f64> = Vec::with_capacity((2 * kmax + 1) as usize);
    for k in -kmax..=kmax {
        hat.push(weight.phi_hat(k as f64 * width / q as f64));
    }
    let mut total = Complex64::new(0.0, 0.0);
    let mut k = vec![-kmax; n];
    'outer: loop {
        let mut w = 1.0;
        for i in 0..n {
            w *= hat[(k[i] + kmax) as usize];
        }
        if w != 0.0 {
            let mut phase = 0i64;
            // index in the little-endian table layout used above
            let mut index = 0usize;
            let mut mult = 1usize;
            for i in 0..n {
                let kr = modular::reduce(k[i], q);
                phase =
                    modular::add_mod(phase, modular::mul_mod(kr, modular::reduce(x0[i], q), q), q);
                index += kr as usize * mult;
                mult *= q as usize;
            }
            let theta = -2.0 * std::f64::consts::PI * phase as f64 / q as f64;
            let rot = Complex64::new(theta.cos(), theta.sin());
            total += table[index] * rot * w;
        }
        let mut i = 0;
        loop {
            if i == n {
                break 'outer;
            }
            k[i] += 1;
            if k[i] <= kmax {
                break;
            }
            k[i] = -kmax;
            i += 1;
        }
    }
    let scale = width.powi(n as i32) / (q as f64).powi(n as i32 + 1);
    Ok(scale * total.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: i64, m: u32) -> PrimePower {
        PrimePower::new(p, m).unwrap()
    }

    fn i3() -> QuadraticForm {
        QuadraticForm::diagonal(&[1, 1, 1]).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(QuadraticForm::new(vec![vec![1, 2], vec![3, 1]]).is_err());
        assert!(QuadraticForm::new(vec![vec![1]]).is_err());
        let q = QuadraticForm::new(vec![vec![1, 2], vec![2, 5]]).unwrap();
        assert_eq!(q.det(), 1);
    }

    #[test]
    fn dual_examples() {
        // adj(I3) = I3
        let d = i3().dual_form().unwrap();
        assert_eq!(d.matrix(), i3().matrix());

        // diag(1,2): dual is diag(2,1)
        let q = QuadraticForm::diagonal(&[1, 2]).unwrap();
        let d = q.dual_form().unwrap();
        assert_eq!(d.matrix(), &[vec![2, 0], vec![0, 1]]);

        // diag(1,1,-1): det = -1, adjugate diag(-1,-1,1)
        let q = QuadraticForm::diagonal(&[1, 1, -1]).unwrap();
        assert_eq!(q.det(), -1);
        let d = q.dual_form().unwrap();
        assert_eq!(d.matrix(), &[vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn adjugate_of_adjugate_scales() {
        // adj(adj(A)) = det(A)^{n-2} A for n = 3
        for mat in [
            vec![vec![1, 2, 0], vec![2, 5, 1], vec![0, 1, 3]],
            vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
        ] {
            let q = QuadraticForm::new(mat.clone()).unwrap();
            let dual = q.dual_form().unwrap();
            let dd = dual.dual_form().unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(dd.matrix()[i][j] as i128, q.det() * mat[i][j] as i128);
                }
            }
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_a(&i3(), pp(3, 1), 1000).unwrap(), 8);
        assert_eq!(count_a(&i3(), pp(3, 2), 1_000_000).unwrap(), 72);
    }

    #[test]
    fn count_rejects_singular_forms() {
        let q = QuadraticForm::diagonal(&[3, 1, 1]).unwrap();
        // det = 3
        assert!(matches!(
            count_a(&q, pp(3, 1), 1000),
            Err(Error::SingularModP { p: 3 })
        ));
    }

    #[test]
    fn scaling_examples() {
        for m in 1..=3 {
            assert!(hensel_scaling_check(&i3(), pp(3, m), 100_000_000).unwrap());
        }
        let q = QuadraticForm::new(vec![vec![1, 1, 0], vec![1, 2, 0], vec![0, 0, 3]]).unwrap();
        assert!(hensel_scaling_check(&q, pp(5, 2), 100_000_000).unwrap());
    }

    #[test]
    fn census_density_is_stable() {
        let mut densities = Vec::new();
        for m in 1..=3 {
            densities.push(census(&i3(), pp(3, m), 100_000_000).unwrap().b_p);
        }
        assert_eq!(densities[0], Rational::new(8, 9));
        assert!(densities.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn esum_point_count_examples() {
        // k = 0, h = 0: counts points
        let q = pp(3, 2);
        let unres = esum_brute(&i3(), &[0, 0, 0], 0, q, false, 1_000_000).unwrap();
        assert_eq!(unres.as_integer(), Some(9i128.pow(3)));
        let res = esum_brute(&i3(), &[0, 0, 0], 0, q, true, 1_000_000).unwrap();
        assert_eq!(res.as_integer(), Some(9i128.pow(3) - 3i128.pow(3)));
    }

    #[test]
    fn esum_closed_matches_brute() {
        // even and odd m − r, r = 0 and r = 1, forms with cross terms
        let forms = [
            i3(),
            QuadraticForm::new(vec![vec![1, 1, 0], vec![1, 2, 1], vec![0, 1, 3]]).unwrap(),
        ];
        for q_form in &forms {
            for (p, m, r) in [(3i64, 2u32, 0u32), (3, 3, 0), (3, 3, 1), (5, 2, 0)] {
                if q_form.det().rem_euclid(p as i128) == 0 {
                    continue;
                }
                let ppm = pp(p, m);
                let pr = ppm.pow_of(r);
                for (lv, l) in [([1, 0, 0], 1i64), ([2, 1, 0], 1), ([1, 2, 1], 2)] {
                    if (m as i64) - (r as i64) < 2 {
                        continue;
                    }
                    let k: Vec<i64> = lv.iter().map(|&v| v * pr).collect();
                    let closed = esum_closed(q_form, &lv, l, r, ppm).unwrap();
                    let brute = esum_brute(q_form, &k, l * pr, ppm, false, 10_000_000).unwrap();
                    assert_eq!(closed, brute, "p={p} m={m} r={r} lv={lv:?} l={l}");
                }
            }
        }
    }

    #[test]
    fn c_constant_simplifies() {
        // C = −(2 det A)‾(1 − 2̄) ≡ −(4 det A)‾ mod p^{m−r}
        for (p, mr) in [(3i64, 2u32), (5, 3), (7, 2)] {
            let pmr = pp(p, mr).q();
            for det in [1i64, 2, -1, 5] {
                if modular::gcd(modular::reduce(det, pmr), pmr) != 1 {
                    continue;
                }
                let inv2 = modular::inv_mod(2, pmr).unwrap();
                let d = modular::reduce(det, pmr);
                let c1 = modular::sub_mod(
                    0,
                    modular::mul_mod(
                        modular::inv_mod(modular::mul_mod(2, d, pmr), pmr).unwrap(),
                        modular::sub_mod(1, inv2, pmr),
                        pmr,
                    ),
                    pmr,
                );
                let c2 = modular::sub_mod(
                    0,
                    modular::inv_mod(modular::mul_mod(4 % pmr, d, pmr), pmr).unwrap(),
                    pmr,
                );
                assert_eq!(c1, c2, "p={p} mr={mr} det={det}");
            }
        }
    }

    #[test]
    fn esum_vanishes_off_the_matching_order() {
        // ord_p(h) ≠ r ⇒ restricted E = 0
        let q = pp(3, 3);
        let l_vec = [1i64, 0, 2];
        for r in [0u32, 1] {
            let pr = q.pow_of(r);
            let k: Vec<i64> = l_vec.iter().map(|&v| v * pr).collect();
            for h in 0..q.q() {
                let vh = if h == 0 {
                    None
                } else {
                    modular::int_valuation(h, 3).finite()
                };
                if vh == Some(r) {
                    continue;
                }
                let e = esum_brute(&i3(), &k, h, q, true, 10_000_000).unwrap();
                assert!(e.is_zero(), "r={r} h={h} should vanish");
            }
        }
    }

    #[test]
    fn restricted_matches_unrestricted_under_conditions() {
        let q = pp(3, 3);
        for (lv, l, r) in [([1i64, 0, 0], 1i64, 0u32), ([0, 1, 2], 2, 1)] {
            let pr = q.pow_of(r);
            let k: Vec<i64> = lv.iter().map(|&v| v * pr).collect();
            let h = l * pr;
            let a = esum_brute(&i3(), &k, h, q, true, 10_000_000).unwrap();
            let b = esum_brute(&i3(), &k, h, q, false, 10_000_000).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn h_average_examples() {
        // Q'(L) = 1 for L = (1,0,0): p^{m−r−1} = 3 does not divide it
        let avg = esum_h_average(&i3(), &[1, 0, 0], 0, pp(3, 2)).unwrap();
        assert!(avg.is_zero());
        // L = (1, 1, 1): Q'(L) = 3, divisible by p^{m−r−1} = 3 — bound applies
        let avg = esum_h_average(&i3(), &[1, 1, 1], 0, pp(3, 2)).unwrap();
        let bound = 3f64.powi((2 * 3) / 2 + 2);
        assert!(avg.embed_complex().norm() <= bound * (1.0 + 1e-6));
        // and the average agrees with brute-force h-summation over units
        let mut brute = CycloElement::zero(9);
        for l in 1..=9i64 {
            if l % 3 == 0 {
                continue;
            }
            brute = brute
                .add(&esum_brute(&i3(), &[1, 1, 1], l, pp(3, 2), false, 10_000_000).unwrap())
                .unwrap();
        }
        assert_eq!(avg, brute);
    }

    #[test]
    fn gaussian_truncation_bound() {
        let w = GaussianWeight::default();
        assert_eq!(w.phi_hat(0.0), 1.0);
        assert!(w.phi(w.trunc_radius) < 1e-27);
    }

    #[test]
    fn weighted_count_tiny_window() {
        // RN < 1: only x = x0 can contribute
        let w = GaussianWeight { trunc_radius: 0.9 };
        let q = pp(3, 2);
        // x0 = (3, 0, 0): nonzero mod 3? no — all ≡ 0 is excluded, and
        // Q(x0) = 9 ≡ 0 mod 9, but x0 ≡ 0 mod 3 fails the coset condition
        let t = weighted_count_t(&i3(), q, 1.0, &[3, 0, 0], &w, 1000).unwrap();
        assert_eq!(t, 0.0);
        // x0 = (1, 2, 2): Q = 9 ≡ 0 mod 9 and x0 ≢ 0 mod 3
        let t = weighted_count_t(&i3(), q, 1.0, &[1, 2, 2], &w, 1000).unwrap();
        assert!((t - 1.0).abs() < 1e-12);
    }

    /// Independent slow oracle: direct scan of the truncated box.
    fn weighted_count_slow(
        q_form: &QuadraticForm,
        pp: PrimePower,
        width: f64,
        x0: &[i64],
        w: &GaussianWeight,
    ) -> f64 {
        let n = q_form.n();
        let reach = (w.trunc_radius * width).floor() as i64;
        let side = 2 * reach + 1;
        let mut acc = 0.0;
        let mut x = vec![0i64; n];
        for_each_point(side, n, |offset| {
            for i in 0..n {
                x[i] = x0[i] - reach + offset[i];
            }
            if x.iter().all(|&v| v.rem_euclid(pp.p()) == 0) {
                return;
            }
            if q_form.eval_mod(&x, pp.q()) != 0 {
                return;
            }
            let mut prod = 1.0;
            for i in 0..n {
                prod *= w.phi((x[i] - x0[i]) as f64 / width);
            }
            acc += prod;
        });
        acc
    }

    #[test]
    fn weighted_count_matches_slow_scan() {
        let w = GaussianWeight::default();
        let q = pp(3, 2);
        for (width, x0) in [(4.0, [0i64, 0, 0]), (6.0, [5, -2, 1])] {
            let fast = weighted_count_t(&i3(), q, width, &x0, &w, 10_000_000).unwrap();
            let slow = weighted_count_slow(&i3(), q, width, &x0, &w);
            assert!(
                (fast - slow).abs() <= 1e-9 * slow.abs().max(1.0),
                "width={width} fast={fast} slow={slow}"
            );
        }
        // a form with cross terms
        let qf = QuadraticForm::new(vec![vec![1, 1, 0], vec![1, 2, 1], vec![0, 1, 3]]).unwrap();
        let fast = weighted_count_t(&qf, pp(5, 2), 5.0, &[1, 0, -3], &w, 10_000_000).unwrap();
        let slow = weighted_count_slow(&qf, pp(5, 2), 5.0, &[1, 0, -3], &w);
        assert!((fast - slow).abs() <= 1e-9 * slow.abs().max(1.0));
    }

    #[test]
    fn weighted_count_grows_with_window() {
        let w = GaussianWeight::default();
        let q = pp(3, 2);
        let t1 = weighted_count_t(&i3(), q, 5.0, &[0, 0, 0], &w, 10_000_000).unwrap();
        let t2 = weighted_count_t(&i3(), q, 10.0, &[0, 0, 0], &w, 10_000_000).unwrap();
        assert!(t2 >= t1 * (1.0 - 1e-12));
    }

    #[test]
    fn main_term_examples() {
        let w = GaussianWeight::default();
        // b_3 = 8/9 for the sum of three squares
        let t0 = main_term_t0(&i3(), pp(3, 2), 10.0, &w).unwrap();
        assert!((t0 - (8.0 / 9.0) * 1000.0 / 9.0).abs() < 1e-9);
    }

    #[test]
    fn box_zero_count_examples() {
        // positive definite: only the origin
        for n in [5i64, 50] {
            assert_eq!(box_zero_count(&i3(), n, 1_000_000).unwrap(), 1);
        }
        // the cone x² + y² − z², frozen from the brute oracle below
        let cone = QuadraticForm::diagonal(&[1, 1, -1]).unwrap();
        assert_eq!(box_zero_count(&cone, 5, 1_000_000).unwrap(), 57);
        // independent oracle: full triple scan
        let mut oracle = 0u64;
        for x in -5i64..=5 {
            for y in -5i64..=5 {
                for z in -5i64..=5 {
                    if x * x + y * y - z * z == 0 {
                        oracle += 1;
                    }
                }
            }
        }
        assert_eq!(oracle, 57);
    }

    #[test]
    fn poisson_assembly_matches_direct_small() {
        let w = GaussianWeight::default();
        let q = pp(3, 2);
        let width = 4.0;
        let x0 = [1i64, 0, 0];
        let direct = weighted_count_t(&i3(), q, width, &x0, &w, 10_000_000).unwrap();
        let assembled = poisson_assembly(&i3(), q, width, &x0, 40, &w, 10_000_000).unwrap();
        assert!(
            (direct - assembled).abs() <= 1e-6 * direct.abs().max(1.0),
            "direct={direct} assembled={assembled}"
        );
    }
}
