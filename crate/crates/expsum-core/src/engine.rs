//! Exponential sums modulo odd prime powers: brute-force enumeration, the
//! stationary-phase reduction to approximate critical points, Hensel
//! lifting, closed-form evaluation at nonsingular critical points, and
//! quadratic Gauss sums.
//!
//! Every closed form here has a brute-force counterpart, and all
//! comparisons between them are exact in the cyclotomic ring.

use crate::cyclotomic::CycloElement;
use crate::error::{Error, Result};
use crate::modular::{self, PrimePower};
use crate::poly::MultiPoly;
use crate::ratfunc::{scaled_gradient, RationalFunc, ScaledGradient};

/// A sum specification: amplitude f, modulus p^m, and an optional
/// restriction to the coset x ≡ α (mod p).
#[derive(Clone)]
pub struct SumSpec {
    pub f: RationalFunc,
    pub modulus: PrimePower,
    pub restriction: Option<Vec<i64>>,
}

impl SumSpec {
    pub fn new(f: RationalFunc, modulus: PrimePower) -> Self {
        SumSpec {
            f,
            modulus,
            restriction: None,
        }
    }

    pub fn restricted(mut self, alpha: Vec<i64>) -> Self {
        self.restriction = Some(alpha);
        self
    }

    /// Evaluate by direct enumeration.
    pub fn eval_brute(&self, budget: u64) -> Result<CycloElement> {
        match &self.restriction {
            None => brute_full_sum(&self.f, self.modulus, budget),
            Some(alpha) => restricted_sum_alpha(&self.f, self.modulus, alpha, budget),
        }
    }

    /// Evaluate through the critical-point closed forms.
    pub fn eval_theorem(&self, budget: u64) -> Result<CycloElement> {
        match &self.restriction {
            None => full_sum_via_theorem1(&self.f, self.modulus, budget),
            Some(alpha) => theorem1_eval(&self.f, self.modulus, alpha),
        }
    }
}

/// A residue α mod p where the scaled gradient p^{−r}∇f vanishes.
#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub alpha: Vec<i64>,
    /// Minimal p-adic order of the gradient.
    pub r: i32,
    /// The unique lift α* with p^{−r}∇f(α*) ≡ 0 mod p^m, when computed.
    pub lift: Option<Vec<i64>>,
    /// det(2̄ · p^{−r} · Hesse(f)(α)) mod p — the Legendre symbol argument.
    pub hesse_scaled_det_mod_p: i64,
    pub singular: bool,
}

/// Flattened polynomial with coefficients pre-reduced mod q, for hot loops.
struct PolyEvaluator {
    terms: Vec<(i64, Vec<u32>)>,
    q: i64,
}

impl PolyEvaluator {
    fn new(p: &MultiPoly, q: i64) -> Self {
        let terms = p
            .terms()
            .map(|(e, c)| (modular::reduce(c, q), e.clone()))
            .filter(|(c, _)| *c != 0)
            .collect();
        PolyEvaluator { terms, q }
    }

    /// Evaluate at a point with coordinates already in [0, q).
    fn eval(&self, x: &[i64]) -> i64 {
        let q = self.q;
        let mut acc = 0i64;
        for (c, exps) in &self.terms {
            let mut t = *c;
            for (&xi, &e) in x.iter().zip(exps.iter()) {
                match e {
                    0 => {}
                    1 => t = modular::mul_mod(t, xi, q),
                    _ => {
                        let mut pw = xi;
                        for _ in 1..e {
                            pw = modular::mul_mod(pw, xi, q);
                        }
                        t = modular::mul_mod(t, pw, q);
                    }
                }
            }
            acc = modular::add_mod(acc, t, q);
        }
        acc
    }
}

/// Run `body` over every point of [0, bound)^n.
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

fn check_budget(points: u128, budget: u64) -> Result<()> {
    if points > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: points,
            budget,
        });
    }
    Ok(())
}

fn pow_u128(base: i64, exp: u32) -> u128 {
    (base as u128).pow(exp)
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

/// The full sum Σ_x e_{p^m}(f(x)) over x ∈ (Z/p^m Z)^n, skipping points
/// where the denominator of f vanishes mod p.
pub fn brute_full_sum(f: &RationalFunc, q: PrimePower, budget: u64) -> Result<CycloElement> {
    let n = f.n_vars();
    check_budget(pow_u128(q.q(), n as u32), budget)?;
    let num_ev = PolyEvaluator::new(f.num(), q.q());
    let den_ev = PolyEvaluator::new(f.den(), q.q());
    let den_is_one = f.den().is_one();
    let p = q.p();
    let qq = q.q();
    let mut counts = vec![0i64; qq as usize];
    for_each_point(qq, n, |x| {
        let phase = if den_is_one {
            num_ev.eval(x)
        } else {
            let d = den_ev.eval(x);
            if d % p == 0 {
                return;
            }
            let inv = modular::inv_mod(d, qq).expect("unit denominator");
            modular::mul_mod(num_ev.eval(x), inv, qq)
        };
        counts[phase as usize] += 1;
    });
    Ok(CycloElement::from_exponent_counts(
        qq as u64,
        counts.into_iter().map(i128::from).collect(),
    ))
}

/// The coset sum S_α: as above but restricted to x ≡ α (mod p).
pub fn restricted_sum_alpha(
    f: &RationalFunc,
    q: PrimePower,
    alpha: &[i64],
    budget: u64,
) -> Result<CycloElement> {
    let n = f.n_vars();
    if alpha.len() != n {
        return Err(Error::VarCountMismatch {
            left: n,
            right: alpha.len(),
        });
    }
    let p = q.p();
    let qq = q.q();
    let alpha: Vec<i64> = alpha.iter().map(|&a| modular::reduce(a, p)).collect();
    // the denominator mod p is constant on the coset
    if !f.den().is_one() && f.den().eval_mod(&alpha, p) == 0 {
        return Ok(CycloElement::zero(qq as u64));
    }
    let cos = qq / p; // p^{m-1}
    check_budget(pow_u128(cos, n as u32), budget)?;
    let num_ev = PolyEvaluator::new(f.num(), qq);
    let den_ev = PolyEvaluator::new(f.den(), qq);
    let den_is_one = f.den().is_one();
    let mut counts = vec![0i64; qq as usize];
    let mut x = vec![0i64; n];
    for_each_point(cos, n, |t| {
        for i in 0..n {
            x[i] = alpha[i] + p * t[i];
        }
        let phase = if den_is_one {
            num_ev.eval(&x)
        } else {
            let d = den_ev.eval(&x);
            let inv = modular::inv_mod(d, qq).expect("unit denominator on coset");
            modular::mul_mod(num_ev.eval(&x), inv, qq)
        };
        counts[phase as usize] += 1;
    });
    Ok(CycloElement::from_exponent_counts(
        qq as u64,
        counts.into_iter().map(i128::from).collect(),
    ))
}

/// Stationary-phase reduction of S_α: the sum collapses onto representatives
/// y of a coarser quotient that satisfy a gradient congruence, scaled by an
/// explicit power of p. Exactly equals `restricted_sum_alpha`.
pub fn prop1_reduce(
    f: &RationalFunc,
    q: PrimePower,
    alpha: &[i64],
    budget: u64,
) -> Result<CycloElement> {
    let n = f.n_vars();
    if alpha.len() != n {
        return Err(Error::VarCountMismatch {
            left: n,
            right: alpha.len(),
        });
    }
    let p = q.p();
    let m = q.m() as i64;
    let sg = scaled_gradient(f, p)?;
    let r = sg.r as i64;
    if m - r < 1 {
        return Err(Error::NotApplicable(format!(
            "stationary-phase reduction needs m − r ≥ 1 (m = {m}, r = {r})"
        )));
    }
    let alpha: Vec<i64> = alpha.iter().map(|&a| modular::reduce(a, p)).collect();
    let qq = q.q();
    if !f.den().is_one() && f.den().eval_mod(&alpha, p) == 0 {
        return Ok(CycloElement::zero(qq as u64));
    }
    let mr = m - r;
    let (level, cond, scale_exp) = if mr % 2 == 0 {
        // y mod p^{(m-r)/2}, gradient vanishing mod p^{(m-r)/2}
        (mr / 2, mr / 2, n as i64 * (m + r) / 2)
    } else {
        // y mod p^{(m-r+1)/2}, gradient vanishing mod p^{(m-r-1)/2}
        ((mr + 1) / 2, (mr - 1) / 2, (m + r - 1) * n as i64 / 2)
    };
    let reach = q.pow_of(level as u32 - 1); // p^{level-1}: coset translates
    check_budget(pow_u128(reach, n as u32), budget)?;

    let cond_pp = if cond >= 1 {
        Some(q.sub_power(cond as u32))
    } else {
        None
    };
    let num_ev = PolyEvaluator::new(f.num(), qq);
    let den_ev = PolyEvaluator::new(f.den(), qq);
    let den_is_one = f.den().is_one();
    let mut counts = vec![0i64; qq as usize];
    let mut y = vec![0i64; n];
    let mut sum_err: Option<Error> = None;
    for_each_point(reach, n, |t| {
        if sum_err.is_some() {
            return;
        }
        for i in 0..n {
            y[i] = alpha[i] + p * t[i];
        }
        if let Some(pc) = cond_pp {
            for part in &sg.parts {
                if part.is_zero() {
                    continue;
                }
                match part.eval_mod(&y, pc) {
                    Ok(v) => {
                        if v.value() != 0 {
                            return;
                        }
                    }
                    Err(e) => {
                        sum_err = Some(e);
                        return;
                    }
                }
            }
        }
        let phase = if den_is_one {
            num_ev.eval(&y)
        } else {
            let d = den_ev.eval(&y);
            let inv = modular::inv_mod(d, qq).expect("unit denominator on coset");
            modular::mul_mod(num_ev.eval(&y), inv, qq)
        };
        counts[phase as usize] += 1;
    });
    if let Some(e) = sum_err {
        return Err(e);
    }
    let base =
        CycloElement::from_exponent_counts(qq as u64, counts.into_iter().map(i128::from).collect());
    Ok(base.scalar_mul(pow_i128(p, scale_exp as u32)))
}

/// det of an n×n matrix over F_p by Gaussian elimination.
fn det_mod_p(mut mat: Vec<Vec<i64>>, p: i64) -> i64 {
    let n = mat.len();
    let mut det = 1i64;
    for col in 0..n {
        let pivot = (col..n).find(|&row| mat[row][col] % p != 0);
        let pivot = match pivot {
            Some(r) => r,
            None => return 0,
        };
        if pivot != col {
            mat.swap(pivot, col);
            det = modular::sub_mod(0, det, p);
        }
        let pv = mat[col][col];
        det = modular::mul_mod(det, pv, p);
        let inv = modular::inv_mod(pv, p).expect("pivot is a unit");
        for row in col + 1..n {
            let factor = modular::mul_mod(mat[row][col], inv, p);
            if factor == 0 {
                continue;
            }
            for k in col..n {
                let t = modular::mul_mod(factor, mat[col][k], p);
                mat[row][k] = modular::sub_mod(mat[row][k], t, p);
            }
        }
    }
    det
}

/// Solve M·x = rhs over F_p; `None` when M is singular.
fn solve_mod_p(mut mat: Vec<Vec<i64>>, mut rhs: Vec<i64>, p: i64) -> Option<Vec<i64>> {
    let n = mat.len();
    for col in 0..n {
        let pivot = (col..n).find(|&row| mat[row][col] % p != 0)?;
        mat.swap(pivot, col);
        rhs.swap(pivot, col);
        let inv = modular::inv_mod(mat[col][col], p).expect("pivot is a unit");
        for k in col..n {
            mat[col][k] = modular::mul_mod(mat[col][k], inv, p);
        }
        rhs[col] = modular::mul_mod(rhs[col], inv, p);
        for row in 0..n {
            if row == col || mat[row][col] == 0 {
                continue;
            }
            let factor = mat[row][col];
            for k in col..n {
                let t = modular::mul_mod(factor, mat[col][k], p);
                mat[row][k] = modular::sub_mod(mat[row][k], t, p);
            }
            let t = modular::mul_mod(factor, rhs[col], p);
            rhs[row] = modular::sub_mod(rhs[row], t, p);
        }
    }
    Some(rhs)
}

/// Jacobian of the scaled gradient (= the scaled Hessian p^{−r}·Hesse f),
/// in quotient-rule form.
fn scaled_hessian(sg: &ScaledGradient) -> Vec<Vec<RationalFunc>> {
    sg.parts
        .iter()
        .map(|part| {
            (0..part.n_vars())
                .map(|j| part.partial_derivative(j))
                .collect()
        })
        .collect()
}

fn eval_matrix_mod_p(
    mat: &[Vec<RationalFunc>],
    x: &[i64],
    p1: PrimePower,
) -> Result<Vec<Vec<i64>>> {
    mat.iter()
        .map(|row| {
            row.iter()
                .map(|entry| {
                    if entry.is_zero() {
                        Ok(0)
                    } else {
                        entry.eval_mod(x, p1).map(|v| v.value())
                    }
                })
                .collect()
        })
        .collect()
}

/// All critical points of f in F_p^n: residues α (away from poles) where
/// every scaled partial vanishes mod p, each flagged singular when the
/// scaled Hessian determinant vanishes mod p.
pub fn critical_points_mod_p(f: &RationalFunc, p: i64) -> Result<Vec<CriticalPoint>> {
    let p1 = PrimePower::new(p, 1)?;
    let sg = scaled_gradient(f, p)?;
    let hess = scaled_hessian(&sg);
    let n = f.n_vars();
    let two_inv = modular::inv_mod(2, p).expect("odd p");
    let two_inv_n = modular::pow_mod(two_inv, n as u64, p);
    let mut found = Vec::new();
    let mut alphas: Vec<Vec<i64>> = Vec::new();
    for_each_point(p, n, |x| alphas.push(x.to_vec()));
    'outer: for alpha in alphas {
        if !f.den().is_one() && f.den().eval_mod(&alpha, p) == 0 {
            continue;
        }
        for part in &sg.parts {
            if part.is_zero() {
                continue;
            }
            if part.eval_mod(&alpha, p1)?.value() != 0 {
                continue 'outer;
            }
        }
        let jac = eval_matrix_mod_p(&hess, &alpha, p1)?;
        let det = det_mod_p(jac, p);
        found.push(CriticalPoint {
            alpha,
            r: sg.r,
            lift: None,
            hesse_scaled_det_mod_p: modular::mul_mod(two_inv_n, det, p),
            singular: det == 0,
        });
    }
    Ok(found)
}

/// Critical points with lifts filled in for the nonsingular ones.
pub fn critical_points_lifted(f: &RationalFunc, q: PrimePower) -> Result<Vec<CriticalPoint>> {
    let mut points = critical_points_mod_p(f, q.p())?;
    for cp in &mut points {
        if !cp.singular {
            cp.lift = Some(hensel_lift_critical(f, q, &cp.alpha)?);
        }
    }
    Ok(points)
}

/// Newton-lift a nonsingular critical point α to the unique α* with
/// p^{−r}∇f(α*) ≡ 0 (mod p^m), raising precision one power of p per step.
pub fn hensel_lift_critical(f: &RationalFunc, q: PrimePower, alpha: &[i64]) -> Result<Vec<i64>> {
    let p = q.p();
    let p1 = q.sub_power(1);
    let sg = scaled_gradient(f, p)?;
    let n = f.n_vars();
    if alpha.len() != n {
        return Err(Error::VarCountMismatch {
            left: n,
            right: alpha.len(),
        });
    }
    let alpha: Vec<i64> = alpha.iter().map(|&a| modular::reduce(a, p)).collect();
    if !f.den().is_one() && f.den().eval_mod(&alpha, p) == 0 {
        return Err(Error::PoleModP);
    }
    for part in &sg.parts {
        if !part.is_zero() && part.eval_mod(&alpha, p1)?.value() != 0 {
            return Err(Error::NotApplicable(
                "the point is not critical mod p".into(),
            ));
        }
    }
    let hess = scaled_hessian(&sg);
    let jac = eval_matrix_mod_p(&hess, &alpha, p1)?;
    if det_mod_p(jac.clone(), p) == 0 {
        return Err(Error::SingularHessian);
    }
    let mut x = alpha;
    for k in 1..q.m() {
        let pk = q.pow_of(k);
        let level = q.sub_power(k + 1);
        // residual/p^k mod p per coordinate
        let mut rhs = Vec::with_capacity(n);
        for part in &sg.parts {
            let v = if part.is_zero() {
                0
            } else {
                part.eval_mod(&x, level)?.value()
            };
            debug_assert_eq!(v % pk, 0, "Newton invariant broken");
            rhs.push(modular::reduce(-(v / pk), p));
        }
        let delta = solve_mod_p(jac.clone(), rhs, p).ok_or(Error::SingularHessian)?;
        for i in 0..n {
            x[i] += pk * delta[i];
        }
    }
    // final verification at full precision
    for part in &sg.parts {
        if !part.is_zero() && part.eval_mod(&x, q)?.value() != 0 {
            return Err(Error::NoConvergence);
        }
    }
    Ok(x)
}

/// Whether the third-order Taylor terms provably vanish at the scale the
/// odd-case closed form needs when p = 3 and m − r = 3.
///
/// In that configuration the offset is p^{(m−r−1)/2} = p, and the cube
/// terms contribute p³·∂³f/∂x_i³/3! whose p-order is 3 + ord_p(∂³f) − 1;
/// reaching p^m = p^{r+3} needs ord_p(∂³f/∂x_i³) ≥ r + 1 for every i.
/// Mixed third partials carry β! coprime to 3 and are always deep enough,
/// as are all orders ≥ 4.
fn cube_terms_vanish(f: &RationalFunc, p: i64, r: i32) -> Result<bool> {
    for i in 0..f.n_vars() {
        let third = f
            .partial_derivative(i)
            .partial_derivative(i)
            .partial_derivative(i);
        if third.is_zero() {
            continue;
        }
        if third.ord_p(p)? < r + 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The exact residual stationary-phase sum
/// p^{(m+r−1)n/2} Σ_{u ∈ F_p^n} e_{p^m}(f(α + p·u)), which is what S_α
/// collapses to when m − r = 3 (the gradient condition σ ≡ 0 mod p holds
/// on the whole coset of a critical α).
fn residual_cube_sum(
    f: &RationalFunc,
    q: PrimePower,
    alpha: &[i64],
    r: i64,
) -> Result<CycloElement> {
    let p = q.p();
    let m = q.m() as i64;
    let n = f.n_vars();
    let qq = q.q();
    let mut counts = vec![0i64; qq as usize];
    let mut y = vec![0i64; n];
    let mut err = None;
    for_each_point(p, n, |u| {
        if err.is_some() {
            return;
        }
        for i in 0..n {
            y[i] = alpha[i] + p * u[i];
        }
        match f.eval_mod(&y, q) {
            Ok(v) => counts[v.value() as usize] += 1,
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let base =
        CycloElement::from_exponent_counts(qq as u64, counts.into_iter().map(i128::from).collect());
    Ok(base.scalar_mul(pow_i128(p, ((m + r - 1) * n as i64 / 2) as u32)))
}

/// Closed form for S_α when m − r ≥ 2: zero off the critical set; at a
/// nonsingular critical point, a power-of-p scale times e_{p^m}(f(α*)),
/// with an extra Legendre symbol and Gauss-sum factor G_p(1)^n when m − r
/// is odd.
///
/// One corner needs care: for p = 3 with m − r = 3, surviving cube terms
/// in the Taylor expansion around α* can contribute to the phase (the
/// Gauss-sum collapse assumes they vanish, which fails exactly when some
/// ∂³f/∂x_i³ has p-order r). There the value is computed as the exact
/// residual p-point sum instead, which agrees with the Gauss-sum form
/// whenever the latter is valid.
pub fn theorem1_eval(f: &RationalFunc, q: PrimePower, alpha: &[i64]) -> Result<CycloElement> {
    let n = f.n_vars();
    if alpha.len() != n {
        return Err(Error::VarCountMismatch {
            left: n,
            right: alpha.len(),
        });
    }
    let p = q.p();
    let m = q.m() as i64;
    let qq = q.q();
    let sg = scaled_gradient(f, p)?;
    let r = sg.r as i64;
    if m - r < 2 {
        return Err(Error::NotApplicable(format!(
            "closed form needs m − r ≥ 2 (m = {m}, r = {r})"
        )));
    }
    let p1 = q.sub_power(1);
    let alpha: Vec<i64> = alpha.iter().map(|&a| modular::reduce(a, p)).collect();
    if !f.den().is_one() && f.den().eval_mod(&alpha, p) == 0 {
        // the whole coset consists of poles: empty sum
        return Ok(CycloElement::zero(qq as u64));
    }
    for part in &sg.parts {
        if !part.is_zero() && part.eval_mod(&alpha, p1)?.value() != 0 {
            // not a critical point: the coset sum vanishes
            return Ok(CycloElement::zero(qq as u64));
        }
    }
    let hess = scaled_hessian(&sg);
    let det_at_alpha = det_mod_p(eval_matrix_mod_p(&hess, &alpha, p1)?, p);
    if det_at_alpha == 0 {
        return Err(Error::SingularHessianOutOfScope);
    }
    if p == 3 && m - r == 3 && !cube_terms_vanish(f, p, sg.r)? {
        return residual_cube_sum(f, q, &alpha, r);
    }
    let lift = hensel_lift_critical(f, q, &alpha)?;
    let phase = f.eval_mod(&lift, q)?.value();
    let zeta = CycloElement::root_of_unity(qq as u64, phase);
    if (m - r) % 2 == 0 {
        let scale = pow_i128(p, (n as i64 * (m + r) / 2) as u32);
        return Ok(zeta.scalar_mul(scale));
    }
    // odd case: Legendre symbol of det(2̄·p^{−r}·Hesse(f)(α*)) and G_p(1)^n
    let det_at_lift = det_mod_p(eval_matrix_mod_p(&hess, &lift, p1)?, p);
    debug_assert_eq!(
        det_at_lift, det_at_alpha,
        "det mod p must agree at α and α*"
    );
    let two_inv = modular::inv_mod(2, p).expect("odd p");
    let sym_arg = modular::mul_mod(modular::pow_mod(two_inv, n as u64, p), det_at_lift, p);
    let sym = modular::legendre_symbol(sym_arg, p);
    let scale = pow_i128(p, ((m + r - 1) * n as i64 / 2) as u32);
    let gauss = gauss_sum_brute(p as u64, 1, p as u64)?
        .lift_conductor(qq as u64)?
        .pow(n as u32);
    let value = zeta.mul(&gauss)?.scalar_mul(scale * sym as i128);
    Ok(value)
}

/// Assemble the full sum as Σ_α S_α using the closed form on every coset.
/// Requires every critical point to be nonsingular and m − r ≥ 2.
pub fn full_sum_via_theorem1(f: &RationalFunc, q: PrimePower, budget: u64) -> Result<CycloElement> {
    let n = f.n_vars();
    check_budget(pow_u128(q.p(), n as u32), budget)?;
    let criticals = critical_points_mod_p(f, q.p())?;
    let mut acc = CycloElement::zero(q.q() as u64);
    for cp in &criticals {
        if cp.singular {
            return Err(Error::SingularHessianOutOfScope);
        }
        let term = theorem1_eval(f, q, &cp.alpha)?;
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Quadratic Gauss sum G_q(a) = Σ_{x=1}^{q} e_q(a x²) by enumeration, for
/// any odd q ≥ 1.
pub fn gauss_sum_brute(q: u64, a: i64, budget: u64) -> Result<CycloElement> {
    check_budget(q as u128, budget)?;
    let qi = q as i64;
    let mut counts = vec![0i64; q as usize];
    let a_red = modular::reduce(a, qi);
    for x in 0..qi {
        let sq = modular::mul_mod(x, x, qi);
        let e = modular::mul_mod(a_red, sq, qi);
        counts[e as usize] += 1;
    }
    Ok(CycloElement::from_exponent_counts(
        q,
        counts.into_iter().map(i128::from).collect(),
    ))
}

/// Closed evaluation G_q(a) = (a/q)·G_q(1) for odd q and gcd(a, q) = 1.
pub fn gauss_sum_closed(q: u64, a: i64, budget: u64) -> Result<CycloElement> {
    let qi = q as i64;
    if modular::gcd(modular::reduce(a, qi), qi) != 1 {
        return Err(Error::NotCoprime {
            a: modular::reduce(a, qi),
            modulus: qi,
        });
    }
    let sym = modular::jacobi_symbol(a, qi);
    Ok(gauss_sum_brute(q, 1, budget)?.scalar_mul(sym as i128))
}
