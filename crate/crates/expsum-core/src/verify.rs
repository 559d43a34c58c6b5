//! Seeded randomized verification suites: every closed form in the crate is
//! replayed against its brute-force oracle with exact cyclotomic equality.
//!
//! A fixed seed fully determines each suite, so failures are reproducible
//! bit for bit.

use crate::census::{
    census, esum_brute, esum_closed, esum_h_average, hensel_scaling_check, poisson_assembly,
    weighted_count_t, GaussianWeight, QuadraticForm,
};
use crate::engine::{
    critical_points_mod_p, gauss_sum_brute, gauss_sum_closed, prop1_reduce, restricted_sum_alpha,
    theorem1_eval,
};
use crate::error::Result;
use crate::modular::{self, PrimePower};
use crate::poly::MultiPoly;
use crate::ratfunc::{grad_ord, RationalFunc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Result of one suite run.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: String,
    /// Closed-form-vs-oracle equality cases checked.
    pub cases: usize,
    /// Supporting checks (vanishing, bounds, density stability, ...).
    pub aux_checks: usize,
    /// Equality cases with even / odd m − r.
    pub even_cases: usize,
    pub odd_cases: usize,
    /// Equality cases with gradient order r > 0.
    pub r_positive_cases: usize,
    /// Exact-vanishing checks performed.
    pub vanish_checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        SuiteOutcome {
            name: name.into(),
            cases: 0,
            aux_checks: 0,
            even_cases: 0,
            odd_cases: 0,
            r_positive_cases: 0,
            vanish_checks: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// One generated amplitude configuration.
struct AmplitudeCase {
    f: RationalFunc,
    pp: PrimePower,
    n: usize,
    r: i32,
}

/// Grid of (p, n, m) kept small enough that the restricted oracle stays
/// within p^{(m−1)n} ≤ 10^6 points.
fn amplitude_grid() -> Vec<(i64, usize, u32)> {
    let mut grid = Vec::new();
    for p in [3i64, 5, 7] {
        for n in 1..=3usize {
            for m in 2..=5u32 {
                let cost = (p as f64).powi(((m - 1) as usize * n) as i32);
                if cost <= 1e6 {
                    grid.push((p, n, m));
                }
            }
        }
    }
    grid
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_terms: usize, max_deg: u32) -> MultiPoly {
    let terms = rng.gen_range(1..=max_terms);
    let mut raw = Vec::new();
    for _ in 0..terms {
        let coef = loop {
            let c = rng.gen_range(-9i64..=9);
            if c != 0 {
                break c;
            }
        };
        let mut exps = vec![0u32; n];
        let mut left = max_deg;
        for e in exps.iter_mut() {
            let v = rng.gen_range(0..=left);
            *e = v;
            left -= v;
        }
        raw.push((coef, exps));
    }
    MultiPoly::from_terms(n, raw).expect("consistent arity")
}

fn gen_amplitude(rng: &mut ChaCha8Rng, grid: &[(i64, usize, u32)]) -> Option<AmplitudeCase> {
    let (p, n, m) = grid[rng.gen_range(0..grid.len())];
    let mut num = random_poly(rng, n, 5, 4);
    if num.is_zero() {
        return None;
    }
    let den = if rng.gen_bool(1.0 / 3.0) {
        // unit constant term keeps the function defined somewhere mod p
        let mut d = MultiPoly::constant(n, rng.gen_range(1..p));
        for _ in 0..rng.gen_range(0..=2usize) {
            let t = random_poly(rng, n, 1, 2);
            d = d.add(&t);
        }
        if d.is_zero() {
            MultiPoly::one(n)
        } else {
            d
        }
    } else {
        MultiPoly::one(n)
    };
    // sometimes push the gradient order up
    if rng.gen_bool(0.3) {
        num = num.scale(p);
        if rng.gen_bool(0.25) {
            num = num.scale(p);
        }
    }
    let f = RationalFunc::new(num, den).ok()?;
    let r = grad_ord(&f, p).ok()?;
    if r < 0 {
        return None;
    }
    let pp = PrimePower::new(p, m).ok()?;
    Some(AmplitudeCase { f, pp, n, r })
}

/// Deterministic coset representatives for a case: every α when p^n is
/// small, otherwise the critical points plus the first few lexicographic
/// residues.
fn alphas_for(case: &AmplitudeCase) -> Vec<Vec<i64>> {
    let p = case.pp.p();
    let n = case.n;
    let total = (p as u64).pow(n as u32);
    let decode = |mut idx: u64| {
        let mut v = vec![0i64; n];
        for slot in v.iter_mut() {
            *slot = (idx % p as u64) as i64;
            idx /= p as u64;
        }
        v
    };
    if total <= 27 {
        return (0..total).map(decode).collect();
    }
    let mut out: Vec<Vec<i64>> = critical_points_mod_p(&case.f, p)
        .map(|cps| cps.into_iter().map(|c| c.alpha).collect())
        .unwrap_or_default();
    let mut idx = 0;
    while out.len() < 8 && idx < total {
        let v = decode(idx);
        if !out.contains(&v) {
            out.push(v);
        }
        idx += 1;
    }
    out
}

/// Stationary-phase reduction vs the restricted brute oracle, exact.
pub fn prop1_suite(seed: u64, target_cases: usize, budget: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("prop1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = amplitude_grid();
    let mut attempts = 0;
    while (out.cases < target_cases
        || out.even_cases == 0
        || out.odd_cases == 0
        || out.r_positive_cases == 0)
        && attempts < 40 * target_cases
    {
        attempts += 1;
        let case = match gen_amplitude(&mut rng, &grid) {
            Some(c) => c,
            None => continue,
        };
        let m = case.pp.m() as i64;
        if m - (case.r as i64) < 1 {
            continue;
        }
        for alpha in alphas_for(&case) {
            let lhs = prop1_reduce(&case.f, case.pp, &alpha, budget);
            let rhs = restricted_sum_alpha(&case.f, case.pp, &alpha, budget);
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        out.failures.push(format!(
                            "prop1 mismatch: f = {}, q = {}, α = {:?}",
                            case.f, case.pp, alpha
                        ));
                    }
                }
                (a, b) => out.failures.push(format!(
                    "prop1 error: f = {}, q = {}, α = {:?}: {a:?} vs {b:?}",
                    case.f, case.pp, alpha
                )),
            }
            out.cases += 1;
            if (m - case.r as i64) % 2 == 0 {
                out.even_cases += 1;
            } else {
                out.odd_cases += 1;
            }
            if case.r > 0 {
                out.r_positive_cases += 1;
            }
        }
    }
    out.notes.push(format!(
        "{} cases ({} even parity, {} odd parity, {} with r > 0)",
        out.cases, out.even_cases, out.odd_cases, out.r_positive_cases
    ));
    Ok(out)
}

/// Closed-form critical point evaluation vs the restricted brute oracle,
/// plus the direct zero test away from the critical set.
pub fn thm1_suite(seed: u64, target_cases: usize, budget: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("thm1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = amplitude_grid();
    let mut singular_skipped = 0usize;
    let mut attempts = 0;
    while (out.cases < target_cases || out.odd_cases < 20) && attempts < 60 * target_cases {
        attempts += 1;
        let case = match gen_amplitude(&mut rng, &grid) {
            Some(c) => c,
            None => continue,
        };
        let m = case.pp.m() as i64;
        if m - (case.r as i64) < 2 {
            continue;
        }
        let criticals = match critical_points_mod_p(&case.f, case.pp.p()) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let critical_alphas: Vec<Vec<i64>> = criticals.iter().map(|c| c.alpha.clone()).collect();
        for cp in &criticals {
            if cp.singular {
                singular_skipped += 1;
                continue;
            }
            let lhs = theorem1_eval(&case.f, case.pp, &cp.alpha);
            let rhs = restricted_sum_alpha(&case.f, case.pp, &cp.alpha, budget);
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        out.failures.push(format!(
                            "thm1 mismatch: f = {}, q = {}, α = {:?}",
                            case.f, case.pp, cp.alpha
                        ));
                    }
                }
                (a, b) => out.failures.push(format!(
                    "thm1 error: f = {}, q = {}, α = {:?}: {a:?} vs {b:?}",
                    case.f, case.pp, cp.alpha
                )),
            }
            out.cases += 1;
            if (m - case.r as i64) % 2 == 0 {
                out.even_cases += 1;
            } else {
                out.odd_cases += 1;
            }
        }
        // α off the critical set: the coset sum must vanish outright
        for alpha in alphas_for(&case) {
            if critical_alphas.contains(&alpha) {
                continue;
            }
            match restricted_sum_alpha(&case.f, case.pp, &alpha, budget) {
                Ok(v) => {
                    if !v.is_zero() {
                        out.failures.push(format!(
                            "nonzero sum off the critical set: f = {}, q = {}, α = {:?}",
                            case.f, case.pp, alpha
                        ));
                    }
                }
                Err(e) => out.failures.push(format!(
                    "zero-test error: f = {}, q = {}, α = {:?}: {e:?}",
                    case.f, case.pp, alpha
                )),
            }
            out.aux_checks += 1;
        }
    }
    out.notes.push(format!(
        "{} equality cases ({} even, {} odd parity), {} zero checks, {} singular critical points skipped",
        out.cases, out.even_cases, out.odd_cases, out.aux_checks, singular_skipped
    ));
    Ok(out)
}

/// The Gauss-sum identity G_q(a) = (a/q) G_q(1) over all odd q ≤ qmax with
/// random coprime residues, plus the classical magnitude |G_p(1)|² = p.
pub fn gauss_suite(qmax: u64, per_q: usize, seed: u64, budget: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("gauss");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = 3u64;
    while q <= qmax {
        let brute_one = gauss_sum_brute(q, 1, budget)?;
        for _ in 0..per_q {
            let a = loop {
                let cand = rng.gen_range(1..q.max(2)) as i64;
                if modular::gcd(cand, q as i64) == 1 {
                    break cand;
                }
            };
            let closed = gauss_sum_closed(q, a, budget)?;
            let brute = gauss_sum_brute(q, a, budget)?;
            if closed != brute {
                out.failures
                    .push(format!("gauss identity fails: q = {q}, a = {a}"));
            }
            out.cases += 1;
            // cross-check the closed form really is the symbol times G_q(1)
            let sym = modular::jacobi_symbol(a, q as i64);
            if closed != brute_one.scalar_mul(sym as i128) {
                out.failures
                    .push(format!("closed form inconsistent: q = {q}, a = {a}"));
            }
            out.aux_checks += 1;
        }
        q += 2;
    }
    for p in [3u64, 5, 7, 11] {
        let g = gauss_sum_brute(p, 1, budget)?;
        let mag = g.embed_complex().norm_sqr();
        if (mag - p as f64).abs() > 1e-9 {
            out.failures
                .push(format!("|G_{p}(1)|² = {mag}, expected {p}"));
        }
        out.aux_checks += 1;
    }
    out.notes
        .push(format!("{} identity cases up to q = {qmax}", out.cases));
    Ok(out)
}

fn random_form(rng: &mut ChaCha8Rng, p: i64) -> QuadraticForm {
    loop {
        let mut m = vec![vec![0i64; 3]; 3];
        for i in 0..3 {
            m[i][i] = rng.gen_range(-4i64..=4);
            for j in i + 1..3 {
                let v = rng.gen_range(-3i64..=3);
                m[i][j] = v;
                m[j][i] = v;
            }
        }
        if let Ok(q) = QuadraticForm::new(m) {
            if q.det().rem_euclid(p as i128) != 0 {
                return q;
            }
        }
    }
}

/// Closed E-sum evaluation vs brute enumeration, the vanishing for
/// mismatched h-order, and the unit-average dichotomy.
pub fn esum_suite(seed: u64, target_cases: usize, budget: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("esum");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid: Vec<(i64, u32)> = vec![(3, 2), (3, 3), (3, 4), (5, 2), (5, 3)];
    while out.cases < target_cases || out.vanish_checks < 50 {
        let (p, m) = grid[rng.gen_range(0..grid.len())];
        let pp = PrimePower::new(p, m)?;
        let q_form = random_form(&mut rng, p);
        let r = rng.gen_range(0..=m - 2);
        let pr = pp.pow_of(r);
        let l_vec: Vec<i64> = loop {
            let v: Vec<i64> = (0..3).map(|_| rng.gen_range(0..p)).collect();
            if v.iter().any(|&x| x % p != 0) {
                break v;
            }
        };
        let l = loop {
            let cand = rng.gen_range(1..pp.pow_of(m - r));
            if cand % p != 0 {
                break cand;
            }
        };
        let k: Vec<i64> = l_vec.iter().map(|&v| v * pr).collect();
        let closed = esum_closed(&q_form, &l_vec, l, r, pp)?;
        let brute = esum_brute(&q_form, &k, l * pr, pp, false, budget)?;
        if closed != brute {
            out.failures.push(format!(
                "esum mismatch: p = {p}, m = {m}, r = {r}, L = {l_vec:?}, l = {l}"
            ));
        }
        out.cases += 1;
        if (m - r) % 2 == 0 {
            out.even_cases += 1;
        } else {
            out.odd_cases += 1;
        }
        // restricted and unrestricted agree here (critical point is nonzero)
        let restricted = esum_brute(&q_form, &k, l * pr, pp, true, budget)?;
        if restricted != brute {
            out.failures.push(format!(
                "restricted/unrestricted disagree: p = {p}, m = {m}, r = {r}, L = {l_vec:?}, l = {l}"
            ));
        }
        out.aux_checks += 1;
        // h with the wrong p-order makes the restricted sum vanish
        if (p as f64).powi(3 * m as i32) <= 600_000.0 {
            let mut wrong_orders = Vec::new();
            if r + 1 <= m {
                wrong_orders.push(pp.pow_of(r + 1) * (1 + rng.gen_range(0..p - 1)));
            }
            if r >= 1 {
                wrong_orders.push(pp.pow_of(r - 1) * (1 + rng.gen_range(0..p - 1)));
            }
            wrong_orders.push(0);
            for h in wrong_orders {
                let h_ord = if h == 0 {
                    None
                } else {
                    modular::int_valuation(h % pp.q(), p).finite()
                };
                if h_ord == Some(r) {
                    continue;
                }
                let e = esum_brute(&q_form, &k, h, pp, true, budget)?;
                if !e.is_zero() {
                    out.failures.push(format!(
                        "restricted E-sum should vanish: p = {p}, m = {m}, r = {r}, h = {h}, L = {l_vec:?}"
                    ));
                }
                out.vanish_checks += 1;
                out.aux_checks += 1;
            }
        }
        // unit-average dichotomy
        let avg = esum_h_average(&q_form, &l_vec, r, pp)?;
        let qp = q_form.dual_value(&l_vec);
        let pmr1 = pp.pow_of(m - r - 1) as i128;
        if qp.rem_euclid(pmr1) != 0 {
            if !avg.is_zero() {
                out.failures.push(format!(
                    "h-average should vanish: p = {p}, m = {m}, r = {r}, L = {l_vec:?}"
                ));
            }
        } else {
            let bound = (p as f64).powi((((m + r) * 3) / 2 + (m - r)) as i32);
            if avg.embed_complex().norm() > bound * (1.0 + 1e-6) {
                out.failures.push(format!(
                    "h-average exceeds bound: p = {p}, m = {m}, r = {r}, L = {l_vec:?}"
                ));
            }
        }
        out.aux_checks += 1;
    }
    out.notes.push(format!(
        "{} closed-form cases ({} even, {} odd parity), {} vanishing checks",
        out.cases, out.even_cases, out.odd_cases, out.vanish_checks
    ));
    Ok(out)
}

/// Census scaling across m and stability of the density b_p.
pub fn census_suite(seed: u64, forms: usize, budget: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("census");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in [3i64, 5] {
        for _ in 0..forms {
            let q_form = random_form(&mut rng, p);
            let mut densities = Vec::new();
            for m in 1..=3u32 {
                let pp = PrimePower::new(p, m)?;
                if !hensel_scaling_check(&q_form, pp, budget)? {
                    out.failures.push(format!(
                        "scaling law fails: p = {p}, m = {m}, A = {:?}",
                        q_form.matrix()
                    ));
                }
                out.cases += 1;
                densities.push(census(&q_form, pp, budget)?.b_p);
            }
            if !densities.windows(2).all(|w| w[0] == w[1]) {
                out.failures.push(format!(
                    "density varies with m: p = {p}, A = {:?}",
                    q_form.matrix()
                ));
            }
            out.aux_checks += 1;
        }
    }
    out.notes
        .push(format!("{} scaling checks across m = 1..3", out.cases));
    Ok(out)
}

/// Direct window count vs the dual-lattice assembly (T₀ + U), floating
/// comparison at 1e−6 relative tolerance.
pub fn poisson_suite(budget: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("poisson");
    let i3 = QuadraticForm::diagonal(&[1, 1, 1])?;
    let w = GaussianWeight::default();
    let pp = PrimePower::new(3, 2)?;
    for x0 in [[0i64, 0, 0], [1, 0, -2]] {
        let direct = weighted_count_t(&i3, pp, 10.0, &x0, &w, budget)?;
        let assembled = poisson_assembly(&i3, pp, 10.0, &x0, 200, &w, budget)?;
        let rel = (direct - assembled).abs() / direct.abs().max(1.0);
        if rel > 1e-6 {
            out.failures.push(format!(
                "poisson assembly off by {rel:.3e} at x0 = {x0:?} (direct {direct}, assembled {assembled})"
            ));
        }
        out.cases += 1;
    }
    out.notes.push("window 10, frequencies |k_i| ≤ 200".into());
    Ok(out)
}
