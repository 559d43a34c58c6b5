//! Command-line surface for exact exponential sums modulo odd prime powers:
//! evaluation, verification suites, quadratic-congruence censuses,
//! convergence sweeps, and box growth counts.
//!
//! Exit codes: 0 all checks pass, 1 verification failure, 2 usage or parse
//! error, 3 enumeration budget exceeded.

use clap::{Parser, Subcommand};
use expsum_core::census::{
    box_zero_count, census, hensel_scaling_check, theorem2_sweep, GaussianWeight,
};
use expsum_core::engine::SumSpec;
use expsum_core::io::{cyclo_to_json, parse_amplitude, parse_form};
use expsum_core::modular::PrimePower;
use expsum_core::ratfunc::CoprimalityStatus;
use expsum_core::verify;
use expsum_core::{Error, DEFAULT_BUDGET};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "expsum",
    version,
    about = "Exact exponential sums modulo odd prime powers and quadratic congruence censuses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an exponential sum exactly, by enumeration and/or closed form.
    EvalSum {
        /// Amplitude file: polynomial or {num, den} rational function (JSON).
        #[arg(long)]
        f: PathBuf,
        /// Odd prime p.
        #[arg(long)]
        p: i64,
        /// Exponent m of the modulus p^m.
        #[arg(long)]
        m: u32,
        /// Restrict to the coset x ≡ α (mod p), e.g. --alpha 1,0,2.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        alpha: Option<Vec<i64>>,
        /// brute | theorem | both
        #[arg(long, default_value = "both")]
        method: String,
        /// Enumeration budget (points); EXPSUM_BUDGET overrides the default.
        #[arg(long)]
        budget: Option<u64>,
        /// Write the structured report to a file as well as stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded verification suite (closed forms vs brute-force oracles).
    Verify {
        /// prop1 | thm1 | gauss | esum | census | poisson | all
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Target number of randomized equality cases (prop1/thm1/esum).
        #[arg(long)]
        cases: Option<usize>,
        /// Largest modulus for the Gauss identity sweep.
        #[arg(long, default_value_t = 2000)]
        qmax: u64,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Census of Q ≡ 0 mod p^m: solution count, density, scaling verdict.
    Census {
        /// Symmetric form file {n, matrix} (JSON).
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence sweep: weighted count T vs main term T0 across m.
    Thm2Sweep {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        p: i64,
        /// Exponents, e.g. --m 4,6,8.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        m: Vec<u32>,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// Box center, e.g. --x0 0,0,0 (defaults to the origin).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        x0: Option<Vec<i64>>,
        #[arg(long)]
        budget: Option<u64>,
        /// csv | structured
        #[arg(long, default_value = "structured")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integer zeros of Q in boxes |x_i| ≤ N, with growth-exponent estimates.
    Growth {
        #[arg(long)]
        form: PathBuf,
        /// Box half-sides, e.g. --N 50,100,200.
        #[arg(long = "N", value_delimiter = ',', num_args = 1..)]
        n_list: Vec<i64>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn resolve_budget(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("EXPSUM_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_BUDGET)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded { .. } => 3,
        Error::InvalidInput(_)
        | Error::VarCountMismatch { .. }
        | Error::NotOddPrime(_)
        | Error::ModulusTooLarge { .. } => 2,
        _ => 1,
    }
}

fn emit(report: &serde_json::Value, out: Option<&PathBuf>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(report).expect("serializable report");
    println!("{text}");
    if let Some(path) = out {
        std::fs::write(path, text.as_bytes())
            .map_err(|e| Error::InvalidInput(format!("cannot write {path:?}: {e}")))?;
    }
    Ok(())
}

fn read_file(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {path:?}: {e}")))
}

fn fixed(v: f64) -> serde_json::Value {
    serde_json::Value::String(format!("{v:.12e}"))
}

#[allow(clippy::too_many_arguments)]
fn run_eval_sum(
    f: PathBuf,
    p: i64,
    m: u32,
    alpha: Option<Vec<i64>>,
    method: String,
    budget: Option<u64>,
    out: Option<PathBuf>,
) -> Result<u8, Error> {
    if !matches!(method.as_str(), "brute" | "theorem" | "both") {
        return Err(Error::InvalidInput(format!("unknown method '{method}'")));
    }
    let budget = resolve_budget(budget);
    let text = read_file(&f)?;
    let amp = parse_amplitude(&text)?;
    let pp = PrimePower::new(p, m)?;
    let mut spec = SumSpec::new(amp.clone(), pp);
    if let Some(a) = &alpha {
        spec = spec.restricted(a.clone());
    }
    let coprimality = match amp.coprime_mod_p(p) {
        CoprimalityStatus::Verified => "verified",
        CoprimalityStatus::Violated => "violated",
        CoprimalityStatus::Unknown => "unknown",
    };
    let mut report = serde_json::json!({
        "command": "eval-sum",
        "p": p,
        "m": m,
        "alpha": alpha,
        "method": method,
        "budget": budget,
        "coprimality_mod_p": coprimality,
    });
    let mut brute_val = None;
    let mut thm_val = None;
    if method == "brute" || method == "both" {
        let v = spec.eval_brute(budget)?;
        report["brute"] = cyclo_to_json(&v);
        brute_val = Some(v);
    }
    if method == "theorem" || method == "both" {
        match spec.eval_theorem(budget) {
            Ok(v) => {
                report["theorem"] = cyclo_to_json(&v);
                thm_val = Some(v);
            }
            Err(e) if method == "both" => {
                report["theorem_note"] = serde_json::Value::String(e.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    let code = match (&brute_val, &thm_val) {
        (Some(a), Some(b)) => {
            let equal = a == b;
            report["equal"] = serde_json::Value::Bool(equal);
            u8::from(!equal)
        }
        _ => 0,
    };
    emit(&report, out.as_ref())?;
    Ok(code)
}

fn run_verify(
    suite: String,
    seed: u64,
    cases: Option<usize>,
    qmax: u64,
    budget: Option<u64>,
) -> Result<u8, Error> {
    let budget = resolve_budget(budget);
    let mut outcomes = Vec::new();
    let run_all = suite == "all";
    if suite == "prop1" || run_all {
        outcomes.push(verify::prop1_suite(seed, cases.unwrap_or(200), budget)?);
    }
    if suite == "thm1" || run_all {
        outcomes.push(verify::thm1_suite(seed, cases.unwrap_or(200), budget)?);
    }
    if suite == "gauss" || run_all {
        outcomes.push(verify::gauss_suite(qmax, 20, seed, budget)?);
    }
    if suite == "esum" || run_all {
        outcomes.push(verify::esum_suite(seed, cases.unwrap_or(100), budget)?);
    }
    if suite == "census" || run_all {
        outcomes.push(verify::census_suite(seed, 5, budget)?);
    }
    if suite == "poisson" || run_all {
        outcomes.push(verify::poisson_suite(budget)?);
    }
    if outcomes.is_empty() {
        return Err(Error::InvalidInput(format!(
            "unknown suite '{suite}' (expected prop1|thm1|gauss|esum|census|poisson|all)"
        )));
    }
    let mut all_ok = true;
    for o in &outcomes {
        let verdict = if o.passed() { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {}: {} cases, {} auxiliary checks ({})",
            o.name,
            o.cases,
            o.aux_checks,
            o.notes.join("; ")
        );
        for fail in &o.failures {
            eprintln!("  FAIL {fail}");
        }
        all_ok &= o.passed();
    }
    Ok(u8::from(!all_ok))
}

fn run_census(
    form: PathBuf,
    p: i64,
    m: u32,
    budget: Option<u64>,
    out: Option<PathBuf>,
) -> Result<u8, Error> {
    let budget = resolve_budget(budget);
    let q_form = parse_form(&read_file(&form)?)?;
    let pp = PrimePower::new(p, m)?;
    let result = census(&q_form, pp, budget)?;
    let scaling = hensel_scaling_check(&q_form, pp, budget)?;
    let report = serde_json::json!({
        "command": "census",
        "p": result.p,
        "m": result.m,
        "count_A": result.count_a,
        "b_p": format!("{}/{}", result.b_p.numer(), result.b_p.denom()),
        "hensel_scaling_ok": scaling,
        "budget": budget,
    });
    emit(&report, out.as_ref())?;
    Ok(u8::from(!scaling))
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    form: PathBuf,
    p: i64,
    m: Vec<u32>,
    eps: f64,
    x0: Option<Vec<i64>>,
    budget: Option<u64>,
    format: String,
    out: Option<PathBuf>,
) -> Result<u8, Error> {
    let budget = resolve_budget(budget);
    let q_form = parse_form(&read_file(&form)?)?;
    let x0 = x0.unwrap_or_else(|| vec![0; q_form.n()]);
    let weight = GaussianWeight::default();
    let report = theorem2_sweep(&q_form, p, &m, eps, &x0, &weight, budget)?;
    match format.as_str() {
        "csv" => {
            let mut text = String::from("p,m,epsilon,N,T,T0,ratio,deviation,runtime_ms\n");
            for row in &report.rows {
                text.push_str(&format!(
                    "{},{},{:.12e},{},{:.12e},{:.12e},{:.12e},{:.12e},{}\n",
                    row.p,
                    row.m,
                    row.epsilon,
                    row.n_width,
                    row.t,
                    row.t0,
                    row.ratio,
                    row.deviation,
                    row.runtime_ms
                ));
            }
            print!("{text}");
            if let Some(path) = &out {
                std::fs::write(path, text.as_bytes())
                    .map_err(|e| Error::InvalidInput(format!("cannot write {path:?}: {e}")))?;
            }
        }
        "structured" => {
            // runtime is deliberately omitted: the structured report is
            // byte-identical for a fixed configuration
            let rows: Vec<serde_json::Value> = report
                .rows
                .iter()
                .map(|row| {
                    serde_json::json!({
                        "p": row.p,
                        "m": row.m,
                        "epsilon": fixed(row.epsilon),
                        "N": row.n_width,
                        "T": fixed(row.t),
                        "T0": fixed(row.t0),
                        "ratio": fixed(row.ratio),
                        "deviation": fixed(row.deviation),
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "command": "thm2-sweep",
                "rows": rows,
                "trend_non_increasing": report.trend_ok,
                "final_deviation": fixed(report.final_deviation),
            });
            emit(&doc, out.as_ref())?;
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown format '{other}' (expected csv|structured)"
            )))
        }
    }
    Ok(0)
}

fn run_growth(
    form: PathBuf,
    n_list: Vec<i64>,
    budget: Option<u64>,
    out: Option<PathBuf>,
) -> Result<u8, Error> {
    let budget = resolve_budget(budget);
    let q_form = parse_form(&read_file(&form)?)?;
    if n_list.is_empty() {
        return Err(Error::InvalidInput("need at least one box size".into()));
    }
    let mut sizes: Vec<i64> = n_list.clone();
    for &n in &n_list {
        sizes.push(2 * n);
    }
    sizes.sort_unstable();
    sizes.dedup();
    let mut counts = std::collections::BTreeMap::new();
    for &n in &sizes {
        counts.insert(n, box_zero_count(&q_form, n, budget)?);
    }
    let rows: Vec<serde_json::Value> = n_list
        .iter()
        .map(|&n| {
            let c1 = counts[&n];
            let c2 = counts[&(2 * n)];
            let ratio = c2 as f64 / c1.max(1) as f64;
            serde_json::json!({
                "N": n,
                "count": c1,
                "count_2N": c2,
                "ratio": fixed(ratio),
                "exponent_estimate": fixed(ratio.log2()),
            })
        })
        .collect();
    let doc = serde_json::json!({
        "command": "growth",
        "rows": rows,
    });
    emit(&doc, out.as_ref())?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::EvalSum {
            f,
            p,
            m,
            alpha,
            method,
            budget,
            out,
        } => run_eval_sum(f, p, m, alpha, method, budget, out),
        Command::Verify {
            suite,
            seed,
            cases,
            qmax,
            budget,
        } => run_verify(suite, seed, cases, qmax, budget),
        Command::Census {
            form,
            p,
            m,
            budget,
            out,
        } => run_census(form, p, m, budget, out),
        Command::Thm2Sweep {
            form,
            p,
            m,
            eps,
            x0,
            budget,
            format,
            out,
        } => run_sweep(form, p, m, eps, x0, budget, format, out),
        Command::Growth {
            form,
            n_list,
            budget,
            out,
        } => run_growth(form, n_list, budget, out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
