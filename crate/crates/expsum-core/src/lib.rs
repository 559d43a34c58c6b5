//! Exact evaluation of multivariable exponential sums modulo odd prime
//! powers, built on p-adic stationary phase, with an application to
//! counting solutions of quadratic congruences in small boxes.

pub mod census;
pub mod cyclotomic;
pub mod engine;
pub mod error;
pub mod io;
pub mod modular;
pub mod poly;
pub mod ratfunc;
pub mod verify;

pub use error::{Error, Result};

/// Default cap on enumeration size (lattice points visited by brute-force
/// sums and censuses). Override per call or via the CLI `--budget` flag /
/// `EXPSUM_BUDGET` environment variable.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Exact rational used for densities and census ratios.
pub type Rational = num_rational::Ratio<i128>;
