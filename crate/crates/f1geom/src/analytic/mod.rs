//! Numerical layer: zeta evaluation, critical-line zeros, prime sums, the
//! explicit-formula reconstruction of the counting distribution, and the
//! identity checks that tie them together.
//!
//! Everything is double precision with per-operation error budgets; the
//! shared error type carries domain violations, convergence failures, and
//! cross-check aborts.

pub mod arith;
pub mod constants;
pub mod explicit;
pub mod gamma;
pub mod mellin;
pub mod zeros;
pub mod zeta_em;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalyticError {
    #[error("out of domain: {0}")]
    Domain(String),
    #[error("zeta has a pole at s = 1")]
    PoleAtOne,
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("zero table has {have} entries, need {need}")]
    TableTooSmall { have: usize, need: usize },
    #[error("zero scan cannot reconcile with the counting function: {0}")]
    MissedZeros(String),
    #[error("u = {u} is within tolerance of the prime power {pp}")]
    NearPrimePower { u: f64, pp: u64 },
    #[error("cross-check failed for {what}: discrepancy {diff:e}")]
    CrossCheck { what: String, diff: f64 },
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
