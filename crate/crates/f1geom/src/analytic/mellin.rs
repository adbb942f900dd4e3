//! Transform identity tying the counting distribution to the completed
//! zeta function: for s > 1,
//!
//!   sum_{n<U} Lambda(n) n^{-s} + int_1^U (u^{2-s} - 1)/((u^2-1) u) du + c
//!     ~ (1/2) ln pi - (1/2) psi(s/2) - zeta'/zeta(s),
//!
//! with c = (ln pi + gamma)/2 and both truncations vanishing as U grows.

use super::arith::PrimeSieve;
use super::constants::Constants;
use super::gamma::digamma;
use super::AnalyticError;

/// Integrand of the smooth part, continuously extended across u = 1 where
/// numerator and denominator share a simple zero.
pub fn kappa_integrand(u: f64, s: f64) -> f64 {
    if u == 1.0 {
        return 0.5 * (2.0 - s);
    }
    let l = u.ln();
    ((2.0 - s) * l).exp_m1() / ((2.0 * l).exp_m1() * u)
}

fn adapt(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adapt(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
        + adapt(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson with Richardson correction.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adapt(f, a, fa, b, fb, fm, whole, tol, 48)
}

/// int_1^cutoff of the smooth integrand, split at the decade marks so the
/// adaptive rule spends its depth near u = 1 where curvature concentrates.
fn kappa_integral(s: f64, cutoff: f64) -> f64 {
    let mut edges = vec![1.0];
    for e in [2.0, 10.0, 100.0] {
        if e < cutoff {
            edges.push(e);
        }
    }
    edges.push(cutoff);
    edges
        .windows(2)
        .map(|w| adaptive_simpson(&|u| kappa_integrand(u, s), w[0], w[1], 1e-11))
        .sum()
}

#[derive(Debug, Clone, Copy)]
pub struct MellinReport {
    pub s: f64,
    pub cutoff: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Evaluate both sides at real s > 1.  The left side truncates the prime
/// and smooth parts at `cutoff`; the right side truncates zeta'/zeta at the
/// sieve limit, so the sieve should extend well past `cutoff`.
pub fn mellin_check(
    s: f64,
    cutoff: f64,
    c: &Constants,
    sieve: &PrimeSieve,
) -> Result<MellinReport, AnalyticError> {
    if !(s > 1.0) {
        return Err(AnalyticError::Domain(format!(
            "transform identity needs s > 1, got {s}"
        )));
    }
    if !(cutoff >= 10.0) || cutoff > sieve.limit() as f64 {
        return Err(AnalyticError::Domain(format!(
            "cutoff {cutoff} outside [10, sieve limit {}]",
            sieve.limit()
        )));
    }
    let lhs = sieve.lambda_power_sum(cutoff, s)? + kappa_integral(s, cutoff) + c.kappa_c;
    let rhs = 0.5 * c.log_pi - 0.5 * digamma(0.5 * s)? + sieve.minus_zeta_log_deriv(s)?;
    Ok(MellinReport {
        s,
        cutoff,
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}
