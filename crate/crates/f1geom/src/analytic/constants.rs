//! Shared analytic constants, each computed by one method and cross-checked
//! against an independent one.  A disagreement beyond 1e-7 aborts instead of
//! silently polluting every downstream residual.

use std::sync::OnceLock;

use num_complex::Complex64;

use super::zeta_em::{zeta, zeta_real};
use super::AnalyticError;

/// Reference decimals used only as cross-checks, never as the computed value.
const GAMMA_REF: f64 = 0.577_215_664_901_532_9;
/// ln of Glaisher's constant A = 1.2824271291006226; zeta'(-1) = 1/12 - ln A.
const LN_GLAISHER: f64 = 0.248_754_477_033_784_26;

#[derive(Debug, Clone, Copy)]
pub struct Constants {
    /// Euler-Mascheroni gamma.
    pub gamma: f64,
    pub log_pi: f64,
    pub log_4pi: f64,
    /// zeta'(-1).
    pub zeta_prime_m1: f64,
    /// zeta'(-1)/zeta(-1) = -12 zeta'(-1).
    pub zeta_prime_ratio: f64,
    /// Additive constant (log pi + gamma)/2 in the transform identity.
    pub kappa_c: f64,
    /// 1/2 + gamma/2 + log(4 pi)/2 - zeta'(-1)/zeta(-1); the limit of the
    /// oscillatory zero sum at u = 1.
    pub omega_one: f64,
    /// |computed - cross-check| for gamma.
    pub gamma_check_diff: f64,
    /// |stencil - Glaisher| for zeta'(-1).
    pub zeta_prime_check_diff: f64,
}

/// gamma from the harmonic sum with Euler-Maclaurin tail corrections:
/// gamma = H_n - ln n - 1/(2n) + 1/(12 n^2) - 1/(120 n^4) + 1/(252 n^6)
/// - 1/(240 n^8); with n = 100 the first dropped term is ~1e-21.
fn euler_gamma() -> f64 {
    let n = 100u64;
    let mut h = 0.0;
    for k in 1..=n {
        h += 1.0 / k as f64;
    }
    let x = n as f64;
    let inv2 = 1.0 / (x * x);
    h - x.ln() - 0.5 / x
        + inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)))
}

/// zeta'(-1) by an order-4 central difference of the Euler-Maclaurin
/// evaluator.  The evaluation near s = -1 cancels a partial sum of size
/// ~200 down to -1/12, leaving ~1e-13 of roundoff per point, so the step
/// balances that against the O(h^4) truncation at ~1e-10 total.
fn zeta_prime_at_minus_one() -> Result<f64, AnalyticError> {
    let h = 5e-3;
    let f = |x: f64| zeta_real(x);
    Ok((-f(-1.0 + 2.0 * h)? + 8.0 * f(-1.0 + h)? - 8.0 * f(-1.0 - h)? + f(-1.0 - 2.0 * h)?)
        / (12.0 * h))
}

fn compute() -> Result<Constants, AnalyticError> {
    let gamma = euler_gamma();
    let gamma_check_diff = (gamma - GAMMA_REF).abs();
    if gamma_check_diff > 1e-7 {
        return Err(AnalyticError::CrossCheck {
            what: "Euler gamma vs reference decimal".into(),
            diff: gamma_check_diff,
        });
    }

    let zp = zeta_prime_at_minus_one()?;
    let zp_glaisher = 1.0 / 12.0 - LN_GLAISHER;
    let zeta_prime_check_diff = (zp - zp_glaisher).abs();
    if zeta_prime_check_diff > 1e-7 {
        return Err(AnalyticError::CrossCheck {
            what: "zeta'(-1) stencil vs Glaisher relation".into(),
            diff: zeta_prime_check_diff,
        });
    }
    // zeta(-1) = -1/12 exactly; sanity-check the evaluator once more here
    // because the ratio below divides by it.
    let zm1 = zeta(Complex64::new(-1.0, 0.0))?.re;
    if (zm1 + 1.0 / 12.0).abs() > 1e-9 {
        return Err(AnalyticError::CrossCheck {
            what: "zeta(-1) vs -1/12".into(),
            diff: (zm1 + 1.0 / 12.0).abs(),
        });
    }

    let log_pi = std::f64::consts::PI.ln();
    let log_4pi = (4.0 * std::f64::consts::PI).ln();
    let zeta_prime_ratio = -12.0 * zp;
    Ok(Constants {
        gamma,
        log_pi,
        log_4pi,
        zeta_prime_m1: zp,
        zeta_prime_ratio,
        kappa_c: 0.5 * (log_pi + gamma),
        omega_one: 0.5 + 0.5 * gamma + 0.5 * log_4pi - zeta_prime_ratio,
        gamma_check_diff,
        zeta_prime_check_diff,
    })
}

static CACHE: OnceLock<Constants> = OnceLock::new();

/// The shared constant set, computed once per process.  Errors are not
/// cached: a failed cross-check fails every caller.
pub fn constants() -> Result<Constants, AnalyticError> {
    if let Some(c) = CACHE.get() {
        return Ok(*c);
    }
    let c = compute()?;
    Ok(*CACHE.get_or_init(|| c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_to_ten_decimals() {
        let c = constants().unwrap();
        assert!((c.gamma - 0.5772156649).abs() < 1e-10);
        assert!(c.gamma_check_diff < 1e-12);
    }

    #[test]
    fn zeta_prime_ratio() {
        let c = constants().unwrap();
        assert!((c.zeta_prime_m1 + 0.16542114370045093).abs() < 1e-9);
        assert!((c.zeta_prime_ratio - 1.9850537).abs() < 1e-6);
        assert!(c.zeta_prime_check_diff < 1e-9);
    }

    #[test]
    fn combined_constants_match_pinned_values() {
        let c = constants().unwrap();
        // (log pi + gamma)/2
        assert!((c.kappa_c - 0.8609727753754666).abs() < 1e-12);
        assert!((c.omega_one - 0.0690662).abs() < 1e-7);
        // the two zero-sum targets and their difference
        let t1 = 0.5 * c.gamma + 1.0 - 0.5 * c.log_4pi;
        let t2 = 0.5 - c.log_4pi + c.zeta_prime_ratio;
        assert!((t1 - 0.0230957).abs() < 1e-7);
        assert!((t2 + 0.0459705).abs() < 1e-7);
        assert!((t1 - t2 - c.omega_one).abs() < 1e-12);
    }
}
