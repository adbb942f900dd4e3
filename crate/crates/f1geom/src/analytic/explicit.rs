//! The explicit-formula reconstruction: the oscillatory zero sum omega_m,
//! the truncated counting distribution J_m it defines, the exact prime-side
//! J, the zero-sum identities at u = 1, and the scaled density of the
//! distribution near u = 1.

use super::arith::{near_prime_power, phi_weighted};
use super::constants::Constants;
use super::AnalyticError;
use crate::par;

const SUM_BLOCK: usize = 64;

/// omega_m(u) = sum over the first zeros (one term per conjugate pair at
/// height t) of 2 u^{3/2} [(3/2) cos(t ln u) + t sin(t ln u)] / (9/4 + t^2),
/// i.e. sum of 2 Re(u^{rho+1}/(rho+1)) over rho = 1/2 + it.
pub fn omega_partial(u: f64, zeros: &[f64]) -> Result<f64, AnalyticError> {
    if !(u > 0.0) {
        return Err(AnalyticError::Domain(format!(
            "omega needs u > 0, got {u}"
        )));
    }
    let lu = u.ln();
    let amp = 2.0 * u.powf(1.5);
    Ok(par::sum_blocks(zeros.len(), SUM_BLOCK, |k| {
        let t = zeros[k];
        let (sin, cos) = (t * lu).sin_cos();
        amp * (1.5 * cos + t * sin) / (2.25 + t * t)
    }))
}

/// Truncated counting distribution J_m(u) = u^2/2 - omega_m(u) + u.
pub fn j_truncated(u: f64, zeros: &[f64]) -> Result<f64, AnalyticError> {
    Ok(0.5 * u * u - omega_partial(u, zeros)? + u)
}

/// a(u) = arctanh(1/u) - zeta'(-1)/zeta(-1), the smooth part of the exact
/// side; decreasing in u, diverging like (1/2) ln(2/(u-1)) at u = 1+.
pub fn a_func(u: f64, c: &Constants) -> Result<f64, AnalyticError> {
    if !(u > 1.0) {
        return Err(AnalyticError::Domain(format!(
            "a(u) needs u > 1, got {u}"
        )));
    }
    Ok(0.5 * ((u + 1.0) / (u - 1.0)).ln() - c.zeta_prime_ratio)
}

/// Exact counting distribution J(u) = phi(u) + u - a(u) for u > 1, where
/// phi is the strict weighted prime-power sum.  Evaluation within 1e-9 of a
/// prime power is refused: the value there depends on which side of the
/// jump floating-point noise lands.
pub fn j_exact(u: f64, c: &Constants) -> Result<f64, AnalyticError> {
    if !(u > 1.0) {
        return Err(AnalyticError::Domain(format!(
            "J exact needs u > 1, got {u}"
        )));
    }
    if let Some(pp) = near_prime_power(u, 1e-9) {
        return Err(AnalyticError::NearPrimePower { u, pp });
    }
    Ok(phi_weighted(u) + u - a_func(u, c)?)
}

#[derive(Debug, Clone, Copy)]
pub struct SumLine {
    pub partial: f64,
    pub target: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct IdentityReport {
    /// sum 1/(1/4 + t^2) vs gamma/2 + 1 - log(4 pi)/2.
    pub inv_rho: SumLine,
    /// sum 2(3/4 - t^2)/((3/4 - t^2)^2 + 4 t^2) vs
    /// 1/2 - log(4 pi) + zeta'(-1)/zeta(-1).
    pub inv_rho_rho1: SumLine,
    /// sum 3/(9/4 + t^2) vs the omega(1) constant.
    pub inv_rho1: SumLine,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.inv_rho
            .residual
            .max(self.inv_rho_rho1.residual)
            .max(self.inv_rho1.residual)
    }
}

/// Partial sums over conjugate pairs of the three convergent zero sums,
/// against their closed-form targets.
pub fn zero_sum_identities(zeros: &[f64], c: &Constants) -> IdentityReport {
    let line = |partial: f64, target: f64| SumLine {
        partial,
        target,
        residual: (partial - target).abs(),
    };
    let s1 = par::sum_blocks(zeros.len(), SUM_BLOCK, |k| {
        let t = zeros[k];
        1.0 / (0.25 + t * t)
    });
    let s2 = par::sum_blocks(zeros.len(), SUM_BLOCK, |k| {
        let t = zeros[k];
        let re = 0.75 - t * t;
        2.0 * re / (re * re + 4.0 * t * t)
    });
    let s3 = par::sum_blocks(zeros.len(), SUM_BLOCK, |k| {
        let t = zeros[k];
        3.0 / (2.25 + t * t)
    });
    IdentityReport {
        inv_rho: line(s1, 0.5 * c.gamma + 1.0 - 0.5 * c.log_4pi),
        inv_rho_rho1: line(s2, 0.5 - c.log_4pi + c.zeta_prime_ratio),
        inv_rho1: line(s3, c.omega_one),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DensityRow {
    pub eps: f64,
    /// (omega(1 + eps) - omega(1)) / eps with omega on the exact side.
    pub density: f64,
    /// (E ln E)/2 at E = 1/eps, the expected scale.
    pub reference: f64,
    pub ratio: f64,
}

/// Scaled density of the distribution just right of u = 1: the exact side
/// has omega(u) = u^2/2 + a(u) there (no prime power below 2), and omega(1)
/// is the regularized constant.  The ratio tends to 1 from below like
/// 1 - c/ln(1/eps).
pub fn density_remark(eps: &[f64], c: &Constants) -> Result<Vec<DensityRow>, AnalyticError> {
    let mut rows = Vec::with_capacity(eps.len());
    for &e in eps {
        if !(e > 0.0 && e < 0.5) {
            return Err(AnalyticError::Domain(format!(
                "density step must lie in (0, 0.5), got {e}"
            )));
        }
        let u = 1.0 + e;
        let omega_u = 0.5 * u * u + a_func(u, c)?;
        let density = (omega_u - c.omega_one) / e;
        let big_e = 1.0 / e;
        let reference = 0.5 * big_e * big_e.ln();
        rows.push(DensityRow {
            eps: e,
            density,
            reference,
            ratio: density / reference,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy)]
pub struct FigureRow {
    pub u: f64,
    pub exact: f64,
    pub truncated: f64,
    pub abs_err: f64,
}

/// Evaluate exact vs truncated J on the grid lo + k*step (k from 0 while
/// the point stays <= hi + step/2).  Grid points landing within 1e-9 of a
/// prime power are skipped: the exact side is undefined on the jump.
pub fn reconstruction_rows(
    zeros: &[f64],
    c: &Constants,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<Vec<FigureRow>, AnalyticError> {
    if !(lo > 1.0) || !(hi >= lo) || !(step > 0.0) {
        return Err(AnalyticError::Domain(format!(
            "bad grid {lo}:{hi}:{step}"
        )));
    }
    let n = ((hi - lo) / step).round() as usize + 1;
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let u = lo + k as f64 * step;
        if u > hi + step * 0.5 {
            break;
        }
        if near_prime_power(u, 1e-9).is_some() {
            continue;
        }
        let exact = j_exact(u, c)?;
        let truncated = j_truncated(u, zeros)?;
        rows.push(FigureRow {
            u,
            exact,
            truncated,
            abs_err: (exact - truncated).abs(),
        });
    }
    Ok(rows)
}

/// Sup of |J_m - J| over the rows whose u is farther than `exclude` from
/// every prime power.
pub fn sup_error(rows: &[FigureRow], exclude: f64) -> f64 {
    rows.iter()
        .filter(|r| near_prime_power(r.u, exclude).is_none())
        .map(|r| r.abs_err)
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::constants::constants;
    use crate::analytic::zeros::shared_zeros_500;

    #[test]
    fn omega_at_one_is_the_third_identity_sum() {
        let zeros = &shared_zeros_500().unwrap().heights;
        let c = constants().unwrap();
        let omega = omega_partial(1.0, zeros).unwrap();
        let report = zero_sum_identities(zeros, &c);
        assert!((omega - report.inv_rho1.partial).abs() < 1e-12);
        assert!(
            (omega - c.omega_one).abs() < 5e-3,
            "omega_500(1) = {omega} vs {}",
            c.omega_one
        );
    }

    #[test]
    fn empty_truncation_at_one() {
        assert_eq!(omega_partial(1.0, &[]).unwrap(), 0.0);
        assert!((j_truncated(1.0, &[]).unwrap() - 1.5).abs() < 1e-15);
        assert!(omega_partial(0.0, &[]).is_err());
    }

    #[test]
    fn smooth_part_values() {
        let c = constants().unwrap();
        assert!((a_func(2.0, &c).unwrap() + 1.4357476).abs() < 1e-6);
        // far field: arctanh term dies, the ratio constant remains
        assert!((a_func(1e9, &c).unwrap() + 1.9850537).abs() < 1e-6);
        // near field: (1/2) ln(2/(u-1)) divergence profile
        let e = 1e-6;
        let a = a_func(1.0 + e, &c).unwrap();
        let profile = 0.5 * (2.0 / e).ln() - c.zeta_prime_ratio;
        assert!((a - profile).abs() < 1e-3);
        assert!(a_func(1.0, &c).is_err());
    }

    #[test]
    fn exact_side_values() {
        let c = constants().unwrap();
        let j10 = j_exact(10.0, &c).unwrap();
        assert!((j10 - 56.440686).abs() < 1e-5, "J(10) = {j10}");
        // phi(6) = 6 ln2 + 3 ln3 + 5 ln5, a(6) = ln(7/5)/2 - ratio
        let j6 = j_exact(6.0, &c).unwrap();
        assert!((j6 - 23.3187271).abs() < 1e-5, "J(6) = {j6}");
        assert!(matches!(
            j_exact(8.0 + 1e-10, &c),
            Err(AnalyticError::NearPrimePower { pp: 8, .. })
        ));
        assert!(j_exact(8.5, &c).is_ok());
    }

    #[test]
    fn identities_at_five_hundred_pairs() {
        let zeros = &shared_zeros_500().unwrap().heights;
        let c = constants().unwrap();
        let report = zero_sum_identities(zeros, &c);
        assert!((report.inv_rho.target - 0.0230957).abs() < 1e-7);
        assert!((report.inv_rho_rho1.target + 0.0459705).abs() < 1e-7);
        assert!(
            report.max_residual() < 5e-3,
            "residuals {:?} {:?} {:?}",
            report.inv_rho,
            report.inv_rho_rho1,
            report.inv_rho1
        );
    }

    #[test]
    fn density_scaling() {
        let c = constants().unwrap();
        let rows = density_remark(&[1e-2, 1e-4, 1e-6, 1e-8], &c).unwrap();
        let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
        assert!((ratios[0] - 0.4810).abs() < 1e-3, "{}", ratios[0]);
        assert!((ratios[1] - 0.73781).abs() < 1e-3, "{}", ratios[1]);
        assert!((ratios[2] - 0.825185).abs() < 1e-3, "{}", ratios[2]);
        assert!((ratios[3] - 0.868893).abs() < 1e-3, "{}", ratios[3]);
        // the approach to 1 is from below and tightens as eps shrinks
        assert!((1.0 - ratios[1]).abs() > (1.0 - ratios[2]).abs());
        assert!((1.0 - ratios[2]).abs() > (1.0 - ratios[3]).abs());
        assert!(density_remark(&[0.7], &c).is_err());
    }

    #[test]
    fn exact_distribution_is_nondecreasing() {
        // The counting distribution is a nonnegative measure, so the
        // window increment (J(u+h) - J(u))/h with h = 0.5 must be >= 0,
        // including windows straddling a prime-power jump.  Window
        // endpoints sitting on a jump are skipped (J is refused there).
        let c = constants().unwrap();
        let h = 0.5;
        let mut u = 1.5;
        while u + h <= 20.0 {
            if let (Ok(a), Ok(b)) = (j_exact(u, &c), j_exact(u + h, &c)) {
                assert!(
                    b >= a,
                    "exact J decreased over [{u}, {}]: {a} -> {b}",
                    u + h
                );
            }
            u += 0.1;
        }
    }

    #[test]
    fn figure_grid_skips_jumps_and_converges() {
        let table = shared_zeros_500().unwrap();
        let c = constants().unwrap();
        let rows = reconstruction_rows(&table.heights, &c, 2.0, 10.0, 0.05).unwrap();
        // prime powers in [2, 10]: 2 3 4 5 7 8 9 are skipped
        assert!(rows.iter().all(|r| near_prime_power(r.u, 1e-9).is_none()));
        let sup20 = sup_error(
            &reconstruction_rows(&table.heights[..20], &c, 2.0, 10.0, 0.05).unwrap(),
            0.05,
        );
        let sup100 = sup_error(
            &reconstruction_rows(&table.heights[..100], &c, 2.0, 10.0, 0.05).unwrap(),
            0.05,
        );
        let sup500 = sup_error(&rows, 0.05);
        assert!(
            sup20 > sup100 && sup100 > sup500,
            "sup errors not decreasing: {sup20} {sup100} {sup500}"
        );
    }
}
