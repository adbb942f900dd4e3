//! Zeta functions of counting polynomials and spaces.
//!
//! For a torsion-free space the zeta function is a rational function of `s`
//! with integer roots and poles, so it is stored exactly as a divisor
//! `∏_k (s−k)^{m_k}`. Floating point enters only in the limit checks that
//! reconcile the divisor with the `q → 1` definition.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scheme::{binomial, CountingPoly, GeoScheme};

#[derive(Debug, Error, PartialEq)]
pub enum ZetaError {
    #[error("stalk units carry torsion; only exact counts are available")]
    TorsionPresent,
    #[error("s = {s} is not above the degree {deg}; no convergence")]
    OutOfRegion { s: f64, deg: usize },
    #[error("s = {k} carries multiplicity {mult} (pole or zero)")]
    AtRoot { k: i64, mult: i64 },
    #[error("dimension {0} too large for exact binomials")]
    DimTooLarge(usize),
}

/// Exact rational function `∏_k (s−k)^{m_k}`, nonzero multiplicities only.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ZetaDivisor {
    mults: BTreeMap<i64, i64>,
}

impl ZetaDivisor {
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut d = ZetaDivisor::default();
        for &(k, m) in pairs {
            d.add(k, m);
        }
        d
    }

    pub fn add(&mut self, k: i64, m: i64) {
        let e = self.mults.entry(k).or_insert(0);
        *e += m;
        if *e == 0 {
            self.mults.remove(&k);
        }
    }

    pub fn multiplicity(&self, k: i64) -> i64 {
        self.mults.get(&k).copied().unwrap_or(0)
    }

    /// Sorted `(location, multiplicity)` pairs.
    pub fn pairs(&self) -> Vec<(i64, i64)> {
        self.mults.iter().map(|(&k, &m)| (k, m)).collect()
    }

    pub fn negated(mut self) -> Self {
        for m in self.mults.values_mut() {
            *m = -*m;
        }
        self
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty()
    }

    /// Total multiplicity `Σ m_k`.
    pub fn total(&self) -> i64 {
        self.mults.values().sum()
    }

    /// Evaluate `∏ (s−k)^{m_k}`; exact integer hits on a root or pole are
    /// reported instead of returning 0 or infinity.
    pub fn eval(&self, s: f64) -> Result<f64, ZetaError> {
        for (&k, &m) in &self.mults {
            if s == k as f64 {
                return Err(ZetaError::AtRoot { k, mult: m });
            }
        }
        let mut v = 1.0;
        for (&k, &m) in &self.mults {
            v *= (s - k as f64).powi(m as i32);
        }
        Ok(v)
    }
}

impl fmt::Display for ZetaDivisor {
    /// Canonical rendering: ascending locations, every factor parenthesized,
    /// e.g. `(s)^-1 * (s-1)^-1`; the empty divisor is `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mults.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .mults
            .iter()
            .map(|(&k, &m)| {
                let base = match k.cmp(&0) {
                    std::cmp::Ordering::Equal => "(s)".to_string(),
                    std::cmp::Ordering::Greater => format!("(s-{k})"),
                    std::cmp::Ordering::Less => format!("(s+{})", -k),
                };
                format!("{base}^{m}")
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Divisor of the n-th tensor power of `(1 − 1/s)`: location `n−j` carries
/// `(−1)^j C(n,j)`; the 0-th power is the divisor of `s` itself.
pub fn kurokawa_power(n: usize) -> Result<ZetaDivisor, ZetaError> {
    if n == 0 {
        return Ok(ZetaDivisor::from_pairs(&[(0, 1)]));
    }
    if n > 40 {
        return Err(ZetaError::DimTooLarge(n));
    }
    let mut d = ZetaDivisor::default();
    for j in 0..=n {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        d.add((n - j) as i64, sign * binomial(n, j));
    }
    Ok(d)
}

/// `ζ` divisor from the counting polynomial: `N(x) = Σ a_k x^k` gives
/// `∏ (s−k)^{−a_k}`.
pub fn zeta_from_counting(n: &CountingPoly) -> Result<ZetaDivisor, ZetaError> {
    let coeffs = n.coefficients().ok_or(ZetaError::TorsionPresent)?;
    let mut d = ZetaDivisor::default();
    for (k, &a) in coeffs.iter().enumerate() {
        d.add(k as i64, -a);
    }
    Ok(d)
}

/// `ζ` divisor as the product over points of reciprocal tensor powers, one
/// factor of `(1 − 1/s)^{⊗ dim}` inverted per point.
pub fn zeta_from_scheme(x: &GeoScheme) -> Result<ZetaDivisor, ZetaError> {
    if x.points.iter().any(|p| !p.stalk_units.is_torsion_free()) {
        return Err(ZetaError::TorsionPresent);
    }
    let mut d = ZetaDivisor::default();
    for p in &x.points {
        for (k, m) in kurokawa_power(p.dim())?.pairs() {
            d.add(k, -m);
        }
    }
    Ok(d)
}

/// Polynomial extrapolation to 0 through all given `(x, y)` points.
fn neville_at_zero(pts: &[(f64, f64)]) -> f64 {
    let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let mut y: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let n = y.len();
    // in place: after each level, y[i] holds the interpolant through
    // points i..=i+level evaluated at 0
    for level in 1..n {
        for i in 0..n - level {
            y[i] = (-x[i + level] * y[i] + x[i] * y[i + 1]) / (x[i] - x[i + level]);
        }
    }
    y[0]
}

pub const SOULE_DEFAULT_EPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// The `q → 1` zeta limit: evaluate
/// `Z(q, q^{−s}) (q−1)^{N(1)}` with `log Z(q,T) = −Σ_k a_k log(1−q^k T)`
/// at `q = 1+ε` down the given sequence, extrapolating the last three values
/// to `ε = 0`.
pub fn soule_limit(n: &CountingPoly, s: f64, eps: &[f64]) -> Result<f64, ZetaError> {
    let coeffs = n.coefficients().ok_or(ZetaError::TorsionPresent)?;
    let deg = coeffs.len() - 1;
    if !(s > deg as f64) {
        return Err(ZetaError::OutOfRegion { s, deg });
    }
    assert!(eps.len() >= 3, "need at least three evaluation points");
    assert!(eps.windows(2).all(|w| w[0] > w[1] && w[1] > 0.0));
    let chi: i64 = coeffs.iter().sum();
    let pts: Vec<(f64, f64)> = eps
        .iter()
        .map(|&e| {
            let q = 1.0 + e;
            let mut logz = 0.0;
            for (k, &a) in coeffs.iter().enumerate() {
                logz -= a as f64 * (1.0 - q.powf(k as f64 - s)).ln();
            }
            (e, logz.exp() * (q - 1.0).powi(chi as i32))
        })
        .collect();
    Ok(neville_at_zero(&pts[pts.len() - 3..]))
}

/// `F(q,s) = Σ_{r≥1} N(q^r) q^{−rs} log q`, truncated when terms drop below
/// 1e−16 in magnitude.
pub fn fqs_riemann_sum(n: &CountingPoly, q: f64, s: f64) -> Result<f64, ZetaError> {
    let coeffs = n.coefficients().ok_or(ZetaError::TorsionPresent)?;
    let deg = coeffs.len() - 1;
    if !(s > deg as f64) || q <= 1.0 {
        return Err(ZetaError::OutOfRegion { s, deg });
    }
    let lq = q.ln();
    let mut sum = 0.0;
    for r in 1..u32::MAX {
        let x = q.powi(r as i32);
        let nval = coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &a| acc * x + a as f64);
        let term = nval * x.powf(-s) * lq;
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    Ok(sum)
}

/// The integral the Riemann sum converges to: `Σ_k a_k/(s−k)`.
pub fn fqs_integral(n: &CountingPoly, s: f64) -> Result<f64, ZetaError> {
    let coeffs = n.coefficients().ok_or(ZetaError::TorsionPresent)?;
    let deg = coeffs.len() - 1;
    if !(s > deg as f64) {
        return Err(ZetaError::OutOfRegion { s, deg });
    }
    Ok(coeffs
        .iter()
        .enumerate()
        .map(|(k, &a)| a as f64 / (s - k as f64))
        .sum())
}
