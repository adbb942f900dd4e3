//! Critical-line zeros of zeta: Hardy Z scanning, bisection refinement, and
//! reconciliation of the count against the theta-based counting form.
//!
//! The scan grid is global (t = 6 + 0.04 k) and split into fixed chunks, so
//! the bracket list is identical whether chunks run in parallel or not.

use std::f64::consts::PI;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::gamma::{riemann_siegel_theta, theta_deriv};
use super::zeta_em::EvalCtx;
use super::AnalyticError;
use crate::par;

pub const MAX_ZEROS: usize = 1000;
const SCAN_START: f64 = 6.0;
const SCAN_STEP: f64 = 0.04;
const CHUNK_STEPS: usize = 1000;
const PRECISION: f64 = 1e-10;

/// Hardy Z(t) = Re(e^{i theta(t)} zeta(1/2 + it)); real zeros of Z are the
/// ordinates of the critical-line zeros.
pub fn hardy_z(ctx: &EvalCtx, t: f64) -> Result<f64, AnalyticError> {
    let theta = riemann_siegel_theta(t)?;
    Ok((Complex64::new(0.0, theta).exp() * ctx.zeta_half(t)).re)
}

#[derive(Debug, Clone)]
pub struct ZeroTable {
    /// Ordinates, strictly increasing.
    pub heights: Vec<f64>,
    /// Interval around each ordinate on which a sign change was verified.
    pub brackets: Vec<(f64, f64)>,
    /// Width below which bisection stopped.
    pub precision: f64,
}

impl ZeroTable {
    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    /// The first `m` ordinates.
    pub fn first(&self, m: usize) -> Result<&[f64], AnalyticError> {
        if self.heights.len() < m {
            return Err(AnalyticError::TableTooSmall {
                have: self.heights.len(),
                need: m,
            });
        }
        Ok(&self.heights[..m])
    }
}

/// Newton solve of theta(t) = target; theta is increasing and convex on the
/// relevant range, so iteration from the left converges.
fn solve_theta(target: f64) -> Result<f64, AnalyticError> {
    let mut t = 20.0f64;
    for _ in 0..200 {
        let err = riemann_siegel_theta(t)? - target;
        let step = err / theta_deriv(t)?;
        t = (t - step).max(10.0);
        if step.abs() < 1e-9 {
            return Ok(t);
        }
    }
    Err(AnalyticError::Convergence(format!(
        "theta inversion stalled at target {target}"
    )))
}

/// Expected zero count below t from the counting form theta/pi + 1; the
/// deviation S(t) has magnitude below ~1 in the working range, and a missed
/// pair of zeros shifts the count by exactly 2.
fn expected_count(t: f64) -> Result<f64, AnalyticError> {
    Ok(riemann_siegel_theta(t)? / PI + 1.0)
}

/// Sign-change cells of f on the grid lo..=hi (t = start + i*h), evaluated
/// in index order by one worker.
fn scan_cells<F: Fn(f64) -> f64 + Sync>(
    f: &F,
    start: f64,
    h: f64,
    lo: usize,
    hi: usize,
) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut prev = f(start + lo as f64 * h);
    for i in lo + 1..=hi {
        let t = start + i as f64 * h;
        let cur = f(t);
        if (prev < 0.0) != (cur < 0.0) {
            out.push((start + (i - 1) as f64 * h, t));
        }
        prev = cur;
    }
    out
}

fn count_upto(chunks: &[Vec<(f64, f64)>], t: f64) -> usize {
    chunks
        .iter()
        .flatten()
        .take_while(|b| b.1 <= t)
        .count()
}

/// Bisect a verified sign-change bracket down to `PRECISION`.
fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        // grid point exactly on a zero: nudge by a hair
        lo -= 1e-12;
        f_lo = f(lo);
    }
    for _ in 0..64 {
        if hi - lo < PRECISION {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Locate the first `m` zeros.  The scan reconciles the cumulative bracket
/// count against the counting form at every chunk boundary; a discrepancy
/// beyond the S(t) budget triggers a finer rescan of just that chunk, and a
/// persistent discrepancy is an error, never a silently short table.
pub fn find_zeros(m: usize) -> Result<ZeroTable, AnalyticError> {
    if m == 0 || m > MAX_ZEROS {
        return Err(AnalyticError::Domain(format!(
            "zero count must be in 1..={MAX_ZEROS}, got {m}"
        )));
    }
    // aim three zeros past the request so the final reconciliation has a gap
    // midpoint to probe
    let t_end = solve_theta((m as f64 + 2.0) * PI)? + 1.0;
    let ctx = EvalCtx::new(t_end + 2.0)?;
    let z = |t: f64| hardy_z(&ctx, t).expect("scan range stays inside the theta domain");

    let total_steps = ((t_end - SCAN_START) / SCAN_STEP).ceil() as usize;
    let n_chunks = total_steps.div_ceil(CHUNK_STEPS);
    let chunk_hi = |c: usize| ((c + 1) * CHUNK_STEPS).min(total_steps);

    let mut chunks: Vec<Vec<(f64, f64)>> = par::map_range(n_chunks, |c| {
        scan_cells(&z, SCAN_START, SCAN_STEP, c * CHUNK_STEPS, chunk_hi(c))
    });

    // Reconciliation at chunk ends.  |S| <= 1 passes outright; a localized
    // excursion slightly past 1 is accepted only if the count two units
    // earlier reconciles, which a missed pair (global shift by 2) cannot do.
    for c in 0..n_chunks {
        let end_t = SCAN_START + chunk_hi(c) as f64 * SCAN_STEP;
        let mut ok = false;
        for refine in [1usize, 4, 16] {
            if refine > 1 {
                let h = SCAN_STEP / refine as f64;
                chunks[c] = scan_cells(
                    &z,
                    SCAN_START,
                    h,
                    c * CHUNK_STEPS * refine,
                    chunk_hi(c) * refine,
                );
            }
            let disc = count_upto(&chunks, end_t) as f64 - expected_count(end_t)?;
            if disc.abs() <= 1.0 {
                ok = true;
                break;
            }
            if disc.abs() <= 1.6 {
                let shifted = end_t - 2.0;
                let sdisc = count_upto(&chunks, shifted) as f64 - expected_count(shifted)?;
                if sdisc.abs() <= 1.0 {
                    ok = true;
                    break;
                }
            }
        }
        if !ok {
            let disc = count_upto(&chunks, end_t) as f64 - expected_count(end_t)?;
            return Err(AnalyticError::MissedZeros(format!(
                "count off by {disc:.2} at t = {end_t:.2} after refining to step {}",
                SCAN_STEP / 16.0
            )));
        }
    }

    let all: Vec<(f64, f64)> = chunks.into_iter().flatten().collect();
    if all.len() < m + 1 {
        return Err(AnalyticError::MissedZeros(format!(
            "scan to t = {t_end:.2} produced {} brackets, need {}",
            all.len(),
            m + 1
        )));
    }
    let refined = par::map_range(all.len(), |i| bisect(&z, all[i].0, all[i].1));
    let heights: Vec<f64> = refined.iter().map(|b| 0.5 * (b.0 + b.1)).collect();
    for w in heights.windows(2) {
        if w[1] <= w[0] {
            return Err(AnalyticError::MissedZeros(format!(
                "ordinates out of order near t = {}",
                w[0]
            )));
        }
    }

    // final check: at the midpoint of the gap after zero m the rounded
    // counting form must agree with m to within the S budget
    let mid = 0.5 * (heights[m - 1] + heights[m]);
    let disc = m as f64 - expected_count(mid)?;
    if disc.abs() > 1.5 {
        return Err(AnalyticError::MissedZeros(format!(
            "final reconciliation off by {disc:.2} at t = {mid:.2}"
        )));
    }

    Ok(ZeroTable {
        heights: heights[..m].to_vec(),
        brackets: refined[..m].to_vec(),
        precision: PRECISION,
    })
}

/// Cache layout: a header line "zeros v1 count=<m> prec=1e-10" followed by
/// one fixed-point ordinate per line.
pub fn save_cache(path: &Path, table: &ZeroTable) -> Result<(), AnalyticError> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "zeros v1 count={} prec=1e-10", table.heights.len())?;
    for t in &table.heights {
        writeln!(w, "{t:.10}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_cache(path: &Path) -> Result<ZeroTable, AnalyticError> {
    let file = std::fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| AnalyticError::Cache("empty file".into()))??;
    let mut count: Option<usize> = None;
    let mut prec: Option<f64> = None;
    let mut words = header.split_whitespace();
    if words.next() != Some("zeros") || words.next() != Some("v1") {
        return Err(AnalyticError::Cache(format!("bad header: {header}")));
    }
    for w in words {
        if let Some(v) = w.strip_prefix("count=") {
            count = v.parse().ok();
        } else if let Some(v) = w.strip_prefix("prec=") {
            prec = v.parse().ok();
        }
    }
    let (count, prec) = match (count, prec) {
        (Some(c), Some(p)) if p > 0.0 => (c, p),
        _ => return Err(AnalyticError::Cache(format!("bad header: {header}"))),
    };
    let mut heights = Vec::with_capacity(count);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let t: f64 = line
            .trim()
            .parse()
            .map_err(|_| AnalyticError::Cache(format!("bad ordinate line: {line}")))?;
        heights.push(t);
    }
    if heights.len() != count {
        return Err(AnalyticError::Cache(format!(
            "header promises {count} ordinates, file has {}",
            heights.len()
        )));
    }
    for w in heights.windows(2) {
        if w[1] <= w[0] {
            return Err(AnalyticError::Cache("ordinates not increasing".into()));
        }
    }
    let brackets = heights.iter().map(|&t| (t - 1e-6, t + 1e-6)).collect();
    Ok(ZeroTable {
        heights,
        brackets,
        precision: prec,
    })
}

/// Load from cache when it is valid and large enough, verifying a sign
/// change around every cached ordinate; otherwise recompute and, when a
/// path is given, rewrite the cache.
pub fn zeros_cached(m: usize, cache: Option<&Path>) -> Result<ZeroTable, AnalyticError> {
    if let Some(path) = cache {
        if path.exists() {
            if let Ok(table) = load_cache(path) {
                if table.heights.len() >= m && verify_table(&table).is_ok() {
                    return Ok(ZeroTable {
                        heights: table.heights[..m].to_vec(),
                        brackets: table.brackets[..m].to_vec(),
                        precision: table.precision,
                    });
                }
            }
        }
    }
    let table = find_zeros(m)?;
    if let Some(path) = cache {
        save_cache(path, &table)?;
    }
    Ok(table)
}

static SHARED_500: OnceLock<ZeroTable> = OnceLock::new();

/// Process-wide 500-zero table backing the fixed verification suite; built
/// once, shared by every caller.
pub fn shared_zeros_500() -> Result<&'static ZeroTable, AnalyticError> {
    if let Some(t) = SHARED_500.get() {
        return Ok(t);
    }
    let t = find_zeros(500)?;
    Ok(SHARED_500.get_or_init(|| t))
}

/// Re-verify a loaded table: every bracket must change sign.
pub fn verify_table(table: &ZeroTable) -> Result<(), AnalyticError> {
    let top = match table.heights.last() {
        Some(&t) => t,
        None => return Ok(()),
    };
    let ctx = EvalCtx::new(top + 2.0)?;
    for (i, &(lo, hi)) in table.brackets.iter().enumerate() {
        let a = hardy_z(&ctx, lo)?;
        let b = hardy_z(&ctx, hi)?;
        if (a < 0.0) == (b < 0.0) {
            return Err(AnalyticError::Cache(format!(
                "no sign change around cached ordinate {} ({})",
                i + 1,
                table.heights[i]
            )));
        }
    }
    Ok(())
}
