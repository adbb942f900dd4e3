//! Fixed verification suite: twelve numbered checks covering the geometry,
//! the counting bridge, and the analytic reconstruction, each with a frozen
//! tolerance. `run_all` is what `verify all` executes; the acceptance test
//! target runs the same checks one per test.

use std::borrow::Cow;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;
use std::time::Instant;

use crate::abelian::{gcd_u64, hom_count, smith_normalize, AbGroup, IntMatrix};
use crate::analytic::arith::PrimeSieve;
use crate::analytic::constants::{constants, Constants};
use crate::analytic::explicit::{
    density_remark, omega_partial, reconstruction_rows, sup_error, zero_sum_identities,
};
use crate::analytic::gamma::riemann_siegel_theta;
use crate::analytic::mellin::mellin_check;
use crate::analytic::zeros::{self, ZeroTable};
use crate::analytic::AnalyticError;
use crate::monoid::{self, set_len, FinMonoid, Ideal, MonoidInput, PrimeIdeal};
use crate::ringbridge::scheme_fq_points;
use crate::scheme::{
    counting_polynomial, cover_exactness, points_over_f1n, proj_line_points, realize, GeoScheme,
    SchemeDescriptor, SchemeError, SchemeKind,
};
use crate::zeta::{soule_limit, zeta_from_counting, zeta_from_scheme, SOULE_DEFAULT_EPS};

/// Outcome of one numbered check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: usize,
    pub label: &'static str,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "check {:02} {:<24} {} ({} ms) {}",
            self.id,
            self.label,
            if self.pass { "PASS" } else { "FAIL" },
            self.millis,
            self.detail
        )
    }
}

fn timed(
    id: usize,
    label: &'static str,
    f: impl FnOnce() -> Result<String, String>,
) -> CheckResult {
    let start = Instant::now();
    let out = f();
    let millis = start.elapsed().as_millis();
    match out {
        Ok(detail) => CheckResult { id, label, pass: true, detail, millis },
        Err(detail) => CheckResult { id, label, pass: false, detail, millis },
    }
}

/// Sup of |J_500 - J| on the check 9 grid, frozen from an oracle run of the
/// same code; the check allows 10% drift either way.
pub const GOLDEN_SUP_500: f64 = 0.256646;

fn shared_sieve() -> &'static PrimeSieve {
    static SIEVE: OnceLock<PrimeSieve> = OnceLock::new();
    SIEVE.get_or_init(|| PrimeSieve::new(10_000_000))
}

fn consts() -> Result<Constants, String> {
    constants().map_err(|e| e.to_string())
}

fn small_table(labels: &[&str], rows: &[&[usize]]) -> FinMonoid {
    FinMonoid::from_rows(labels, 0, 1, rows).expect("fixed table is valid")
}

/// {0, 1, e} with e idempotent: the smallest monoid with a non-closed,
/// non-generic point behaviour worth exercising.
fn three_idempotent() -> FinMonoid {
    small_table(&["0", "1", "e"], &[&[0, 0, 0], &[0, 1, 2], &[0, 2, 2]])
}

/// {0, 1, n} with n² = 0.
fn three_nilpotent() -> FinMonoid {
    small_table(&["0", "1", "n"], &[&[0, 0, 0], &[0, 1, 2], &[0, 2, 0]])
}

fn group_monoid(g: &AbGroup) -> FinMonoid {
    FinMonoid::f1_group(g).expect("group monoid construction")
}

/// Named monoids used alongside the exhaustive enumerations.
fn named_monoids() -> Vec<FinMonoid> {
    vec![
        FinMonoid::f1(),
        group_monoid(&AbGroup::cyclic(2)),
        group_monoid(&AbGroup::cyclic(3)),
        group_monoid(&AbGroup::cyclic(4)),
        group_monoid(&AbGroup::new(0, vec![2, 2]).expect("Z/2 x Z/2")),
        group_monoid(&AbGroup::cyclic(6)),
        three_idempotent(),
        three_nilpotent(),
    ]
}

fn err_str<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------
// check 1: zeta divisor routes

fn descriptor_list() -> Vec<(String, SchemeDescriptor)> {
    let mut out = vec![("P1".to_string(), SchemeDescriptor::P1)];
    for n in 1..=3 {
        out.push((format!("affine:{n}"), SchemeDescriptor::Affine(n)));
    }
    for r in 1..=3 {
        out.push((format!("torus:{r}"), SchemeDescriptor::Torus(r)));
    }
    out.push((
        "spec {0,1,e}".to_string(),
        SchemeDescriptor::Spec(MonoidInput::Fin(three_idempotent())),
    ));
    out
}

/// The projective line's divisor is exactly {0: -1, 1: -1}, and the divisor
/// computed from the glued space equals the one computed from the counting
/// polynomial, for every descriptor in the fixed list.
pub fn check_zeta_divisors() -> CheckResult {
    timed(1, "zeta divisor routes", || {
        let p1 = realize(&SchemeDescriptor::P1).map_err(err_str)?;
        let d1 = zeta_from_scheme(&p1).map_err(err_str)?;
        if d1.pairs() != vec![(0, -1), (1, -1)] {
            return Err(format!("projective line divisor came out as {d1}"));
        }
        let mut names = Vec::new();
        for (name, d) in descriptor_list() {
            let x = realize(&d).map_err(err_str)?;
            let via_scheme = zeta_from_scheme(&x).map_err(err_str)?;
            let poly = counting_polynomial(&x).map_err(err_str)?;
            let via_poly = zeta_from_counting(&poly).map_err(err_str)?;
            if via_scheme != via_poly {
                return Err(format!(
                    "{name}: scheme route {via_scheme} != counting route {via_poly}"
                ));
            }
            names.push(name);
        }
        Ok(format!(
            "{} schemes, both routes equal; P1 divisor {}",
            names.len(),
            d1
        ))
    })
}

// ---------------------------------------------------------------------------
// check 2: counting coherence

fn example_schemes() -> Vec<(String, SchemeDescriptor)> {
    let mut out = descriptor_list();
    for d in [2u64, 3, 4, 6] {
        out.push((format!("mu:{d}"), SchemeDescriptor::Mu(d)));
    }
    out.push((
        "spec {0,1,n}".to_string(),
        SchemeDescriptor::Spec(MonoidInput::Fin(three_nilpotent())),
    ));
    out.push((
        "spec F1[Z/2]".to_string(),
        SchemeDescriptor::Spec(MonoidInput::Fin(group_monoid(&AbGroup::cyclic(2)))),
    ));
    out
}

/// Count points of `x` over F_{1^n} by brute enumeration of the defining
/// hom set, with no reference to the stalk formula.
fn brute_f1n(x: &GeoScheme, n: u64) -> Result<u64, SchemeError> {
    let zn = FinMonoid::f1_group(&AbGroup::cyclic(n))?;
    Ok(match &x.kind {
        SchemeKind::P1 => proj_line_points(&zn)?.points.len() as u64,
        SchemeKind::AffineFin(m) => monoid::hom_set(m, &zn)?.len() as u64,
        SchemeKind::AffineSym(s) => monoid::sym_hom_set(s, &zn)?.len() as u64,
    })
}

/// Stalk-formula counts agree with brute hom enumeration for every example
/// scheme and n ≤ 6, and with N(n+1) when the counting function is a
/// polynomial.
pub fn check_counting_coherence() -> CheckResult {
    timed(2, "counting coherence", || {
        let mut checked = 0usize;
        for (name, d) in example_schemes() {
            let x = realize(&d).map_err(err_str)?;
            let poly = counting_polynomial(&x).map_err(err_str)?;
            for n in 1..=6u64 {
                let stalk = points_over_f1n(&x, n).map_err(err_str)?;
                let brute = brute_f1n(&x, n).map_err(err_str)?;
                if stalk != brute {
                    return Err(format!(
                        "{name} at n={n}: stalk formula {stalk} != enumeration {brute}"
                    ));
                }
                if poly.is_torsion_free() {
                    let nv = poly
                        .eval_i64(n as i64 + 1)
                        .ok_or_else(|| format!("{name}: polynomial eval failed"))?;
                    if nv != stalk as i64 {
                        return Err(format!(
                            "{name} at n={n}: N({}) = {nv} != count {stalk}",
                            n + 1
                        ));
                    }
                }
                checked += 1;
            }
        }
        Ok(format!("{checked} (scheme, n) pairs coherent"))
    })
}

// ---------------------------------------------------------------------------
// check 3: finite field bridge

/// Monoid-ring points over F_p equal N(p) for the torsion-free examples and
/// gcd(d, p-1) for the root-of-unity schemes, p in {2, 3, 5, 7}.
pub fn check_fq_bridge() -> CheckResult {
    timed(3, "finite field bridge", || {
        let primes = [2u64, 3, 5, 7];
        let mut checked = 0usize;
        for (name, d) in descriptor_list() {
            let x = realize(&d).map_err(err_str)?;
            let poly = counting_polynomial(&x).map_err(err_str)?;
            if !poly.is_torsion_free() {
                continue;
            }
            for p in primes {
                let got = scheme_fq_points(&d, p).map_err(err_str)?;
                let want = poly
                    .eval_i64(p as i64)
                    .ok_or_else(|| format!("{name}: polynomial eval failed"))?;
                if got as i64 != want {
                    return Err(format!("{name} over F_{p}: {got} != N({p}) = {want}"));
                }
                checked += 1;
            }
        }
        for p in primes {
            let got = scheme_fq_points(&SchemeDescriptor::P1, p).map_err(err_str)?;
            if got != p + 1 {
                return Err(format!("P1 over F_{p}: {got} != {}", p + 1));
            }
        }
        for d in 1..=8u64 {
            for p in primes {
                let got = scheme_fq_points(&SchemeDescriptor::Mu(d), p).map_err(err_str)?;
                let want = gcd_u64(d, p - 1);
                if got != want {
                    return Err(format!(
                        "mu:{d} over F_{p}: {got} != gcd({d}, {}) = {want}",
                        p - 1
                    ));
                }
                checked += 1;
            }
        }
        Ok(format!("{checked} (scheme, p) pairs match"))
    })
}

// ---------------------------------------------------------------------------
// check 4: soule limit

/// The q -> 1 limit of the counting zeta matches the divisor evaluation to
/// relative 1e-3 at s in {2.5, 3, 4} for five small counting polynomials.
pub fn check_soule_limits() -> CheckResult {
    timed(4, "soule limit", || {
        // (name, stalk dims): N = 1, x, x-1, x+1, x^2 in the variable x = q.
        let polys: [(&str, &[usize]); 5] = [
            ("1", &[0]),
            ("x", &[0, 1]),
            ("x-1", &[1]),
            ("x+1", &[0, 1, 0]),
            ("x^2", &[0, 1, 1, 2]),
        ];
        let mut worst: f64 = 0.0;
        for (name, dims) in polys {
            let poly = crate::scheme::CountingPoly::from_dims(dims);
            let divisor = zeta_from_counting(&poly).map_err(err_str)?;
            for s in [2.5f64, 3.0, 4.0] {
                let exact = divisor.eval(s).map_err(err_str)?;
                let limit = soule_limit(&poly, s, &SOULE_DEFAULT_EPS).map_err(err_str)?;
                let rel = (limit - exact).abs() / exact.abs();
                worst = worst.max(rel);
                if rel > 1e-3 {
                    return Err(format!(
                        "N = {name} at s = {s}: limit {limit:.9} vs divisor {exact:.9}, rel {rel:.2e}"
                    ));
                }
            }
        }
        Ok(format!("15 evaluations, worst relative error {worst:.2e}"))
    })
}

// ---------------------------------------------------------------------------
// check 5: projective line size

/// |P1(M)| = 2|M| - |units| for every monoid of size ≤ 5 plus the named
/// list, with every enumerated matrix class landing in a standard chart and
/// the chart overlap consisting of exactly the unit classes.
pub fn check_proj_line_sizes() -> CheckResult {
    timed(5, "projective line size", || {
        let mut corpus = monoid::enumerate_monoids(5);
        corpus.extend(named_monoids());
        let count = corpus.len();
        for m in &corpus {
            let report = proj_line_points(m).map_err(err_str)?;
            let (umask, _) = m.units();
            let want = 2 * m.size() - set_len(umask);
            if report.points.len() != want {
                return Err(format!(
                    "monoid of size {}: {} classes, expected {want}",
                    m.size(),
                    report.points.len()
                ));
            }
            if !report.all_ranges_classified {
                return Err(format!(
                    "monoid of size {}: unclassified matrix range",
                    m.size()
                ));
            }
            if report.overlap.len() != set_len(umask) {
                return Err(format!(
                    "monoid of size {}: overlap {} != unit count {}",
                    m.size(),
                    report.overlap.len(),
                    set_len(umask)
                ));
            }
        }
        Ok(format!("{count} monoids classified"))
    })
}

// ---------------------------------------------------------------------------
// check 6: cover locality

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if (mask.count_ones() as usize) <= k {
            out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

/// Hom sets are sheaf-exact for every unit-containing cover over the corpus,
/// subsets without a unit are rejected, and the only open set containing the
/// closed point is the whole space.
pub fn check_cover_locality() -> CheckResult {
    timed(6, "cover locality", || {
        let mut corpus = monoid::enumerate_monoids(4);
        corpus.extend(named_monoids().into_iter().filter(|m| m.size() <= 4));
        let tests = [
            FinMonoid::f1(),
            group_monoid(&AbGroup::cyclic(2)),
            three_idempotent(),
        ];
        let mut exact = 0usize;
        let mut rejected = 0usize;
        for m in &corpus {
            let (umask, _) = m.units();
            for f in subsets_up_to(m.size(), 3) {
                let has_unit = f.iter().any(|&x| umask >> x & 1 == 1);
                if !has_unit {
                    match cover_exactness(&tests[0], m, &f) {
                        Err(SchemeError::NotACover(_)) => rejected += 1,
                        other => {
                            return Err(format!(
                                "unit-free family on size-{} monoid not rejected: {other:?}",
                                m.size()
                            ))
                        }
                    }
                    continue;
                }
                for a in &tests {
                    let report = cover_exactness(a, m, &f).map_err(err_str)?;
                    if !report.pass {
                        return Err(format!(
                            "cover of size-{} monoid fails exactness: {}",
                            m.size(),
                            report.detail
                        ));
                    }
                    exact += 1;
                }
            }
            // Closed-point lemma: every open set containing the point of
            // non-units is the full space, so any cover includes it.
            let x = crate::scheme::spec_space(m).map_err(err_str)?;
            let closed = monoid::maximal_prime(m);
            let idx = x
                .point_of_prime(closed.members())
                .ok_or_else(|| "closed point missing from spectrum".to_string())?;
            let full = (1u64 << x.points.len()) - 1;
            for &o in &x.opens {
                if o >> idx & 1 == 1 && o != full {
                    return Err(format!(
                        "proper open {o:b} contains the closed point of a size-{} monoid",
                        m.size()
                    ));
                }
            }
        }
        Ok(format!(
            "{exact} exact covers, {rejected} unit-free families rejected, closed-point lemma on {} monoids",
            corpus.len()
        ))
    })
}

// ---------------------------------------------------------------------------
// check 7-9: zero table, identities, reconstruction

/// 500-zero table: from the shared in-process table when no cache path is
/// given, otherwise through the file cache.
fn obtain_table(cache: Option<&Path>) -> Result<Cow<'static, ZeroTable>, AnalyticError> {
    match cache {
        None => Ok(Cow::Borrowed(zeros::shared_zeros_500()?)),
        Some(path) => Ok(Cow::Owned(zeros::zeros_cached(500, Some(path))?)),
    }
}

fn zero_table_outcome(table: &ZeroTable) -> Result<String, String> {
    if table.len() < 500 {
        return Err(format!("only {} ordinates", table.len()));
    }
    // First three ordinates against their classical six-decimal values.
    let pins = [14.134725f64, 21.022040, 25.010858];
    let mut first_res: f64 = 0.0;
    for (k, &pin) in pins.iter().enumerate() {
        let diff = (table.heights[k] - pin).abs();
        first_res = first_res.max(diff);
        if diff > 1e-6 {
            return Err(format!(
                "ordinate {} = {:.9} differs from {pin} by {diff:.2e}",
                k + 1,
                table.heights[k]
            ));
        }
    }
    // Completeness: between consecutive ordinates the smooth counting form
    // theta/pi + 1 must sit within 1.5 of the index. A missed ordinate
    // shifts every later midpoint count by a full unit on top of the
    // bounded oscillation term, so it cannot stay inside the band.
    let mut max_disc: f64 = 0.0;
    for k in 0..499 {
        let mid = 0.5 * (table.heights[k] + table.heights[k + 1]);
        let n_smooth = riemann_siegel_theta(mid).map_err(err_str)? / std::f64::consts::PI + 1.0;
        let disc = (n_smooth - (k as f64 + 1.0)).abs();
        max_disc = max_disc.max(disc);
        if disc > 1.5 {
            return Err(format!(
                "count drift {disc:.3} at midpoint {mid:.6} after ordinate {}",
                k + 1
            ));
        }
    }
    Ok(format!(
        "500 ordinates; first three within {first_res:.2e}; max count drift {max_disc:.3}"
    ))
}

/// First three ordinates to 1e-6 and a complete, reconciled table of 500.
pub fn check_zero_table(cache: Option<&Path>) -> CheckResult {
    timed(7, "zero table", || {
        let table = obtain_table(cache).map_err(err_str)?;
        zero_table_outcome(&table)
    })
}

fn identity_outcome(table: &ZeroTable, c: &Constants) -> Result<String, String> {
    let zeros = table.heights.get(..500).ok_or("table shorter than 500")?;
    let report = zero_sum_identities(zeros, c);
    let omega1 = omega_partial(1.0, zeros).map_err(err_str)?;
    let omega_res = (omega1 - c.omega_one).abs();
    if omega_res > 5e-3 {
        return Err(format!(
            "omega(1) partial {omega1:.7} vs {:.7}, residual {omega_res:.2e}",
            c.omega_one
        ));
    }
    let max = report.max_residual();
    if max > 5e-3 {
        return Err(format!(
            "zero-sum residuals {:.2e} / {:.2e} / {:.2e} exceed 5e-3",
            report.inv_rho.residual, report.inv_rho_rho1.residual, report.inv_rho1.residual
        ));
    }
    Ok(format!(
        "omega(1) residual {omega_res:.2e}; identity residuals {:.2e} / {:.2e} / {:.2e}",
        report.inv_rho.residual, report.inv_rho_rho1.residual, report.inv_rho1.residual
    ))
}

/// The three convergent zero sums and the omega(1) value hit their
/// closed-form targets within 5e-3 at 500 pairs.
pub fn check_zero_sum_identities(table: &ZeroTable) -> CheckResult {
    timed(8, "zero sum identities", || {
        let c = consts()?;
        identity_outcome(table, &c)
    })
}

fn reconstruction_outcome(table: &ZeroTable, c: &Constants) -> Result<String, String> {
    let mut sups = Vec::new();
    for m in [20usize, 100, 500] {
        let zeros = table.heights.get(..m).ok_or("table too short")?;
        let rows = reconstruction_rows(zeros, c, 2.0, 10.0, 0.05).map_err(err_str)?;
        // Exclude a 0.1-neighbourhood of each prime power: the jump itself
        // is not where truncation quality is measured.
        sups.push(sup_error(&rows, 0.1));
    }
    if !(sups[0] > sups[1] && sups[1] > sups[2]) {
        return Err(format!(
            "sup errors {:.4} / {:.4} / {:.4} not strictly decreasing",
            sups[0], sups[1], sups[2]
        ));
    }
    let drift = (sups[2] - GOLDEN_SUP_500).abs() / GOLDEN_SUP_500;
    if !(drift <= 0.10) {
        return Err(format!(
            "m=500 sup {:.6} drifts {:.1}% from golden {GOLDEN_SUP_500:.6}",
            sups[2],
            drift * 100.0
        ));
    }
    Ok(format!(
        "sup errors {:.4} > {:.4} > {:.4}; golden drift {:.2}%",
        sups[0],
        sups[1],
        sups[2],
        drift * 100.0
    ))
}

/// Truncation error of the reconstruction on the [2, 10] grid decreases
/// strictly in the pair count and the 500-pair sup stays within 10% of the
/// frozen golden value.
pub fn check_reconstruction_error(table: &ZeroTable) -> CheckResult {
    timed(9, "reconstruction error", || {
        let c = consts()?;
        reconstruction_outcome(table, &c)
    })
}

// ---------------------------------------------------------------------------
// check 10: mellin identity

/// Prime side and archimedean side of the transform identity agree to 1e-3
/// at s = 2 and 1e-4 at s = 3 with cutoff 1e5.
pub fn check_mellin_identity() -> CheckResult {
    timed(10, "mellin identity", || {
        let c = consts()?;
        let sieve = shared_sieve();
        let r2 = mellin_check(2.0, 1e5, &c, sieve).map_err(err_str)?;
        if r2.residual > 1e-3 {
            return Err(format!("s=2 residual {:.2e} exceeds 1e-3", r2.residual));
        }
        let r3 = mellin_check(3.0, 1e5, &c, sieve).map_err(err_str)?;
        if r3.residual > 1e-4 {
            return Err(format!("s=3 residual {:.2e} exceeds 1e-4", r3.residual));
        }
        Ok(format!(
            "residuals {:.2e} at s=2, {:.2e} at s=3",
            r2.residual, r3.residual
        ))
    })
}

// ---------------------------------------------------------------------------
// check 11: density ratio

/// The scaled density just right of u = 1 sits in [0.85, 1.2] at eps = 1e-8,
/// approaches 1 monotonically along 1e-4, 1e-6, 1e-8, and is still far from
/// the band at 1e-2.
pub fn check_density_ratio() -> CheckResult {
    timed(11, "density ratio", || {
        let c = consts()?;
        let rows = density_remark(&[1e-2, 1e-4, 1e-6, 1e-8], &c).map_err(err_str)?;
        let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
        for (i, &r) in ratios.iter().enumerate() {
            if !(r < 1.0) {
                return Err(format!("ratio {r:.6} at row {i} not below 1"));
            }
        }
        for w in ratios[1..].windows(2) {
            if !((1.0 - w[1]).abs() < (1.0 - w[0]).abs()) {
                return Err(format!(
                    "|1 - ratio| not strictly decreasing: {:.6} then {:.6}",
                    w[0], w[1]
                ));
            }
        }
        let last = *ratios.last().expect("fixed eps list");
        if !(0.85..=1.2).contains(&last) {
            return Err(format!("ratio {last:.6} at eps=1e-8 outside [0.85, 1.2]"));
        }
        if ratios[0] >= 0.85 {
            return Err(format!(
                "ratio {:.6} at eps=1e-2 already inside the asymptotic band",
                ratios[0]
            ));
        }
        Ok(format!(
            "ratios {:.4} / {:.4} / {:.4} / {:.4}",
            ratios[0], ratios[1], ratios[2], ratios[3]
        ))
    })
}

// ---------------------------------------------------------------------------
// check 12: structural suites

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn det_selection(m: &IntMatrix, rsel: &[usize], csel: &[usize]) -> i64 {
    match rsel.len() {
        0 => 1,
        1 => m.entries[rsel[0] * m.cols + csel[0]],
        _ => {
            let mut acc = 0i64;
            let rest: Vec<usize> = rsel[1..].to_vec();
            for (j, &c) in csel.iter().enumerate() {
                let sub: Vec<usize> = csel
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .map(|(_, &x)| x)
                    .collect();
                let minor = det_selection(m, &rest, &sub);
                let term = m.entries[rsel[0] * m.cols + c] * minor;
                acc += if j % 2 == 0 { term } else { -term };
            }
            acc
        }
    }
}

/// Quotient structure of Z^cols by the rows, computed from determinantal
/// divisors (gcds of k-by-k minors): independent of the elimination in
/// `smith_normalize`.
fn minor_oracle(m: &IntMatrix) -> Result<AbGroup, String> {
    let mut g_prev = 1u64;
    let mut rank = 0usize;
    let mut torsion = Vec::new();
    for k in 1..=m.rows.min(m.cols) {
        let mut g = 0u64;
        for rsel in combinations(m.rows, k) {
            for csel in combinations(m.cols, k) {
                g = gcd_u64(g, det_selection(m, &rsel, &csel).unsigned_abs());
            }
        }
        if g == 0 {
            break;
        }
        rank = k;
        let d = g / g_prev;
        if d > 1 {
            torsion.push(d);
        }
        g_prev = g;
    }
    AbGroup::new(m.cols - rank, torsion).map_err(err_str)
}

fn snf_family(rows: usize, cols: usize, lo: i64, hi: i64) -> Result<usize, String> {
    let base = (hi - lo + 1) as usize;
    let cells = rows * cols;
    let total = base.pow(cells as u32);
    for code in 0..total {
        let mut c = code;
        let mut entries = Vec::with_capacity(cells);
        for _ in 0..cells {
            entries.push(lo + (c % base) as i64);
            c /= base;
        }
        let m = IntMatrix::new(rows, cols, entries).map_err(err_str)?;
        let got = smith_normalize(&m).map_err(err_str)?;
        let want = minor_oracle(&m)?;
        if got != want {
            return Err(format!(
                "{rows}x{cols} matrix {:?}: normalized {got:?}, minor oracle {want:?}",
                m.entries
            ));
        }
    }
    Ok(total)
}

/// Hom count by plain tuple enumeration: pick an image for every generator,
/// keep the tuples satisfying the torsion relations. Finite target only.
fn brute_hom_count(g: &AbGroup, h: &AbGroup) -> u64 {
    let moduli = h.torsion().to_vec();
    let mut elems: Vec<Vec<u64>> = vec![Vec::new()];
    for &m in &moduli {
        elems = elems
            .iter()
            .flat_map(|e| {
                (0..m).map(move |v| {
                    let mut x = e.clone();
                    x.push(v);
                    x
                })
            })
            .collect();
    }
    let mut rels: Vec<u64> = vec![0; g.rank()];
    rels.extend_from_slice(g.torsion());
    let gens = rels.len();
    let size = elems.len() as u64;
    let total = size.pow(gens as u32);
    let mut count = 0u64;
    for code in 0..total {
        let mut c = code;
        let mut ok = true;
        for &d in &rels {
            let img = &elems[(c % size) as usize];
            c /= size;
            if d != 0 && img.iter().zip(&moduli).any(|(&v, &m)| (d * v) % m != 0) {
                ok = false;
                break;
            }
        }
        if ok {
            count += 1;
        }
    }
    count
}

fn radical_matches_prime_intersection(m: &FinMonoid) -> Result<usize, String> {
    let primes = monoid::prime_ideals(m).map_err(err_str)?;
    let ideals = monoid::ideals(m).map_err(err_str)?;
    let n = ideals.len();
    for i in &ideals {
        let mask = i.members();
        let rad = monoid::radical(Ideal::new(m, mask).map_err(err_str)?);
        let mut inter = m.all_elements();
        for p in &primes {
            if mask & !p.members() == 0 {
                inter &= p.members();
            }
        }
        if rad.members() != inter {
            return Err(format!(
                "radical of {} is {}, prime intersection {}",
                m.set_to_string(mask),
                m.set_to_string(rad.members()),
                m.set_to_string(inter)
            ));
        }
    }
    Ok(n)
}

/// Normalization vs minor oracle on exhaustive small-matrix families, hom
/// counts vs tuple enumeration, radicals vs prime intersections, and prime
/// pullbacks along every hom in the corpus.
pub fn check_structural_suites() -> CheckResult {
    timed(12, "structural suites", || {
        let mut matrices = 0usize;
        for (rows, cols, lo, hi) in
            [(1, 1, -6i64, 6i64), (2, 2, -3, 3), (2, 3, -2, 2), (3, 2, -2, 2), (3, 3, -1, 1)]
        {
            matrices += snf_family(rows, cols, lo, hi)?;
        }

        let sources = [
            AbGroup::trivial(),
            AbGroup::cyclic(2),
            AbGroup::cyclic(3),
            AbGroup::cyclic(4),
            AbGroup::new(0, vec![2, 2]).map_err(err_str)?,
            AbGroup::cyclic(6),
            AbGroup::new(0, vec![2, 4]).map_err(err_str)?,
            AbGroup::free(1),
            AbGroup::free(2),
            AbGroup::new(1, vec![2]).map_err(err_str)?,
        ];
        let targets = [
            AbGroup::trivial(),
            AbGroup::cyclic(2),
            AbGroup::cyclic(3),
            AbGroup::cyclic(4),
            AbGroup::new(0, vec![2, 2]).map_err(err_str)?,
            AbGroup::cyclic(6),
            AbGroup::cyclic(8),
            AbGroup::new(0, vec![2, 4]).map_err(err_str)?,
        ];
        let mut hom_pairs = 0usize;
        for g in &sources {
            for h in &targets {
                let got = hom_count(g, h).map_err(err_str)?;
                let want = brute_hom_count(g, h);
                if got != want {
                    return Err(format!(
                        "hom count {got} != enumeration {want} for {g:?} -> {h:?}"
                    ));
                }
                hom_pairs += 1;
            }
        }
        if hom_count(&AbGroup::free(1), &AbGroup::free(1)).is_ok() {
            return Err("infinite hom set not rejected".to_string());
        }

        let mut corpus = monoid::enumerate_monoids(4);
        corpus.extend(named_monoids().into_iter().filter(|m| m.size() <= 4));
        let mut ideal_count = 0usize;
        for m in &corpus {
            ideal_count += radical_matches_prime_intersection(m)?;
        }

        let small: Vec<FinMonoid> = monoid::enumerate_monoids(3)
            .into_iter()
            .chain(named_monoids())
            .collect();
        let mut pullbacks = 0usize;
        for a in &small {
            for b in &small {
                let homs = monoid::hom_set(a, b).map_err(err_str)?;
                let primes = monoid::prime_ideals(b).map_err(err_str)?;
                for h in &homs {
                    for q in &primes {
                        let mask = (0..a.size())
                            .filter(|&x| q.members() >> h.apply(x) & 1 == 1)
                            .fold(0u64, |acc, x| acc | 1 << x);
                        PrimeIdeal::new(a, mask).map_err(|e| {
                            format!("pullback of a prime is not prime: {e}")
                        })?;
                        pullbacks += 1;
                    }
                    let max_pull: u64 = {
                        let q = monoid::maximal_prime(b);
                        (0..a.size())
                            .filter(|&x| q.members() >> h.apply(x) & 1 == 1)
                            .fold(0u64, |acc, x| acc | 1 << x)
                    };
                    if h.prime_preimage().members() != max_pull {
                        return Err("canonical pullback mismatch".to_string());
                    }
                }
            }
        }
        Ok(format!(
            "{matrices} matrices, {hom_pairs} hom pairs, {ideal_count} ideals, {pullbacks} prime pullbacks"
        ))
    })
}

// ---------------------------------------------------------------------------

/// Run the full suite in order. Checks 8 and 9 reuse the table built for
/// check 7, so its cost is paid once.
pub fn run_all(cache: Option<&Path>) -> Vec<CheckResult> {
    let mut out = vec![
        check_zeta_divisors(),
        check_counting_coherence(),
        check_fq_bridge(),
        check_soule_limits(),
        check_proj_line_sizes(),
        check_cover_locality(),
    ];
    let start = Instant::now();
    match obtain_table(cache) {
        Ok(table) => {
            let millis = start.elapsed().as_millis();
            let outcome = zero_table_outcome(&table);
            out.push(match outcome {
                Ok(detail) => CheckResult { id: 7, label: "zero table", pass: true, detail, millis },
                Err(detail) => CheckResult { id: 7, label: "zero table", pass: false, detail, millis },
            });
            out.push(check_zero_sum_identities(&table));
            out.push(check_reconstruction_error(&table));
        }
        Err(e) => {
            let millis = start.elapsed().as_millis();
            for (id, label) in [
                (7, "zero table"),
                (8, "zero sum identities"),
                (9, "reconstruction error"),
            ] {
                out.push(CheckResult {
                    id,
                    label,
                    pass: false,
                    detail: format!("zero table unavailable: {e}"),
                    millis,
                });
            }
        }
    }
    out.push(check_mellin_identity());
    out.push(check_density_ratio());
    out.push(check_structural_suites());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structural_checks_pass() {
        for r in [
            check_zeta_divisors(),
            check_counting_coherence(),
            check_fq_bridge(),
            check_soule_limits(),
            check_cover_locality(),
            check_density_ratio(),
        ] {
            assert!(r.pass, "{r}");
        }
    }

    #[test]
    fn minor_oracle_known_cases() {
        // diag(2, 6) as relations on Z^2: quotient Z/2 + Z/6.
        let m = IntMatrix::new(2, 2, vec![2, 0, 0, 6]).unwrap();
        assert_eq!(minor_oracle(&m).unwrap(), AbGroup::new(0, vec![2, 6]).unwrap());
        // one relation 2x + 4y = 0 on Z^2: quotient Z + Z/2.
        let m = IntMatrix::new(1, 2, vec![2, 4]).unwrap();
        assert_eq!(minor_oracle(&m).unwrap(), AbGroup::new(1, vec![2]).unwrap());
        // zero matrix: nothing collapses.
        let m = IntMatrix::new(2, 2, vec![0, 0, 0, 0]).unwrap();
        assert_eq!(minor_oracle(&m).unwrap(), AbGroup::free(2));
    }

    #[test]
    fn brute_hom_count_known_cases() {
        assert_eq!(brute_hom_count(&AbGroup::cyclic(4), &AbGroup::cyclic(6)), 2);
        assert_eq!(brute_hom_count(&AbGroup::free(1), &AbGroup::cyclic(5)), 5);
        assert_eq!(
            brute_hom_count(&AbGroup::new(0, vec![2, 2]).unwrap(), &AbGroup::cyclic(4)),
            4
        );
    }

    // Pins for the frozen constants in checks 8 and 9: run with --ignored
    // --nocapture. Prints the 500-pair sup on the check grid and the
    // residual picture at 1000 pairs next to 500.
    #[test]
    #[ignore]
    fn oracle_pins() {
        let c = constants().unwrap();
        let table = zeros::find_zeros(1000).unwrap();
        for m in [500usize, 1000] {
            let zeros = &table.heights[..m];
            let report = zero_sum_identities(zeros, &c);
            let omega1 = omega_partial(1.0, zeros).unwrap();
            println!(
                "m={m}: omega(1) residual {:.3e}, identity residuals {:.3e} / {:.3e} / {:.3e}",
                (omega1 - c.omega_one).abs(),
                report.inv_rho.residual,
                report.inv_rho_rho1.residual,
                report.inv_rho1.residual
            );
        }
        for m in [20usize, 100, 500] {
            let rows = reconstruction_rows(&table.heights[..m], &c, 2.0, 10.0, 0.05).unwrap();
            println!("m={m}: sup {:.6}", sup_error(&rows, 0.1));
        }
    }
}
