//! Geometric spaces built from monoid spectra.
//!
//! A space here is a finite set of points, each carrying the unit group of
//! its local stalk, together with an explicit open-set lattice. That is all
//! the structure the counting and zeta layers consume: the local dimension of
//! a point is the free rank of its stalk units, and points over `F₁ⁿ` are
//! counted by summing hom counts into `Z/n` across stalks.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::abelian::{self, AbGroup, AbelianError};
use crate::monoid::{
    self, ElemSet, FinMonoid, Ideal, Localization, MonoidError, MonoidHom, MonoidInput, SymHom,
    SymMonoid,
};

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("bad descriptor: {0}")]
    BadDescriptor(String),
    #[error("opens do not form a topology: {0}")]
    NotATopology(String),
    #[error("points {0} and {1} are topologically indistinguishable")]
    NotT0(usize, usize),
    #[error("not a cover: {0}")]
    NotACover(String),
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

/// What a space was built from.
#[derive(Debug, Clone)]
pub enum SchemeKind {
    AffineFin(FinMonoid),
    AffineSym(SymMonoid),
    P1,
}

#[derive(Debug, Clone)]
pub struct SchemePoint {
    pub label: String,
    pub stalk_units: AbGroup,
    /// Prime of the coordinate monoid, for affine spaces over a finite monoid.
    pub prime: Option<ElemSet>,
}

impl SchemePoint {
    /// Local dimension: free rank of the stalk unit group.
    pub fn dim(&self) -> usize {
        self.stalk_units.rank()
    }
}

/// A finite space: points with stalk unit groups and an explicit topology.
#[derive(Debug, Clone)]
pub struct GeoScheme {
    pub kind: SchemeKind,
    pub points: Vec<SchemePoint>,
    /// Open sets as bitmasks over point indices, ascending by (size, mask).
    pub opens: Vec<u64>,
}

impl GeoScheme {
    pub fn new(
        kind: SchemeKind,
        points: Vec<SchemePoint>,
        mut opens: Vec<u64>,
    ) -> Result<Self, SchemeError> {
        let n = points.len();
        if n == 0 || n > 63 {
            return Err(SchemeError::BadDescriptor(format!("{n} points")));
        }
        let full: u64 = (1 << n) - 1;
        opens.sort_unstable_by_key(|&m| (m.count_ones(), m));
        opens.dedup();
        if opens.first() != Some(&0) {
            return Err(SchemeError::NotATopology("missing empty set".into()));
        }
        if opens.last() != Some(&full) {
            return Err(SchemeError::NotATopology("missing whole space".into()));
        }
        let set: HashSet<u64> = opens.iter().copied().collect();
        for &a in &opens {
            for &b in &opens {
                if !set.contains(&(a | b)) {
                    return Err(SchemeError::NotATopology(format!(
                        "union {a:b}|{b:b} missing"
                    )));
                }
                if !set.contains(&(a & b)) {
                    return Err(SchemeError::NotATopology(format!(
                        "intersection {a:b}&{b:b} missing"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if opens
                    .iter()
                    .all(|&o| (o >> i) & 1 == (o >> j) & 1)
                {
                    return Err(SchemeError::NotT0(i, j));
                }
            }
        }
        Ok(GeoScheme { kind, points, opens })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.points.iter().map(SchemePoint::dim).collect()
    }

    /// Index of the affine point with the given prime.
    pub fn point_of_prime(&self, mask: ElemSet) -> Option<usize> {
        self.points.iter().position(|p| p.prime == Some(mask))
    }
}

/// The spectrum of a finite monoid as a space.
///
/// Points are the primes ascending by (size, mask); opens are the sets
/// `D(I) = {p : I ⊄ p}` over all ideals; the stalk at `p` is the unit group
/// of the localization away from `p`.
pub fn spec_space(m: &FinMonoid) -> Result<GeoScheme, SchemeError> {
    let primes = monoid::prime_ideals(m)?;
    let mut points = Vec::with_capacity(primes.len());
    for p in &primes {
        let s = m.all_elements() & !p.members();
        let loc = monoid::localize(m, s)?;
        let (_, units) = loc.monoid.units();
        points.push(SchemePoint {
            label: m.set_to_string(p.members()),
            stalk_units: units,
            prime: Some(p.members()),
        });
    }
    let mut opens: Vec<u64> = Vec::new();
    for i in monoid::ideals(m)? {
        let mut mask = 0u64;
        for (idx, p) in primes.iter().enumerate() {
            if i.members() & !p.members() != 0 {
                mask |= 1 << idx;
            }
        }
        opens.push(mask);
    }
    GeoScheme::new(SchemeKind::AffineFin(m.clone()), points, opens)
}

/// The spectrum of a symbolic monoid.
///
/// `F₁[H]` has the single prime `{0}` with stalk units `H`. The free monoid
/// on `n` generators has one prime per generator subset `J` (the monomials
/// touching `J`), stalk units `Z^(n−|J|)`, and opens the down-sets of the
/// subset lattice; `n` is capped at 4 to keep that lattice explicit.
pub fn spec_space_sym(s: &SymMonoid) -> Result<GeoScheme, SchemeError> {
    match s {
        SymMonoid::F1Group(g) => {
            let points = vec![SchemePoint {
                label: "{0}".to_string(),
                stalk_units: g.clone(),
                prime: None,
            }];
            GeoScheme::new(SchemeKind::AffineSym(s.clone()), points, vec![0, 1])
        }
        SymMonoid::FreeMonoid(n) => {
            let n = *n;
            if n == 0 || n > 4 {
                return Err(SchemeError::BadDescriptor(format!(
                    "free rank {n} outside 1..=4"
                )));
            }
            let mut subsets: Vec<u32> = (0..(1u32 << n)).collect();
            subsets.sort_unstable_by_key(|&j| (j.count_ones(), j));
            let points: Vec<SchemePoint> = subsets
                .iter()
                .map(|&j| {
                    let gens: Vec<String> = (0..n)
                        .filter(|&i| j >> i & 1 == 1)
                        .map(|i| format!("T{}", i + 1))
                        .collect();
                    let label = if gens.is_empty() {
                        "{0}".to_string()
                    } else {
                        format!("({})", gens.join(","))
                    };
                    SchemePoint {
                        label,
                        stalk_units: AbGroup::free(n - j.count_ones() as usize),
                        prime: None,
                    }
                })
                .collect();
            // opens are exactly the down-sets: if a prime is in an open, so
            // is every prime over a smaller generator subset
            let k = points.len();
            let mut opens = Vec::new();
            for mask in 0u64..(1 << k) {
                let mut down_closed = true;
                'outer: for a in 0..k {
                    if mask >> a & 1 == 0 {
                        continue;
                    }
                    for b in 0..k {
                        if subsets[b] & subsets[a] == subsets[b] && mask >> b & 1 == 0 {
                            down_closed = false;
                            break 'outer;
                        }
                    }
                }
                if down_closed {
                    opens.push(mask);
                }
            }
            GeoScheme::new(SchemeKind::AffineSym(s.clone()), points, opens)
        }
    }
}

/// The projective line as a space: points 0, u, ∞ with dims 0, 1, 0 and the
/// five opens ∅, {u}, {0,u}, {u,∞}, X.
pub fn p1_space() -> GeoScheme {
    let points = vec![
        SchemePoint { label: "0".into(), stalk_units: AbGroup::trivial(), prime: None },
        SchemePoint { label: "u".into(), stalk_units: AbGroup::free(1), prime: None },
        SchemePoint { label: "inf".into(), stalk_units: AbGroup::trivial(), prime: None },
    ];
    let opens = vec![0b000, 0b010, 0b011, 0b110, 0b111];
    GeoScheme::new(SchemeKind::P1, points, opens).expect("static topology")
}

/// Realization descriptor for the named spaces.
#[derive(Debug, Clone)]
pub enum SchemeDescriptor {
    P1,
    /// Affine space of dimension `n ≥ 1` (spectrum of the free monoid).
    Affine(usize),
    /// Split torus of rank `r ≥ 1`.
    Torus(usize),
    /// Roots of unity of order `d ≥ 1`.
    Mu(u64),
    Spec(MonoidInput),
}

pub fn realize(d: &SchemeDescriptor) -> Result<GeoScheme, SchemeError> {
    match d {
        SchemeDescriptor::P1 => Ok(p1_space()),
        SchemeDescriptor::Affine(n) => spec_space_sym(&SymMonoid::FreeMonoid(*n)),
        SchemeDescriptor::Torus(r) => {
            if *r == 0 {
                return Err(SchemeError::BadDescriptor("torus rank 0".into()));
            }
            spec_space_sym(&SymMonoid::F1Group(AbGroup::free(*r)))
        }
        SchemeDescriptor::Mu(d) => {
            if *d == 0 {
                return Err(SchemeError::BadDescriptor("mu order 0".into()));
            }
            spec_space_sym(&SymMonoid::F1Group(AbGroup::cyclic(*d)))
        }
        SchemeDescriptor::Spec(MonoidInput::Fin(m)) => spec_space(m),
        SchemeDescriptor::Spec(MonoidInput::Sym(s)) => spec_space_sym(s),
    }
}

/// Parse the scheme descriptor wire format, for example
/// `{"scheme":"affine","n":2}` or `{"scheme":"spec","monoid":{...}}`.
pub fn parse_scheme_json(text: &str) -> Result<SchemeDescriptor, SchemeError> {
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| SchemeError::BadDescriptor(e.to_string()))?;
    let tag = v
        .get("scheme")
        .and_then(|t| t.as_str())
        .ok_or_else(|| SchemeError::BadDescriptor("missing \"scheme\" tag".into()))?;
    let field = |name: &str| -> Result<u64, SchemeError> {
        v.get(name)
            .and_then(|x| x.as_u64())
            .ok_or_else(|| SchemeError::BadDescriptor(format!("missing \"{name}\"")))
    };
    match tag {
        "P1" => Ok(SchemeDescriptor::P1),
        "affine" => Ok(SchemeDescriptor::Affine(field("n")? as usize)),
        "torus" => Ok(SchemeDescriptor::Torus(field("r")? as usize)),
        "mu" => Ok(SchemeDescriptor::Mu(field("d")?)),
        "spec" => {
            let m = v
                .get("monoid")
                .ok_or_else(|| SchemeError::BadDescriptor("missing \"monoid\"".into()))?;
            Ok(SchemeDescriptor::Spec(monoid::parse_monoid_json(&m.to_string())?))
        }
        other => Err(SchemeError::BadDescriptor(format!("unknown scheme {other:?}"))),
    }
}

/// Number of points over `F₁ⁿ`: sum over points of hom counts into `Z/n`.
pub fn points_over_f1n(x: &GeoScheme, n: u64) -> Result<u64, SchemeError> {
    if n == 0 {
        return Err(SchemeError::BadDescriptor("n must be >= 1".into()));
    }
    let zn = AbGroup::cyclic(n);
    let mut total = 0u64;
    for p in &x.points {
        total += abelian::hom_count(&p.stalk_units, &zn)?;
    }
    Ok(total)
}

/// Counting data of a space: the exact counter always, the polynomial
/// `N(x) = Σ a_k x^k` when every stalk unit group is torsion-free.
#[derive(Debug, Clone)]
pub struct CountingPoly {
    stalks: Vec<AbGroup>,
    coeffs: Option<Vec<i64>>,
}

/// Expand `Σ_dims (x−1)^dim` into coefficients of powers of `x`.
fn expand_dims(dims: &[usize]) -> Vec<i64> {
    let maxr = dims.iter().copied().max().unwrap_or(0);
    let mut c = vec![0i64; maxr + 1];
    for &r in dims {
        for (k, ck) in c.iter_mut().enumerate().take(r + 1) {
            let sign = if (r - k) % 2 == 0 { 1 } else { -1 };
            *ck += sign * binomial(r, k);
        }
    }
    while c.len() > 1 && *c.last().unwrap() == 0 {
        c.pop();
    }
    c
}

impl CountingPoly {
    /// Counting data of a torsion-free space given only its point dimensions.
    pub fn from_dims(dims: &[usize]) -> CountingPoly {
        let stalks: Vec<AbGroup> = dims.iter().map(|&r| AbGroup::free(r)).collect();
        CountingPoly { stalks, coeffs: Some(expand_dims(dims)) }
    }

    pub fn raw_count(&self, n: u64) -> Result<u64, AbelianError> {
        let zn = AbGroup::cyclic(n);
        let mut total = 0u64;
        for g in &self.stalks {
            total += abelian::hom_count(g, &zn)?;
        }
        Ok(total)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.coeffs.is_some()
    }

    /// Coefficients of `N(x)`, constant term first.
    pub fn coefficients(&self) -> Option<&[i64]> {
        self.coeffs.as_deref()
    }

    pub fn eval_i64(&self, x: i64) -> Option<i64> {
        let c = self.coeffs.as_ref()?;
        Some(c.iter().rev().fold(0i64, |acc, &a| acc * x + a))
    }

    pub fn eval_f64(&self, x: f64) -> Option<f64> {
        let c = self.coeffs.as_ref()?;
        Some(c.iter().rev().fold(0.0, |acc, &a| acc * x + a as f64))
    }

    /// Degree of `N`, when polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.as_ref().map(|c| c.len().saturating_sub(1))
    }
}

pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let mut r = 1i64;
    for i in 0..k.min(n - k) {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}

/// Counting data for a space.
///
/// Torsion-free case: `P(y) = Σ_x y^(dim x)` and `N(x) = P(x−1)`, expanded by
/// the binomial theorem. The polynomial is cross-checked against the exact
/// counter at n ≤ 12 before being returned.
pub fn counting_polynomial(x: &GeoScheme) -> Result<CountingPoly, SchemeError> {
    let stalks: Vec<AbGroup> = x.points.iter().map(|p| p.stalk_units.clone()).collect();
    let coeffs = if stalks.iter().all(AbGroup::is_torsion_free) {
        let dims: Vec<usize> = stalks.iter().map(AbGroup::rank).collect();
        Some(expand_dims(&dims))
    } else {
        None
    };
    let poly = CountingPoly { stalks, coeffs };
    if poly.is_torsion_free() {
        for n in 1..=12u64 {
            let raw = poly.raw_count(n)?;
            let fit = poly.eval_i64(n as i64 + 1).expect("coeffs present");
            if fit < 0 || fit as u64 != raw {
                return Err(SchemeError::Mismatch(format!(
                    "polynomial N({}) = {fit} but exact count is {raw}",
                    n + 1
                )));
            }
        }
    }
    Ok(poly)
}

/// Which standard chart a projective-line point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum P1Chart {
    Zero,
    Unit,
    Infinity,
}

/// The projective line over a finite monoid, by matrix enumeration.
#[derive(Debug, Clone)]
pub struct ProjLineReport {
    /// Distinct ranges, canonically ordered; each is a set of pairs in `M²`.
    pub points: Vec<BTreeSet<(usize, usize)>>,
    /// Chart classification per point.
    pub chart: Vec<P1Chart>,
    /// Point index of `e₁(a) = [[1,0],[a,0]]`, indexed by `a`.
    pub e1_class: Vec<usize>,
    /// Point index of `e₂(b) = [[0,b],[0,1]]`, indexed by `b`.
    pub e2_class: Vec<usize>,
    /// Points realized by both kinds of matrix (exactly the unit classes).
    pub overlap: Vec<usize>,
    /// Every enumerated rank-one idempotent's range matched a standard chart.
    pub all_ranges_classified: bool,
}

fn row_apply(m: &FinMonoid, row: (usize, usize), v: (usize, usize)) -> usize {
    let z = m.zero();
    if row.0 != z {
        m.mul(row.0, v.0)
    } else if row.1 != z {
        m.mul(row.1, v.1)
    } else {
        z
    }
}

/// Product of 2×2 matrices each of whose rows has at most one nonzero entry;
/// no addition is ever needed because at most one summand is nonzero.
fn mat_mul(m: &FinMonoid, e: &[usize; 4], f: &[usize; 4]) -> [usize; 4] {
    let z = m.zero();
    let mut r = [z; 4];
    for i in 0..2 {
        for k in 0..2 {
            let mut acc = z;
            for j in 0..2 {
                let t = m.mul(e[i * 2 + j], f[j * 2 + k]);
                if t != z {
                    debug_assert_eq!(acc, z, "row-monomial input violated");
                    acc = t;
                }
            }
            r[i * 2 + k] = acc;
        }
    }
    r
}

fn mat_range(m: &FinMonoid, e: &[usize; 4]) -> BTreeSet<(usize, usize)> {
    let r0 = (e[0], e[1]);
    let r1 = (e[2], e[3]);
    let mut out = BTreeSet::new();
    for v0 in 0..m.size() {
        for v1 in 0..m.size() {
            out.insert((row_apply(m, r0, (v0, v1)), row_apply(m, r1, (v0, v1))));
        }
    }
    out
}

/// Enumerate the projective line over `m`.
///
/// Points are ranges of idempotent 2×2 matrices with at most one nonzero
/// entry per row that stay away from 0 and 1 in every residue field. They are
/// classified against the standard charts `e₁(a)` and `e₂(b)`, whose ranges
/// agree exactly when `ab = 1`; the expected total is `2|m| − |m^×|`.
pub fn proj_line_points(m: &FinMonoid) -> Result<ProjLineReport, SchemeError> {
    let n = m.size();
    let z = m.zero();
    let primes = monoid::prime_ideals(m)?;
    let residues: Vec<(FinMonoid, MonoidHom)> = primes
        .iter()
        .map(|p| monoid::residue(m, p))
        .collect::<Result<_, _>>()?;
    let rows: Vec<(usize, usize)> = {
        let mut v = vec![(z, z)];
        for x in 0..n {
            if x != z {
                v.push((x, z));
                v.push((z, x));
            }
        }
        v
    };
    let mut ranges: BTreeSet<BTreeSet<(usize, usize)>> = BTreeSet::new();
    let mut kept: Vec<[usize; 4]> = Vec::new();
    for &(a, b) in &rows {
        for &(c, d) in &rows {
            let e = [a, b, c, d];
            if mat_mul(m, &e, &e) != e {
                continue;
            }
            let rank_one = residues.iter().all(|(t, h)| {
                let img = [h.apply(e[0]), h.apply(e[1]), h.apply(e[2]), h.apply(e[3])];
                let is_zero = img.iter().all(|&v| v == t.zero());
                let is_id = img[0] == t.one()
                    && img[1] == t.zero()
                    && img[2] == t.zero()
                    && img[3] == t.one();
                !is_zero && !is_id
            });
            if !rank_one {
                continue;
            }
            kept.push(e);
            ranges.insert(mat_range(m, &e));
        }
    }
    let points: Vec<BTreeSet<(usize, usize)>> = ranges.into_iter().collect();
    let index_of = |r: &BTreeSet<(usize, usize)>| points.iter().position(|p| p == r);
    let (umask, _) = m.units();
    let mut chart = vec![P1Chart::Zero; points.len()];
    let mut e1_class = Vec::with_capacity(n);
    let mut e2_class = Vec::with_capacity(n);
    for a in 0..n {
        let r1 = mat_range(m, &[m.one(), z, a, z]);
        let i1 = index_of(&r1).expect("standard chart is rank one");
        e1_class.push(i1);
        chart[i1] = if umask >> a & 1 == 1 { P1Chart::Unit } else { P1Chart::Zero };
        let r2 = mat_range(m, &[z, a, z, m.one()]);
        let i2 = index_of(&r2).expect("standard chart is rank one");
        e2_class.push(i2);
        if umask >> a & 1 != 1 {
            chart[i2] = P1Chart::Infinity;
        }
    }
    let all_ranges_classified = kept
        .iter()
        .all(|e| {
            let r = mat_range(m, e);
            e1_class.iter().chain(&e2_class).any(|&i| points[i] == r)
        });
    let from_e1: BTreeSet<usize> = e1_class.iter().copied().collect();
    let from_e2: BTreeSet<usize> = e2_class.iter().copied().collect();
    let overlap: Vec<usize> = from_e1.intersection(&from_e2).copied().collect();
    // the chart ranges coincide exactly on reciprocal pairs
    for a in 0..n {
        for b in 0..n {
            let same = e1_class[a] == e2_class[b];
            let recip = m.mul(a, b) == m.one();
            if same != recip {
                return Err(SchemeError::Mismatch(format!(
                    "chart overlap at ({},{}) disagrees with ab=1",
                    m.label(a),
                    m.label(b)
                )));
            }
        }
    }
    Ok(ProjLineReport { points, chart, e1_class, e2_class, overlap, all_ranges_classified })
}

/// Point of the projective-line space a chart class projects to.
pub fn p1_projection(chart: P1Chart) -> usize {
    match chart {
        P1Chart::Zero => 0,
        P1Chart::Unit => 1,
        P1Chart::Infinity => 2,
    }
}

/// Where a point of an affine space lands under a coordinate hom: the
/// preimage of the non-units, which is a prime of the coordinate monoid.
pub fn base_projection(x: &GeoScheme, h: &MonoidHom) -> Result<usize, SchemeError> {
    let a = match &x.kind {
        SchemeKind::AffineFin(a) => a,
        _ => return Err(SchemeError::Mismatch("space is not affine over a table".into())),
    };
    if *a != h.source {
        return Err(SchemeError::Mismatch("hom source is not the coordinate monoid".into()));
    }
    let p = h.prime_preimage();
    x.point_of_prime(p.members())
        .ok_or_else(|| SchemeError::Mismatch("prime not among the points".into()))
}

/// Base projection for homs out of a symbolic coordinate monoid.
pub fn sym_base_projection(
    x: &GeoScheme,
    h: &SymHom,
    target: &FinMonoid,
) -> Result<usize, SchemeError> {
    let s = match &x.kind {
        SchemeKind::AffineSym(s) => s,
        _ => return Err(SchemeError::Mismatch("space is not symbolic affine".into())),
    };
    if *s != h.source {
        return Err(SchemeError::Mismatch("hom source mismatch".into()));
    }
    match s {
        SymMonoid::F1Group(_) => Ok(0),
        SymMonoid::FreeMonoid(n) => {
            let (umask, _) = target.units();
            let mut j = 0u32;
            for i in 0..*n {
                if umask >> h.gen_images[i] & 1 == 0 {
                    j |= 1 << i;
                }
            }
            // points are sorted by (popcount, subset); recover the index
            let mut subsets: Vec<u32> = (0..(1u32 << *n)).collect();
            subsets.sort_unstable_by_key(|&s| (s.count_ones(), s));
            Ok(subsets.iter().position(|&s| s == j).expect("subset enumerated"))
        }
    }
}

/// Homs `A → N` whose image of `I` generates all of `N`, i.e. contains a
/// unit. These are the `N`-points of the open piece cut out by `I`.
pub fn open_subfunctor_points(
    a: &FinMonoid,
    i: &Ideal<'_>,
    n: &FinMonoid,
) -> Result<Vec<MonoidHom>, SchemeError> {
    if !std::ptr::eq(i.owner(), a) && i.owner() != a {
        return Err(SchemeError::Mismatch("ideal does not live in A".into()));
    }
    let (umask, _) = n.units();
    Ok(monoid::hom_set(a, n)?
        .into_iter()
        .filter(|h| monoid::set_iter(i.members()).any(|x| umask >> h.apply(x) & 1 == 1))
        .collect())
}

/// Outcome of the locality check for a cover.
#[derive(Debug, Clone)]
pub struct CoverReport {
    pub injective: bool,
    pub hom_count: usize,
    pub matching_families: usize,
    pub pass: bool,
    pub detail: String,
}

/// Localization of `m` at the powers of one element, or `None` when the
/// element is nilpotent and the localization collapses to a point.
fn power_localization(m: &FinMonoid, f: usize) -> Result<Option<Localization>, SchemeError> {
    let s = monoid::mult_closure(m, 1 << f);
    if s >> m.zero() & 1 == 1 {
        return Ok(None);
    }
    Ok(Some(monoid::localize(m, s)?))
}

/// Connecting hom between one-element localizations, `M_f → M_{fg}`, sending
/// `a/fᵏ ↦ a·gᵏ/(fg)ᵏ`. Verified to be a well-defined hom compatible with
/// the canonical maps.
fn connecting(
    m: &FinMonoid,
    f: usize,
    g: usize,
    lf: &Localization,
    lfg: &Localization,
) -> Result<Vec<usize>, SchemeError> {
    let fg = m.mul(f, g);
    let mut images = Vec::with_capacity(lf.monoid.size());
    for &(a, s) in lf.reps() {
        let mut k = 0u32;
        loop {
            if m.pow(f, k) == s {
                break;
            }
            k += 1;
            if k as usize > m.size() + 1 {
                return Err(SchemeError::Mismatch(
                    "denominator is not a power of the cover element".into(),
                ));
            }
        }
        let num = m.mul(a, m.pow(g, k));
        let den = m.pow(fg, k);
        let c = lfg.class_of_pair(num, den).ok_or_else(|| {
            SchemeError::Mismatch("image pair missing from target localization".into())
        })?;
        images.push(c);
    }
    if !monoid::hom_images_valid(&lf.monoid, &lfg.monoid, &images) {
        return Err(SchemeError::Mismatch("connecting map is not a hom".into()));
    }
    for x in 0..m.size() {
        if images[lf.map.apply(x)] != lfg.map.apply(x) {
            return Err(SchemeError::Mismatch(
                "connecting map does not commute with the canonical maps".into(),
            ));
        }
    }
    Ok(images)
}

/// Check that homs out of `a` are local for the cover of `Spec m` by the
/// `D(fᵢ)`: the map into the product of localized hom sets is injective, and
/// every family that agrees on pairwise localizations descends.
pub fn cover_exactness(
    a: &FinMonoid,
    m: &FinMonoid,
    f: &[usize],
) -> Result<CoverReport, SchemeError> {
    if f.is_empty() {
        return Err(SchemeError::NotACover("empty cover".into()));
    }
    if let Some(&x) = f.iter().find(|&&x| x >= m.size()) {
        return Err(SchemeError::Mismatch(format!("element {x} out of range")));
    }
    let (umask, _) = m.units();
    if !f.iter().any(|&x| umask >> x & 1 == 1) {
        // the closed point of non-units lies in no D(fᵢ)
        return Err(SchemeError::NotACover(format!(
            "no cover element is a unit: {}",
            m.set_to_string(f.iter().fold(0, |acc, &x| acc | 1 << x))
        )));
    }
    let comps: Vec<Option<Localization>> = f
        .iter()
        .map(|&x| power_localization(m, x))
        .collect::<Result<_, _>>()?;
    // homs a -> component, with None for a collapsed (one-point) component
    let mut comp_homs: Vec<Vec<Option<Vec<usize>>>> = Vec::new();
    for c in &comps {
        match c {
            None => comp_homs.push(vec![None]),
            Some(loc) => comp_homs.push(
                monoid::hom_set(a, &loc.monoid)?
                    .into_iter()
                    .map(|h| Some(h.images))
                    .collect(),
            ),
        }
    }
    let global = monoid::hom_set(a, m)?;
    let restrict = |phi: &MonoidHom, i: usize| -> Option<Vec<usize>> {
        comps[i].as_ref().map(|loc| {
            (0..a.size()).map(|x| loc.map.apply(phi.apply(x))).collect()
        })
    };
    let mut seen: HashSet<Vec<Option<Vec<usize>>>> = HashSet::new();
    let mut injective = true;
    for phi in &global {
        let tuple: Vec<Option<Vec<usize>>> =
            (0..f.len()).map(|i| restrict(phi, i)).collect();
        if !seen.insert(tuple) {
            injective = false;
        }
    }
    // pairwise connecting data
    let mut pair_conn: Vec<Vec<Option<(Vec<usize>, Vec<usize>)>>> =
        vec![vec![None; f.len()]; f.len()];
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let lij = {
                let s = monoid::mult_closure(m, (1 << f[i]) | (1 << f[j]));
                if s >> m.zero() & 1 == 1 {
                    None
                } else {
                    Some(monoid::localize(m, s)?)
                }
            };
            if let (Some(li), Some(lj), Some(lij)) = (&comps[i], &comps[j], &lij) {
                let ci = connecting(m, f[i], f[j], li, lij)?;
                let cj = connecting(m, f[j], f[i], lj, lij)?;
                pair_conn[i][j] = Some((ci, cj));
            }
            // if either side collapsed, the pairwise localization collapses
            // too and the agreement condition is vacuous
        }
    }
    let mut matching = 0usize;
    let mut idx = vec![0usize; f.len()];
    'families: loop {
        let family: Vec<&Option<Vec<usize>>> =
            (0..f.len()).map(|i| &comp_homs[i][idx[i]]).collect();
        let mut ok = true;
        'pairs: for i in 0..f.len() {
            for j in i + 1..f.len() {
                if let Some((ci, cj)) = &pair_conn[i][j] {
                    let (pi, pj) = match (family[i], family[j]) {
                        (Some(pi), Some(pj)) => (pi, pj),
                        _ => unreachable!("collapsed component implies collapsed pair"),
                    };
                    for x in 0..a.size() {
                        if ci[pi[x]] != cj[pj[x]] {
                            ok = false;
                            break 'pairs;
                        }
                    }
                }
            }
        }
        if ok {
            matching += 1;
        }
        // odometer over the family product
        let mut pos = 0;
        loop {
            if pos == f.len() {
                break 'families;
            }
            idx[pos] += 1;
            if idx[pos] < comp_homs[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
    let pass = injective && matching == global.len();
    let detail = format!(
        "|Hom(A,M)| = {}, matching families = {matching}, injective = {injective}",
        global.len()
    );
    Ok(CoverReport { injective, hom_count: global.len(), matching_families: matching, pass, detail })
}
