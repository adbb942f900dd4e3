//! Pointed commutative monoids and their prime spectra.
//!
//! A monoid here always has an absorbing zero and a neutral one, with zero
//! distinct from one. Finite monoids carry an explicit multiplication table;
//! the two symbolic families (`F₁[H]` for an abelian group `H`, and the free
//! pointed monoid on `n` generators) are handled through their structure and
//! materialized into tables only when finite.
//!
//! Element subsets are bitmasks, so monoids are capped at 64 elements; ideal
//! enumeration, being exponential, is capped at 16.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::abelian::{self, AbGroup};
use crate::par;

/// Bitmask over element indices.
pub type ElemSet = u64;

pub const MAX_SIZE: usize = 64;
pub const IDEAL_ENUM_CAP: usize = 16;
pub const HOM_ENUM_CAP: u128 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonoidError {
    #[error("zero and one coincide (index {0})")]
    ZeroEqualsOne(usize),
    #[error("table is not commutative: elements {x} and {y}")]
    NotCommutative { x: usize, y: usize },
    #[error("table is not associative on the triple ({x},{y},{z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("zero is not absorbing: {x}*0 != 0")]
    BadZero { x: usize },
    #[error("one is not neutral: {x}*1 != {x}")]
    BadOne { x: usize },
    #[error("bad table shape: {0}")]
    Shape(String),
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("size {size} exceeds cap {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("hom enumeration needs {0} candidates, over the cap")]
    HomCap(u128),
    #[error("invalid multiplicative set: {0}")]
    BadMultiplicativeSet(String),
    #[error("not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("not a prime ideal: {0}")]
    NotPrime(String),
    #[error("infinite monoid cannot be materialized: {0}")]
    Infinite(String),
    #[error("monoid input: {0}")]
    Parse(String),
    #[error(transparent)]
    Abelian(#[from] abelian::AbelianError),
}

/// Finite pointed commutative monoid with verified table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinMonoid {
    labels: Vec<String>,
    zero: usize,
    one: usize,
    table: Vec<usize>,
}

impl FinMonoid {
    /// Verify a raw table and all structural invariants.
    pub fn new(
        labels: Vec<String>,
        zero: usize,
        one: usize,
        table: Vec<usize>,
    ) -> Result<Self, MonoidError> {
        let n = labels.len();
        if n < 2 || n > MAX_SIZE {
            return Err(MonoidError::Shape(format!("size {n} outside 2..={MAX_SIZE}")));
        }
        if table.len() != n * n {
            return Err(MonoidError::Shape(format!(
                "table has {} cells, expected {}",
                table.len(),
                n * n
            )));
        }
        if zero >= n || one >= n {
            return Err(MonoidError::Shape("zero/one index out of range".into()));
        }
        if zero == one {
            return Err(MonoidError::ZeroEqualsOne(zero));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(MonoidError::DuplicateLabel(l.clone()));
            }
        }
        if let Some(&v) = table.iter().find(|&&v| v >= n) {
            return Err(MonoidError::Shape(format!("entry {v} out of range")));
        }
        let m = FinMonoid { labels, zero, one, table };
        for x in 0..n {
            if m.mul(x, m.zero) != m.zero {
                return Err(MonoidError::BadZero { x });
            }
            if m.mul(x, m.one) != x {
                return Err(MonoidError::BadOne { x });
            }
            for y in x..n {
                if m.mul(x, y) != m.mul(y, x) {
                    return Err(MonoidError::NotCommutative { x, y });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = m.mul(x, y);
                for z in 0..n {
                    if m.mul(xy, z) != m.mul(x, m.mul(y, z)) {
                        return Err(MonoidError::NotAssociative { x, y, z });
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn from_rows(
        labels: &[&str],
        zero: usize,
        one: usize,
        rows: &[&[usize]],
    ) -> Result<Self, MonoidError> {
        let n = labels.len();
        let mut table = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(MonoidError::Shape("ragged rows".into()));
            }
            table.extend_from_slice(r);
        }
        FinMonoid::new(labels.iter().map(|s| s.to_string()).collect(), zero, one, table)
    }

    /// The two-element monoid {0,1}.
    pub fn f1() -> Self {
        FinMonoid::from_rows(&["0", "1"], 0, 1, &[&[0, 0], &[0, 1]]).expect("static table")
    }

    /// Materialize `F₁[H] = H ∪ {0}` for a finite abelian group `H`.
    ///
    /// Index 0 is the absorbing zero, index 1 the group identity; the group
    /// elements are mixed-radix tuples over the invariant factors.
    pub fn f1_group(g: &AbGroup) -> Result<Self, MonoidError> {
        if g.rank() > 0 {
            return Err(MonoidError::Infinite(format!("F1[{g}] has free rank")));
        }
        let order = g
            .order()
            .ok_or_else(|| MonoidError::Infinite("unbounded group".into()))? as usize;
        if order + 1 > MAX_SIZE {
            return Err(MonoidError::SizeCap { size: order + 1, cap: MAX_SIZE });
        }
        let factors: Vec<u64> = g.torsion().to_vec();
        let decode = |mut v: u64| -> Vec<u64> {
            factors
                .iter()
                .map(|&d| {
                    let r = v % d;
                    v /= d;
                    r
                })
                .collect()
        };
        let encode = |t: &[u64]| -> u64 {
            let mut v = 0u64;
            for (&d, &x) in factors.iter().zip(t).rev() {
                v = v * d + x;
            }
            v
        };
        let n = order + 1;
        let mut labels = vec!["0".to_string()];
        for v in 0..order as u64 {
            let t = decode(v);
            let lab = if t.iter().all(|&x| x == 0) {
                "1".to_string()
            } else if t.len() == 1 {
                if t[0] == 1 {
                    "g".to_string()
                } else {
                    format!("g^{}", t[0])
                }
            } else {
                format!(
                    "g({})",
                    t.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                )
            };
            labels.push(lab);
        }
        let mut table = vec![0usize; n * n];
        for a in 0..order as u64 {
            for b in 0..order as u64 {
                let ta = decode(a);
                let tb = decode(b);
                let sum: Vec<u64> = factors
                    .iter()
                    .zip(ta.iter().zip(&tb))
                    .map(|(&d, (&x, &y))| (x + y) % d)
                    .collect();
                table[(a as usize + 1) * n + (b as usize + 1)] = encode(&sum) as usize + 1;
            }
        }
        FinMonoid::new(labels, 0, 1, table)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size() + y]
    }

    pub fn pow(&self, x: usize, k: u32) -> usize {
        let mut acc = self.one;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn all_elements(&self) -> ElemSet {
        if self.size() == 64 {
            !0u64
        } else {
            (1u64 << self.size()) - 1
        }
    }

    /// Invertible elements with their group structure.
    pub fn units(&self) -> (ElemSet, AbGroup) {
        let n = self.size();
        let mut mask: ElemSet = 0;
        for x in 0..n {
            if (0..n).any(|y| self.mul(x, y) == self.one) {
                mask |= 1 << x;
            }
        }
        let members: Vec<usize> = set_iter(mask).collect();
        let pos: HashMap<usize, usize> =
            members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let grp = abelian::structure_of_finite_group(members.len(), |a, b| {
            pos[&self.mul(members[a], members[b])]
        })
        .expect("unit set of a verified monoid is an abelian group");
        (mask, grp)
    }

    /// Render a subset with element labels, for example `{0,e}`.
    pub fn set_to_string(&self, mask: ElemSet) -> String {
        let inner: Vec<&str> = set_iter(mask).map(|x| self.label(x)).collect();
        format!("{{{}}}", inner.join(","))
    }
}

impl fmt::Display for FinMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.set_to_string(self.all_elements()))
    }
}

pub fn set_iter(mask: ElemSet) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask & (1 << i) != 0)
}

pub fn set_len(mask: ElemSet) -> usize {
    mask.count_ones() as usize
}

/// Symbolic monoid families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymMonoid {
    /// `F₁[H] = H ∪ {0}` for an abelian group `H`.
    F1Group(AbGroup),
    /// Free pointed commutative monoid on `n ≥ 1` generators.
    FreeMonoid(usize),
}

impl SymMonoid {
    pub fn materialize(&self) -> Result<FinMonoid, MonoidError> {
        match self {
            SymMonoid::F1Group(g) => FinMonoid::f1_group(g),
            SymMonoid::FreeMonoid(n) => {
                Err(MonoidError::Infinite(format!("free monoid on {n} generators")))
            }
        }
    }
}

/// Ideal of a finite monoid: contains zero, absorbs multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ideal<'a> {
    owner: &'a FinMonoid,
    members: ElemSet,
}

impl<'a> Ideal<'a> {
    pub fn new(owner: &'a FinMonoid, members: ElemSet) -> Result<Self, MonoidError> {
        if members & (1 << owner.zero()) == 0 {
            return Err(MonoidError::NotAnIdeal("does not contain zero".into()));
        }
        if members & !owner.all_elements() != 0 {
            return Err(MonoidError::NotAnIdeal("members outside the monoid".into()));
        }
        for a in set_iter(members) {
            for x in 0..owner.size() {
                if members & (1 << owner.mul(a, x)) == 0 {
                    return Err(MonoidError::NotAnIdeal(format!(
                        "{}*{} escapes",
                        owner.label(a),
                        owner.label(x)
                    )));
                }
            }
        }
        Ok(Ideal { owner, members })
    }

    pub fn members(&self) -> ElemSet {
        self.members
    }

    pub fn owner(&self) -> &'a FinMonoid {
        self.owner
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members & (1 << x) != 0
    }
}

/// Prime ideal: a proper ideal whose complement is multiplicatively closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeIdeal<'a> {
    ideal: Ideal<'a>,
}

impl<'a> PrimeIdeal<'a> {
    pub fn new(owner: &'a FinMonoid, members: ElemSet) -> Result<Self, MonoidError> {
        let ideal = Ideal::new(owner, members)?;
        if ideal.contains(owner.one()) {
            return Err(MonoidError::NotPrime("contains one".into()));
        }
        let comp = owner.all_elements() & !members;
        for x in set_iter(comp) {
            for y in set_iter(comp) {
                if members & (1 << owner.mul(x, y)) != 0 {
                    return Err(MonoidError::NotPrime(format!(
                        "complement not closed: {}*{}",
                        owner.label(x),
                        owner.label(y)
                    )));
                }
            }
        }
        Ok(PrimeIdeal { ideal })
    }

    pub fn as_ideal(&self) -> Ideal<'a> {
        self.ideal
    }

    pub fn members(&self) -> ElemSet {
        self.ideal.members
    }

    pub fn owner(&self) -> &'a FinMonoid {
        self.ideal.owner
    }

    pub fn contains(&self, x: usize) -> bool {
        self.ideal.contains(x)
    }
}

/// All ideals, ascending by size then by mask.
pub fn ideals(m: &FinMonoid) -> Result<Vec<Ideal<'_>>, MonoidError> {
    let n = m.size();
    if n > IDEAL_ENUM_CAP {
        return Err(MonoidError::SizeCap { size: n, cap: IDEAL_ENUM_CAP });
    }
    let zero_bit = 1u64 << m.zero();
    let mut out: Vec<Ideal> = Vec::new();
    for rest in 0..(1u64 << n) {
        if rest & zero_bit != 0 {
            continue; // visit each zero-containing subset once, as rest | zero_bit
        }
        if let Ok(i) = Ideal::new(m, rest | zero_bit) {
            out.push(i);
        }
    }
    out.sort_by_key(|i| (set_len(i.members()), i.members()));
    Ok(out)
}

/// All prime ideals, ascending by size then by mask.
pub fn prime_ideals(m: &FinMonoid) -> Result<Vec<PrimeIdeal<'_>>, MonoidError> {
    Ok(ideals(m)?
        .into_iter()
        .filter_map(|i| PrimeIdeal::new(m, i.members()).ok())
        .collect())
}

/// The prime of non-units, which contains every other prime.
pub fn maximal_prime(m: &FinMonoid) -> PrimeIdeal<'_> {
    let (units, _) = m.units();
    PrimeIdeal::new(m, m.all_elements() & !units)
        .expect("the complement of the units is always prime")
}

/// `√I = {x | xᵏ ∈ I for some k ≥ 1}`.
pub fn radical<'a>(i: Ideal<'a>) -> Ideal<'a> {
    let m = i.owner();
    let n = m.size();
    let mut mask: ElemSet = 0;
    for x in 0..n {
        let mut p = x;
        for _ in 0..n {
            if i.contains(p) {
                mask |= 1 << x;
                break;
            }
            p = m.mul(p, x);
        }
    }
    Ideal::new(m, mask).expect("radical of an ideal is an ideal")
}

/// Monoid homomorphism as an image vector; carries its endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidHom {
    pub source: FinMonoid,
    pub target: FinMonoid,
    pub images: Vec<usize>,
}

impl MonoidHom {
    pub fn new(
        source: FinMonoid,
        target: FinMonoid,
        images: Vec<usize>,
    ) -> Result<Self, MonoidError> {
        if !hom_images_valid(&source, &target, &images) {
            return Err(MonoidError::Parse("not a homomorphism".into()));
        }
        Ok(MonoidHom { source, target, images })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// Preimage of the target's non-units; always a prime of the source.
    pub fn prime_preimage(&self) -> PrimeIdeal<'_> {
        let (u, _) = self.target.units();
        let mut mask: ElemSet = 0;
        for x in 0..self.source.size() {
            if u & (1 << self.images[x]) == 0 {
                mask |= 1 << x;
            }
        }
        PrimeIdeal::new(&self.source, mask)
            .expect("preimage of the maximal prime is prime")
    }
}

pub fn hom_images_valid(a: &FinMonoid, b: &FinMonoid, images: &[usize]) -> bool {
    if images.len() != a.size() || images.iter().any(|&v| v >= b.size()) {
        return false;
    }
    if images[a.zero()] != b.zero() || images[a.one()] != b.one() {
        return false;
    }
    for x in 0..a.size() {
        for y in x..a.size() {
            if images[a.mul(x, y)] != b.mul(images[x], images[y]) {
                return false;
            }
        }
    }
    true
}

/// Every homomorphism `a → b`, ordered lexicographically by image vector.
pub fn hom_set(a: &FinMonoid, b: &FinMonoid) -> Result<Vec<MonoidHom>, MonoidError> {
    let n = a.size();
    let bn = b.size();
    let free: Vec<usize> = (0..n).filter(|&x| x != a.zero() && x != a.one()).collect();
    let candidates = (bn as u128).pow(free.len() as u32);
    if candidates > HOM_ENUM_CAP {
        return Err(MonoidError::HomCap(candidates));
    }
    let found = par::map_range(candidates as usize, |code| {
        let mut images = vec![0usize; n];
        images[a.zero()] = b.zero();
        images[a.one()] = b.one();
        let mut c = code;
        for &x in &free {
            images[x] = c % bn;
            c /= bn;
        }
        hom_images_valid(a, b, &images).then_some(images)
    });
    let mut homs: Vec<MonoidHom> = found
        .into_iter()
        .flatten()
        .map(|images| MonoidHom { source: a.clone(), target: b.clone(), images })
        .collect();
    homs.sort_by(|p, q| p.images.cmp(&q.images));
    Ok(homs)
}

/// Homomorphism from a symbolic monoid, recorded by generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymHom {
    pub source: SymMonoid,
    pub gen_images: Vec<usize>,
}

/// Every homomorphism from a symbolic monoid into `b`.
///
/// For `F₁[H]` the maps are in bijection with group homomorphisms `H → b^×`,
/// one unit image per invariant-factor generator (free generators may hit any
/// unit, a generator of order d any unit killed by d). For the free monoid the
/// generators may hit anything, zero included.
pub fn sym_hom_set(a: &SymMonoid, b: &FinMonoid) -> Result<Vec<SymHom>, MonoidError> {
    let out = match a {
        SymMonoid::FreeMonoid(n) => {
            let candidates = (b.size() as u128).pow(*n as u32);
            if candidates > HOM_ENUM_CAP {
                return Err(MonoidError::HomCap(candidates));
            }
            tuples(&vec![(0..b.size()).collect::<Vec<_>>(); *n])
        }
        SymMonoid::F1Group(g) => {
            let (umask, _) = b.units();
            let units: Vec<usize> = set_iter(umask).collect();
            let mut choices: Vec<Vec<usize>> = Vec::new();
            for _ in 0..g.rank() {
                choices.push(units.clone());
            }
            for &d in g.torsion() {
                let killed: Vec<usize> = units
                    .iter()
                    .copied()
                    .filter(|&u| {
                        d <= u32::MAX as u64 && b.pow(u, d as u32) == b.one()
                    })
                    .collect();
                choices.push(killed);
            }
            let candidates: u128 = choices.iter().map(|c| c.len() as u128).product();
            if candidates > HOM_ENUM_CAP {
                return Err(MonoidError::HomCap(candidates));
            }
            tuples(&choices)
        }
    };
    Ok(out
        .into_iter()
        .map(|gen_images| SymHom { source: a.clone(), gen_images })
        .collect())
}

fn tuples(choices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for c in choices {
        let mut next = Vec::with_capacity(out.len() * c.len());
        for t in &out {
            for &v in c {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Multiplicative closure of a seed set together with one.
pub fn mult_closure(m: &FinMonoid, seed: ElemSet) -> ElemSet {
    let mut s = seed | (1 << m.one());
    loop {
        let mut next = s;
        for x in set_iter(s) {
            for y in set_iter(s) {
                next |= 1 << m.mul(x, y);
            }
        }
        if next == s {
            return s;
        }
        s = next;
    }
}

/// Localization `S⁻¹M` with its class bookkeeping.
#[derive(Debug, Clone)]
pub struct Localization {
    pub monoid: FinMonoid,
    /// The canonical map `a ↦ a/1`.
    pub map: MonoidHom,
    class_of: HashMap<(usize, usize), usize>,
    reps: Vec<(usize, usize)>,
}

impl Localization {
    /// Class index of the fraction `a/s`; `s` must lie in the inverted set.
    pub fn class_of_pair(&self, a: usize, s: usize) -> Option<usize> {
        self.class_of.get(&(a, s)).copied()
    }

    /// Minimal `(numerator, denominator)` pair of each class, by class index.
    pub fn reps(&self) -> &[(usize, usize)] {
        &self.reps
    }
}

/// Invert a multiplicative set: pairs `a/s` modulo `a/s ∼ b/t ⟺ ∃u∈S, uta = usb`.
pub fn localize(m: &FinMonoid, s_mask: ElemSet) -> Result<Localization, MonoidError> {
    if s_mask & (1 << m.one()) == 0 {
        return Err(MonoidError::BadMultiplicativeSet("must contain one".into()));
    }
    if s_mask & (1 << m.zero()) != 0 {
        return Err(MonoidError::BadMultiplicativeSet("must not contain zero".into()));
    }
    if s_mask & !m.all_elements() != 0 {
        return Err(MonoidError::BadMultiplicativeSet("members outside the monoid".into()));
    }
    for x in set_iter(s_mask) {
        for y in set_iter(s_mask) {
            if s_mask & (1 << m.mul(x, y)) == 0 {
                return Err(MonoidError::BadMultiplicativeSet(format!(
                    "not closed: {}*{}",
                    m.label(x),
                    m.label(y)
                )));
            }
        }
    }
    let svec: Vec<usize> = set_iter(s_mask).collect();
    let pairs: Vec<(usize, usize)> = (0..m.size())
        .flat_map(|a| svec.iter().map(move |&s| (a, s)))
        .collect();
    let equivalent = |&(a, s): &(usize, usize), &(b, t): &(usize, usize)| {
        svec.iter()
            .any(|&u| m.mul(m.mul(u, t), a) == m.mul(m.mul(u, s), b))
    };
    // union-find over pairs
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            if equivalent(&pairs[i], &pairs[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..pairs.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut classes: Vec<Vec<(usize, usize)>> = groups
        .into_values()
        .map(|idxs| {
            let mut v: Vec<(usize, usize)> = idxs.into_iter().map(|i| pairs[i]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    classes.sort_unstable_by_key(|c| c[0]);
    let mut class_of: HashMap<(usize, usize), usize> = HashMap::new();
    for (ci, c) in classes.iter().enumerate() {
        for &p in c {
            class_of.insert(p, ci);
        }
    }
    let zero = class_of[&(m.zero(), m.one())];
    let one = class_of[&(m.one(), m.one())];
    let k = classes.len();
    let mut table = vec![0usize; k * k];
    for (i, ci) in classes.iter().enumerate() {
        for (j, cj) in classes.iter().enumerate() {
            let (a, s) = ci[0];
            let (b, t) = cj[0];
            table[i * k + j] = class_of[&(m.mul(a, b), m.mul(s, t))];
        }
    }
    let mut labels: Vec<String> = classes
        .iter()
        .map(|c| {
            let (a, s) = c[0];
            if s == m.one() {
                m.label(a).to_string()
            } else {
                format!("{}/{}", m.label(a), m.label(s))
            }
        })
        .collect();
    for i in 0..labels.len() {
        while labels[..i].contains(&labels[i]) {
            labels[i].push('\'');
        }
    }
    let monoid = FinMonoid::new(labels, zero, one, table)?;
    let images: Vec<usize> = (0..m.size()).map(|a| class_of[&(a, m.one())]).collect();
    let map = MonoidHom::new(m.clone(), monoid.clone(), images)?;
    let reps: Vec<(usize, usize)> = classes.iter().map(|c| c[0]).collect();
    Ok(Localization { monoid, map, class_of, reps })
}

/// Residue map at a prime: kill `p`, invert everything else, keep only units.
///
/// The target is `F₁[(M_p)^×]`: index 0 is zero, the remaining elements are
/// the unit classes of the localization at the complement of `p`, with the
/// class of 1 at index 1.
pub fn residue(m: &FinMonoid, p: &PrimeIdeal<'_>) -> Result<(FinMonoid, MonoidHom), MonoidError> {
    let s_mask = m.all_elements() & !p.members();
    let loc = localize(m, s_mask)?;
    let (umask, _) = loc.monoid.units();
    let mut units: Vec<usize> = set_iter(umask).collect();
    units.retain(|&u| u != loc.monoid.one());
    units.insert(0, loc.monoid.one());
    let pos: HashMap<usize, usize> =
        units.iter().enumerate().map(|(i, &u)| (u, i + 1)).collect();
    let k = units.len() + 1;
    let mut table = vec![0usize; k * k];
    for (i, &u) in units.iter().enumerate() {
        for (j, &v) in units.iter().enumerate() {
            table[(i + 1) * k + (j + 1)] = pos[&loc.monoid.mul(u, v)];
        }
    }
    let mut labels = vec!["0".to_string()];
    labels.extend(units.iter().map(|&u| loc.monoid.label(u).to_string()));
    for i in 0..labels.len() {
        while labels[..i].contains(&labels[i]) {
            labels[i].push('\'');
        }
    }
    let target = FinMonoid::new(labels, 0, 1, table)?;
    let images: Vec<usize> = (0..m.size())
        .map(|x| {
            if p.contains(x) {
                0
            } else {
                pos[&loc.map.apply(x)]
            }
        })
        .collect();
    let hom = MonoidHom::new(m.clone(), target.clone(), images)?;
    Ok((target, hom))
}

/// Isomorphism test fixing nothing but the pointed structure.
///
/// Tries every bijection sending zero to zero and one to one; only sensible
/// for small monoids.
pub fn isomorphic(a: &FinMonoid, b: &FinMonoid) -> bool {
    if a.size() != b.size() {
        return false;
    }
    let n = a.size();
    let afree: Vec<usize> = (0..n).filter(|&x| x != a.zero() && x != a.one()).collect();
    let bfree: Vec<usize> = (0..n).filter(|&x| x != b.zero() && x != b.one()).collect();
    permutations(&bfree).into_iter().any(|perm| {
        let mut map = vec![0usize; n];
        map[a.zero()] = b.zero();
        map[a.one()] = b.one();
        for (&x, &y) in afree.iter().zip(&perm) {
            map[x] = y;
        }
        (0..n).all(|x| (0..n).all(|y| map[a.mul(x, y)] == b.mul(map[x], map[y])))
    })
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let rest: Vec<usize> = items
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &v)| v)
            .collect();
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// All pointed commutative monoids of size ≤ `max_size`, one representative
/// per isomorphism class, zero at index 0 and one at index 1.
pub fn enumerate_monoids(max_size: usize) -> Vec<FinMonoid> {
    let names = ["0", "1", "a", "b", "c", "d"];
    let mut out = Vec::new();
    for n in 2..=max_size {
        assert!(n <= names.len());
        let free: Vec<usize> = (2..n).collect();
        let cells: Vec<(usize, usize)> = free
            .iter()
            .flat_map(|&i| (i..n).map(move |j| (i, j)))
            .collect();
        let total = (n as u64).pow(cells.len() as u32);
        let candidates = par::map_range(total as usize, |code| {
            let mut t = vec![0usize; n * n];
            for x in 0..n {
                t[x * n] = 0;
                t[x] = 0;
                t[x * n + 1] = x;
                t[n + x] = x;
            }
            let mut c = code as u64;
            for &(i, j) in &cells {
                let v = (c % n as u64) as usize;
                c /= n as u64;
                t[i * n + j] = v;
                t[j * n + i] = v;
            }
            for x in 2..n {
                for y in 2..n {
                    let xy = t[x * n + y];
                    for z in 2..n {
                        if t[xy * n + z] != t[x * n + t[y * n + z]] {
                            return None;
                        }
                    }
                }
            }
            // canonical form over relabelings of the free elements
            let canon = permutations(&free)
                .into_iter()
                .map(|perm| {
                    let mut map = vec![0usize; n];
                    map[1] = 1;
                    for (&x, &y) in free.iter().zip(&perm) {
                        map[x] = y;
                    }
                    let mut img = vec![0usize; n * n];
                    for x in 0..n {
                        for y in 0..n {
                            img[map[x] * n + map[y]] = map[t[x * n + y]];
                        }
                    }
                    img
                })
                .min()
                .expect("at least the identity relabeling");
            Some(canon)
        });
        let mut seen = std::collections::HashSet::new();
        for canon in candidates.into_iter().flatten() {
            if seen.insert(canon.clone()) {
                let labels: Vec<String> = names[..n].iter().map(|s| s.to_string()).collect();
                out.push(
                    FinMonoid::new(labels, 0, 1, canon)
                        .expect("enumerated table passed the checks"),
                );
            }
        }
    }
    out
}

/// Parsed monoid input: an explicit table or a symbolic family.
#[derive(Debug, Clone)]
pub enum MonoidInput {
    Fin(FinMonoid),
    Sym(SymMonoid),
}

/// Parse the monoid wire format.
///
/// Explicit: `{"elements":[...], "zero":"0", "one":"1", "table":[[...]]}` with
/// the table over element names. Symbolic: `{"f1group":{"rank":0,"torsion":[6]}}`
/// or `{"free":2}`.
pub fn parse_monoid_json(text: &str) -> Result<MonoidInput, MonoidError> {
    #[derive(serde::Deserialize)]
    struct GroupSpec {
        #[serde(default)]
        rank: usize,
        #[serde(default)]
        torsion: Vec<u64>,
    }
    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Fin {
            elements: Vec<String>,
            zero: String,
            one: String,
            table: Vec<Vec<String>>,
        },
        Group { f1group: GroupSpec },
        Free { free: usize },
    }
    let raw: Raw =
        serde_json::from_str(text).map_err(|e| MonoidError::Parse(e.to_string()))?;
    match raw {
        Raw::Fin { elements, zero, one, table } => {
            let idx = |name: &str| -> Result<usize, MonoidError> {
                elements
                    .iter()
                    .position(|e| e == name)
                    .ok_or_else(|| MonoidError::UnknownElement(name.to_string()))
            };
            let z = idx(&zero)?;
            let o = idx(&one)?;
            let n = elements.len();
            if table.len() != n || table.iter().any(|r| r.len() != n) {
                return Err(MonoidError::Shape(format!("table must be {n}x{n}")));
            }
            let mut t = Vec::with_capacity(n * n);
            for row in &table {
                for cell in row {
                    t.push(idx(cell)?);
                }
            }
            Ok(MonoidInput::Fin(FinMonoid::new(elements, z, o, t)?))
        }
        Raw::Group { f1group } => {
            if f1group.torsion.iter().any(|&d| d == 0) {
                return Err(MonoidError::Parse("torsion factor 0".into()));
            }
            Ok(MonoidInput::Sym(SymMonoid::F1Group(AbGroup::from_cyclic_factors(
                f1group.rank,
                &f1group.torsion,
            ))))
        }
        Raw::Free { free } => {
            if free == 0 {
                return Err(MonoidError::Parse("free monoid needs >= 1 generator".into()));
            }
            Ok(MonoidInput::Sym(SymMonoid::FreeMonoid(free)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn idempotent3() -> FinMonoid {
        FinMonoid::from_rows(&["0", "1", "e"], 0, 1, &[&[0, 0, 0], &[0, 1, 2], &[0, 2, 2]])
            .unwrap()
    }

    pub fn nilpotent3() -> FinMonoid {
        FinMonoid::from_rows(&["0", "1", "n"], 0, 1, &[&[0, 0, 0], &[0, 1, 2], &[0, 2, 0]])
            .unwrap()
    }

    #[test]
    fn validate_accepts_f1_and_rejects_bad_tables() {
        let f1 = FinMonoid::f1();
        assert_eq!(f1.size(), 2);
        assert!(idempotent3().size() == 3);
        // a*a = 1 with a broken associativity witness is impossible for a
        // commutative 3-element table, so break neutrality instead
        let bad = FinMonoid::from_rows(&["0", "1", "a"], 0, 1, &[&[0, 0, 0], &[0, 1, 1], &[0, 1, 1]]);
        assert_eq!(bad.unwrap_err(), MonoidError::BadOne { x: 2 });
        let noncomm = FinMonoid::new(
            vec!["0".into(), "1".into(), "a".into()],
            0,
            1,
            vec![0, 0, 0, 0, 1, 2, 0, 1, 2],
        );
        assert!(matches!(noncomm.unwrap_err(), MonoidError::NotCommutative { .. }));
    }

    #[test]
    fn validate_reports_associativity_witness() {
        // {0,1,a,b}: a*a=1, a*b=a, b*b=b is not associative: (a*a)*b = b but a*(a*b) = 1
        let bad = FinMonoid::from_rows(
            &["0", "1", "a", "b"],
            0,
            1,
            &[&[0, 0, 0, 0], &[0, 1, 2, 3], &[0, 2, 1, 2], &[0, 3, 2, 3]],
        );
        assert!(matches!(bad.unwrap_err(), MonoidError::NotAssociative { .. }));
    }

    #[test]
    fn units_of_group_monoids() {
        let m = FinMonoid::f1_group(&AbGroup::cyclic(2)).unwrap();
        let (mask, g) = m.units();
        assert_eq!(set_len(mask), 2);
        assert_eq!(g, AbGroup::cyclic(2));
        let (mask, g) = idempotent3().units();
        assert_eq!(set_len(mask), 1);
        assert!(g.is_trivial());
        let klein = FinMonoid::f1_group(&AbGroup::from_cyclic_factors(0, &[2, 2])).unwrap();
        let (_, g) = klein.units();
        assert_eq!(g, AbGroup::new(0, vec![2, 2]).unwrap());
    }

    #[test]
    fn ideal_enumeration() {
        let f1 = FinMonoid::f1();
        let masks: Vec<ElemSet> = ideals(&f1).unwrap().iter().map(|i| i.members()).collect();
        assert_eq!(masks, vec![0b01, 0b11]);
        let e3 = idempotent3();
        let masks: Vec<ElemSet> = ideals(&e3).unwrap().iter().map(|i| i.members()).collect();
        assert_eq!(masks, vec![0b001, 0b101, 0b111]);
        let z3 = FinMonoid::f1_group(&AbGroup::cyclic(3)).unwrap();
        let masks: Vec<ElemSet> = ideals(&z3).unwrap().iter().map(|i| i.members()).collect();
        assert_eq!(masks, vec![0b0001, 0b1111]);
    }

    #[test]
    fn prime_enumeration() {
        let e3 = idempotent3();
        let primes: Vec<ElemSet> = prime_ideals(&e3).unwrap().iter().map(|p| p.members()).collect();
        assert_eq!(primes, vec![0b001, 0b101]);
        let z6 = FinMonoid::f1_group(&AbGroup::cyclic(6)).unwrap();
        let primes = prime_ideals(&z6).unwrap();
        assert_eq!(primes.len(), 1);
        assert_eq!(primes[0].members(), 1);
        let f1 = FinMonoid::f1();
        assert_eq!(prime_ideals(&f1).unwrap().len(), 1);
        // {0,1,n} with n^2 = 0: {0} is not prime, {0,n} is
        let n3 = nilpotent3();
        let primes: Vec<ElemSet> = prime_ideals(&n3).unwrap().iter().map(|p| p.members()).collect();
        assert_eq!(primes, vec![0b101]);
    }

    #[test]
    fn radical_examples() {
        let e3 = idempotent3();
        let zero_ideal = Ideal::new(&e3, 0b001).unwrap();
        assert_eq!(radical(zero_ideal).members(), 0b001);
        let pe = Ideal::new(&e3, 0b101).unwrap();
        assert_eq!(radical(pe).members(), 0b101);
        // nilpotents fall into the radical of {0}
        let n3 = nilpotent3();
        let z = Ideal::new(&n3, 0b001).unwrap();
        assert_eq!(radical(z).members(), 0b101);
        // {0,σ} in F1[Z/2] is not an ideal
        let z2 = FinMonoid::f1_group(&AbGroup::cyclic(2)).unwrap();
        assert!(Ideal::new(&z2, 0b101).is_err());
    }

    #[test]
    fn localize_collapses_idempotent() {
        let e3 = idempotent3();
        let loc = localize(&e3, 0b110).unwrap();
        assert_eq!(loc.monoid.size(), 2);
        assert_eq!(loc.map.apply(2), loc.monoid.one());
    }

    #[test]
    fn localize_at_one_is_identity() {
        for m in [FinMonoid::f1(), idempotent3(), nilpotent3()] {
            let loc = localize(&m, 1 << m.one()).unwrap();
            assert!(isomorphic(&loc.monoid, &m));
        }
    }

    #[test]
    fn localize_at_units_is_identity() {
        let z4 = FinMonoid::f1_group(&AbGroup::cyclic(4)).unwrap();
        let (umask, _) = z4.units();
        let loc = localize(&z4, umask).unwrap();
        assert!(isomorphic(&loc.monoid, &z4));
    }

    #[test]
    fn localize_rejects_bad_sets() {
        let e3 = idempotent3();
        assert!(localize(&e3, 0b100).is_err()); // missing one
        assert!(localize(&e3, 0b011).is_err()); // contains zero
        let n3 = nilpotent3();
        assert!(localize(&n3, 0b110).is_err()); // n*n = 0 escapes
    }

    #[test]
    fn residue_examples() {
        let e3 = idempotent3();
        let primes = prime_ideals(&e3).unwrap();
        // p = {0,e}: e dies
        let (t, h) = residue(&e3, &primes[1]).unwrap();
        assert_eq!(t.size(), 2);
        assert_eq!(h.apply(2), t.zero());
        // p = {0}: e becomes 1
        let (t, h) = residue(&e3, &primes[0]).unwrap();
        assert_eq!(t.size(), 2);
        assert_eq!(h.apply(2), t.one());
        // F1[Z/2] at {0} returns the whole monoid
        let z2 = FinMonoid::f1_group(&AbGroup::cyclic(2)).unwrap();
        let primes = prime_ideals(&z2).unwrap();
        let (t, h) = residue(&z2, &primes[0]).unwrap();
        assert!(isomorphic(&t, &z2));
        assert_eq!(h.apply(2), 2);
    }

    #[test]
    fn hom_set_examples() {
        let f1 = FinMonoid::f1();
        let z3 = FinMonoid::f1_group(&AbGroup::cyclic(3)).unwrap();
        assert_eq!(hom_set(&f1, &z3).unwrap().len(), 1);
        let free1 = SymMonoid::FreeMonoid(1);
        assert_eq!(sym_hom_set(&free1, &z3).unwrap().len(), 4);
        let z6 = SymMonoid::F1Group(AbGroup::cyclic(6));
        let z4 = FinMonoid::f1_group(&AbGroup::cyclic(4)).unwrap();
        assert_eq!(sym_hom_set(&z6, &z4).unwrap().len(), 2);
        // explicit route agrees
        let z6m = FinMonoid::f1_group(&AbGroup::cyclic(6)).unwrap();
        assert_eq!(hom_set(&z6m, &z4).unwrap().len(), 2);
    }

    #[test]
    fn hom_preimage_of_prime_is_prime() {
        let e3 = idempotent3();
        let f1 = FinMonoid::f1();
        for h in hom_set(&e3, &f1).unwrap() {
            let p = h.prime_preimage();
            assert!(PrimeIdeal::new(&e3, p.members()).is_ok());
        }
    }

    #[test]
    fn enumerate_small_corpus() {
        let corpus = enumerate_monoids(3);
        // size 2: just F1; size 3: e*e in {0,1,e}
        assert_eq!(corpus.len(), 4);
        let sizes: Vec<usize> = corpus.iter().map(FinMonoid::size).collect();
        assert_eq!(sizes, vec![2, 3, 3, 3]);
    }

    #[test]
    fn parse_wire_formats() {
        let m = parse_monoid_json(
            r#"{"elements":["0","1","e"],"zero":"0","one":"1",
                "table":[["0","0","0"],["0","1","e"],["0","e","e"]]}"#,
        )
        .unwrap();
        match m {
            MonoidInput::Fin(m) => assert!(isomorphic(&m, &idempotent3())),
            _ => panic!("expected explicit monoid"),
        }
        match parse_monoid_json(r#"{"f1group":{"rank":0,"torsion":[6]}}"#).unwrap() {
            MonoidInput::Sym(SymMonoid::F1Group(g)) => assert_eq!(g, AbGroup::cyclic(6)),
            _ => panic!("expected symbolic group"),
        }
        match parse_monoid_json(r#"{"free":2}"#).unwrap() {
            MonoidInput::Sym(SymMonoid::FreeMonoid(2)) => {}
            _ => panic!("expected free monoid"),
        }
        assert!(parse_monoid_json(r#"{"free":0}"#).is_err());
        assert!(parse_monoid_json(r#"{"elements":["0","1"],"zero":"0","one":"x","table":[["0","0"],["0","1"]]}"#).is_err());
    }
}
