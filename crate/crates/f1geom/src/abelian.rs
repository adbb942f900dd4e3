//! Finitely generated abelian groups in invariant-factor form.
//!
//! A group is recorded as `Z^rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_t` with `d₁ | d₂ | … | d_t`
//! and every `dᵢ ≥ 2`, which makes equality of groups equality of fields and
//! makes hom-set counting a product of gcds. Groups arise here as unit groups
//! of monoid stalks; their ranks are the local dimensions that drive all the
//! counting upstairs.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AbelianError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("not an abelian group: {0}")]
    NotAGroup(String),
    #[error("hom set is infinite (both source and target have free rank)")]
    InfiniteHomSet,
    #[error("invalid invariant factors: {0}")]
    BadInvariantFactors(String),
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

/// `Z^rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_t` with `d₁ | d₂ | … | d_t`, each `dᵢ ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct AbGroup {
    rank: usize,
    torsion: Vec<u64>,
}

impl AbGroup {
    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<Self, AbelianError> {
        for w in torsion.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(AbelianError::BadInvariantFactors(format!(
                    "{} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        if torsion.iter().any(|&d| d < 2) {
            return Err(AbelianError::BadInvariantFactors(
                "factors must be >= 2".into(),
            ));
        }
        Ok(AbGroup { rank, torsion })
    }

    pub fn trivial() -> Self {
        AbGroup { rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        AbGroup { rank, torsion: vec![] }
    }

    /// `Z/d`; `d = 1` gives the trivial group.
    pub fn cyclic(d: u64) -> Self {
        if d <= 1 {
            Self::trivial()
        } else {
            AbGroup { rank: 0, torsion: vec![d] }
        }
    }

    /// Normalize an arbitrary product of cyclic factors into invariant factors.
    pub fn from_cyclic_factors(rank: usize, moduli: &[u64]) -> Self {
        use std::collections::BTreeMap;
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &m in moduli {
            let mut m = m;
            assert!(m >= 1, "cyclic factor must be positive");
            let mut p = 2;
            while p * p <= m {
                if m % p == 0 {
                    let mut e = 0;
                    while m % p == 0 {
                        m /= p;
                        e += 1;
                    }
                    by_prime.entry(p).or_default().push(e);
                }
                p += 1;
            }
            if m > 1 {
                by_prime.entry(m).or_default().push(1);
            }
        }
        let depth = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut inv = vec![1u64; depth];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (i, e) in exps.into_iter().enumerate() {
                inv[i] *= p.pow(e);
            }
        }
        inv.reverse();
        AbGroup { rank, torsion: inv }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Group order; `None` when the rank is positive.
    pub fn order(&self) -> Option<u64> {
        if self.rank > 0 {
            return None;
        }
        self.torsion.iter().try_fold(1u64, |a, &d| a.checked_mul(d))
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" x "))
    }
}

/// Row-major integer matrix; rows are relations among `cols` generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self, AbelianError> {
        if entries.len() != rows * cols {
            return Err(AbelianError::Shape(format!(
                "{rows}x{cols} grid needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self, AbelianError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(AbelianError::Shape("ragged rows".into()));
            }
            entries.extend_from_slice(r);
        }
        IntMatrix::new(rows.len(), cols, entries)
    }

    fn at(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }
}

fn cadd(a: i64, b: i64) -> Result<i64, AbelianError> {
    a.checked_add(b).ok_or(AbelianError::Overflow)
}

fn csub(a: i64, b: i64) -> Result<i64, AbelianError> {
    a.checked_sub(b).ok_or(AbelianError::Overflow)
}

fn cmul(a: i64, b: i64) -> Result<i64, AbelianError> {
    a.checked_mul(b).ok_or(AbelianError::Overflow)
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Cokernel `Z^cols / rowspan(m)` in invariant-factor form.
///
/// Standard Smith reduction with a minimal-pivot rule; diagonal entries equal
/// to 1 are dropped, zero columns count into the free rank. All arithmetic is
/// overflow-checked so a pathological input fails loudly instead of silently
/// wrapping.
pub fn smith_normalize(m: &IntMatrix) -> Result<AbGroup, AbelianError> {
    let (r, c) = (m.rows, m.cols);
    let mut a: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..c).map(|j| m.at(i, j)).collect())
        .collect();
    let mut diag: Vec<u64> = Vec::new();
    let mut k = 0usize;
    'outer: while k < r.min(c) {
        loop {
            // smallest nonzero entry of the trailing submatrix becomes the pivot
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..r {
                for j in k..c {
                    if a[i][j] != 0
                        && pivot
                            .map_or(true, |(pi, pj)| a[i][j].unsigned_abs() < a[pi][pj].unsigned_abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break 'outer };
            a.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            let mut clean = true;
            for i in k + 1..r {
                if a[i][k] != 0 {
                    let q = a[i][k].div_euclid(a[k][k]);
                    for j in k..c {
                        a[i][j] = csub(a[i][j], cmul(q, a[k][j])?)?;
                    }
                    if a[i][k] != 0 {
                        clean = false;
                    }
                }
            }
            for j in k + 1..c {
                if a[k][j] != 0 {
                    let q = a[k][j].div_euclid(a[k][k]);
                    for i in k..r {
                        a[i][j] = csub(a[i][j], cmul(q, a[i][k])?)?;
                    }
                    if a[k][j] != 0 {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest of the submatrix for the chain condition
            let p = a[k][k];
            let mut divisible = true;
            'scan: for i in k + 1..r {
                for j in k + 1..c {
                    if a[i][j] % p != 0 {
                        for jj in k..c {
                            a[k][jj] = cadd(a[k][jj], a[i][jj])?;
                        }
                        divisible = false;
                        break 'scan;
                    }
                }
            }
            if !divisible {
                continue;
            }
            diag.push(p.unsigned_abs());
            k += 1;
            break;
        }
    }
    let torsion: Vec<u64> = diag.iter().copied().filter(|&d| d > 1).collect();
    AbGroup::new(c - diag.len(), torsion)
}

/// `#Hom(g, h)` for finite hom sets.
///
/// For `g = Z^r ⊕ ⊕Z/dᵢ` and a cyclic factor `Z/e` of `h` the contribution is
/// `e^r · ∏ᵢ gcd(dᵢ, e)`; free factors of `h` only receive the zero map from
/// torsion. Infinite when both sides have free rank.
pub fn hom_count(g: &AbGroup, h: &AbGroup) -> Result<u64, AbelianError> {
    if g.rank > 0 && h.rank > 0 {
        return Err(AbelianError::InfiniteHomSet);
    }
    let mut count: u64 = 1;
    for &e in &h.torsion {
        for _ in 0..g.rank {
            count = count.checked_mul(e).ok_or(AbelianError::Overflow)?;
        }
        for &d in &g.torsion {
            count = count
                .checked_mul(gcd_u64(d, e))
                .ok_or(AbelianError::Overflow)?;
        }
    }
    Ok(count)
}

/// Invariant factors of a finite abelian group given by its multiplication.
///
/// Elements are `0..n`; `op` must be a total commutative associative group
/// law. The decomposition peels off a maximal-order cyclic factor and recurses
/// on the quotient, which is valid exactly because a cyclic subgroup of
/// maximal order is a direct summand.
pub fn structure_of_finite_group<F>(n: usize, op: F) -> Result<AbGroup, AbelianError>
where
    F: Fn(usize, usize) -> usize,
{
    if n == 0 {
        return Err(AbelianError::NotAGroup("empty carrier".into()));
    }
    let mut table = vec![vec![0usize; n]; n];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let v = op(i, j);
            if v >= n {
                return Err(AbelianError::NotAGroup(format!(
                    "product {i}*{j} = {v} outside carrier"
                )));
            }
            *cell = v;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if table[i][j] != table[j][i] {
                return Err(AbelianError::NotAGroup(format!(
                    "not commutative at ({i},{j})"
                )));
            }
            for k in 0..n {
                if table[table[i][j]][k] != table[i][table[j][k]] {
                    return Err(AbelianError::NotAGroup(format!(
                        "not associative at ({i},{j},{k})"
                    )));
                }
            }
        }
    }
    let Some(e) = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x)) else {
        return Err(AbelianError::NotAGroup("no identity".into()));
    };
    for x in 0..n {
        if !(0..n).any(|y| table[x][y] == e) {
            return Err(AbelianError::NotAGroup(format!("{x} has no inverse")));
        }
    }
    let torsion = invariant_factors(&table, e);
    AbGroup::new(0, torsion)
}

fn order_in(table: &[Vec<usize>], e: usize, x: usize) -> u64 {
    let mut p = x;
    let mut k = 1u64;
    while p != e {
        p = table[p][x];
        k += 1;
    }
    k
}

fn invariant_factors(table: &[Vec<usize>], e: usize) -> Vec<u64> {
    let n = table.len();
    if n == 1 {
        return vec![];
    }
    let x = (0..n)
        .max_by_key(|&x| order_in(table, e, x))
        .expect("nonempty");
    let m = order_in(table, e, x);
    // cosets of <x>
    let mut cyc = vec![e];
    let mut p = x;
    while p != e {
        cyc.push(p);
        p = table[p][x];
    }
    let in_cyc: Vec<bool> = {
        let mut v = vec![false; n];
        for &c in &cyc {
            v[c] = true;
        }
        v
    };
    let inv: Vec<usize> = (0..n)
        .map(|y| (0..n).find(|&z| table[y][z] == e).expect("group"))
        .collect();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for y in 0..n {
        if coset_of[y] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(y);
        for z in y..n {
            if coset_of[z] == usize::MAX && in_cyc[table[y][inv[z]]] {
                coset_of[z] = id;
            }
        }
    }
    let q = reps.len();
    let qtable: Vec<Vec<usize>> = (0..q)
        .map(|i| (0..q).map(|j| coset_of[table[reps[i]][reps[j]]]).collect())
        .collect();
    let mut rest = invariant_factors(&qtable, coset_of[e]);
    rest.push(m);
    rest.retain(|&d| d > 1);
    rest
}
