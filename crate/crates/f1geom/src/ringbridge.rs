//! Monoid rings over the integers and prime fields, the square-one quotient,
//! and the adjunction between monoid homs and ring homs.
//!
//! The bridge used everywhere: a ring hom out of a monoid ring is exactly a
//! monoid hom out of the base monoid into the target's multiplicative monoid.
//! Counting field points therefore never enumerates raw ring maps.

use std::collections::HashSet;

use thiserror::Error;

use crate::abelian::{self, AbGroup, AbelianError, IntMatrix};
use crate::monoid::{self, FinMonoid, MonoidError, MonoidInput, SymMonoid};
use crate::scheme::{SchemeDescriptor, SchemeError};

#[derive(Debug, Error)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is neither 0 nor prime")]
    BadModulus(u64),
    #[error("element {0} does not square to one")]
    BadEpsilon(String),
    #[error("ring axiom failed on basis: {0}")]
    AxiomFailure(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The field with `p` elements, `p` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    /// The multiplicative monoid `(F_p, ·)` as an explicit table.
    pub fn as_monoid(&self) -> Result<FinMonoid, MonoidError> {
        let p = self.p as usize;
        let labels: Vec<String> = (0..p).map(|x| x.to_string()).collect();
        let table: Vec<usize> = (0..p)
            .flat_map(|x| (0..p).map(move |y| x * y % p))
            .collect();
        FinMonoid::new(labels, 0, 1, table)
    }
}

/// The monoid ring on a finite monoid, with the monoid zero identified with
/// the ring zero. Coefficients are integers (`modulus = 0`) or `F_p`.
#[derive(Debug, Clone)]
pub struct MonoidRing {
    pub monoid: FinMonoid,
    pub modulus: u64,
    basis: Vec<usize>,
    basis_pos: Vec<Option<usize>>,
}

impl MonoidRing {
    pub fn new(m: &FinMonoid, modulus: u64) -> Result<Self, RingError> {
        if modulus != 0 && !is_prime(modulus) {
            return Err(RingError::BadModulus(modulus));
        }
        let basis: Vec<usize> = (0..m.size()).filter(|&x| x != m.zero()).collect();
        let mut basis_pos = vec![None; m.size()];
        for (i, &x) in basis.iter().enumerate() {
            basis_pos[x] = Some(i);
        }
        let r = MonoidRing { monoid: m.clone(), modulus, basis, basis_pos };
        r.verify_axioms()?;
        Ok(r)
    }

    /// Free rank over the coefficients: one generator per nonzero element.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Product of basis elements: another basis element, or ring zero.
    pub fn basis_mul(&self, i: usize, j: usize) -> Option<usize> {
        self.basis_pos[self.monoid.mul(self.basis[i], self.basis[j])]
    }

    /// Convolution product of coefficient vectors over the basis.
    pub fn mul_vec(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.rank()];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                if let Some(k) = self.basis_mul(i, j) {
                    out[k] += ai * bj;
                }
            }
        }
        if self.modulus != 0 {
            let p = self.modulus as i64;
            for c in &mut out {
                *c = (*c % p + p) % p;
            }
        }
        out
    }

    /// Associativity, commutativity, and unitality on the basis, where
    /// bilinearity makes them equivalent to the general statements.
    fn verify_axioms(&self) -> Result<(), RingError> {
        let n = self.rank();
        let one = self.basis_pos[self.monoid.one()].expect("one is nonzero");
        for i in 0..n {
            if self.basis_mul(one, i) != Some(i) {
                return Err(RingError::AxiomFailure(format!("unit fails on {i}")));
            }
            for j in i..n {
                if self.basis_mul(i, j) != self.basis_mul(j, i) {
                    return Err(RingError::AxiomFailure(format!("commutativity ({i},{j})")));
                }
                for k in 0..n {
                    let left = self.basis_mul(i, j).and_then(|ij| self.basis_mul(ij, k));
                    let right = self.basis_mul(j, k).and_then(|jk| self.basis_mul(i, jk));
                    if left != right {
                        return Err(RingError::AxiomFailure(format!(
                            "associativity ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A monoid with a distinguished square-one element.
#[derive(Debug, Clone)]
pub struct EpsilonMonoid {
    pub monoid: FinMonoid,
    pub eps: usize,
}

impl EpsilonMonoid {
    pub fn new(m: &FinMonoid, eps: usize) -> Result<Self, RingError> {
        if eps >= m.size() || m.mul(eps, eps) != m.one() {
            return Err(RingError::BadEpsilon(
                m.labels().get(eps).cloned().unwrap_or_else(|| format!("#{eps}")),
            ));
        }
        Ok(EpsilonMonoid { monoid: m.clone(), eps })
    }
}

/// Additive structure of `Z[M]/(1+ε)Z[M]`: Smith normal form of the lattice
/// spanned by `(1+ε)·b` over the nonzero-element basis.
pub fn epsilon_quotient(em: &EpsilonMonoid) -> Result<AbGroup, RingError> {
    let ring = MonoidRing::new(&em.monoid, 0)?;
    let n = ring.rank();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![0i64; n];
        row[i] += 1;
        let ex = em.monoid.mul(em.eps, ring.basis()[i]);
        let j = ring.basis_pos[ex].expect("unit multiple of a nonzero element is nonzero");
        row[j] += 1;
        rows.push(row);
    }
    let flat: Vec<i64> = rows.into_iter().flatten().collect();
    let mat = IntMatrix::new(n, n, flat)?;
    Ok(abelian::smith_normalize(&mat)?)
}

/// `#Hom_Ring(Z[m], F_p)` computed through the adjunction as
/// `#Hom_Mo(m, (F_p,·))`.
pub fn ring_points(m: &MonoidInput, f: PrimeField) -> Result<u64, RingError> {
    match m {
        MonoidInput::Fin(m) => {
            let fp = f.as_monoid()?;
            Ok(monoid::hom_set(m, &fp)?.len() as u64)
        }
        MonoidInput::Sym(SymMonoid::F1Group(g)) => {
            // group homs into F_p^× = Z/(p−1)
            Ok(abelian::hom_count(g, &AbGroup::cyclic(f.order() - 1))?)
        }
        MonoidInput::Sym(SymMonoid::FreeMonoid(n)) => {
            let mut total = 1u64;
            for _ in 0..*n {
                total = total.checked_mul(f.order()).ok_or(AbelianError::Overflow)?;
            }
            Ok(total)
        }
    }
}

/// Brute-force count of `F_p`-rational points of the named spaces.
///
/// The projective line is counted by enumerating lines in `F_p²` literally;
/// affine space and tori by their defining counts; spectra through the
/// adjunction.
pub fn scheme_fq_points(d: &SchemeDescriptor, p: u64) -> Result<u64, RingError> {
    let f = PrimeField::new(p)?;
    match d {
        SchemeDescriptor::P1 => {
            let p = p as usize;
            let mut lines: HashSet<(usize, usize)> = HashSet::new();
            for a in 0..p {
                for b in 0..p {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let rep = (1..p)
                        .map(|l| (l * a % p, l * b % p))
                        .min()
                        .expect("p >= 2");
                    lines.insert(rep);
                }
            }
            Ok(lines.len() as u64)
        }
        SchemeDescriptor::Affine(n) => {
            ring_points(&MonoidInput::Sym(SymMonoid::FreeMonoid(*n)), f)
        }
        SchemeDescriptor::Torus(r) => {
            let mut total = 1u64;
            for _ in 0..*r {
                total = total.checked_mul(p - 1).ok_or(AbelianError::Overflow)?;
            }
            Ok(total)
        }
        SchemeDescriptor::Mu(d) => {
            // solutions of x^d = 1 in F_p, by direct exponentiation
            let mut count = 0u64;
            for x in 1..p {
                let mut acc = 1u64;
                for _ in 0..*d {
                    acc = acc * x % p;
                }
                if acc == 1 {
                    count += 1;
                }
            }
            Ok(count)
        }
        SchemeDescriptor::Spec(m) => ring_points(m, f),
    }
}

/// Outcome of the adjunction verification for one monoid and prime.
#[derive(Debug, Clone)]
pub struct AdjunctionReport {
    pub monoid_homs: usize,
    pub ring_homs_verified: usize,
    pub injective: bool,
    pub pass: bool,
}

/// Verify the adjunction concretely: every monoid hom `m → (F_p,·)` extends
/// linearly to a ring hom `Z[m] → F_p` (checked multiplicatively on all
/// basis pairs and on all pairwise sums of basis vectors), distinct homs
/// extend to distinct ring homs, and conversely any ring hom restricts to a
/// monoid hom on the basis, so the counts agree.
pub fn adjunction_check(m: &FinMonoid, p: u64) -> Result<AdjunctionReport, RingError> {
    let f = PrimeField::new(p)?;
    let fp = f.as_monoid()?;
    let ring = MonoidRing::new(m, p)?;
    let homs = monoid::hom_set(m, &fp)?;
    let pi = p as i64;
    let mut verified = 0usize;
    for h in &homs {
        // the extension sends Σ c_x [x] to Σ c_x h(x) mod p
        let ext = |v: &[i64]| -> i64 {
            let mut acc = 0i64;
            for (i, &c) in v.iter().enumerate() {
                acc = (acc + c * h.apply(ring.basis()[i]) as i64) % pi;
            }
            (acc % pi + pi) % pi
        };
        let n = ring.rank();
        let mut ok = true;
        let mut vecs: Vec<Vec<i64>> = Vec::new();
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            vecs.push(e);
        }
        for i in 0..n {
            for j in 0..n {
                let mut s = vec![0i64; n];
                s[i] += 1;
                s[j] += 1;
                vecs.push(s);
            }
        }
        'check: for a in &vecs {
            for b in &vecs {
                let lhs = ext(&ring.mul_vec(a, b));
                let rhs = ext(a) * ext(b) % pi;
                if lhs != rhs {
                    ok = false;
                    break 'check;
                }
            }
        }
        if ok {
            verified += 1;
        }
    }
    let distinct: HashSet<Vec<usize>> = homs.iter().map(|h| h.images.clone()).collect();
    let injective = distinct.len() == homs.len();
    // a ring hom restricted to the basis is multiplicative with 0 ↦ 0 and
    // 1 ↦ 1, i.e. a monoid hom, so the two sides are in bijection exactly
    // when every extension verified and the extension map is injective
    let pass = injective && verified == homs.len();
    Ok(AdjunctionReport { monoid_homs: homs.len(), ring_homs_verified: verified, injective, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idempotent3() -> FinMonoid {
        FinMonoid::from_rows(&["0", "1", "e"], 0, 1, &[&[0, 0, 0], &[0, 1, 2], &[0, 2, 2]])
            .unwrap()
    }

    #[test]
    fn monoid_ring_ranks() {
        let z2 = FinMonoid::f1_group(&AbGroup::cyclic(2)).unwrap();
        assert_eq!(MonoidRing::new(&z2, 0).unwrap().rank(), 2);
        assert_eq!(MonoidRing::new(&idempotent3(), 0).unwrap().rank(), 2);
        assert_eq!(MonoidRing::new(&FinMonoid::f1(), 5).unwrap().rank(), 1);
        assert!(MonoidRing::new(&FinMonoid::f1(), 6).is_err());
    }

    #[test]
    fn monoid_ring_convolution() {
        // Z[x]/(x²−1): (1+σ)(1−σ) = 0
        let z2 = FinMonoid::f1_group(&AbGroup::cyclic(2)).unwrap();
        let r = MonoidRing::new(&z2, 0).unwrap();
        assert_eq!(r.mul_vec(&[1, 1], &[1, -1]), vec![0, 0]);
        // Z[e]/(e²−e): e·e = e
        let r = MonoidRing::new(&idempotent3(), 0).unwrap();
        assert_eq!(r.mul_vec(&[0, 1], &[0, 1]), vec![0, 1]);
    }

    #[test]
    fn epsilon_quotients() {
        let z2 = FinMonoid::f1_group(&AbGroup::cyclic(2)).unwrap();
        let em = EpsilonMonoid::new(&z2, 2).unwrap();
        let g = epsilon_quotient(&em).unwrap();
        assert_eq!(g, AbGroup::free(1));
        // F1[Z/4] with ε = g²: quotient is rank 2 (the Gaussian integers)
        let z4 = FinMonoid::f1_group(&AbGroup::cyclic(4)).unwrap();
        let eps = z4.index_of("g^2").unwrap();
        let em = EpsilonMonoid::new(&z4, eps).unwrap();
        let g = epsilon_quotient(&em).unwrap();
        assert_eq!(g, AbGroup::free(2));
        // ε = 1: quotient by 2Z[M]
        let em = EpsilonMonoid::new(&z4, z4.one()).unwrap();
        let g = epsilon_quotient(&em).unwrap();
        assert_eq!(g, AbGroup::new(0, vec![2, 2, 2, 2]).unwrap());
        // non-involutions rejected
        assert!(EpsilonMonoid::new(&z4, z4.index_of("g").unwrap()).is_err());
        assert!(EpsilonMonoid::new(&idempotent3(), 2).is_err());
    }

    #[test]
    fn ring_point_counts() {
        let z6 = FinMonoid::f1_group(&AbGroup::cyclic(6)).unwrap();
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(ring_points(&MonoidInput::Fin(z6), f7).unwrap(), 6);
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(ring_points(&MonoidInput::Fin(idempotent3()), f3).unwrap(), 2);
        for p in [2, 3, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            assert_eq!(ring_points(&MonoidInput::Fin(FinMonoid::f1()), f).unwrap(), 1);
        }
        // symbolic routes
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(
            ring_points(&MonoidInput::Sym(SymMonoid::FreeMonoid(2)), f5).unwrap(),
            25
        );
        assert_eq!(
            ring_points(&MonoidInput::Sym(SymMonoid::F1Group(AbGroup::free(2))), f5).unwrap(),
            16
        );
    }

    #[test]
    fn fq_point_counts_match_named_examples() {
        assert_eq!(scheme_fq_points(&SchemeDescriptor::P1, 5).unwrap(), 6);
        assert_eq!(scheme_fq_points(&SchemeDescriptor::Affine(2), 3).unwrap(), 9);
        assert_eq!(scheme_fq_points(&SchemeDescriptor::Mu(6), 7).unwrap(), 6);
        assert_eq!(scheme_fq_points(&SchemeDescriptor::Torus(2), 5).unwrap(), 16);
        for p in [2u64, 3, 5, 7] {
            assert_eq!(scheme_fq_points(&SchemeDescriptor::P1, p).unwrap(), p + 1);
        }
    }

    #[test]
    fn fq_points_match_counting_polynomial() {
        use crate::scheme::{counting_polynomial, realize};
        let descs = [
            SchemeDescriptor::P1,
            SchemeDescriptor::Affine(1),
            SchemeDescriptor::Affine(2),
            SchemeDescriptor::Affine(3),
            SchemeDescriptor::Torus(1),
            SchemeDescriptor::Torus(2),
            SchemeDescriptor::Torus(3),
        ];
        for d in &descs {
            let n = counting_polynomial(&realize(d).unwrap()).unwrap();
            for p in [2i64, 3, 5, 7] {
                let expect = n.eval_i64(p).unwrap();
                let got = scheme_fq_points(d, p as u64).unwrap();
                assert_eq!(got as i64, expect, "{d:?} at p = {p}");
            }
        }
    }

    #[test]
    fn mu_points_bridge_to_f1_powers() {
        use crate::abelian::gcd_u64;
        use crate::scheme::{points_over_f1n, realize};
        for d in 1..=8u64 {
            let x = realize(&SchemeDescriptor::Mu(d)).unwrap();
            for p in [2u64, 3, 5, 7] {
                let fq = scheme_fq_points(&SchemeDescriptor::Mu(d), p).unwrap();
                assert_eq!(fq, gcd_u64(d, p - 1), "mu({d}) over F_{p}");
                if p > 2 {
                    assert_eq!(fq, points_over_f1n(&x, p - 1).unwrap());
                } else {
                    // F_2 has trivial unit group: one point, matching n = 1
                    assert_eq!(fq, points_over_f1n(&x, 1).unwrap());
                }
            }
        }
    }

    #[test]
    fn adjunction_examples() {
        let z2 = FinMonoid::f1_group(&AbGroup::cyclic(2)).unwrap();
        let r = adjunction_check(&z2, 3).unwrap();
        assert!(r.pass);
        assert_eq!(r.monoid_homs, 2);
        let r = adjunction_check(&idempotent3(), 2).unwrap();
        assert!(r.pass);
        assert_eq!(r.monoid_homs, 2);
        let r = adjunction_check(&FinMonoid::f1(), 5).unwrap();
        assert!(r.pass);
        assert_eq!(r.monoid_homs, 1);
    }
}
