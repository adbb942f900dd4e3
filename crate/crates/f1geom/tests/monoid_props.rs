//! Structural invariants of the monoid layer, checked exhaustively over the
//! enumerated corpus at the sizes where exhaustion is affordable.

use f1geom::abelian::{hom_count, AbGroup};
use f1geom::monoid::{
    enumerate_monoids, hom_set, ideals, isomorphic, localize, maximal_prime, mult_closure,
    prime_ideals, radical, FinMonoid, Ideal,
};
use f1geom::scheme::{base_projection, open_subfunctor_points, spec_space};
use proptest::prelude::*;

fn small_table(labels: &[&str], rows: &[&[usize]]) -> FinMonoid {
    FinMonoid::from_rows(labels, 0, 1, rows).expect("fixed table is valid")
}

/// {0, 1, e} with e idempotent.
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

fn corpus(max_size: usize) -> Vec<FinMonoid> {
    let mut out = enumerate_monoids(max_size);
    out.extend(named_monoids());
    out
}

#[test]
fn maximal_prime_contains_every_prime() {
    let mut monoids = 0usize;
    let mut primes = 0usize;
    for m in corpus(5) {
        let top = maximal_prime(&m).members();
        for p in prime_ideals(&m).expect("prime enumeration") {
            assert_eq!(
                p.members() & !top,
                0,
                "prime {} escapes the non-units of a size-{} monoid",
                m.set_to_string(p.members()),
                m.size()
            );
            primes += 1;
        }
        monoids += 1;
    }
    assert!(monoids >= 68 && primes > monoids);
}

#[test]
fn radical_is_the_intersection_of_containing_primes() {
    // Size six is the largest corpus that enumerates in seconds; it is well
    // past the first monoids with non-radical ideals of every flavour.
    let mut checked = 0usize;
    for m in enumerate_monoids(6) {
        let primes = prime_ideals(&m).expect("prime enumeration");
        for i in ideals(&m).expect("ideal enumeration") {
            let rad = radical(i).members();
            let mut meet = m.all_elements();
            for p in &primes {
                if i.members() & !p.members() == 0 {
                    meet &= p.members();
                }
            }
            assert_eq!(rad, meet, "radical mismatch on {}", m.set_to_string(i.members()));
            checked += 1;
        }
    }
    assert!(checked > 1000, "only {checked} ideals checked");
}

#[test]
fn every_cover_of_the_spectrum_contains_the_whole_space() {
    let mut covers = 0usize;
    for m in corpus(5) {
        let x = spec_space(&m).expect("spectrum");
        let full: u64 = (1 << x.points.len()) - 1;
        let full_idx = x.opens.iter().position(|&o| o == full).expect("whole space is open");
        assert!(x.opens.len() <= 20, "open lattice too large to enumerate");
        // Literally every subfamily of opens: if it covers, it contains the
        // top. This is the quasi-compactness degeneracy in the finite case.
        for pick in 0u32..(1u32 << x.opens.len()) {
            let mut union = 0u64;
            for (j, &o) in x.opens.iter().enumerate() {
                if pick >> j & 1 == 1 {
                    union |= o;
                }
            }
            if union == full {
                assert!(
                    pick >> full_idx & 1 == 1,
                    "a proper subfamily covers a size-{} spectrum",
                    x.points.len()
                );
                covers += 1;
            }
        }
        // Equivalent pointwise statement: the closed point lies only in the
        // whole space, so no proper open family can reach it.
        let closed = x
            .point_of_prime(maximal_prime(&m).members())
            .expect("closed point is a point");
        for &o in &x.opens {
            if o >> closed & 1 == 1 {
                assert_eq!(o, full);
            }
        }
    }
    assert!(covers > 500, "only {covers} covering families seen");
}

#[test]
fn localizing_at_the_units_changes_nothing() {
    for m in corpus(4) {
        let s = mult_closure(&m, 1 << m.one());
        let l = localize(&m, s).expect("localizing at one");
        assert!(isomorphic(&l.monoid, &m), "inverting 1 altered a size-{} monoid", m.size());
    }
}

#[test]
fn iterated_localization_matches_localization_at_the_joint_closure() {
    let mut composites = 0usize;
    for m in corpus(4) {
        for f in 0..m.size() {
            for g in 0..m.size() {
                let s_fg = mult_closure(&m, (1 << f) | (1 << g));
                let joint_collapses = s_fg >> m.zero() & 1 == 1;
                let s_f = mult_closure(&m, 1 << f);
                if s_f >> m.zero() & 1 == 1 {
                    assert!(joint_collapses);
                    continue;
                }
                let l1 = localize(&m, s_f).expect("first localization");
                let g1 = l1.map.apply(g);
                let s_g1 = mult_closure(&l1.monoid, 1 << g1);
                if s_g1 >> l1.monoid.zero() & 1 == 1 {
                    // g dies after inverting f exactly when some f^a g^b = 0.
                    assert!(joint_collapses);
                    continue;
                }
                assert!(!joint_collapses);
                let l2 = localize(&l1.monoid, s_g1).expect("second localization");
                let joint = localize(&m, s_fg).expect("joint localization");
                assert!(
                    isomorphic(&l2.monoid, &joint.monoid),
                    "({f},{g}) on a size-{} monoid",
                    m.size()
                );
                composites += 1;
            }
        }
    }
    assert!(composites > 100, "only {composites} composite localizations");
}

#[test]
fn group_monoid_points_count_homs_into_the_unit_group() {
    let sources = [
        AbGroup::trivial(),
        AbGroup::cyclic(2),
        AbGroup::cyclic(3),
        AbGroup::cyclic(4),
        AbGroup::new(0, vec![2, 2]).expect("Z/2 x Z/2"),
        AbGroup::cyclic(6),
    ];
    for g in &sources {
        let a = group_monoid(g);
        for m in corpus(4) {
            let homs = hom_set(&a, &m).expect("hom enumeration");
            let (_, units) = m.units();
            let expected = hom_count(g, &units).expect("both sides finite");
            assert_eq!(
                homs.len() as u64,
                expected,
                "points of a group monoid over a size-{} target",
                m.size()
            );
        }
    }
}

#[test]
fn open_pieces_agree_with_the_base_projection() {
    let mut pieces = 0usize;
    let mut sources = enumerate_monoids(3);
    sources.push(three_idempotent());
    sources.push(three_nilpotent());
    let targets = corpus(3);
    for a in &sources {
        let x = spec_space(a).expect("spectrum");
        for n in &targets {
            let homs = hom_set(a, n).expect("hom enumeration");
            for i in ideals(a).expect("ideal enumeration") {
                let via_functor = open_subfunctor_points(a, &i, n).expect("open subfunctor");
                let mut d_mask = 0u64;
                for (j, p) in x.points.iter().enumerate() {
                    let prime = p.prime.expect("affine points carry primes");
                    if i.members() & !prime != 0 {
                        d_mask |= 1 << j;
                    }
                }
                let direct: Vec<Vec<usize>> = homs
                    .iter()
                    .filter(|h| {
                        let pt = base_projection(&x, h).expect("projection lands in the space");
                        d_mask >> pt & 1 == 1
                    })
                    .map(|h| h.images.clone())
                    .collect();
                let via: Vec<Vec<usize>> = via_functor.into_iter().map(|h| h.images).collect();
                assert_eq!(via, direct, "ideal {}", a.set_to_string(i.members()));
                pieces += 1;
            }
        }
    }
    assert!(pieces > 100, "only {pieces} open pieces compared");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_extensive_and_idempotent(idx in 0usize..68, seed in 1u64..32) {
        let ms = enumerate_monoids(5);
        let m = &ms[idx % ms.len()];
        let seed = seed & m.all_elements();
        prop_assume!(seed != 0);
        let s = mult_closure(m, seed);
        prop_assert_eq!(s & seed, seed);
        prop_assert_eq!(mult_closure(m, s), s);
    }

    #[test]
    fn radical_is_extensive_and_idempotent(idx in 0usize..68, raw in 0u64..32) {
        let ms = enumerate_monoids(5);
        let m = &ms[idx % ms.len()];
        // Force a valid ideal: absorb the seed downward by multiplication.
        let mut mask = (raw & m.all_elements()) | (1 << m.zero());
        loop {
            let mut next = mask;
            for x in 0..m.size() {
                for y in 0..m.size() {
                    if mask >> x & 1 == 1 {
                        next |= 1 << m.mul(x, y);
                    }
                }
            }
            if next == mask {
                break;
            }
            mask = next;
        }
        prop_assume!(mask & (1 << m.one()) == 0 || mask == m.all_elements());
        let i = Ideal::new(m, mask).expect("absorbed mask is an ideal");
        let r = radical(i);
        prop_assert_eq!(r.members() & mask, mask);
        prop_assert_eq!(radical(r).members(), r.members());
    }
}
