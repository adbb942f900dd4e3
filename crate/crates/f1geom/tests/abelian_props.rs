//! Oracles for the abelian-group layer.
//!
//! Smith normalization is checked against the determinantal-divisor oracle:
//! the gcd `D_k` of all k×k minors satisfies `d₁⋯d_k = D_k`, which pins every
//! invariant factor without running any elimination. Hom counting is checked
//! against literal enumeration of generator images.

use f1geom::abelian::{
    hom_count, smith_normalize, structure_of_finite_group, AbGroup, IntMatrix,
};
use proptest::prelude::*;

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return vec![];
    }
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance the rightmost index that can move
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => {
            let mut acc = 0i128;
            for j in 0..n {
                if m[0][j] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i128>> = (1..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&c| c != j)
                            .map(|c| m[i][c])
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                acc += sign * m[0][j] * det_i128(&minor);
            }
            acc
        }
    }
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// (free rank, invariant factors) of coker via determinantal divisors.
fn minors_oracle(rows: usize, cols: usize, data: &[i64]) -> (usize, Vec<u64>) {
    let kmax = rows.min(cols);
    let mut d_prev: i128 = 1;
    let mut factors: Vec<u64> = Vec::new();
    let mut rank = 0usize;
    for k in 1..=kmax {
        let mut g: i128 = 0;
        for rsel in combinations(rows, k) {
            for csel in combinations(cols, k) {
                let sub: Vec<Vec<i128>> = rsel
                    .iter()
                    .map(|&i| csel.iter().map(|&j| data[i * cols + j] as i128).collect())
                    .collect();
                g = gcd_i128(g, det_i128(&sub));
            }
        }
        if g == 0 {
            break;
        }
        factors.push((g / d_prev) as u64);
        d_prev = g;
        rank = k;
    }
    (
        cols - rank,
        factors.into_iter().filter(|&d| d > 1).collect(),
    )
}

proptest! {
    #[test]
    fn smith_matches_determinantal_divisors(
        rows in 0usize..=4,
        cols in 1usize..=4,
        seed in proptest::collection::vec(-5i64..=5, 16),
    ) {
        let data: Vec<i64> = seed.iter().copied().take(rows * cols).collect();
        prop_assume!(data.len() == rows * cols);
        let m = IntMatrix::new(rows, cols, data.clone()).unwrap();
        let got = smith_normalize(&m).unwrap();
        let (rank, factors) = minors_oracle(rows, cols, &data);
        prop_assert_eq!(got.rank(), rank);
        prop_assert_eq!(got.torsion().to_vec(), factors);
    }

    #[test]
    fn structure_recovers_products_of_cyclics(
        moduli in proptest::collection::vec(1u64..=6, 1..=3),
    ) {
        let sizes: Vec<u64> = moduli.clone();
        let n: u64 = sizes.iter().product();
        prop_assume!(n <= 60);
        // componentwise addition on the direct product, elements mixed-radix encoded
        let op = |a: usize, b: usize| {
            let (mut a, mut b) = (a as u64, b as u64);
            let mut out = 0u64;
            let mut place = 1u64;
            for &m in &sizes {
                out += ((a % m + b % m) % m) * place;
                place *= m;
                a /= m;
                b /= m;
            }
            out as usize
        };
        let got = structure_of_finite_group(n as usize, op).unwrap();
        prop_assert_eq!(got, AbGroup::from_cyclic_factors(0, &moduli));
    }
}

/// Literal count of generator-image tuples for `Hom(Z^r ⊕ ⊕Z/dᵢ, Z/n)`.
fn hom_brute(rank: usize, torsion: &[u64], n: u64) -> u64 {
    let mut c = 1u64;
    for _ in 0..rank {
        c *= n;
    }
    for &d in torsion {
        c *= (0..n).filter(|&x| (d * x) % n == 0).count() as u64;
    }
    c
}

fn divisor_chains(limit: u64) -> Vec<Vec<u64>> {
    // all chains d1 | d2 | ... with product <= limit, each di >= 2
    fn go(prefix: Vec<u64>, product: u64, limit: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let start = prefix.last().copied().unwrap_or(2);
        let mut d = start;
        while product * d <= limit {
            if d % start == 0 || prefix.is_empty() {
                let mut next = prefix.clone();
                next.push(d);
                go(next, product * d, limit, out);
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    go(Vec::new(), 1, limit, &mut out);
    out.retain(|chain| chain.windows(2).all(|w| w[1] % w[0] == 0));
    out
}

#[test]
fn hom_count_matches_enumeration_exhaustively() {
    for chain in divisor_chains(24) {
        for rank in 0..=2usize {
            let g = AbGroup::new(rank, chain.clone()).unwrap();
            for n in 1..=8u64 {
                let h = AbGroup::cyclic(n);
                assert_eq!(
                    hom_count(&g, &h).unwrap(),
                    hom_brute(rank, &chain, n),
                    "g = {g}, n = {n}"
                );
            }
        }
    }
}

#[test]
fn hom_count_into_trivial_is_one() {
    for chain in divisor_chains(24) {
        let g = AbGroup::new(1, chain).unwrap();
        assert_eq!(hom_count(&g, &AbGroup::cyclic(1)).unwrap(), 1);
    }
}
