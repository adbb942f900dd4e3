//! Parallel execution helpers.
//!
//! Every data-parallel loop in the crate goes through this module. With the
//! `parallel` feature (the default) loops run on the rayon global pool;
//! without it they run sequentially. Results are assembled in ascending index
//! order in both builds, and floating-point sums are reduced in fixed-size
//! blocks, so output is bit-identical regardless of feature choice or worker
//! count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sum `f(i)` over `0..n` in fixed blocks of `block` indices.
///
/// Each block is summed left to right and the block sums are added in block
/// order, so the rounding pattern does not depend on scheduling.
pub fn sum_blocks<F>(n: usize, block: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    assert!(block > 0);
    let nblocks = n.div_ceil(block);
    let partial = map_range(nblocks, |b| {
        let lo = b * block;
        let hi = usize::min(lo + block, n);
        let mut s = 0.0;
        for i in lo..hi {
            s += f(i);
        }
        s
    });
    partial.into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_range_preserves_order() {
        let v = map_range(100, |i| i * i);
        assert_eq!(v[7], 49);
        assert_eq!(v.len(), 100);
    }

    #[test]
    fn sum_blocks_matches_sequential_exactly() {
        let f = |i: usize| 1.0 / (1.0 + i as f64).powi(2);
        let blocked = sum_blocks(10_000, 64, f);
        let mut seq = 0.0;
        for b in 0..10_000usize.div_ceil(64) {
            let mut s = 0.0;
            for i in b * 64..usize::min((b + 1) * 64, 10_000) {
                s += f(i);
            }
            seq += s;
        }
        assert_eq!(blocked, seq);
    }
}
