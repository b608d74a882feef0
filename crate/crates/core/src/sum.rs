//! Fixed-tree pairwise summation.
//!
//! The split points depend only on the length, so results are bit-identical
//! regardless of how many worker threads rayon uses.

const LEAF: usize = 256;
const PARALLEL_ABOVE: usize = 1 << 16;

/// `Σ_{i < len} term(i)` summed over a fixed binary tree.
pub fn pairwise<F>(len: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    range(0, len, &term)
}

fn range<F>(lo: usize, hi: usize, term: &F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let len = hi - lo;
    if len <= LEAF {
        let mut acc = 0.0;
        for i in lo..hi {
            acc += term(i);
        }
        return acc;
    }
    let mid = lo + len / 2;
    if len > PARALLEL_ABOVE {
        let (l, r) = rayon::join(|| range(lo, mid, term), || range(mid, hi, term));
        l + r
    } else {
        range(lo, mid, term) + range(mid, hi, term)
    }
}

/// Relative error factor `γ` such that `|computed − exact| <= γ · Σ|term(i)|`
/// for [`pairwise`] over `len` terms.
pub fn error_factor(len: usize) -> f64 {
    let leaf = len.min(LEAF) as f64;
    let mut depth = 0u32;
    let mut n = len;
    while n > LEAF {
        n = n.div_ceil(2);
        depth += 1;
    }
    (leaf + f64::from(depth) + 1.0) * f64::EPSILON
}
