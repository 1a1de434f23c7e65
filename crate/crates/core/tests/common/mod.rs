//! Brute-force oracles that share nothing with the library's algorithms
//! beyond the matrix container.

#![allow(dead_code)]

use num_bigint::BigInt;
use wafom::{DyadicRational, F2Matrix, Subspace};

/// Every matrix in `M_{s,n}`.
pub fn all_matrices(s: usize, n: usize) -> Vec<F2Matrix> {
    assert!(s * n <= 20);
    (0u64..1 << (s * n))
        .map(|mask| F2Matrix::from_flat_indices(s, n, (0..s * n).filter(|&k| mask >> k & 1 == 1)))
        .collect()
}

/// Span by summing every subset of the given vectors (duplicates collapse).
pub fn span_by_subsets(s: usize, n: usize, vectors: &[F2Matrix]) -> Vec<F2Matrix> {
    let mut out: Vec<F2Matrix> = (0u64..1 << vectors.len())
        .map(|mask| {
            let mut x = F2Matrix::zeros(s, n);
            for (k, v) in vectors.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    x.xor_assign(v);
                }
            }
            x
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn inner(a: &F2Matrix, b: &F2Matrix) -> bool {
    let mut acc = false;
    for i in 0..a.s() {
        for j in 0..a.n() {
            acc ^= a.get(i, j) & b.get(i, j);
        }
    }
    acc
}

/// `P⊥` by testing every matrix against the basis.
pub fn dual_by_search(p: &Subspace) -> Vec<F2Matrix> {
    let mut out: Vec<F2Matrix> = all_matrices(p.s(), p.n())
        .into_iter()
        .filter(|x| p.basis().iter().all(|b| !inner(x, b)))
        .collect();
    out.sort();
    out
}

/// `mu(X)` straight from the definition over (i, j).
pub fn mu(x: &F2Matrix) -> u64 {
    let mut w = 0;
    for i in 0..x.s() {
        for j in 0..x.n() {
            if x.get(i, j) {
                w += j as u64 + 1;
            }
        }
    }
    w
}

/// `WAFOM(P)` by summing `2^-mu` over the brute-force dual in 128-bit
/// fixed point.
pub fn wafom_by_search(p: &Subspace) -> DyadicRational {
    let (s, n) = p.shape();
    let top = (s * n * (n + 1) / 2) as u64;
    assert!(top < 127);
    let num: u128 = dual_by_search(p)
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| 1u128 << (top - mu(x)))
        .sum();
    DyadicRational::new(BigInt::from(num), top)
}

pub fn min_weight_by_search(p: &Subspace) -> u64 {
    dual_by_search(p)
        .iter()
        .filter(|x| !x.is_zero())
        .map(mu)
        .min()
        .expect("proper subspace")
}

/// Number of `m`-dimensional subspaces of F2^N.
pub fn gaussian_binomial(big_n: u32, m: u32) -> u128 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for k in 0..m {
        num *= (1u128 << (big_n - k)) - 1;
        den *= (1u128 << (m - k)) - 1;
    }
    num / den
}

/// Builds the span of vectors given as flat bit masks.
pub fn span_of_masks(s: usize, n: usize, masks: &[u64]) -> Subspace {
    let vs: Vec<F2Matrix> = masks
        .iter()
        .map(|&mask| F2Matrix::from_flat_indices(s, n, (0..s * n).filter(|&k| mask >> k & 1 == 1)))
        .collect();
    Subspace::span(s, n, &vs).unwrap()
}
