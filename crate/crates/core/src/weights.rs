//! Dick weight, minimum weight of a space and weight distributions.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::f2::{chunk_ranges, F2Matrix, Limits, Subspace};

/// Spaces at or above this dimension are walked in parallel chunks.
pub(crate) const PARALLEL_DIM: usize = 18;
pub(crate) const CHUNK: u64 = 1 << 16;

/// Dick weight `mu(X) = sum of j * x_ij` over the integers, `j` the 1-based
/// column.
pub fn dick_weight(x: &F2Matrix) -> u64 {
    let n = x.n();
    x.ones().map(|idx| (idx % n + 1) as u64).sum()
}

/// Largest possible Dick weight in `M_{s,n}`, `s n (n + 1) / 2`.
pub fn max_dick_weight(s: usize, n: usize) -> Result<u64> {
    let (s, n) = (s as u64, n as u64);
    n.checked_add(1)
        .and_then(|n1| n.checked_mul(n1))
        .and_then(|t| (t / 2).checked_mul(s))
        .ok_or_else(|| Error::invalid(format!("weights of {s}x{n} matrices overflow u64")))
}

/// Weight of `after` given the weight of `after + flipped`.
///
/// Cells of `flipped` that are now set gained their column weight, cells that
/// are now clear lost it.
#[inline]
pub fn updated_weight(before: u64, after: &F2Matrix, flipped: &F2Matrix) -> u64 {
    let n = after.n();
    let mut w = before as i64;
    for idx in flipped.ones() {
        let j = (idx % n + 1) as i64;
        if after.get_flat(idx) {
            w += j;
        } else {
            w -= j;
        }
    }
    debug_assert!(w >= 0);
    w as u64
}

/// Calls `f` with the Dick weight of every element with Gray index in
/// `start..end`.
pub(crate) fn for_each_weight(space: &Subspace, start: u64, end: u64, mut f: impl FnMut(u64)) {
    let mut walk = space.elements_range(start, end);
    let mut w = 0;
    while let Some((x, flipped)) = walk.advance() {
        w = match flipped {
            None => dick_weight(x),
            Some(b) => updated_weight(w, x, &space.basis()[b]),
        };
        f(w);
    }
}

/// `delta = min mu(X)` over the nonzero elements of `space`.
pub fn min_weight(space: &Subspace, limits: Limits) -> Result<u64> {
    if space.is_zero() {
        return Err(Error::ZeroSpace);
    }
    limits.check_enum(space.dim())?;
    let mut walk = space.elements_range(0, 1u64 << space.dim());
    let mut best = u64::MAX;
    let mut w = 0;
    while let Some((x, flipped)) = walk.advance() {
        match flipped {
            None => w = dick_weight(x),
            Some(b) => {
                w = updated_weight(w, x, &space.basis()[b]);
                if w < best {
                    best = w;
                    if best == 1 {
                        break;
                    }
                }
            }
        }
    }
    Ok(best)
}

/// Number of elements of a space at each Dick weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    pub s: usize,
    pub n: usize,
    pub counts: BTreeMap<u64, u64>,
}

impl WeightDistribution {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, weight: u64) -> u64 {
        self.counts.get(&weight).copied().unwrap_or(0)
    }

    /// Smallest positive weight present, i.e. the minimum weight.
    pub fn min_positive(&self) -> Option<u64> {
        self.counts.keys().copied().find(|&w| w > 0)
    }

    /// CSV with header `weight,count`, ascending weight.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("weight,count\n");
        for (w, c) in &self.counts {
            writeln!(out, "{w},{c}").unwrap();
        }
        out
    }
}

pub fn weight_distribution(space: &Subspace, limits: Limits) -> Result<WeightDistribution> {
    limits.check_enum(space.dim())?;
    max_dick_weight(space.s(), space.n())?;
    let total = 1u64 << space.dim();
    let tally = |start, end| {
        let mut counts = BTreeMap::new();
        for_each_weight(space, start, end, |w| *counts.entry(w).or_insert(0u64) += 1);
        counts
    };
    let counts = if space.dim() >= PARALLEL_DIM {
        chunk_ranges(total, CHUNK)
            .into_par_iter()
            .map(|(a, b)| tally(a, b))
            .reduce(BTreeMap::new, |mut acc, part| {
                for (w, c) in part {
                    *acc.entry(w).or_insert(0) += c;
                }
                acc
            })
    } else {
        tally(0, total)
    };
    Ok(WeightDistribution {
        s: space.s(),
        n: space.n(),
        counts,
    })
}
