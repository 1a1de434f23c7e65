//! Walsh figure of merit of a digital net.
//!
//! `WAFOM(P)` is the sum of `2^-mu(X)` over the nonzero elements `X` of the
//! dual space `P⊥`. Three evaluators are provided:
//!
//! * [`wafom_dual`] sums the definition directly over a Gray-code walk of `P⊥`;
//! * [`wafom_points`] uses the character-sum identity
//!   `WAFOM(P) = -1 + 2^-m sum_{B in P} prod_{i,j} (1 + (-1)^{B_ij} 2^-j)`,
//!   which only walks `P` itself;
//! * [`wafom_exact`] evaluates either route in exact dyadic arithmetic.
//!
//! The float point-sum suffers cancellation when the value is tiny (each
//! product is close to its neighbours and the average is close to 1). Terms
//! are grouped by their column profile and accumulated in double-double
//! arithmetic, which keeps about 1e-12 relative accuracy down to values near
//! `1e-20 * prod_j (1 + 2^-j)^s`. Below that, use [`wafom_exact`].

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::DyadicRational;
use crate::error::Result;
use crate::f2::{chunk_ranges, Limits, Subspace};
use crate::numeric::{CompensatedSum, DoubleDouble};
use crate::weights::{for_each_weight, max_dick_weight, weight_distribution, CHUNK, PARALLEL_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    DualEnum,
    PointSum,
    Exact,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::DualEnum => "dual_enum",
            Method::PointSum => "point_sum",
            Method::Exact => "exact",
        }
    }
}

/// Route used by [`wafom_exact`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactRoute {
    DualEnum,
    PointSum,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WafomValue {
    pub float_value: f64,
    /// `log2` of the value, `-inf` for zero.
    pub log2_value: f64,
    pub exact: Option<DyadicRational>,
    pub method: Method,
}

impl WafomValue {
    fn from_float(value: f64, method: Method) -> Self {
        let value = value.max(0.0);
        WafomValue {
            float_value: value,
            log2_value: value.log2(),
            exact: None,
            method,
        }
    }

    fn from_exact(exact: DyadicRational) -> Self {
        WafomValue {
            float_value: exact.to_f64(),
            log2_value: exact.log2(),
            exact: Some(exact),
            method: Method::Exact,
        }
    }
}

/// `WAFOM(P)` summed over the dual space with compensated summation.
pub fn wafom_dual(p: &Subspace, limits: Limits) -> Result<WafomValue> {
    let dual = p.dual();
    limits.check_enum(dual.dim())?;
    let total = 1u64 << dual.dim();
    let partial = |start: u64, end: u64| {
        let mut acc = CompensatedSum::new();
        for_each_weight(&dual, start, end, |w| {
            if w > 0 {
                acc.add(pow2_neg(w));
            }
        });
        acc
    };
    let acc = if dual.dim() >= PARALLEL_DIM {
        let parts: Vec<CompensatedSum> = chunk_ranges(total, CHUNK)
            .into_par_iter()
            .map(|(a, b)| partial(a, b))
            .collect();
        parts.iter().fold(CompensatedSum::new(), |mut acc, p| {
            acc.merge(p);
            acc
        })
    } else {
        partial(0, total)
    };
    Ok(WafomValue::from_float(acc.value(), Method::DualEnum))
}

/// `WAFOM(P)` through the character sum over the elements of `P`.
pub fn wafom_points(p: &Subspace, limits: Limits) -> Result<WafomValue> {
    limits.check_enum(p.dim())?;
    if p.is_full() {
        return Ok(WafomValue::from_float(0.0, Method::PointSum));
    }
    let (s, n) = p.shape();
    let plus: Vec<DoubleDouble> = (1..=n)
        .map(|j| DoubleDouble::new(1.0, pow2_neg(j as u64)))
        .collect();
    let minus: Vec<DoubleDouble> = (1..=n)
        .map(|j| DoubleDouble::new(1.0, -pow2_neg(j as u64)))
        .collect();
    let mut acc = DoubleDouble::ZERO;
    for (profile, count) in column_profiles(p) {
        let mut term = DoubleDouble::ONE;
        for (j, &ones) in profile.iter().enumerate() {
            let ones = ones as u32;
            term = term * plus[j].powi(s as u32 - ones) * minus[j].powi(ones);
        }
        let term = term + DoubleDouble::from_f64(-1.0);
        acc = acc + term * DoubleDouble::from_f64(count as f64);
    }
    let value = acc.scale_pow2(-(p.dim() as i32)).to_f64();
    Ok(WafomValue::from_float(value, Method::PointSum))
}

/// Exact `WAFOM(P)` as a dyadic rational.
pub fn wafom_exact(p: &Subspace, route: ExactRoute, limits: Limits) -> Result<DyadicRational> {
    match route {
        ExactRoute::DualEnum => exact_dual(p, limits),
        ExactRoute::PointSum => exact_points(p, limits),
    }
}

/// Exact value through whichever route enumerates fewer elements.
pub fn wafom_exact_auto(p: &Subspace, limits: Limits) -> Result<DyadicRational> {
    let route = if p.dim() <= p.ambient_dim() - p.dim() {
        ExactRoute::PointSum
    } else {
        ExactRoute::DualEnum
    };
    wafom_exact(p, route, limits)
}

/// Evaluates with the requested method.
pub fn wafom(p: &Subspace, method: Method, limits: Limits) -> Result<WafomValue> {
    match method {
        Method::DualEnum => wafom_dual(p, limits),
        Method::PointSum => wafom_points(p, limits),
        Method::Exact => Ok(WafomValue::from_exact(wafom_exact_auto(p, limits)?)),
    }
}

fn exact_dual(p: &Subspace, limits: Limits) -> Result<DyadicRational> {
    let dist = weight_distribution(&p.dual(), limits)?;
    let Some(&top) = dist.counts.keys().next_back() else {
        return Ok(DyadicRational::zero());
    };
    // sum_w count_w 2^-w = (sum_w count_w 2^(top - w)) / 2^top
    let numerator: BigInt = dist
        .counts
        .iter()
        .filter(|(&w, _)| w > 0)
        .map(|(&w, &c)| BigInt::from(c) << (top - w) as usize)
        .sum();
    Ok(DyadicRational::new(numerator, top))
}

fn exact_points(p: &Subspace, limits: Limits) -> Result<DyadicRational> {
    limits.check_enum(p.dim())?;
    let (s, n) = p.shape();
    let total_weight = max_dick_weight(s, n)?;
    // prod_{i,j} (1 +- 2^-j) = prod_j (2^j + 1)^(s - b_j) (2^j - 1)^(b_j) / 2^(s n(n+1)/2)
    let powers = |delta: i64| -> Vec<Vec<BigInt>> {
        (1..=n)
            .map(|j| {
                let base = (BigInt::one() << j) + delta;
                let mut row = vec![BigInt::one()];
                for k in 1..=s {
                    let next = &row[k - 1] * &base;
                    row.push(next);
                }
                row
            })
            .collect()
    };
    let plus = powers(1);
    let minus = powers(-1);
    let mut numerator = BigInt::zero();
    for (profile, count) in column_profiles(p) {
        let mut term = BigInt::from(count);
        for (j, &ones) in profile.iter().enumerate() {
            let ones = ones as usize;
            term *= &plus[j][s - ones];
            term *= &minus[j][ones];
        }
        numerator += term;
    }
    let sum = DyadicRational::new(numerator, p.dim() as u64 + total_weight);
    Ok(&sum - &DyadicRational::one())
}

/// Histogram of column profiles over the elements of `p`: entry `j` of a
/// profile is the number of ones in column `j`. Sorted by profile so that
/// downstream float sums are reproducible.
fn column_profiles(p: &Subspace) -> Vec<(Vec<u16>, u64)> {
    let total = 1u64 << p.dim();
    let tally = |start: u64, end: u64| {
        let n = p.n();
        let mut counts: HashMap<Vec<u16>, u64> = HashMap::new();
        let mut profile = vec![0u16; n];
        let mut walk = p.elements_range(start, end);
        while let Some((x, flipped)) = walk.advance() {
            match flipped {
                None => {
                    for idx in x.ones() {
                        profile[idx % n] += 1;
                    }
                }
                Some(b) => {
                    for idx in p.basis()[b].ones() {
                        if x.get_flat(idx) {
                            profile[idx % n] += 1;
                        } else {
                            profile[idx % n] -= 1;
                        }
                    }
                }
            }
            match counts.get_mut(profile.as_slice()) {
                Some(c) => *c += 1,
                None => {
                    counts.insert(profile.clone(), 1);
                }
            }
        }
        counts
    };
    let counts = if p.dim() >= PARALLEL_DIM {
        chunk_ranges(total, CHUNK)
            .into_par_iter()
            .map(|(a, b)| tally(a, b))
            .reduce(HashMap::new, |mut acc, part| {
                for (k, c) in part {
                    *acc.entry(k).or_insert(0) += c;
                }
                acc
            })
    } else {
        tally(0, total)
    };
    let mut out: Vec<(Vec<u16>, u64)> = counts.into_iter().collect();
    out.sort_unstable();
    out
}

#[inline]
fn pow2_neg(w: u64) -> f64 {
    if w > 1074 {
        0.0
    } else if w > 1022 {
        2f64.powi(-1022) * 2f64.powi(-((w - 1022) as i32))
    } else {
        2f64.powi(-(w as i32))
    }
}
