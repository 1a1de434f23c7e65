//! The lower bound on WAFOM and the upper bound on the minimum weight that
//! drives it.
//!
//! For an `m`-dimensional net in `M_{s,n}(F2)` write `m = s q + r` with
//! `0 <= r < s`. The staircase space `W` of matrices supported on columns
//! `1..=q+1` of rows `1..=r+1` and columns `1..=q` of the remaining rows has
//! dimension `s q + r + 1 = m + 1`, so it meets every `P⊥` (dimension
//! `sn - m`) nontrivially. Hence
//! `delta(P⊥) <= max_W mu = s q (q + 1) / 2 + (q + 1)(r + 1)`, and
//! `WAFOM(P) >= 2^-delta`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};
use crate::f2::{F2Matrix, Limits, Subspace};
use crate::merit::wafom_exact_auto;
use crate::weights::min_weight;

/// `m = s q + r`, `0 <= r < s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QrDecomposition {
    pub m: u64,
    pub s: u64,
    pub q: u64,
    pub r: u64,
}

pub fn qr_decompose(m: u64, s: u64) -> Result<QrDecomposition> {
    if m == 0 || s == 0 {
        return Err(Error::invalid(format!(
            "m and s must be positive (m={m}, s={s})"
        )));
    }
    Ok(QrDecomposition {
        m,
        s,
        q: m / s,
        r: m % s,
    })
}

/// `s q (q + 1) / 2 + (q + 1)(r + 1)`: the largest Dick weight in the
/// staircase space, an upper bound on the minimum weight of any `P⊥`.
pub fn delta_upper_bound(s: u64, m: u64) -> Result<u64> {
    let QrDecomposition { q, r, .. } = qr_decompose(m, s)?;
    let tri = q
        .checked_mul(q + 1)
        .map(|t| t / 2)
        .and_then(|t| t.checked_mul(s));
    tri.and_then(|t| t.checked_add((q + 1).checked_mul(r + 1)?))
        .ok_or_else(|| Error::invalid(format!("bound overflows for s={s}, m={m}")))
}

/// Whether `(row, col)` (0-based) is a free cell of the staircase for `(q, r)`.
#[inline]
pub fn in_staircase(qr: &QrDecomposition, row: usize, col: usize) -> bool {
    let (q, r) = (qr.q as usize, qr.r as usize);
    if row <= r {
        col <= q
    } else {
        col < q
    }
}

/// The staircase space `W` for an `m`-dimensional net in `M_{s,n}`.
pub fn staircase_space(s: usize, n: usize, m: usize) -> Result<Subspace> {
    if s == 0 || n == 0 {
        return Err(Error::invalid("matrix shape must be positive"));
    }
    if m >= s * n {
        return Err(Error::invalid(format!(
            "staircase needs m < s*n (m={m}, s*n={})",
            s * n
        )));
    }
    let qr = if m == 0 {
        QrDecomposition {
            m: 0,
            s: s as u64,
            q: 0,
            r: 0,
        }
    } else {
        qr_decompose(m as u64, s as u64)?
    };
    // Rows in flat order keep the unit basis sorted by pivot.
    let basis: Vec<F2Matrix> = (0..s)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| in_staircase(&qr, i, j))
        .map(|(i, j)| F2Matrix::unit(s, n, i, j))
        .collect();
    Ok(Subspace::from_canonical(s, n, basis))
}

/// All-ones matrix on the staircase cells, the maximizer of `mu` on `W`.
pub fn staircase_max(s: usize, n: usize, m: usize) -> Result<F2Matrix> {
    let w = staircase_space(s, n, m)?;
    let mut x = F2Matrix::zeros(s, n);
    for b in w.basis() {
        x.xor_assign(b);
    }
    Ok(x)
}

/// A nonzero element of `P⊥ ∩ W`: the first canonical basis vector of the
/// intersection.
pub fn witness(p: &Subspace) -> Result<F2Matrix> {
    let (s, n) = p.shape();
    let w = staircase_space(s, n, p.dim())?;
    let meet = p.dual().intersect(&w)?;
    meet.basis()
        .first()
        .cloned()
        .ok_or_else(|| Error::invalid("dual space misses the staircase; dimension count violated"))
}

fn check_c_prime(c_prime: f64) -> Result<()> {
    if !(c_prime.is_finite() && c_prime > 0.5) {
        return Err(Error::invalid(format!(
            "C' must be a finite real > 1/2, got {c_prime}"
        )));
    }
    Ok(())
}

/// `(sqrt(C' + 1/16) + 3/4) / (C' - 1/2)`.
pub fn theorem_threshold(c_prime: f64) -> Result<f64> {
    check_c_prime(c_prime)?;
    Ok(((c_prime + 0.0625).sqrt() + 0.75) / (c_prime - 0.5))
}

/// Exact test of `m / s >= theorem_threshold(C')`.
///
/// With `a = C' - 1/2` and `L = m a - 3 s / 4`, the condition is
/// `L >= 0 && L^2 >= s^2 (C' + 1/16)`; every quantity is dyadic because `C'`
/// is an `f64`.
pub fn meets_threshold(c_prime: f64, m: u64, s: u64) -> Result<bool> {
    check_c_prime(c_prime)?;
    if s == 0 {
        return Err(Error::invalid("s must be positive"));
    }
    let c = DyadicRational::from_f64(c_prime).expect("finite");
    let half = DyadicRational::pow2_neg(1);
    let sixteenth = DyadicRational::pow2_neg(4);
    let three_quarters = DyadicRational::new(BigInt::from(3), 2);
    let m = DyadicRational::from_integer(m);
    let s = DyadicRational::from_integer(s);
    let lhs = &(&m * &(&c - &half)) - &(&three_quarters * &s);
    if lhs.is_negative() {
        return Ok(false);
    }
    Ok(&lhs * &lhs >= &(&s * &s) * &(&c + &sixteenth))
}

/// Exact test of `bound <= C' m^2 / s`.
pub fn within_theorem_scale(c_prime: f64, bound: u64, m: u64, s: u64) -> Result<bool> {
    check_c_prime(c_prime)?;
    let c = DyadicRational::from_f64(c_prime).expect("finite");
    let lhs = DyadicRational::from_integer(BigInt::from(bound) * BigInt::from(s));
    let rhs = &c * &DyadicRational::from_integer(BigInt::from(m) * BigInt::from(m));
    Ok(lhs <= rhs)
}

/// `log2` of the lower bound, `-C' m^2 / s`.
pub fn lower_bound_log2(c_prime: f64, m: u64, s: u64) -> Result<f64> {
    check_c_prime(c_prime)?;
    if m == 0 || s == 0 {
        return Err(Error::invalid(format!(
            "m and s must be positive (m={m}, s={s})"
        )));
    }
    Ok(-(c_prime * (m as f64) * (m as f64)) / s as f64)
}

/// Outcome of checking one net against the bound chain
/// `WAFOM >= 2^-delta >= 2^-C' m^2 / s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub s: usize,
    pub n: usize,
    pub m: usize,
    pub c_prime: f64,
    pub delta: u64,
    pub delta_bound: u64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub wafom: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub wafom_log2: f64,
    pub wafom_exact: DyadicRational,
    pub lower_bound_log2: f64,
    pub threshold_ok: bool,
    pub wfdelta_ok: bool,
    pub lemma_ok: bool,
    pub theorem_ok: bool,
}

impl VerificationReport {
    /// A violation falsifies the bound (or reveals a bug): every hypothesis
    /// holds but the conclusion fails.
    pub fn is_violation(&self) -> bool {
        self.threshold_ok && !self.theorem_ok
    }

    /// The proof chain is internally consistent.
    pub fn chain_consistent(&self) -> bool {
        !(self.threshold_ok && self.lemma_ok && self.wfdelta_ok) || self.theorem_ok
    }
}

pub fn verify_net(p: &Subspace, c_prime: f64, limits: Limits) -> Result<VerificationReport> {
    check_c_prime(c_prime)?;
    let (s, n) = p.shape();
    let m = p.dim();
    if m == 0 || m >= s * n {
        return Err(Error::invalid(format!(
            "verification needs a proper nonzero subspace (m={m}, s*n={})",
            s * n
        )));
    }
    let (m64, s64) = (m as u64, s as u64);
    let delta = min_weight(&p.dual(), limits)?;
    let delta_bound = delta_upper_bound(s64, m64)?;
    let exact = wafom_exact_auto(p, limits)?;
    let wafom_log2 = exact.log2();
    let lower = lower_bound_log2(c_prime, m64, s64)?;
    Ok(VerificationReport {
        s,
        n,
        m,
        c_prime,
        delta,
        delta_bound,
        wafom: exact.to_f64(),
        wafom_log2,
        wfdelta_ok: exact >= DyadicRational::pow2_neg(delta),
        wafom_exact: exact,
        lower_bound_log2: lower,
        threshold_ok: meets_threshold(c_prime, m64, s64)?,
        lemma_ok: delta <= delta_bound,
        theorem_ok: wafom_log2 >= lower,
    })
}
