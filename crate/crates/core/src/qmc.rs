//! Digital nets as point sets, random nets, and QMC integration of test
//! functions with known integrals.

use std::fmt::Write as _;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::f2::{F2Matrix, Limits, Subspace};
use crate::numeric::CompensatedSum;

/// Points `x_i = k_i / 2^n` of a digital net, stored by their integer
/// numerators `k_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    s: usize,
    n: usize,
    numerators: Vec<Vec<u64>>,
}

impl PointSet {
    pub fn dim(&self) -> usize {
        self.s
    }

    pub fn digits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn numerators(&self) -> &[Vec<u64>] {
        &self.numerators
    }

    pub fn point(&self, idx: usize) -> Vec<f64> {
        let scale = 2f64.powi(-(self.n as i32));
        self.numerators[idx]
            .iter()
            .map(|&k| k as f64 * scale)
            .collect()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// One point per row, coordinates as exact decimals, header `x1,...,xs`.
    pub fn to_csv(&self) -> String {
        let mut out = (1..=self.s)
            .map(|i| format!("x{i}"))
            .collect::<Vec<_>>()
            .join(",");
        out.push('\n');
        for p in &self.numerators {
            let row: Vec<String> = p.iter().map(|&k| dyadic_decimal(k, self.n)).collect();
            writeln!(out, "{}", row.join(",")).unwrap();
        }
        out
    }
}

/// Exact decimal expansion of `k / 2^n`.
pub fn dyadic_decimal(k: u64, n: usize) -> String {
    let whole = if n >= 64 { 0 } else { k >> n };
    let frac = if n >= 64 { k } else { k & ((1u64 << n) - 1) };
    if frac == 0 {
        return whole.to_string();
    }
    // frac / 2^n = frac * 5^n / 10^n
    let digits = (BigUint::from(frac) * BigUint::from(5u32).pow(n as u32)).to_string();
    let padded = format!("{digits:0>n$}");
    format!("{whole}.{}", padded.trim_end_matches('0'))
}

/// `phi(X)_i = sum_j x_ij 2^-j`, as the numerator over `2^n`.
fn phi_numerators(x: &F2Matrix) -> Vec<u64> {
    let n = x.n();
    (0..x.s())
        .map(|i| (0..n).fold(0u64, |acc, j| (acc << 1) | u64::from(x.get(i, j))))
        .collect()
}

/// Maps every element of `p` through `phi`, in Gray-code order.
pub fn to_points(p: &Subspace, limits: Limits) -> Result<PointSet> {
    if p.n() > 64 {
        return Err(Error::invalid(format!(
            "points need n <= 64 digits, got {}",
            p.n()
        )));
    }
    let numerators = p.elements(limits)?.map(|x| phi_numerators(&x)).collect();
    Ok(PointSet {
        s: p.s(),
        n: p.n(),
        numerators,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionKind {
    /// `f = 1`
    Const1,
    /// `f(x) = (x_1 + ... + x_s) / s`
    Linear,
    /// `f(x) = x_1 x_2 ... x_s`
    Product,
    /// `f(x) = exp(x_1 + ... + x_s)`
    ExpProduct,
}

impl FunctionKind {
    pub const ALL: [FunctionKind; 4] = [
        FunctionKind::Const1,
        FunctionKind::Linear,
        FunctionKind::Product,
        FunctionKind::ExpProduct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionKind::Const1 => "const1",
            FunctionKind::Linear => "linear",
            FunctionKind::Product => "product",
            FunctionKind::ExpProduct => "exp",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| {
                let known: Vec<&str> = Self::ALL.iter().map(|k| k.name()).collect();
                Error::invalid(format!(
                    "unknown function {name:?} (known: {})",
                    known.join(", ")
                ))
            })
    }
}

/// Integrand on `[0,1)^arity` with a closed-form integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TestFunction {
    pub kind: FunctionKind,
    pub arity: usize,
}

impl TestFunction {
    pub fn new(kind: FunctionKind, arity: usize) -> Self {
        TestFunction { kind, arity }
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self.kind {
            FunctionKind::Const1 => 1.0,
            FunctionKind::Linear => x.iter().sum::<f64>() / x.len() as f64,
            FunctionKind::Product => x.iter().product(),
            FunctionKind::ExpProduct => x.iter().map(|v| v.exp()).product(),
        }
    }

    pub fn exact_integral(&self) -> f64 {
        match self.kind {
            FunctionKind::Const1 => 1.0,
            FunctionKind::Linear => 0.5,
            FunctionKind::Product => 0.5f64.powi(self.arity as i32),
            FunctionKind::ExpProduct => (std::f64::consts::E - 1.0).powi(self.arity as i32),
        }
    }
}

/// The plain average of `f` over the points.
pub fn qmc_integrate(points: &PointSet, f: &TestFunction) -> Result<f64> {
    if f.arity != points.dim() {
        return Err(Error::invalid(format!(
            "function {} has arity {} but points have dimension {}",
            f.name(),
            f.arity,
            points.dim()
        )));
    }
    if points.is_empty() {
        return Err(Error::invalid("empty point set"));
    }
    if f.kind == FunctionKind::Const1 {
        return Ok(1.0);
    }
    let mut acc = CompensatedSum::new();
    for x in points.points() {
        acc.add(f.eval(&x));
    }
    Ok(acc.value() / points.len() as f64)
}

/// A random `m`-dimensional subspace: random vectors are drawn and kept while
/// they raise the rank. Deterministic in `rng`.
pub fn random_net_with<R: Rng + ?Sized>(
    s: usize,
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<Subspace> {
    if s == 0 || n == 0 {
        return Err(Error::invalid("matrix shape must be positive"));
    }
    if m > s * n {
        return Err(Error::invalid(format!("m={m} exceeds s*n={}", s * n)));
    }
    let mut space = Subspace::zero(s, n);
    while space.dim() < m {
        let v = F2Matrix::from_flat_indices(s, n, (0..s * n).filter(|_| rng.gen::<bool>()));
        space.insert(v);
    }
    Ok(space)
}

pub fn random_net(s: usize, n: usize, m: usize, seed: u64) -> Result<Subspace> {
    random_net_with(s, n, m, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Generator for the `index`-th net of a seeded batch; each index gets its own
/// ChaCha stream, so batches can be split across threads.
pub fn batch_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_nets(s: usize, n: usize, m: usize, count: usize, seed: u64) -> Result<Vec<Subspace>> {
    (0..count as u64)
        .map(|i| random_net_with(s, n, m, &mut batch_rng(seed, i)))
        .collect()
}

/// Spearman rank correlation with average ranks for ties. NaN when either
/// side is constant.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rx = ranks(xs);
    let ry = ranks(ys);
    pearson(&rx, &ry)
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}
