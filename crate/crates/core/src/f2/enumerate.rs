use crate::error::{Error, Result};
use crate::f2::F2Matrix;

/// Caps on the brute-force enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest subspace dimension whose `2^dim` elements may be enumerated.
    pub max_enum_dim: usize,
    /// Largest `s * n` for which all subspaces may be enumerated.
    pub max_subspace_sn: usize,
}

impl Limits {
    pub const DEFAULT: Limits = Limits {
        max_enum_dim: 30,
        max_subspace_sn: 12,
    };

    pub fn with_enum_dim(max_enum_dim: usize) -> Self {
        Limits {
            max_enum_dim,
            ..Self::DEFAULT
        }
    }

    pub(crate) fn check_enum(&self, dim: usize) -> Result<()> {
        if dim > self.max_enum_dim || dim >= 64 {
            return Err(Error::EnumerationCap {
                dim,
                cap: self.max_enum_dim.min(63),
            });
        }
        Ok(())
    }
}

impl Default for Limits {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[inline]
pub fn gray(k: u64) -> u64 {
    k ^ (k >> 1)
}

/// Walks the span of a basis in reflected Gray-code order over the basis
/// coefficients: element `k` is the sum of the basis vectors selected by the
/// bits of `gray(k)`, so consecutive elements differ by one basis vector.
pub struct GrayWalk<'a> {
    basis: &'a [F2Matrix],
    current: F2Matrix,
    next: u64,
    end: u64,
    first: bool,
}

impl<'a> GrayWalk<'a> {
    /// Full walk over all `2^k` combinations of `basis`, starting at `zero`.
    pub(crate) fn new(basis: &'a [F2Matrix], zero: F2Matrix) -> Self {
        let end = 1u64 << basis.len();
        Self::range(basis, zero, 0, end)
    }

    /// Walk over Gray indices `start..end`, reseeded at `start`.
    pub(crate) fn range(basis: &'a [F2Matrix], zero: F2Matrix, start: u64, end: u64) -> Self {
        let mut current = zero;
        let g = gray(start);
        for (b, v) in basis.iter().enumerate() {
            if (g >> b) & 1 == 1 {
                current.xor_assign(v);
            }
        }
        GrayWalk {
            basis,
            current,
            next: start,
            end,
            first: true,
        }
    }

    /// Advances and returns the current element together with the index of the
    /// basis vector flipped to reach it (`None` for the first element).
    pub fn advance(&mut self) -> Option<(&F2Matrix, Option<usize>)> {
        if self.next >= self.end {
            return None;
        }
        let k = self.next;
        self.next += 1;
        if self.first {
            self.first = false;
            return Some((&self.current, None));
        }
        let b = k.trailing_zeros() as usize;
        self.current.xor_assign(&self.basis[b]);
        Some((&self.current, Some(b)))
    }

    /// Number of elements not yet visited.
    pub fn remaining(&self) -> u64 {
        self.end - self.next
    }
}

impl Iterator for GrayWalk<'_> {
    type Item = F2Matrix;

    fn next(&mut self) -> Option<F2Matrix> {
        self.advance().map(|(x, _)| x.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining()).unwrap_or(usize::MAX);
        (r, Some(r))
    }
}

/// Splits `0..total` into contiguous chunks of `chunk` indices.
pub(crate) fn chunk_ranges(total: u64, chunk: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < total {
        let end = (start + chunk).min(total);
        out.push((start, end));
        start = end;
    }
    out
}
