use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// An `s x n` matrix over F2, stored as a row-major bit vector of length `sn`.
///
/// Entry `(row, col)` (both 0-based) lives at flat index `row * n + col`.
/// Column `col` carries the dyadic digit `2^-(col + 1)`, so the Dick weight of
/// a set entry is `col + 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Matrix {
    s: usize,
    n: usize,
    words: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(s: usize, n: usize) -> Self {
        let words = vec![0; (s * n).div_ceil(WORD_BITS)];
        F2Matrix { s, n, words }
    }

    /// Matrix with a single one at `(row, col)`.
    pub fn unit(s: usize, n: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(s, n);
        m.set(row, col, true);
        m
    }

    /// Builds a matrix from `s` rows of `n` entries, each 0 or 1.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let s = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        if s == 0 || n == 0 {
            return Err(Error::invalid(
                "matrix must have at least one row and column",
            ));
        }
        let mut m = Self::zeros(s, n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(i, j, true),
                    _ => {
                        return Err(Error::invalid(format!(
                            "entry ({}, {}) is {b}",
                            i + 1,
                            j + 1
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from its flat bit indices.
    pub fn from_flat_indices(s: usize, n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut m = Self::zeros(s, n);
        for idx in indices {
            assert!(idx < s * n, "flat index {idx} out of range for {s}x{n}");
            m.toggle_flat(idx);
        }
        m
    }

    #[inline]
    pub fn s(&self) -> usize {
        self.s
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.s, self.n)
    }

    /// Number of entries, `s * n`.
    #[inline]
    pub fn len(&self) -> usize {
        self.s * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.s && col < self.n);
        self.get_flat(row * self.n + col)
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        debug_assert!(row < self.s && col < self.n);
        let idx = row * self.n + col;
        if self.get_flat(idx) != value {
            self.toggle_flat(idx);
        }
    }

    #[inline]
    pub fn get_flat(&self, idx: usize) -> bool {
        (self.words[idx / WORD_BITS] >> (idx % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn toggle_flat(&mut self, idx: usize) {
        self.words[idx / WORD_BITS] ^= 1 << (idx % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set flat index, the pivot column of this vector in echelon form.
    pub fn leading_index(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Flat indices of the set entries, in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD_BITS + b)
            })
        })
    }

    /// `self += other` over F2. Panics on shape mismatch.
    #[inline]
    pub fn xor_assign(&mut self, other: &F2Matrix) {
        assert_eq!(
            self.shape(),
            other.shape(),
            "xor of matrices with different shapes"
        );
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &F2Matrix) -> F2Matrix {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// The inner product `sum a_ij b_ij` in F2.
    pub fn inner_product(&self, other: &F2Matrix) -> Result<bool> {
        self.check_shape(other)?;
        Ok(self.dot(other))
    }

    #[inline]
    pub(crate) fn dot(&self, other: &F2Matrix) -> bool {
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub(crate) fn check_shape(&self, other: &F2Matrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        Ok(())
    }

    /// Row `row` as a string of `0`/`1` characters.
    pub fn row_string(&self, row: usize) -> String {
        (0..self.n)
            .map(|j| if self.get(row, j) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.s).map(|i| self.row_string(i)).collect();
        write!(f, "F2Matrix[{}]", rows.join(" "))
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.s {
            if i > 0 {
                writeln!(f)?;
            }
            f.write_str(&self.row_string(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_layout_is_row_major() {
        let m = F2Matrix::from_rows(&[[0u8, 1, 0], [0, 0, 1]]).unwrap();
        assert_eq!(m.ones().collect::<Vec<_>>(), vec![1, 5]);
        assert!(m.get(0, 1));
        assert!(m.get(1, 2));
        assert_eq!(m.leading_index(), Some(1));
    }

    #[test]
    fn inner_product_examples() {
        let x = F2Matrix::from_rows(&[[1u8, 1]]).unwrap();
        let y = F2Matrix::from_rows(&[[1u8, 0]]).unwrap();
        assert!(x.inner_product(&y).unwrap());
        assert!(!F2Matrix::zeros(1, 2).inner_product(&x).unwrap());
        // a.a = parity of the number of ones
        assert!(!x.inner_product(&x).unwrap());
        assert!(y.inner_product(&y).unwrap());
    }

    #[test]
    fn inner_product_shape_mismatch() {
        let a = F2Matrix::zeros(1, 2);
        let b = F2Matrix::zeros(2, 1);
        assert!(matches!(
            a.inner_product(&b),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn spans_multiple_words() {
        let mut m = F2Matrix::zeros(5, 30);
        m.set(4, 29, true);
        m.set(2, 10, true);
        assert_eq!(m.ones().collect::<Vec<_>>(), vec![70, 149]);
        assert_eq!(m.count_ones(), 2);
        m.set(2, 10, false);
        assert_eq!(m.leading_index(), Some(149));
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(F2Matrix::from_rows(&[vec![1u8, 0], vec![1]]).is_err());
        assert!(F2Matrix::from_rows(&[[2u8]]).is_err());
    }
}
