use crate::error::{Error, Result};
use crate::f2::{F2Matrix, GrayWalk, Limits};

/// A linear subspace of `M_{s,n}(F2)` held as a reduced row-echelon basis over
/// the flattened coordinates.
///
/// Basis vectors are sorted by strictly increasing pivot (lowest set flat
/// index), and each pivot column is zero in every other basis vector. Two
/// subspaces are equal iff their bases are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    s: usize,
    n: usize,
    basis: Vec<F2Matrix>,
}

impl Subspace {
    /// The zero space `{O}`.
    pub fn zero(s: usize, n: usize) -> Self {
        assert!(s > 0 && n > 0, "matrix shape must be positive");
        Subspace {
            s,
            n,
            basis: Vec::new(),
        }
    }

    /// The whole of `M_{s,n}(F2)`.
    pub fn full(s: usize, n: usize) -> Self {
        assert!(s > 0 && n > 0, "matrix shape must be positive");
        let basis = (0..s * n)
            .map(|k| F2Matrix::from_flat_indices(s, n, [k]))
            .collect();
        Subspace { s, n, basis }
    }

    /// Span of `vectors`, all of which must have shape `s x n`.
    pub fn span<'a, I>(s: usize, n: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a F2Matrix>,
    {
        let mut space = Subspace::zero(s, n);
        for v in vectors {
            if v.shape() != (s, n) {
                return Err(Error::ShapeMismatch {
                    expected: (s, n),
                    found: v.shape(),
                });
            }
            space.insert(v.clone());
        }
        Ok(space)
    }

    /// Span of a non-empty list of vectors, shape taken from the first one.
    pub fn canonicalize(vectors: &[F2Matrix]) -> Result<Self> {
        let first = vectors
            .first()
            .ok_or_else(|| Error::invalid("cannot infer shape from an empty vector list"))?;
        Self::span(first.s(), first.n(), vectors)
    }

    /// Builds a subspace from a basis already known to be in canonical form.
    pub(crate) fn from_canonical(s: usize, n: usize, basis: Vec<F2Matrix>) -> Self {
        let space = Subspace { s, n, basis };
        debug_assert!(space.is_canonical());
        space
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

    /// Dimension of the ambient space, `s * n`.
    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.s * self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[F2Matrix] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|b| b.leading_index().expect("basis vectors are nonzero"))
            .collect()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &F2Matrix) -> F2Matrix {
        let mut v = v.clone();
        self.reduce_in_place(&mut v);
        v
    }

    fn reduce_in_place(&self, v: &mut F2Matrix) {
        for b in &self.basis {
            let p = b.leading_index().expect("basis vectors are nonzero");
            if v.get_flat(p) {
                v.xor_assign(b);
            }
        }
    }

    pub fn contains(&self, v: &F2Matrix) -> bool {
        v.shape() == self.shape() && self.reduce(v).is_zero()
    }

    /// Adds `v` to the span, keeping the basis reduced. Returns whether the
    /// dimension grew.
    pub fn insert(&mut self, mut v: F2Matrix) -> bool {
        assert_eq!(
            v.shape(),
            self.shape(),
            "inserted vector has the wrong shape"
        );
        self.reduce_in_place(&mut v);
        let Some(p) = v.leading_index() else {
            return false;
        };
        for b in &mut self.basis {
            if b.get_flat(p) {
                b.xor_assign(&v);
            }
        }
        let at = self
            .basis
            .partition_point(|b| b.leading_index().expect("nonzero") < p);
        self.basis.insert(at, v);
        true
    }

    /// The orthogonal complement under the entrywise F2 inner product.
    pub fn dual(&self) -> Subspace {
        let sn = self.ambient_dim();
        let pivots = self.pivots();
        let mut is_pivot = vec![false; sn];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        // One null-space vector per free column c: e_c plus e_p for every
        // basis vector with pivot p that has a one in column c.
        let mut out = Subspace::zero(self.s, self.n);
        for c in (0..sn).filter(|&c| !is_pivot[c]) {
            let mut v = F2Matrix::zeros(self.s, self.n);
            v.toggle_flat(c);
            for (b, &p) in self.basis.iter().zip(&pivots) {
                if b.get_flat(c) {
                    v.toggle_flat(p);
                }
            }
            out.insert(v);
        }
        out
    }

    /// `self + other`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for v in &other.basis {
            out.insert(v.clone());
        }
        Ok(out)
    }

    /// `self ∩ other`, computed as `(self⊥ + other⊥)⊥`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_shape(other)?;
        Ok(self.dual().sum(&other.dual())?.dual())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.shape() == other.shape() && self.basis.iter().all(|b| other.contains(b))
    }

    /// All `2^dim` elements in Gray-code order, starting with `O`.
    pub fn elements(&self, limits: Limits) -> Result<GrayWalk<'_>> {
        limits.check_enum(self.dim())?;
        Ok(GrayWalk::new(&self.basis, F2Matrix::zeros(self.s, self.n)))
    }

    /// Elements with Gray index in `start..end`. Callers check the cap.
    pub(crate) fn elements_range(&self, start: u64, end: u64) -> GrayWalk<'_> {
        GrayWalk::range(&self.basis, F2Matrix::zeros(self.s, self.n), start, end)
    }

    fn check_shape(&self, other: &Subspace) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        Ok(())
    }

    fn is_canonical(&self) -> bool {
        let pivots: Vec<Option<usize>> = self.basis.iter().map(|b| b.leading_index()).collect();
        if pivots.iter().any(Option::is_none) {
            return false;
        }
        let pivots: Vec<usize> = pivots.into_iter().flatten().collect();
        pivots.windows(2).all(|w| w[0] < w[1])
            && self.basis.iter().enumerate().all(|(r, b)| {
                pivots
                    .iter()
                    .enumerate()
                    .all(|(k, &p)| k == r || !b.get_flat(p))
            })
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Subspace")
            .field("shape", &(self.s, self.n))
            .field("dim", &self.dim())
            .field("basis", &self.basis)
            .finish()
    }
}

/// Every `m`-dimensional subspace of `M_{s,n}(F2)`, each exactly once.
///
/// Walks pivot sets in lexicographic order and, for each, every assignment of
/// the free entries of a reduced row-echelon basis.
pub fn enumerate_subspaces(s: usize, n: usize, m: usize, limits: Limits) -> Result<SubspaceIter> {
    let sn = s * n;
    if s == 0 || n == 0 {
        return Err(Error::invalid("matrix shape must be positive"));
    }
    if sn > limits.max_subspace_sn {
        return Err(Error::SubspaceCap {
            sn,
            cap: limits.max_subspace_sn,
        });
    }
    if m > sn {
        return Err(Error::invalid(format!("dimension {m} exceeds s*n = {sn}")));
    }
    let mut it = SubspaceIter {
        s,
        n,
        pivots: (0..m).collect(),
        free: Vec::new(),
        mask: 0,
        done: false,
    };
    it.load_free();
    Ok(it)
}

pub struct SubspaceIter {
    s: usize,
    n: usize,
    pivots: Vec<usize>,
    /// (basis row, flat column) of each free entry for the current pivot set.
    free: Vec<(usize, usize)>,
    mask: u64,
    done: bool,
}

impl SubspaceIter {
    fn load_free(&mut self) {
        let sn = self.s * self.n;
        self.free.clear();
        for (r, &p) in self.pivots.iter().enumerate() {
            for c in p + 1..sn {
                if self.pivots.binary_search(&c).is_err() {
                    self.free.push((r, c));
                }
            }
        }
        self.mask = 0;
    }

    /// Next pivot combination in lexicographic order.
    fn next_pivots(&mut self) -> bool {
        let sn = self.s * self.n;
        let m = self.pivots.len();
        let mut i = m;
        while i > 0 {
            i -= 1;
            if self.pivots[i] < sn - m + i {
                self.pivots[i] += 1;
                for k in i + 1..m {
                    self.pivots[k] = self.pivots[k - 1] + 1;
                }
                return true;
            }
        }
        false
    }

    fn build(&self) -> Subspace {
        let mut basis: Vec<F2Matrix> = self
            .pivots
            .iter()
            .map(|&p| F2Matrix::from_flat_indices(self.s, self.n, [p]))
            .collect();
        for (bit, &(r, c)) in self.free.iter().enumerate() {
            if (self.mask >> bit) & 1 == 1 {
                basis[r].toggle_flat(c);
            }
        }
        Subspace::from_canonical(self.s, self.n, basis)
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let out = self.build();
        self.mask += 1;
        if self.mask >> self.free.len() != 0 {
            if self.next_pivots() {
                self.load_free();
            } else {
                self.done = true;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn m(rows: &[&[u8]]) -> F2Matrix {
        F2Matrix::from_rows(rows).unwrap()
    }

    /// Every element of the span, by brute force over coefficient vectors.
    fn brute_span(vectors: &[F2Matrix]) -> HashSet<F2Matrix> {
        let (s, n) = vectors[0].shape();
        (0u32..1 << vectors.len())
            .map(|mask| {
                let mut x = F2Matrix::zeros(s, n);
                for (k, v) in vectors.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        x.xor_assign(v);
                    }
                }
                x
            })
            .collect()
    }

    #[test]
    fn canonicalize_examples() {
        let e1 = m(&[&[1, 0], &[0, 0]]);
        let e2 = m(&[&[0, 0], &[0, 1]]);
        let p = Subspace::canonicalize(&[e1.clone(), e2.clone()]).unwrap();
        assert_eq!(p.basis(), &[e1.clone(), e2.clone()]);

        let v = m(&[&[1, 1], &[0, 1]]);
        let p = Subspace::canonicalize(&[v.clone(), v.clone()]).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.basis(), &[v]);

        let v1 = m(&[&[1, 1], &[0, 1]]);
        let v2 = m(&[&[0, 1], &[1, 1]]);
        let v3 = v1.xor(&v2);
        let input = [v1, v2, v3];
        let p = Subspace::canonicalize(&input).unwrap();
        // oracle: |span| = 2^rank
        assert_eq!(1 << p.dim(), brute_span(&input).len());
        assert_eq!(p.dim(), 2);
    }

    #[test]
    fn canonicalize_shape_mismatch() {
        let r = Subspace::canonicalize(&[F2Matrix::zeros(1, 2), F2Matrix::zeros(2, 1)]);
        assert!(matches!(r, Err(Error::ShapeMismatch { .. })));
        assert!(Subspace::canonicalize(&[]).is_err());
    }

    #[test]
    fn dual_examples() {
        assert!(Subspace::full(2, 3).dual().is_zero());
        assert_eq!(Subspace::zero(2, 3).dual(), Subspace::full(2, 3));

        let p = Subspace::canonicalize(&[m(&[&[1, 0]])]).unwrap();
        let d = p.dual();
        // exhaustive check over the 4 vectors of M_{1,2}
        let expected: Vec<F2Matrix> = brute_span(Subspace::full(1, 2).basis())
            .into_iter()
            .filter(|x| !x.is_zero() && p.basis().iter().all(|b| !x.dot(b)))
            .collect();
        assert_eq!(expected, vec![m(&[&[0, 1]])]);
        assert_eq!(d.basis(), &expected[..]);
    }

    #[test]
    fn intersect_examples() {
        let a = Subspace::full(1, 2);
        let b = Subspace::canonicalize(&[m(&[&[1, 1]])]).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), b);
        assert_eq!(b.intersect(&b).unwrap(), b);
        assert!(b.intersect(&Subspace::zero(1, 2)).unwrap().is_zero());
        assert!(a.intersect(&Subspace::zero(2, 1)).is_err());
    }

    #[test]
    fn elements_in_gray_order() {
        assert_eq!(
            Subspace::zero(2, 2)
                .elements(Limits::DEFAULT)
                .unwrap()
                .collect::<Vec<_>>(),
            vec![F2Matrix::zeros(2, 2)]
        );
        let b1 = m(&[&[1, 0], &[0, 1]]);
        let b2 = m(&[&[0, 1], &[0, 0]]);
        let p = Subspace::canonicalize(&[b1.clone(), b2.clone()]).unwrap();
        assert_eq!(p.basis(), &[b1.clone(), b2.clone()]);
        let got: Vec<F2Matrix> = p.elements(Limits::DEFAULT).unwrap().collect();
        assert_eq!(
            got,
            vec![F2Matrix::zeros(2, 2), b1.clone(), b1.xor(&b2), b2]
        );
    }

    #[test]
    fn elements_respects_cap() {
        let full = Subspace::full(2, 3);
        let r = full.elements(Limits::with_enum_dim(5));
        assert!(matches!(r, Err(Error::EnumerationCap { dim: 6, cap: 5 })));
    }

    #[test]
    fn enumerate_subspaces_examples() {
        let all: Vec<Subspace> = enumerate_subspaces(1, 2, 1, Limits::DEFAULT)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 3);
        let expect: HashSet<Subspace> = [[1u8, 0], [0, 1], [1, 1]]
            .iter()
            .map(|r| Subspace::canonicalize(&[m(&[r])]).unwrap())
            .collect();
        assert_eq!(all.into_iter().collect::<HashSet<_>>(), expect);

        assert_eq!(
            enumerate_subspaces(2, 2, 2, Limits::DEFAULT)
                .unwrap()
                .count(),
            35
        );

        let zero: Vec<Subspace> = enumerate_subspaces(3, 2, 0, Limits::DEFAULT)
            .unwrap()
            .collect();
        assert_eq!(zero, vec![Subspace::zero(3, 2)]);

        let full: Vec<Subspace> = enumerate_subspaces(3, 2, 6, Limits::DEFAULT)
            .unwrap()
            .collect();
        assert_eq!(full, vec![Subspace::full(3, 2)]);
    }

    #[test]
    fn enumerate_subspaces_caps() {
        assert!(matches!(
            enumerate_subspaces(4, 4, 2, Limits::DEFAULT),
            Err(Error::SubspaceCap { sn: 16, cap: 12 })
        ));
        assert!(enumerate_subspaces(1, 3, 4, Limits::DEFAULT).is_err());
    }
}
