//! Bit-packed linear algebra over F2 for `s x n` matrices.

mod enumerate;
mod matrix;
mod subspace;

pub(crate) use enumerate::chunk_ranges;
pub use enumerate::{gray, GrayWalk, Limits};
pub use matrix::F2Matrix;
pub use subspace::{enumerate_subspaces, Subspace, SubspaceIter};
