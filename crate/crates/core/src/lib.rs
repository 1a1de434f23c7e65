//! Walsh figure of merit (WAFOM) and minimum Dick weight of digital nets over
//! F2, the staircase witness behind the upper bound on the minimum weight, and
//! verification of the resulting lower bound `WAFOM(P) >= 2^(-C' m^2 / s)`.
//!
//! A digital net is a linear subspace `P` of the `s x n` matrices over F2; the
//! point of `[0,1)^s` attached to `X` has coordinates `sum_j x_ij 2^-j`.

pub mod bounds;
pub mod cli;
pub mod dyadic;
pub mod error;
pub mod f2;
pub mod merit;
pub mod netfile;
pub mod numeric;
pub mod qmc;
pub mod report;
pub mod weights;

pub use bounds::{
    delta_upper_bound, lower_bound_log2, qr_decompose, staircase_space, theorem_threshold,
    verify_net, witness, QrDecomposition, VerificationReport,
};
pub use dyadic::DyadicRational;
pub use error::{Error, Result};
pub use f2::{enumerate_subspaces, F2Matrix, Limits, Subspace};
pub use merit::{wafom_dual, wafom_exact, wafom_points, ExactRoute, Method, WafomValue};
pub use weights::{dick_weight, min_weight, weight_distribution, WeightDistribution};
