//! Exact integer and rational linear algebra.

pub mod cohomology;
pub mod hnf;
pub mod int;
pub mod matrix;
pub mod sparse;

pub use cohomology::{reduced_cohomology_dims, reduced_cohomology_dims_by, GradedDims, Route};
pub use hnf::{column_hnf, smith_normal_form};
pub use int::Int;
pub use matrix::{rank, rank_gaussian, rank_q, ExactMatrix, IntMatrix, QMatrix};
