//! Exact linear algebra over the rationals, with integer fast paths for large matrices.

pub mod certify;
pub mod integer;
pub mod matrix;
pub mod modular;
pub mod rational;

pub use integer::{IntMatrix, SparseIntMatrix};
pub use matrix::{
    determinant, is_positive_definite, kernel_basis, rank, restrict_form, rref, signature,
    Inertia, RationalMatrix,
};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
