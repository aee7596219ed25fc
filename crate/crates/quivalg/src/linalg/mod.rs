//! Exact dense linear algebra over the session field: scalars, matrices with
//! rref/kernel/solve, subspaces in canonical rref form, and quotient spaces
//! with fixed representatives. No operation here (or anywhere downstream)
//! introduces rounding.

mod matrix;
mod scalar;
mod subspace;

pub use matrix::Matrix;
pub use scalar::{Field, Scalar};
pub use subspace::{QuotientSpace, Subspace};
