//! Exact field arithmetic over the rationals and prime fields, and dense
//! exact linear algebra on top of it.

mod matrix;
mod scalar;

pub use matrix::{Matrix, Rref};
pub use scalar::{scalar_arith, ArithOp, FieldSpec, Scalar};
