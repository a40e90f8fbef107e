//! Exact computations with finite K-linear categories.
//!
//! A finite K-linear category is given by structure constants: a basis for
//! every hom space, the composites of basis morphisms expanded in the target
//! basis, and an identity vector per object. On top of that representation
//! the crate provides
//!
//! * bimodules and left modules given by action matrices ([`cmod`]),
//! * a decision procedure for separability that solves for a separability
//!   family and verifies it independently ([`separability`]),
//! * Hochschild-Mitchell cohomology through the bar cochain complex, the
//!   splitting obstruction of the composition map and long exact sequences
//!   ([`cohomology`]),
//! * a command line front end ([`cli`]).
//!
//! All arithmetic is exact, over the rationals or a prime field
//! ([`exactalg`]).

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod cmod;
pub mod cohomology;
pub mod error;
pub mod exactalg;
pub mod exec;
pub mod lincat;
pub mod separability;

pub use error::{Error, Result};
pub use exactalg::{FieldSpec, Matrix, Scalar};
pub use lincat::FinLinCat;
