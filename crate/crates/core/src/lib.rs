//! Exact-arithmetic toolkit for extension structures on finite-dimensional Malcev algebras.

pub mod algebra;
pub mod bilinear;
pub mod cli;
pub mod cond;
pub mod equivalence;
pub mod error;
pub mod field;
pub mod flag;
pub mod io;
pub mod linalg;
pub mod reps;
pub mod report;
pub mod sample;
pub mod special;
pub mod unified;

pub use algebra::MalcevAlgebra;
pub use bilinear::{BilinearMap, SkewMap};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use linalg::{Matrix, Solution, Vector};
pub use report::{Check, DualReport, VerificationReport, Witness};
