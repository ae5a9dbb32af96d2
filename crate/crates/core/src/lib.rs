//! Discriminants of quiver representation spaces and linear free divisor
//! certification.

pub mod arith;
pub mod certify;
pub mod cli;
pub mod error;
pub mod quiver;
pub mod rep;
pub mod roots;
pub mod semi_inv;

pub use arith::{Field, Fp, Matrix, PrimeField, Rational, DEFAULT_PRIME};
pub use error::{Error, Result};
pub use quiver::{DimensionVector, GraphType, IntMatrix, Quiver, Weight};

pub type RatMatrix = Matrix<Rational>;
pub type FpMatrix = Matrix<Fp>;
pub type F64Matrix = Matrix<f64>;
pub type F32Matrix = Matrix<f32>;
