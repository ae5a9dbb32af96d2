//! Arithmetic substrate: fields, dense matrices, polynomials, randomness.

pub mod field;
pub mod matrix;
pub mod mpoly;
pub mod poly;
pub mod rng;

pub use field::{is_prime_u64, rat, rational_mod_p, Field, Fp, PrimeField, Rational, DEFAULT_PRIME};
pub use matrix::{det_bareiss, det_rational_fraction_free, Matrix};
pub use mpoly::{det_mpoly, MPoly};
pub use poly::{interpolate, poly_gcd, UnivariatePoly};
pub use rng::{derive_seed, seeded_rng, stage_seed, SeededRng, DEFAULT_SEED};
