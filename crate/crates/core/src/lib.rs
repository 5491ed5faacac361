//! Exact linear algebra for Drazin inverses.
//!
//! Everything here computes over exact fields (arbitrary-precision rationals
//! or GF(p) for prime p), so matrix equalities are bit-exact, never
//! approximate. On top of the field/matrix kernels sit:
//!
//! * [`drazin`]: Drazin inverse, index, group inverse and spectral idempotent
//!   of a square matrix via core-nilpotent decomposition;
//! * [`identities`]: verification of product/sum Drazin-inverse formulas for
//!   pairs satisfying `a²b = aba` and `b²a = bab`, plus the supporting
//!   power/commutation/nilpotency lemmas;
//! * [`witness`]: exhaustive and sampled generation of such pairs, and a
//!   definitional brute-force Drazin oracle for cross-validation.

pub mod drazin;
pub mod error;
pub mod fixtures;
pub mod identities;
pub mod matrix;
pub mod scalar;
pub mod witness;

pub use error::Error;
pub use matrix::Matrix;
pub use scalar::{FieldTag, Scalar};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
