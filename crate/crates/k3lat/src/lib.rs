//! Exact-arithmetic lattice computations on K3 surfaces and their Hilbert
//! squares: Picard-lattice pairings and signatures, bounded enumeration of
//! classes with prescribed square and degree, nefness and decomposition
//! criteria, the Beauville–Bogomolov form with curve/divisor duality, slope
//! and square formulas for rational curves, singular Brill–Noether numbers,
//! and a verification suite over the built-in lattice families.
//!
//! All arithmetic is exact: arbitrary-precision rationals and univariate
//! polynomials in one formal parameter. No floating point anywhere.

pub mod brill_noether;
pub mod cases;
pub mod enumerate;
pub mod error;
pub mod exact;
pub mod hilbert;
pub mod json;
pub mod k3;
pub mod lattice;
pub mod scalar;

pub use error::{Error, Result};
pub use lattice::{pair, square, DivisorClass, PicardLattice, Signature};
pub use scalar::Scalar;
