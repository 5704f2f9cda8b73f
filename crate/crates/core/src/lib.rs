//! Exact finite-field hypergeometric functions and point counts on the Picard
//! family `y^3 = x(x-1)(x-λ)(x-μ)`.
//!
//! The crate is layered bottom-up:
//!
//! - [`field`]: finite fields `F_{p^e}` with discrete-log tables
//! - [`cyclotomic`]: exact values in `Q(ζ_n)`
//! - [`character`]: multiplicative characters, Jacobi sums and Greene's
//!   normalized binomial coefficients
//! - [`hypergeom`]: Greene's `2F1` and Ghosh's Appell `F1` in each of their
//!   equivalent forms
//! - [`curve`]: point counting and traces of Frobenius for the Picard and
//!   Legendre families
//! - [`verify`]: exhaustive verification suites and report tables

pub mod character;
pub mod curve;
pub mod cyclotomic;
pub mod field;
pub mod hypergeom;
pub mod verify;

pub use cyclotomic::{Cyclotomic, GroupRing};
pub use field::{Elem, Field, FieldError};

pub use character::{Character, ZeroConvention};
pub use curve::{CurveParams, Family, TraceReport};
pub use hypergeom::{F1Form, F1Spec, Gauss2F1Spec};
