//! Exact representation functions of integer sets, and terminating
//! constructions of additive bases with prescribed representation behavior.
//!
//! Everything is exact: integer or rational arithmetic only. Set-valued code
//! is generic over the scalar type ([`Int`]); the aliases below fix it to
//! [`BigInt`], which the constructions need because their elements grow
//! exponentially with the number of steps.

pub mod coincide;
pub mod construct;
pub mod error;
pub mod intset;
pub mod io;
pub mod linforms;
pub mod modular;
pub mod oracle;
pub mod polyring;
pub mod repfn;
pub mod scalar;
pub mod sidon;

use num_bigint::BigInt;

pub use error::{Error, Result};
pub use intset::{DensityProfile, EventuallyPeriodicSet, FiniteIntSet, IntegerSet};
pub use polyring::Poly;
pub use repfn::{RepKind, RepTable, Window};
pub use scalar::Int;

/// Generating-function polynomials with arbitrary-precision coefficients.
pub type LaurentPoly = Poly<BigInt>;
/// A finite set of arbitrary-precision integers.
pub type BigIntSet = FiniteIntSet<BigInt>;
/// A finite set of machine integers.
pub type IntSet = FiniteIntSet<i64>;
