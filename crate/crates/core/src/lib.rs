//! Exact symbolic verification of elliptic-curve divisor recipes, Young
//! projectors, GL2 label arithmetic, parametric cubical cycles and
//! bar-complex chains.
//!
//! Everything is computed with exact arithmetic: rationals or prime-field
//! residues for curve coordinates, rationals for every formal coefficient.

pub mod bar;
pub mod curve;
pub mod cycle;
pub mod divisor;
pub mod error;
pub mod formal;
pub mod gl2;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod symgroup;

pub use curve::{CurvePoint, EllipticCurve};
pub use divisor::{FormalDivisor, NamedClass, ProductDivisorClass};
pub use error::{Error, Result};
pub use gl2::{MotiveSum, PureMotive};
pub use scalar::{Field, FieldScalar};

/// Exact rational coefficient used for every formal linear combination.
pub type Q = num_rational::BigRational;
