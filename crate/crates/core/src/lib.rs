//! Critical level-curve configurations of complex polynomials.

pub mod bocher;
pub mod configuration;
pub mod enumeration;
pub mod error;
pub mod extraction;
pub mod polynomials;
pub mod realization;
pub mod render;
pub mod tracer;

pub use configuration::{canonical_code, equals, CanonicalCode, Configuration, Face, GraphNode};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use polynomials::ComplexPoly;
