//! Computational kit for F₁-geometry: monoid spectra, torified schemes,
//! strong and weak morphisms, group objects over F₁ and counting
//! polynomials.

pub mod counting;
pub mod error;
pub mod group;
pub mod label;
pub mod linalg;
pub mod matrix;
pub mod monoid;
pub mod perm;
pub mod reductive;
pub mod report;
pub mod scale;
pub mod scheme;
pub mod spectrum;

pub use error::{Error, Result};
pub use label::Label;
pub use num_bigint::{BigInt, BigUint};
