//! Verification toolkit for fusion-category 6j-symbol data.
//!
//! The crate is generic over a [`Scalar`] backend: [`Exact`] arithmetic in a
//! fixed quadratic tower over the rationals, or [`Float`] complex doubles.

pub mod builtin;
pub mod duality;
pub mod error;
pub mod fsym;
pub mod io;
pub mod linalg;
pub mod partial;
pub mod pivotal;
pub mod report;
pub mod ring;
pub mod scalar;
pub mod tetra;

pub use error::{Error, Result};
pub use fsym::{CategoryData, CodualConvention, GaugeTransform};
pub use linalg::Matrix;
pub use ring::{FusionRing, Label, ValidationReport};
pub use scalar::{Backend, Exact, Field, Float, RootChoice, Scalar};
