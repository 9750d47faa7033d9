//! Gaussian fractional perimeters: the Ornstein–Uhlenbeck subordinated
//! kernel, nonlocal interactions and perimeters in Gauss space, their
//! Hermite-spectral form, and the small-order asymptotics.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod field;
pub mod interaction;
pub mod kernel;
pub mod measure;
pub mod quad;
pub mod rng;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use field::ScalarField;
pub use interaction::{InteractionConfig, InteractionEstimate, PerimeterBreakdown};
pub use kernel::{KernelValue, QuadratureSpec};
pub use measure::{GaussianMeasure, Point, Region, SetExpr};
