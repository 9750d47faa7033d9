//! Quadrature rules shared by the kernel, interaction and spectral modules.

pub mod hermite;
pub mod legendre;

pub use hermite::GaussHermite;
pub use legendre::{adaptive, gl10, gl6, gl8, AdaptiveResult, GaussLegendre};
