//! Time-domain sound-soft scattering by a small star-shaped obstacle.
//!
//! The crate solves the exterior Dirichlet problem for the wave equation
//! around `Ω^ε = ε·Ω` by a Nyström single-layer method on the imaginary
//! frequency axis, synthesises the time-domain scattered field, and compares
//! it with the point-scatterer model `−c^ε u^inc(t − |x|, 0) / (4π|x|)`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod asymptotic;
pub mod bem;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod incident;
pub mod metrics;
pub mod quadrature;
pub mod sphere_oracle;
pub mod synthesis;

pub use error::{Error, Result};
