//! Orthogonal-polynomial machinery for three-term recurrences of R_II type
//! on the real line and their images on the unit circle.
//!
//! The crate is generic over the working scalar through [`scalar::Real`]
//! (any `num_traits::Float` with a few conveniences; `f32` and `f64` in
//! practice), with `f64` type aliases at the crate root.

pub mod chain;
mod dd;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod integrate;
pub mod opuc;
pub mod pencil;
pub mod recurrence;
pub mod scaled;
pub mod scalar;
pub mod spectral;

pub mod eig;

pub use error::{Error, Result};

/// f64 coefficient table.
pub type CoefficientData64 = recurrence::CoefficientData<f64>;
/// f64 pencil.
pub type Pencil64 = pencil::Pencil<f64>;
/// f64 pencil solution.
pub type PencilSolution64 = pencil::PencilSolution<f64>;
/// f64 circle quadrature.
pub type CircleQuadrature64 = spectral::CircleQuadrature<f64>;
/// f64 example selector.
pub type ExampleSpec64 = fixtures::ExampleSpec<f64>;
/// f64 Verblunsky data.
pub type VerblunskyData64 = opuc::VerblunskyData<f64>;
/// f64 companion-measure data.
pub type NuData64 = opuc::NuData<f64>;
/// f64 shared-measure family member.
pub type SFamily64 = opuc::SFamily<f64>;
