//! Discretized Morrey, Campanato and Lorentz norms of step functions and of
//! their Fourier transforms, together with the functionals and extremal
//! constructions used to test Fourier inequalities between these spaces.

pub mod constructions;
pub mod error;
pub mod fourier;
pub mod functionals;
pub mod grid;
pub mod norms;
pub mod quad;
pub mod scalar;
pub mod sequences;

pub use error::{MctError, Result};
pub use scalar::Real;

/// Step function with `f64` coefficients.
pub type Step = grid::StepFunction<f64>;
/// Norm parameters over `f64`.
pub type Params = norms::NormParams<f64>;
/// Weight over `f64`.
pub type W = norms::Weight<f64>;
