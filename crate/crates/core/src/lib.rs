//! Ordinary and distributional Borel summation.
//!
//! The crate is organised bottom-up:
//!
//! - [`series`]: exact Bernoulli numbers, the Schwinger perturbation coefficients,
//!   the `x cot x` expansion and truncated evaluation of divergent series.
//! - [`quadrature`]: adaptive Gauss-Kronrod integration along rays, principal-value
//!   integrals with pole subtraction, exponential integrals and Neville extrapolation.
//! - [`kernel`]: concrete Borel transforms with their pole catalogs and growth bounds.
//! - [`resummation`]: upper, lower and distributional Laplace-Borel sums, the
//!   discontinuity and remainder diagnostics.
//! - [`schwinger`]: the constant-electric-field effective action, computed directly
//!   and through its Borel transform.
//!
//! The numerical core is written against [`num_traits::Float`] wherever the algorithm
//! does not depend on a particular precision; the physics layers are fixed to `f64`
//! through the aliases below.

pub mod error;
pub mod kernel;
pub mod quadrature;
pub mod resummation;
pub mod schwinger;
pub mod series;

pub use error::{BorelError, Result};

/// Working real type of the kernel, resummation and action layers.
pub type Real = f64;

/// Working complex type of the kernel, resummation and action layers.
pub type Cplx = num_complex::Complex<f64>;

/// Exact rational used for Bernoulli numbers.
pub type ExactRational = num_rational::BigRational;

/// Double-precision quadrature result.
pub type QuadResult = quadrature::QuadratureResult<f64>;

/// Double-precision formal series.
pub type Series = series::FormalSeries<f64>;
