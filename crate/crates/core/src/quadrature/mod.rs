//! Deterministic one-dimensional quadrature for damped integrals.
//!
//! Everything here is sequential and uses a fixed subdivision order, so identical inputs
//! give bit-identical results no matter how many threads the caller runs.

mod damped;
mod extrapolate;
mod kronrod;
mod pv;
mod special;

pub use damped::{
    integrate_damped, integrate_damped_tail, integrate_damped_with, tail_truncation, Growth,
    QuadOptions, QuadratureResult, RaySpec,
};
pub use extrapolate::{boundary_extrapolate, Extrapolated};
pub use kronrod::{adaptive_gauss_kronrod, PanelSum};
pub use pv::{pv_integral, pv_window_piece, PvOptions};
pub use special::{e1, exp_integral_ei, shi, shi_complex, EULER_GAMMA};

use num_traits::Float;

/// Lossless-enough conversion of an `f64` literal into the working float type.
#[inline]
pub(crate) fn lit<T: Float>(x: f64) -> T {
    T::from(x).expect("float literal representable")
}
