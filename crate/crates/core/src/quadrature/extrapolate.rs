use num_complex::Complex;
use num_traits::Float;

use crate::error::{BorelError, Result};

/// Extrapolated boundary value and the spread of the two highest-order extrapolants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated<T> {
    pub value: Complex<T>,
    pub stability: T,
}

fn neville_at_zero<T: Float>(samples: &[(T, Complex<T>)]) -> Complex<T> {
    let mut p: Vec<Complex<T>> = samples.iter().map(|s| s.1).collect();
    let n = p.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (samples[i].0, samples[i + level].0);
            // P_{i..j}(0) = (x_j P_{i..j-1} - x_i P_{i+1..j}) / (x_j - x_i)
            p[i] = (p[i] * xj - p[i + 1] * xi) / (xj - xi);
        }
    }
    p[0]
}

/// Polynomial (Neville) extrapolation of `(eta, value)` samples to `eta = 0`.
///
/// Samples must number at least three, with distinct positive `eta` in decreasing order.
/// `stability` is the distance between the extrapolant through all samples and the one
/// that drops the coarsest sample. A spread larger than ten times the last raw increment
/// means the samples are not on a smooth curve and is reported as an error.
pub fn boundary_extrapolate<T: Float>(samples: &[(T, Complex<T>)]) -> Result<Extrapolated<T>> {
    if samples.len() < 3 {
        return Err(BorelError::Domain(format!(
            "boundary extrapolation needs at least 3 samples (got {})",
            samples.len()
        )));
    }
    if samples.iter().any(|s| !(s.0 > T::zero())) {
        return Err(BorelError::Domain("sample abscissae must be positive".into()));
    }
    if samples.windows(2).any(|w| !(w[0].0 > w[1].0)) {
        return Err(BorelError::Domain("sample abscissae must be strictly decreasing".into()));
    }
    let full = neville_at_zero(samples);
    let reduced = neville_at_zero(&samples[1..]);
    let spread = (full - reduced).norm();
    let n = samples.len();
    let increment = (samples[n - 1].1 - samples[n - 2].1).norm();
    let floor = T::epsilon() * T::from(64.0).unwrap() * full.norm().max(T::min_positive_value());
    if spread > T::from(10.0).unwrap() * increment + floor {
        return Err(BorelError::Extrapolation {
            spread: spread.to_f64().unwrap_or(f64::NAN),
            increment: increment.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(Extrapolated { value: full, stability: spread })
}
