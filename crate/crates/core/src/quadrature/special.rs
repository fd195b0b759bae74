//! Exponential-integral family used by the closed-form principal-value pieces.

use num_complex::Complex;
use num_traits::Float;

use super::lit;
use crate::error::{BorelError, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_431;

/// Above this argument `Ei` switches from the power series to the asymptotic expansion.
const EI_CROSSOVER: f64 = 40.0;

/// Principal-value exponential integral `Ei(x) = PV int_{-inf}^x e^u / u du`, `x > 0`.
///
/// Power series `gamma + ln x + sum x^n / (n n!)` up to `x = 40` (all terms positive, so no
/// cancellation), optimally truncated asymptotic series `e^x / x sum k! / x^k` above.
pub fn exp_integral_ei<T: Float>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(BorelError::Domain("Ei is only provided for x > 0".into()));
    }
    if x <= lit(EI_CROSSOVER) {
        Ok(ei_series(x))
    } else {
        Ok(ei_asymptotic(x))
    }
}

pub(crate) fn ei_series<T: Float>(x: T) -> T {
    let mut term = T::one();
    let mut sum = T::zero();
    for n in 1..500 {
        let nf = lit::<T>(n as f64);
        term = term * x / nf;
        let add = term / nf;
        sum = sum + add;
        if add < T::epsilon() * sum {
            break;
        }
    }
    lit::<T>(EULER_GAMMA) + x.ln() + sum
}

pub(crate) fn ei_asymptotic<T: Float>(x: T) -> T {
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..200 {
        let next = term * lit::<T>(k as f64) / x;
        if next >= term || next < T::epsilon() * sum {
            break;
        }
        term = next;
        sum = sum + term;
    }
    x.exp() / x * sum
}

/// `E1(x) = int_x^inf e^{-u} / u du` for `x > 0`.
pub fn e1<T: Float>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(BorelError::Domain("E1 is only provided for x > 0".into()));
    }
    if x <= T::one() {
        // -gamma - ln x - sum_{n>=1} (-x)^n / (n n!)
        let mut term = T::one();
        let mut sum = T::zero();
        for n in 1..200 {
            let nf = lit::<T>(n as f64);
            term = -term * x / nf;
            let add = term / nf;
            sum = sum + add;
            if add.abs() < T::epsilon() * sum.abs() {
                break;
            }
        }
        return Ok(-lit::<T>(EULER_GAMMA) - x.ln() - sum);
    }
    // Modified Lentz evaluation of the continued fraction for e^x E1(x).
    let tiny = lit::<T>(1e-300).max(T::min_positive_value());
    let mut b = x + T::one();
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..500 {
        let an = -lit::<T>((i * i) as f64);
        b = b + lit(2.0);
        d = T::one() / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h = h * del;
        if (del - T::one()).abs() < T::epsilon() {
            break;
        }
    }
    Ok(h * (-x).exp())
}

/// Hyperbolic sine integral `Shi(x) = int_0^x sinh(u) / u du` for real `x`.
///
/// Uses `(Ei(x) + E1(x)) / 2` for `|x| > 2` and the odd power series otherwise.
pub fn shi<T: Float>(x: T) -> Result<T> {
    if x < T::zero() {
        return shi(-x).map(|v| -v);
    }
    if x <= lit(2.0) {
        return Ok(shi_complex(Complex::new(x, T::zero())).re);
    }
    Ok((exp_integral_ei(x)? + e1(x)?) * lit(0.5))
}

/// `Shi(w) = sum_{n>=0} w^{2n+1} / ((2n+1) (2n+1)!)` for complex `w`.
///
/// Entire, but accuracy degrades like `e^{|w| - |Re w|}` away from the real axis.
pub fn shi_complex<T: Float>(w: Complex<T>) -> Complex<T> {
    let w2 = w * w;
    let mut term = w;
    let mut sum = w;
    for n in 1..400 {
        let k = lit::<T>((2 * n) as f64);
        term = term * w2 / (k * (k + T::one()));
        let add = term / (k + T::one());
        sum = sum + add;
        if add.norm() < T::epsilon() * sum.norm() {
            break;
        }
    }
    sum
}
