use num_complex::Complex;
use num_traits::Float;

use super::kronrod::adaptive_gauss_kronrod;
use super::lit;
use crate::error::{BorelError, Result};

/// Integration path: `t = u e^{i angle} + i imaginary_offset`, `u in [0, T]`.
///
/// At most one of the two is nonzero; both zero is the positive real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySpec<T> {
    pub angle: T,
    pub imaginary_offset: T,
}

impl<T: Float> RaySpec<T> {
    pub fn axis() -> Self {
        Self { angle: T::zero(), imaginary_offset: T::zero() }
    }

    pub fn rotated(angle: T) -> Self {
        Self { angle, imaginary_offset: T::zero() }
    }

    pub fn shifted(offset: T) -> Self {
        Self { angle: T::zero(), imaginary_offset: offset }
    }

    fn validate(&self) -> Result<()> {
        if self.angle != T::zero() && self.imaginary_offset != T::zero() {
            return Err(BorelError::Configuration(
                "a ray is either rotated or shifted, not both".into(),
            ));
        }
        if self.imaginary_offset < T::zero() {
            return Err(BorelError::Configuration("imaginary offset must be non-negative".into()));
        }
        Ok(())
    }

    /// Point of the path at parameter `u`.
    pub fn point(&self, u: T) -> Complex<T> {
        Complex::from_polar(u, self.angle) + Complex::new(T::zero(), self.imaginary_offset)
    }
}

/// Growth pair `(A, R)` of a bound `|B(t + i eta)| <= (A / eta) e^{t / R}`.
///
/// `r = +inf` encodes a bound without exponential growth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Growth<T> {
    pub a: T,
    pub r: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: Complex<T>,
    /// Adaptive panel estimate plus the analytic tail bound, when one was supplied.
    pub error_estimate: T,
    pub truncation_point: T,
    pub node_count: usize,
}

/// Knobs of the adaptive driver.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadOptions<T> {
    /// Extra panel boundaries in the path parameter `u` (clipped to `(0, T)`).
    pub breakpoints: Vec<T>,
    /// Upper bound on the initial uniform panel width.
    pub max_initial_panel: T,
    pub max_nodes: usize,
}

impl<T: Float> Default for QuadOptions<T> {
    fn default() -> Self {
        Self {
            breakpoints: Vec::new(),
            max_initial_panel: T::one(),
            max_nodes: 400_000,
        }
    }
}

fn decay_rate<T: Float>(ray: &RaySpec<T>, z: Complex<T>) -> T {
    (Complex::from_polar(T::one(), ray.angle) / z).re
}

/// `int_0^T f(t) e^{-t/z} dt` along `ray`, with default options.
pub fn integrate_damped<T, F>(
    f: F,
    ray: RaySpec<T>,
    z: Complex<T>,
    t_max: T,
    tol: T,
) -> Result<QuadratureResult<T>>
where
    T: Float,
    F: FnMut(Complex<T>) -> Result<Complex<T>>,
{
    integrate_damped_with(f, ray, z, t_max, tol, &QuadOptions::default())
}

/// `int_0^T f(t) e^{-(t - i eta)/z} dt/du du` along `ray`.
///
/// For a shifted ray the damping uses the real coordinate `u`, so the shifted integral is
/// `int_0^T f(u + i eta) e^{-u/z} du`. The damping must decay along the path:
/// `Re(e^{i angle} / z) > 0`. Initial panels are uniform with width at most
/// `min(max_initial_panel, |z|)`; the adaptive driver refines from there.
pub fn integrate_damped_with<T, F>(
    mut f: F,
    ray: RaySpec<T>,
    z: Complex<T>,
    t_max: T,
    tol: T,
    opts: &QuadOptions<T>,
) -> Result<QuadratureResult<T>>
where
    T: Float,
    F: FnMut(Complex<T>) -> Result<Complex<T>>,
{
    ray.validate()?;
    if !(t_max > T::zero()) {
        return Err(BorelError::Domain("truncation point must be positive".into()));
    }
    if !(tol > T::zero()) {
        return Err(BorelError::Domain("tolerance must be positive".into()));
    }
    if !(decay_rate(&ray, z) > T::zero()) {
        return Err(BorelError::Domain(format!(
            "e^(-t/z) does not decay along the ray (z = {}{:+}i, angle = {})",
            z.re.to_f64().unwrap_or(f64::NAN),
            z.im.to_f64().unwrap_or(f64::NAN),
            ray.angle.to_f64().unwrap_or(f64::NAN)
        )));
    }

    let width = opts.max_initial_panel.min(z.norm()).max(t_max / lit(4096.0));
    let n_uniform = (t_max / width).ceil().to_usize().unwrap_or(1).max(1);
    let mut bps: Vec<T> = (0..=n_uniform)
        .map(|i| t_max * lit::<T>(i as f64) / lit::<T>(n_uniform as f64))
        .collect();
    bps.extend(opts.breakpoints.iter().copied().filter(|&b| b > T::zero() && b < t_max));
    bps.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    let min_gap = t_max * lit::<T>(1e3) * T::epsilon();
    bps.dedup_by(|b, a| *b - *a <= min_gap);
    if let Some(last) = bps.last_mut() {
        *last = t_max;
    }

    let phase = Complex::from_polar(T::one(), ray.angle);
    let shift = Complex::new(T::zero(), ray.imaginary_offset);
    let integrand = |u: T| -> Result<Complex<T>> {
        let along = phase * u;
        let t = along + shift;
        let v = f(t)? * (-along / z).exp() * phase;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(BorelError::NonFinite {
                re: t.re.to_f64().unwrap_or(f64::NAN),
                im: t.im.to_f64().unwrap_or(f64::NAN),
            })
        }
    };
    let sum = adaptive_gauss_kronrod(integrand, &bps, tol, opts.max_nodes)?;
    Ok(QuadratureResult {
        value: sum.value,
        error_estimate: sum.error,
        truncation_point: t_max,
        node_count: sum.nodes,
    })
}

/// Damped integral to infinity: the truncation point comes from [`tail_truncation`] with
/// half the tolerance, the panels get the other half, and the reported error estimate
/// is the panel estimate plus the tail bound.
pub fn integrate_damped_tail<T, F>(
    f: F,
    ray: RaySpec<T>,
    z: Complex<T>,
    growth: Growth<T>,
    eta: T,
    tol: T,
    opts: &QuadOptions<T>,
) -> Result<QuadratureResult<T>>
where
    T: Float,
    F: FnMut(Complex<T>) -> Result<Complex<T>>,
{
    let half = tol * lit(0.5);
    let t_max = tail_truncation(growth, eta, z, half)?;
    let mut r = integrate_damped_with(f, ray, z, t_max, half, opts)?;
    r.error_estimate = r.error_estimate + half;
    Ok(r)
}

/// Smallest `T` with `(A/eta) int_T^inf e^{-t (Re(1/z) - 1/R)} dt < tol`.
pub fn tail_truncation<T: Float>(growth: Growth<T>, eta: T, z: Complex<T>, tol: T) -> Result<T> {
    if !(eta > T::zero()) || !(tol > T::zero()) || !(growth.a > T::zero()) {
        return Err(BorelError::Domain("tail truncation needs eta, tol, A > 0".into()));
    }
    let re_inv = z.inv().re;
    let inv_r = if growth.r.is_infinite() { T::zero() } else { growth.r.recip() };
    let rate = re_inv - inv_r;
    if !(rate > T::zero()) {
        return Err(BorelError::OutsideDisk {
            re: z.re.to_f64().unwrap_or(f64::NAN),
            im: z.im.to_f64().unwrap_or(f64::NAN),
            re_inv: re_inv.to_f64().unwrap_or(f64::NAN),
            inv_r: inv_r.to_f64().unwrap_or(f64::NAN),
        });
    }
    let t = (growth.a / (eta * rate * tol)).ln() / rate;
    Ok(t.max(lit(1e-3)))
}
