//! Concrete Borel transforms: the Schwinger kernel, the Euler kernel `1/(1-t)` and the
//! constant kernel, with pole catalogs and numeric growth-bound scans.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{BorelError, Result};
use crate::quadrature::Growth;
use crate::series::xcotx_coeff;
use crate::{Cplx, Real};

/// Below this modulus the Schwinger kernel is summed from its Taylor series.
pub const SERIES_SWITCH: Real = 0.3;

/// Evaluation closer than this to a cataloged pole is refused.
pub const POLE_GUARD: Real = 1e-12;

/// Growth constant `A` of the Schwinger kernel for `R = 1`: the grid supremum of
/// `|B(t + i eta)| eta e^{-t}` over `t in (0, 30]`, `eta in [0.01, 0.85]`, rounded up.
/// The supremum sits at `t -> 0`, `eta = 0.85` and is about `0.01747`.
pub const SCHWINGER_GROWTH_A: Real = 0.018;

/// Number of Taylor coefficients kept for the Schwinger kernel.
const SCHWINGER_TAYLOR_TERMS: usize = 160;

/// A simple pole `B(t) ~ residue / (t - location)` on the positive axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleData {
    pub location: Real,
    pub residue: Real,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelForm {
    /// `(2 sqrt(pi) t cot(2 sqrt(pi) t) - 1 + 4 pi t^2 / 3) / (8 pi^2 t^3)`.
    Schwinger,
    /// `1 / (1 - t)`.
    Euler,
    /// `B(t) = c`.
    Constant(Real),
}

/// An analytic Borel transform with its positive-axis poles and growth pair.
///
/// Residues follow the convention `B(t) ~ r_k / (t - t_k)` near `t_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BorelKernel {
    pub label: &'static str,
    pub form: KernelForm,
    pub convergence_radius: Real,
    pub growth: Growth<Real>,
    pub real_symmetric: bool,
}

pub fn make_schwinger_kernel() -> BorelKernel {
    BorelKernel {
        label: "schwinger",
        form: KernelForm::Schwinger,
        convergence_radius: PI.sqrt() / 2.0,
        growth: Growth { a: SCHWINGER_GROWTH_A, r: 1.0 },
        real_symmetric: true,
    }
}

/// `1/(1-t)`. Since `|1 - t - i eta| >= eta`, the bound holds with `A = 1` and no
/// exponential growth at all, so `R` is stored as infinity.
pub fn make_euler_kernel() -> BorelKernel {
    BorelKernel {
        label: "euler",
        form: KernelForm::Euler,
        convergence_radius: 1.0,
        growth: Growth { a: 1.0, r: Real::INFINITY },
        real_symmetric: true,
    }
}

/// Pole-free kernel `B(t) = c`, the Borel transform of `c + 0 z + ...`.
pub fn make_constant_kernel(c: Real) -> BorelKernel {
    BorelKernel {
        label: "constant",
        form: KernelForm::Constant(c),
        convergence_radius: Real::INFINITY,
        growth: Growth { a: c.abs().max(Real::MIN_POSITIVE), r: Real::INFINITY },
        real_symmetric: true,
    }
}

fn schwinger_spacing() -> Real {
    PI.sqrt() / 2.0
}

/// Taylor coefficients `c_n` of `B(t) = sum_{n>=2} c_n t^{2n-3}` (index 0 is `n = 2`).
fn schwinger_taylor() -> &'static [Real] {
    static COEFFS: OnceLock<Vec<Real>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        (2..2 + SCHWINGER_TAYLOR_TERMS)
            .map(|n| xcotx_coeff(n) * (4.0 * PI).powi(n as i32) / (8.0 * PI * PI))
            .collect()
    })
}

/// Complex cotangent, stable for large imaginary parts.
pub fn cot(y: Cplx) -> Cplx {
    if y.im.abs() < 20.0 {
        return y.cos() / y.sin();
    }
    let i = Cplx::new(0.0, 1.0);
    if y.im > 0.0 {
        let q = (2.0 * i * y).exp();
        i * (q + 1.0) / (q - 1.0)
    } else {
        let q = (-2.0 * i * y).exp();
        i * (1.0 + q) / (1.0 - q)
    }
}

/// Complex hyperbolic cotangent, `coth x = i cot(i x)`.
pub fn coth(x: Cplx) -> Cplx {
    let i = Cplx::new(0.0, 1.0);
    i * cot(i * x)
}

impl BorelKernel {
    /// Analytic-series radius (distance from 0 to the nearest singularity).
    pub fn radius(&self) -> Real {
        self.convergence_radius
    }

    /// Poles on the positive axis with `location <= t_max`, in increasing order.
    pub fn poles_up_to(&self, t_max: Real) -> Vec<PoleData> {
        match self.form {
            KernelForm::Schwinger => {
                let h = schwinger_spacing();
                let count = (t_max / h).floor().max(0.0) as usize;
                (1..=count)
                    .map(|k| PoleData { location: k as Real * h, residue: schwinger_residue(k) })
                    .collect()
            }
            KernelForm::Euler if t_max >= 1.0 => vec![PoleData { location: 1.0, residue: -1.0 }],
            _ => Vec::new(),
        }
    }

    /// The `k`-th positive-axis pole (1-based).
    pub fn pole(&self, k: usize) -> Result<PoleData> {
        match (self.form, k) {
            (KernelForm::Schwinger, k) if k >= 1 => Ok(PoleData {
                location: k as Real * schwinger_spacing(),
                residue: schwinger_residue(k),
            }),
            (KernelForm::Euler, 1) => Ok(PoleData { location: 1.0, residue: -1.0 }),
            _ => Err(BorelError::Domain(format!("{} kernel has no pole number {k}", self.label))),
        }
    }

    fn check_poles(&self, t: Cplx) -> Result<()> {
        let nearest = match self.form {
            KernelForm::Schwinger => {
                let h = schwinger_spacing();
                let k = (t.re / h).round();
                if k == 0.0 {
                    return Ok(());
                }
                k * h
            }
            KernelForm::Euler => 1.0,
            KernelForm::Constant(_) => return Ok(()),
        };
        if (t - nearest).norm() < POLE_GUARD {
            return Err(BorelError::PoleHit { re: t.re, im: t.im, pole: nearest });
        }
        Ok(())
    }

    /// Closed-form evaluation. The Schwinger kernel switches to its Taylor series for
    /// `|t| < 0.3`, where the numerator cancels to `O(t^4)`.
    pub fn eval(&self, t: Cplx) -> Result<Cplx> {
        self.check_poles(t)?;
        let v = match self.form {
            KernelForm::Schwinger => {
                if t.norm() < SERIES_SWITCH {
                    schwinger_series(t, SCHWINGER_TAYLOR_TERMS)
                } else {
                    schwinger_closed(t)
                }
            }
            KernelForm::Euler => Cplx::new(1.0, 0.0) / (Cplx::new(1.0, 0.0) - t),
            KernelForm::Constant(c) => Cplx::new(c, 0.0),
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(BorelError::NonFinite { re: t.re, im: t.im })
        }
    }

    /// Closed form everywhere, without the small-`|t|` switch. Loses about
    /// `eps / |t|^3` absolutely near the origin.
    pub fn eval_closed(&self, t: Cplx) -> Result<Cplx> {
        match self.form {
            KernelForm::Schwinger => {
                self.check_poles(t)?;
                if t.norm() == 0.0 {
                    return Err(BorelError::Domain("closed form is 0/0 at t = 0".into()));
                }
                Ok(schwinger_closed(t))
            }
            _ => self.eval(t),
        }
    }

    pub fn eval_real(&self, t: Real) -> Result<Real> {
        self.eval(Cplx::new(t, 0.0)).map(|v| v.re)
    }

    /// Taylor evaluation around 0, summed until terms fall below double precision.
    pub fn eval_series(&self, t: Cplx) -> Result<Cplx> {
        self.eval_series_terms(t, usize::MAX)
    }

    /// Taylor evaluation around 0 with at most `max_terms` nonzero terms.
    pub fn eval_series_terms(&self, t: Cplx, max_terms: usize) -> Result<Cplx> {
        if t.norm() >= self.convergence_radius {
            return Err(BorelError::Domain(format!(
                "|t| = {} is outside the radius of convergence {}",
                t.norm(),
                self.convergence_radius
            )));
        }
        Ok(match self.form {
            KernelForm::Schwinger => schwinger_series(t, max_terms.min(SCHWINGER_TAYLOR_TERMS)),
            KernelForm::Euler => {
                let mut sum = Cplx::new(0.0, 0.0);
                let mut term = Cplx::new(1.0, 0.0);
                for _ in 0..max_terms.min(100_000) {
                    sum += term;
                    term *= t;
                    if term.norm() < 1e-18 * sum.norm() {
                        break;
                    }
                }
                sum
            }
            KernelForm::Constant(c) => Cplx::new(c, 0.0),
        })
    }

    /// Taylor coefficients as `(power, coefficient)` pairs, lowest power first.
    pub fn taylor_coefficients(&self, count: usize) -> Vec<(u32, Real)> {
        match self.form {
            KernelForm::Schwinger => schwinger_taylor()
                .iter()
                .take(count)
                .enumerate()
                .map(|(j, &c)| (2 * (j as u32 + 2) - 3, c))
                .collect(),
            KernelForm::Euler => (0..count as u32).map(|n| (n, 1.0)).collect(),
            KernelForm::Constant(c) => vec![(0, c)],
        }
    }
}

fn schwinger_residue(k: usize) -> Real {
    1.0 / (2.0 * PI.powi(3) * (k * k) as Real)
}

fn schwinger_closed(t: Cplx) -> Cplx {
    let y = 2.0 * PI.sqrt() * t;
    let num = y * cot(y) - 1.0 + 4.0 * PI * t * t / 3.0;
    num / (8.0 * PI * PI * t * t * t)
}

fn schwinger_series(t: Cplx, max_terms: usize) -> Cplx {
    let t2 = t * t;
    let mut power = t;
    let mut sum = Cplx::new(0.0, 0.0);
    for &c in schwinger_taylor().iter().take(max_terms) {
        let term = power * c;
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
        power *= t2;
    }
    sum
}

/// Residue of `kernel` at its `k`-th positive-axis pole.
pub fn residue(kernel: &BorelKernel, k: usize) -> Result<Real> {
    kernel.pole(k).map(|p| p.residue)
}

/// `(1 / 2 pi i) \oint B dt` on a circle, by the trapezoidal rule (spectrally accurate
/// for analytic integrands on the circle).
pub fn residue_by_contour(kernel: &BorelKernel, center: Real, radius: Real, points: usize) -> Result<Cplx> {
    let mut acc = Cplx::new(0.0, 0.0);
    for j in 0..points {
        let e = Complex::from_polar(radius, 2.0 * PI * j as Real / points as Real);
        acc += kernel.eval(Cplx::new(center, 0.0) + e)? * e;
    }
    Ok(acc / points as Real)
}

/// Grid for [`bound_scan`]: uniform `t_i = t_max i / t_steps`, `i = 1..=t_steps`, and
/// log-spaced `eta` between `eta_min` and `eta_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub t_max: Real,
    pub t_steps: usize,
    pub eta_min: Real,
    pub eta_max: Real,
    pub eta_steps: usize,
}

impl GridSpec {
    pub fn new(t_max: Real, t_steps: usize, eta_min: Real, eta_max: Real, eta_steps: usize) -> Self {
        Self { t_max, t_steps, eta_min, eta_max, eta_steps }
    }

    /// Same ranges, twice the points in both directions.
    pub fn doubled(&self) -> Self {
        Self { t_steps: 2 * self.t_steps, eta_steps: 2 * self.eta_steps, ..*self }
    }

    pub fn etas(&self) -> Vec<Real> {
        if self.eta_steps == 1 {
            return vec![self.eta_min];
        }
        let ratio = (self.eta_max / self.eta_min).ln();
        (0..self.eta_steps)
            .map(|j| self.eta_min * (ratio * j as Real / (self.eta_steps - 1) as Real).exp())
            .collect()
    }

    pub fn t_at(&self, i: usize) -> Real {
        self.t_max * i as Real / self.t_steps as Real
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundScanReport {
    pub r: Real,
    pub grid: GridSpec,
    /// Smallest `A` satisfying the bound on every finite grid point.
    pub a_min: Real,
    pub argmax_t: Real,
    pub argmax_eta: Real,
    /// Grid points whose evaluation failed or was non-finite.
    pub failures: usize,
}

/// `A_min = max_{grid} |B(t + i eta)| eta e^{-t/R}`.
///
/// Rows in `eta` run in parallel; the reduction walks rows in grid order, so the result
/// does not depend on the thread count.
pub fn bound_scan(kernel: &BorelKernel, r: Real, grid: GridSpec) -> Result<BoundScanReport> {
    if !(r > 0.0) || !(grid.t_max > 0.0) || grid.t_steps == 0 || grid.eta_steps == 0 {
        return Err(BorelError::Domain("bound scan needs R > 0 and a nonempty grid".into()));
    }
    if !(grid.eta_min > 0.0) || grid.eta_max < grid.eta_min || grid.eta_max >= kernel.convergence_radius {
        return Err(BorelError::Domain(format!(
            "eta range [{}, {}] must lie inside (0, {})",
            grid.eta_min, grid.eta_max, kernel.convergence_radius
        )));
    }
    let etas = grid.etas();
    let rows: Vec<(Real, Real, Real, usize)> = etas
        .par_iter()
        .map(|&eta| {
            let mut best = (Real::NEG_INFINITY, 0.0, eta, 0usize);
            for i in 1..=grid.t_steps {
                let t = grid.t_at(i);
                match kernel.eval(Cplx::new(t, eta)) {
                    Ok(v) => {
                        let q = v.norm() * eta * (-t / r).exp();
                        if q > best.0 {
                            best = (q, t, eta, best.3);
                        }
                    }
                    Err(_) => best.3 += 1,
                }
            }
            best
        })
        .collect();
    let mut report = BoundScanReport {
        r,
        grid,
        a_min: 0.0,
        argmax_t: 0.0,
        argmax_eta: 0.0,
        failures: 0,
    };
    for (q, t, eta, fails) in rows {
        report.failures += fails;
        if q > report.a_min {
            report.a_min = q;
            report.argmax_t = t;
            report.argmax_eta = eta;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: Real, im: Real) -> Cplx {
        Cplx::new(re, im)
    }

    #[test]
    fn schwinger_vanishes_at_origin() {
        let k = make_schwinger_kernel();
        assert!(k.eval(c(1e-9, 0.0)).unwrap().norm() < 1e-10);
        assert_eq!(k.eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn schwinger_value_at_one_tenth() {
        // Independent reference from 30-digit evaluation of the closed form.
        let v = make_schwinger_kernel().eval_real(0.1).unwrap();
        assert!((v - (-4.498_312_442_590_881_9e-3)).abs() < 1e-15, "{v}");
    }

    #[test]
    fn branches_overlap_at_switch() {
        let k = make_schwinger_kernel();
        for &t in &[c(0.25, 0.0), c(0.29, 0.05), c(0.35, -0.1), c(0.0, 0.4)] {
            let closed = schwinger_closed(t);
            let series = k.eval_series(t).unwrap();
            assert!((closed - series).norm() < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn nearest_pole() {
        let k = make_schwinger_kernel();
        assert!((k.pole(1).unwrap().location - 0.886_226_925_452_758).abs() < 1e-14);
        assert_eq!(k.radius(), k.pole(1).unwrap().location);
        assert!(matches!(k.eval(c(k.pole(3).unwrap().location, 0.0)), Err(BorelError::PoleHit { .. })));
    }

    #[test]
    fn euler_values() {
        let k = make_euler_kernel();
        assert_eq!(k.eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(k.eval(c(2.0, 0.0)).unwrap(), c(-1.0, 0.0));
        assert!((k.eval(c(1.0, 0.1)).unwrap() - c(0.0, 10.0)).norm() < 1e-12);
        assert!((k.eval_series(c(0.5, 0.0)).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        assert_eq!(residue(&k, 1).unwrap(), -1.0);
        assert!(residue(&k, 2).is_err());
    }

    #[test]
    fn contour_residues() {
        let k = make_schwinger_kernel();
        let r1 = residue_by_contour(&k, k.pole(1).unwrap().location, 0.2, 256).unwrap();
        let r2 = residue_by_contour(&k, k.pole(2).unwrap().location, 0.2, 256).unwrap();
        assert!((r1.re - 1.0 / (2.0 * PI.powi(3))).abs() < 1e-13);
        assert!(r1.im.abs() < 1e-13);
        assert!((r2.re / r1.re - 0.25).abs() < 1e-12);
        assert!((r1.re - residue(&k, 1).unwrap()).abs() < 1e-13);

        let e = make_euler_kernel();
        let re = residue_by_contour(&e, 1.0, 0.3, 128).unwrap();
        assert!((re - c(-1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn series_is_a_domain_error_outside_radius() {
        let k = make_schwinger_kernel();
        assert!(k.eval_series(c(0.9, 0.0)).is_err());
        assert!(make_euler_kernel().eval_series(c(0.0, 1.0)).is_err());
    }

    #[test]
    fn series_at_seven_tenths_with_sixty_terms() {
        let k = make_schwinger_kernel();
        let closed = k.eval(c(0.7, 0.0)).unwrap();
        let series = k.eval_series_terms(c(0.7, 0.0), 60).unwrap();
        assert!((closed - series).norm() < 1e-10);
    }

    #[test]
    fn cot_is_stable_far_from_axis() {
        let v = cot(c(1.0, 400.0));
        assert!((v - c(0.0, -1.0)).norm() < 1e-15);
        let w = coth(c(-500.0, 3.0));
        assert!((w - c(-1.0, 0.0)).norm() < 1e-15);
        let z = c(0.4, 0.3);
        assert!((coth(z) - z.cosh() / z.sinh()).norm() < 1e-14);
    }

    #[test]
    fn euler_bound_scan_respects_unit_constant() {
        let k = make_euler_kernel();
        let rep = bound_scan(&k, 1.0, GridSpec::new(10.0, 2000, 0.01, 0.9, 20)).unwrap();
        assert!(rep.a_min <= 1.0);
        assert_eq!(rep.failures, 0);
    }

    #[test]
    fn schwinger_growth_constant_covers_scan() {
        let k = make_schwinger_kernel();
        let grid = GridSpec::new(30.0, 6000, 0.01, 0.85, 60);
        let coarse = bound_scan(&k, 1.0, grid).unwrap();
        let fine = bound_scan(&k, 1.0, grid.doubled()).unwrap();
        assert_eq!(coarse.failures, 0);
        assert!(fine.a_min <= SCHWINGER_GROWTH_A);
        assert!((fine.a_min - coarse.a_min).abs() < 0.01 * fine.a_min);
    }

    #[test]
    fn bound_scan_rejects_bad_grid() {
        let k = make_schwinger_kernel();
        assert!(bound_scan(&k, 1.0, GridSpec::new(30.0, 100, 0.01, 0.9, 5)).is_err());
        assert!(bound_scan(&k, 0.0, GridSpec::new(30.0, 100, 0.01, 0.8, 5)).is_err());
    }

    #[test]
    fn constant_kernel_has_no_poles() {
        let k = make_constant_kernel(1.0);
        assert!(k.poles_up_to(100.0).is_empty());
        assert!(residue(&k, 1).is_err());
    }
}
