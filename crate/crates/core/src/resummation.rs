//! Upper, lower and distributional Laplace-Borel sums of a kernel, the discontinuity
//! between them, and remainder diagnostics against truncated partial sums.
//!
//! Everything works in the `t`-plane: `Phi(z) = (1/z) int_0^inf B(t) e^{-t/z} dt`.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex;

use crate::error::{BorelError, Result};
use crate::kernel::BorelKernel;
use crate::quadrature::{
    adaptive_gauss_kronrod, boundary_extrapolate, integrate_damped_tail, integrate_damped_with,
    pv_integral, tail_truncation, PvOptions, QuadOptions, RaySpec,
};
use crate::series::FormalSeries;
use crate::{Cplx, Real};

/// Orientation `sigma` in `upper = PV + sigma (i pi / z) sum r_k e^{-t_k/z}`.
///
/// Fixed by [`calibrate_orientation`] against the direct Euler integral; a unit test keeps
/// the two in sync.
pub const RESIDUE_ORIENTATION: Real = -1.0;

/// Residue series stop once a term drops below this times `|partial| + 1`.
pub const RESIDUE_CUTOFF: Real = 1e-18;

const RESIDUE_MAX_TERMS: usize = 100_000;

const I: Cplx = Complex::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Integrate on `R_+ + i eta` for a ladder of `eta` and extrapolate to `eta = 0`.
    LineShift,
    /// Principal value on the axis plus the half-residue series.
    PvResidue,
}

impl Method {
    /// `PvResidue` for real `z`, `LineShift` otherwise.
    pub fn default_for(z: Cplx) -> Self {
        if z.im == 0.0 {
            Method::PvResidue
        } else {
            Method::LineShift
        }
    }
}

/// Geometric `eta` ladder `start, start ratio, start ratio^2, ...`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaLadder {
    /// `None` picks `min(0.2, |z|/2, radius/4)`.
    pub start: Option<Real>,
    pub levels: usize,
    pub ratio: Real,
}

impl Default for EtaLadder {
    fn default() -> Self {
        Self { start: None, levels: 6, ratio: 0.5 }
    }
}

impl EtaLadder {
    pub fn etas(&self, kernel: &BorelKernel, z: Cplx) -> Vec<Real> {
        let start = self
            .start
            .unwrap_or_else(|| 0.2f64.min(0.5 * z.norm()).min(0.25 * kernel.convergence_radius));
        (0..self.levels).map(|j| start * self.ratio.powi(j as i32)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumOptions {
    pub tol: Real,
    pub ladder: EtaLadder,
    /// Half-width of the principal-value windows (`None` for the default).
    pub pv_window: Option<Real>,
    pub max_nodes: usize,
}

impl Default for SumOptions {
    fn default() -> Self {
        Self { tol: 1e-10, ladder: EtaLadder::default(), pv_window: None, max_nodes: 2_000_000 }
    }
}

/// A computed sum with its error estimate and the number of kernel evaluations spent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumValue {
    pub value: Cplx,
    pub error_estimate: Real,
    pub nodes: usize,
}

/// All sums of one kernel at one point, with both computation paths for the upper sum.
#[derive(Debug, Clone, PartialEq)]
pub struct SummationResult {
    pub z: Cplx,
    pub upper: Cplx,
    pub lower: Cplx,
    /// Only for real `z`.
    pub distributional: Option<Real>,
    pub discontinuity: Cplx,
    pub method_discrepancy: Real,
    pub error_estimate: Real,
}

fn check_admissible(kernel: &BorelKernel, z: Cplx) -> Result<()> {
    if !(z.norm() > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(BorelError::Domain("z must be finite and nonzero".into()));
    }
    let re_inv = z.inv().re;
    let inv_r = if kernel.growth.r.is_infinite() { 0.0 } else { 1.0 / kernel.growth.r };
    if !(re_inv > inv_r) {
        return Err(BorelError::OutsideDisk { re: z.re, im: z.im, re_inv, inv_r });
    }
    Ok(())
}

/// `sum_k r_k e^{-t_k/z}` over the kernel's positive-axis poles.
pub fn residue_series(kernel: &BorelKernel, z: Cplx) -> Result<Cplx> {
    let inv_z = z.inv();
    let mut sum = Cplx::new(0.0, 0.0);
    for k in 1..=RESIDUE_MAX_TERMS {
        let Ok(p) = kernel.pole(k) else {
            return Ok(sum);
        };
        let term = p.residue * (-inv_z * p.location).exp();
        sum += term;
        if term.norm() < RESIDUE_CUTOFF * (sum.norm() + 1.0) {
            return Ok(sum);
        }
    }
    Err(BorelError::SeriesNotConverged(format!(
        "residue series at z = {z} still above cutoff after {RESIDUE_MAX_TERMS} terms"
    )))
}

fn upper_line_shift(kernel: &BorelKernel, z: Cplx, opts: &SumOptions) -> Result<SumValue> {
    let etas = opts.ladder.etas(kernel, z);
    let quad_tol = opts.tol * z.norm() / 64.0;
    let mut samples = Vec::with_capacity(etas.len());
    let mut nodes = 0;
    let mut quad_error: Real = 0.0;
    for &eta in &etas {
        let t_est = tail_truncation(kernel.growth, eta, z, 0.5 * quad_tol)?;
        let breakpoints = kernel.poles_up_to(t_est).iter().map(|p| p.location).collect();
        let qopts = QuadOptions { breakpoints, max_nodes: opts.max_nodes, ..QuadOptions::default() };
        let r = integrate_damped_tail(|t| kernel.eval(t), RaySpec::shifted(eta), z, kernel.growth, eta, quad_tol, &qopts)?;
        // Removing the factor e^{-i eta/z} leaves a function of eta that is analytic at 0.
        let g = r.value * (-I * eta / z).exp() / z;
        samples.push((eta, g));
        nodes += r.node_count;
        quad_error = quad_error.max(r.error_estimate / z.norm());
    }
    let e = boundary_extrapolate(&samples)?;
    Ok(SumValue { value: e.value, error_estimate: e.stability + 16.0 * quad_error, nodes })
}

fn pv_part(kernel: &BorelKernel, z: Cplx, opts: &SumOptions) -> Result<SumValue> {
    let tail_eta = 0.1;
    let tol = opts.tol * z.norm();
    let t_est = tail_truncation(kernel.growth, tail_eta, z, 0.25 * tol)?;
    let poles = kernel.poles_up_to(t_est + 1.0);
    let pv_opts = PvOptions { window: opts.pv_window, growth: kernel.growth, tail_eta, max_nodes: opts.max_nodes };
    let r = pv_integral(|t| kernel.eval(Cplx::new(t, 0.0)), &poles, z, tol, &pv_opts)?;
    Ok(SumValue { value: r.value / z, error_estimate: r.error_estimate / z.norm(), nodes: r.node_count })
}

fn upper_pv_residue(kernel: &BorelKernel, z: Cplx, opts: &SumOptions) -> Result<SumValue> {
    let pv = pv_part(kernel, z, opts)?;
    let res = residue_series(kernel, z)?;
    Ok(SumValue {
        value: pv.value + RESIDUE_ORIENTATION * I * PI / z * res,
        error_estimate: pv.error_estimate,
        nodes: pv.nodes,
    })
}

/// Upper sum `(1/z) int_0^inf B(t + i0) e^{-t/z} dt` for `z` in the kernel's disk `C_R`.
pub fn upper_sum(kernel: &BorelKernel, z: Cplx, method: Method, opts: &SumOptions) -> Result<SumValue> {
    check_admissible(kernel, z)?;
    match method {
        Method::LineShift => upper_line_shift(kernel, z, opts),
        Method::PvResidue => upper_pv_residue(kernel, z, opts),
    }
}

/// Lower sum (path below the poles), obtained as `conj(upper(conj z))` for real-symmetric
/// kernels.
pub fn lower_sum(kernel: &BorelKernel, z: Cplx, method: Method, opts: &SumOptions) -> Result<SumValue> {
    if !kernel.real_symmetric {
        return Err(BorelError::Configuration("lower sum needs a real-symmetric kernel".into()));
    }
    let u = upper_sum(kernel, z.conj(), method, opts)?;
    Ok(SumValue { value: u.value.conj(), ..u })
}

/// `(1/z) PV int_0^inf B(t) e^{-t/z} dt` for real `z > 0`.
pub fn distributional_sum(kernel: &BorelKernel, z: Real, opts: &SumOptions) -> Result<(Real, Real)> {
    if !(z > 0.0) {
        return Err(BorelError::Domain("distributional sum needs real z > 0".into()));
    }
    let zc = Cplx::new(z, 0.0);
    check_admissible(kernel, zc)?;
    let pv = pv_part(kernel, zc, opts)?;
    Ok((pv.value.re, pv.error_estimate + pv.value.im.abs()))
}

/// Jump `upper - lower` at real `z` along two independent paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discontinuity {
    /// `2 i Im(upper)` with the upper sum from the line shift.
    pub from_sums: Cplx,
    /// `sigma (2 pi i / z) sum r_k e^{-t_k/z}`.
    pub from_residues: Cplx,
    pub discrepancy: Real,
    pub error_estimate: Real,
}

pub fn discontinuity(kernel: &BorelKernel, z: Real, opts: &SumOptions) -> Result<Discontinuity> {
    if !(z > 0.0) {
        return Err(BorelError::Domain("discontinuity needs real z > 0".into()));
    }
    let zc = Cplx::new(z, 0.0);
    check_admissible(kernel, zc)?;
    let up = upper_line_shift(kernel, zc, opts)?;
    let from_sums = Cplx::new(0.0, 2.0 * up.value.im);
    let from_residues = RESIDUE_ORIENTATION * 2.0 * PI * I / zc * residue_series(kernel, zc)?;
    Ok(Discontinuity {
        from_sums,
        from_residues,
        discrepancy: (from_sums - from_residues).norm(),
        error_estimate: 2.0 * up.error_estimate,
    })
}

/// Upper and lower sums by both methods, plus the derived quantities.
pub fn summarize(kernel: &BorelKernel, z: Cplx, opts: &SumOptions) -> Result<SummationResult> {
    check_admissible(kernel, z)?;
    let ls = upper_sum(kernel, z, Method::LineShift, opts)?;
    let pv = upper_sum(kernel, z, Method::PvResidue, opts)?;
    let (upper, upper_err) = match Method::default_for(z) {
        Method::LineShift => (ls.value, ls.error_estimate),
        Method::PvResidue => (pv.value, pv.error_estimate),
    };
    let lower = lower_sum(kernel, z, Method::default_for(z.conj()), opts)?;
    let distributional = if z.im == 0.0 { Some(distributional_sum(kernel, z.re, opts)?.0) } else { None };
    Ok(SummationResult {
        z,
        upper,
        lower: lower.value,
        distributional,
        discontinuity: upper - lower.value,
        method_discrepancy: (ls.value - pv.value).norm(),
        error_estimate: upper_err + lower.error_estimate,
    })
}

/// Direct evaluation of `F(z) = int_0^inf e^{-s} / (1 - z s) ds` along the ray
/// `s = u e^{i side pi/4}`.
///
/// `side = +1` passes above the pole `1/z` and gives the continuation from the upper
/// half-plane (so for real `z` this is `F(z + i0)`); `side = -1` gives the lower one. The
/// ray must stay on its side of the pole, which needs `side arg(1/z) < pi/4`.
pub fn euler_direct(z: Cplx, side: i8, tol: Real) -> Result<SumValue> {
    if z.norm() == 0.0 {
        return Ok(SumValue { value: Cplx::new(1.0, 0.0), error_estimate: 0.0, nodes: 0 });
    }
    if side == 0 {
        return Err(BorelError::Domain("side must be +1 or -1".into()));
    }
    let sign = Real::from(side.signum());
    let angle = FRAC_PI_4 * sign;
    if -z.arg() * sign > FRAC_PI_4 - 1e-3 {
        return Err(BorelError::Domain(format!("the ray at angle {angle} does not pass the pole 1/z on its side (z = {z})")));
    }
    let t_max = ((1.0 / tol).ln() + 10.0) / angle.cos();
    let r = integrate_damped_with(
        |s| Ok(Cplx::new(1.0, 0.0) / (Cplx::new(1.0, 0.0) - z * s)),
        RaySpec::rotated(angle),
        Cplx::new(1.0, 0.0),
        t_max,
        tol,
        &QuadOptions::default(),
    )?;
    Ok(SumValue { value: r.value, error_estimate: r.error_estimate, nodes: r.node_count })
}

/// `F(z)` for `Im z != 0` by quadrature on the real `s`-axis.
pub fn euler_axis(z: Cplx, tol: Real) -> Result<Cplx> {
    if z.im == 0.0 {
        return Err(BorelError::Domain("axis integral of the Euler function needs Im z != 0".into()));
    }
    let pole = z.inv().re;
    let t_max = (1.0 / tol).ln() + 10.0;
    let mut bps = vec![0.0];
    if pole > 0.0 && pole < t_max {
        let w = z.inv().im.abs().max(1e-6);
        for b in [pole - 4.0 * w, pole, pole + 4.0 * w] {
            if b > 0.0 && b < t_max {
                bps.push(b);
            }
        }
    }
    bps.push(t_max);
    bps.dedup();
    let r = adaptive_gauss_kronrod(
        |s: Real| Ok((-s).exp() / (Cplx::new(1.0, 0.0) - z * s)),
        &bps,
        tol,
        2_000_000,
    )?;
    Ok(r.value)
}

/// Offsets for the Euler boundary limits, in units of `x^2` (the scale on which
/// `e^{-1/z}` varies near `z = x`).
pub const EPS_LADDER_A: [Real; 6] = [0.16, 0.08, 0.04, 0.02, 0.01, 0.005];
pub const EPS_LADDER_B: [Real; 6] = [0.12, 0.06, 0.03, 0.015, 0.0075, 0.00375];

/// Jump `F(x + i0) - F(x - i0)` of the Euler function, from `F(x + i eps) - F(x - i eps)`
/// extrapolated to `eps = 0` (or the one-sided limit for [`euler_boundary`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerJump {
    pub jump: Cplx,
    pub stability: Real,
}

pub fn euler_jump(x: Real, eps_ladder: &[Real], tol: Real) -> Result<EulerJump> {
    euler_eps_limit(x, eps_ladder, tol, true)
}

/// `F(x + i0)` from `F(x + i eps)` extrapolated to `eps = 0`.
pub fn euler_boundary(x: Real, eps_ladder: &[Real], tol: Real) -> Result<EulerJump> {
    euler_eps_limit(x, eps_ladder, tol, false)
}

fn euler_eps_limit(x: Real, eps_ladder: &[Real], tol: Real, jump: bool) -> Result<EulerJump> {
    if !(x > 0.0) {
        return Err(BorelError::Domain("boundary values are taken at real x > 0".into()));
    }
    let mut samples = Vec::with_capacity(eps_ladder.len());
    for &rel in eps_ladder {
        let eps = rel * x * x;
        let mut v = euler_axis(Cplx::new(x, eps), tol)?;
        if jump {
            v -= euler_axis(Cplx::new(x, -eps), tol)?;
        }
        samples.push((eps, v));
    }
    let e = boundary_extrapolate(&samples)?;
    Ok(EulerJump { jump: e.value, stability: e.stability })
}

/// Measured `|d(x)|` of the Euler function against `(2 pi/x) e^{-1/x}` and `(2/x) e^{-1/x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiFactorVerdict {
    pub measured: Real,
    pub with_pi: Real,
    pub without_pi: Real,
    /// `true` when the measurement is within `1e-6` relative of the π-inclusive value.
    pub pi_inclusive: bool,
    /// Same verdict reached on both ε-ladders.
    pub stable: bool,
}

pub fn euler_pi_factor(x: Real, tol: Real) -> Result<PiFactorVerdict> {
    let a = euler_jump(x, &EPS_LADDER_A, tol)?;
    let b = euler_jump(x, &EPS_LADDER_B, tol)?;
    let with_pi = 2.0 * PI / x * (-1.0 / x).exp();
    let without_pi = 2.0 / x * (-1.0 / x).exp();
    let verdict = |m: Real| (m / with_pi - 1.0).abs() < 1e-6;
    let (va, vb) = (verdict(a.jump.norm()), verdict(b.jump.norm()));
    Ok(PiFactorVerdict {
        measured: a.jump.norm(),
        with_pi,
        without_pi,
        pi_inclusive: va,
        stable: va == vb,
    })
}

/// Solves for the residue orientation with the Euler kernel at `z = 0.5`: the imaginary
/// part of `F(z + i0) - PV` divided by that of `(i pi / z) sum r_k e^{-t_k/z}`.
pub fn calibrate_orientation() -> Result<Real> {
    let kernel = crate::kernel::make_euler_kernel();
    let z = Cplx::new(0.5, 0.0);
    let direct = euler_direct(z, 1, 1e-13)?.value;
    let pv = pv_part(&kernel, z, &SumOptions { tol: 1e-12, ..SumOptions::default() })?.value;
    let res = I * PI / z * residue_series(&kernel, z)?;
    Ok(((direct - pv).im / res.im).round())
}

/// Row of a remainder profile: partial sum over indices `< n`, whose first omitted term
/// carries power `power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderRow {
    pub n: usize,
    pub power: i32,
    pub remainder: Real,
}

/// Least-squares fit of `ln(remainder / (p! |z|^p)) = ln C0 + p ln c` over `N <= N*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorialFit {
    pub c0: Real,
    pub c: Real,
    /// Largest `remainder / (C0 c^p p! |z|^p)` over all rows.
    pub max_ratio: Real,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemainderProfile {
    pub z: Cplx,
    pub reference: Cplx,
    pub rows: Vec<RemainderRow>,
    /// Index of the smallest remainder.
    pub argmin: usize,
    pub optimal_truncation: usize,
    pub fit: FactorialFit,
}

fn ln_factorial(p: i32) -> Real {
    (2..=p.max(0)).map(|k| Real::from(k).ln()).sum()
}

/// Partial sum over indices `< cutoff` at complex argument.
pub fn partial_sum_complex(series: &FormalSeries<Real>, z: Cplx, cutoff: usize) -> Cplx {
    (series.n0..cutoff).fold(Cplx::new(0.0, 0.0), |acc, n| acc + series.coeff(n) * z.powi(series.power(n)))
}

/// `|upper_sum(z) - partial_N(z)|` for `N = n0 ..= n_max`, and a factorial-law fit.
pub fn remainder_profile(
    kernel: &BorelKernel,
    series: &FormalSeries<Real>,
    z: Cplx,
    n_max: usize,
    opts: &SumOptions,
) -> Result<RemainderProfile> {
    if n_max < 2 || n_max < series.n0 {
        return Err(BorelError::Domain("remainder profile needs N_max >= max(2, n0)".into()));
    }
    let reference = upper_sum(kernel, z, Method::default_for(z), opts)?.value;
    let rows: Vec<RemainderRow> = (series.n0..=n_max)
        .map(|n| RemainderRow {
            n,
            power: series.power(n),
            remainder: (reference - partial_sum_complex(series, z, n)).norm(),
        })
        .collect();
    let argmin = rows
        .iter()
        .fold(&rows[0], |best, r| if r.remainder < best.remainder { r } else { best })
        .n;
    let n_star = crate::series::optimal_truncation(series, z.norm())?;

    let scaled = |r: &RemainderRow| r.remainder.ln() - ln_factorial(r.power) - Real::from(r.power) * z.norm().ln();
    let fit_rows: Vec<&RemainderRow> = rows.iter().filter(|r| r.n <= n_star && r.remainder > 0.0).collect();
    let (ln_c0, ln_c) = match fit_rows.len() {
        0 => (0.0, 0.0),
        1 => (scaled(fit_rows[0]), 0.0),
        m => {
            let m = m as Real;
            let xs: Vec<Real> = fit_rows.iter().map(|r| Real::from(r.power)).collect();
            let ys: Vec<Real> = fit_rows.iter().map(|r| scaled(r)).collect();
            let mx = xs.iter().sum::<Real>() / m;
            let my = ys.iter().sum::<Real>() / m;
            let sxx: Real = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
            let sxy: Real = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let slope = sxy / sxx;
            (my - slope * mx, slope)
        }
    };
    let max_ratio = rows
        .iter()
        .map(|r| (scaled(r) - ln_c0 - ln_c * Real::from(r.power)).exp())
        .fold(0.0, Real::max);
    Ok(RemainderProfile {
        z,
        reference,
        rows,
        argmin,
        optimal_truncation: n_star,
        fit: FactorialFit { c0: ln_c0.exp(), c: ln_c.exp(), max_ratio },
    })
}
