//! The effective action `S(alpha)` of a constant electric field: direct rotated-ray
//! quadrature of its proper-time integral, its Borel-resummed counterpart at
//! `beta = sqrt(alpha)`, and the theorem check comparing the two.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rayon::prelude::*;

use crate::error::{BorelError, Result};
use crate::kernel::{cot, coth, make_schwinger_kernel};
use crate::quadrature::{integrate_damped, RaySpec};
use crate::resummation::{distributional_sum, residue_series, upper_sum, Method, SumOptions, RESIDUE_ORIENTATION};
use crate::series::{coeff_a, xcotx_coeff, FormalSeries};
use crate::{Cplx, Real};

/// Measured sign in `S(alpha) ~ SERIES_SIGN sum a_n alpha^n` (see [`measure_series_sign`]).
pub const SERIES_SIGN: Real = -1.0;

/// Below this `|x|` the brackets `x coth x - 1 - x^2/3` and `y cot y - 1 + y^2/3` are
/// summed from their Taylor series.
pub const BRACKET_SWITCH: Real = 0.3;

/// Ray angles closer than this to a `coth` pole direction are refused.
pub const POLE_DIRECTION_GUARD: Real = 1e-3;

const BRACKET_TERMS: usize = 30;

/// `S(alpha)` with the ray angle used and the quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionValue {
    pub alpha: Cplx,
    pub s: Cplx,
    pub path_angle: Real,
    pub error_estimate: Real,
}

/// `x coth x - 1 - x^2/3` (`hyperbolic = true`) or `y cot y - 1 + y^2/3`.
fn bracket(x: Cplx, hyperbolic: bool) -> Cplx {
    if x.norm() < BRACKET_SWITCH {
        let x2 = x * x;
        let mut power = x2 * x2;
        let mut sum = Cplx::new(0.0, 0.0);
        for n in 2..BRACKET_TERMS {
            let c = xcotx_coeff(n);
            let c = if hyperbolic && n % 2 == 1 { -c } else { c };
            sum += power * c;
            power *= x2;
        }
        return sum;
    }
    if hyperbolic {
        x * coth(x) - 1.0 - x * x / 3.0
    } else {
        x * cot(x) - 1.0 + x * x / 3.0
    }
}

/// Largest admissible ray angle: the `coth` poles lie in the direction
/// `-pi/2 - arg(alpha)/2` of the `s`-plane.
pub fn max_ray_angle(alpha: Cplx) -> Real {
    FRAC_PI_2 + alpha.arg() / 2.0
}

/// `min(pi/4, max_ray_angle/2)`.
pub fn default_ray_angle(alpha: Cplx) -> Real {
    FRAC_PI_4.min(0.5 * max_ray_angle(alpha))
}

fn check_alpha(alpha: Cplx) -> Result<()> {
    if !(alpha.norm() > 0.0) || !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(BorelError::Domain("alpha must be finite and nonzero".into()));
    }
    if alpha.im == 0.0 && alpha.re < 0.0 {
        return Err(BorelError::Domain("alpha on the negative axis is outside -pi < arg < pi".into()));
    }
    Ok(())
}

/// `S(alpha) = -(1/8 pi^2) int_0^inf e^{-is} s^{-3} (x coth x - 1 - x^2/3) ds`,
/// `x = 2 sqrt(pi alpha) s`, integrated along `s = u e^{-i theta}`.
///
/// `theta` defaults to [`default_ray_angle`] and must satisfy
/// `0 < theta < max_ray_angle(alpha) - 1e-3`, so that rotating the ray off the real axis
/// sweeps no pole of `coth`.
pub fn action_direct(alpha: Cplx, theta: Option<Real>, tol: Real) -> Result<ActionValue> {
    check_alpha(alpha)?;
    let theta = theta.unwrap_or_else(|| default_ray_angle(alpha));
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(BorelError::Domain(format!("ray angle {theta} is outside (0, pi/2)")));
    }
    let limit = max_ray_angle(alpha);
    if theta > limit - POLE_DIRECTION_GUARD {
        return Err(BorelError::Domain(format!(
            "ray angle {theta} reaches the coth pole direction (limit {limit} for arg alpha = {})",
            alpha.arg()
        )));
    }
    let k = 2.0 * (PI * alpha).sqrt();
    let prefactor = -1.0 / (8.0 * PI * PI);
    let f = |s: Cplx| -> Result<Cplx> {
        if s.norm() == 0.0 {
            return Ok(Cplx::new(0.0, 0.0));
        }
        Ok(prefactor * bracket(k * s, true) / (s * s * s))
    };
    let t_max = ((1.0 / tol).ln() + 5.0) / theta.sin();
    // e^{-is} = e^{-s/z} with z = -i.
    let r = integrate_damped(f, RaySpec::rotated(-theta), Cplx::new(0.0, -1.0), t_max, tol)?;
    Ok(ActionValue { alpha, s: r.value, path_angle: theta, error_estimate: r.error_estimate })
}

/// Real-axis form `S = (1/8 pi^2) int_0^inf e^{-t} t^{-3} (y cot y - 1 + y^2/3) dt`,
/// `y = 2 sqrt(pi alpha) t`, valid for `0 < arg alpha < pi`.
pub fn action_cot_form(alpha: Cplx, tol: Real) -> Result<ActionValue> {
    check_alpha(alpha)?;
    if !(alpha.im > 0.0) {
        return Err(BorelError::Domain("the cot form needs 0 < arg alpha < pi".into()));
    }
    let k = 2.0 * (PI * alpha).sqrt();
    let prefactor = 1.0 / (8.0 * PI * PI);
    let f = |t: Cplx| -> Result<Cplx> {
        if t.norm() == 0.0 {
            return Ok(Cplx::new(0.0, 0.0));
        }
        Ok(prefactor * bracket(k * t, false) / (t * t * t))
    };
    let t_max = (1.0 / tol).ln() + 5.0;
    let r = integrate_damped(f, RaySpec::axis(), Cplx::new(1.0, 0.0), t_max, tol)?;
    Ok(ActionValue { alpha, s: r.value, path_angle: 0.0, error_estimate: r.error_estimate })
}

/// Principal square root with a nonnegative real part.
fn beta_of(alpha: Cplx) -> Cplx {
    alpha.sqrt()
}

/// `beta^3` times the upper sum of the Schwinger kernel at `beta = sqrt(alpha)`.
pub fn action_via_borel(alpha: Cplx, method: Option<Method>, opts: &SumOptions) -> Result<ActionValue> {
    check_alpha(alpha)?;
    let beta = beta_of(alpha);
    let kernel = make_schwinger_kernel();
    let b3 = beta * beta * beta;
    // The sum is scaled by |beta|^3, so ask for a correspondingly looser tolerance.
    let inner = SumOptions { tol: opts.tol / b3.norm(), ..opts.clone() };
    let up = upper_sum(&kernel, beta, method.unwrap_or_else(|| Method::default_for(beta)), &inner)?;
    Ok(ActionValue { alpha, s: b3 * up.value, path_angle: 0.0, error_estimate: up.error_estimate * b3.norm() })
}

/// `beta^3` times the principal-value sum at `beta = sqrt(alpha)`, `alpha > 0`.
/// Returns the value and its error estimate.
pub fn action_distributional(alpha: Real, opts: &SumOptions) -> Result<(Real, Real)> {
    if !(alpha > 0.0) {
        return Err(BorelError::Domain("distributional action needs alpha > 0".into()));
    }
    let beta = alpha.sqrt();
    let b3 = beta * beta * beta;
    let inner = SumOptions { tol: opts.tol / b3, ..opts.clone() };
    let (v, e) = distributional_sum(&make_schwinger_kernel(), beta, &inner)?;
    Ok((b3 * v, b3 * e))
}

/// Two candidate closed forms of `Im S(alpha)` for `alpha > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImActionSeries {
    /// `Im` of `beta^3 sigma (i pi/beta) sum r_k e^{-t_k/beta}`, i.e.
    /// `-(alpha/2 pi^2) sum k^{-2} e^{-k sqrt(pi)/(2 sqrt(alpha))}`.
    pub residue_form: Real,
    /// `(1/8 pi^3) sum n^{-2} e^{-n pi/alpha}`.
    pub pi_over_alpha_form: Real,
}

/// Both series, each truncated once a term falls below `1e-20` or after `n_max` terms.
pub fn im_action_series(alpha: Real, n_max: usize) -> Result<ImActionSeries> {
    if !(alpha > 0.0) {
        return Err(BorelError::Domain("Im S series needs alpha > 0".into()));
    }
    let kernel = make_schwinger_kernel();
    let beta = alpha.sqrt();
    let scale = RESIDUE_ORIENTATION * PI * beta * beta;
    let mut residue_form = 0.0;
    for k in 1..=n_max {
        let p = kernel.pole(k)?;
        let term = scale * p.residue * (-p.location / beta).exp();
        residue_form += term;
        if term.abs() < 1e-20 {
            break;
        }
    }
    let mut pi_over_alpha_form = 0.0;
    for n in 1..=n_max {
        let nf = n as Real;
        let term = (-nf * PI / alpha).exp() / (8.0 * PI.powi(3) * nf * nf);
        pi_over_alpha_form += term;
        if term < 1e-20 {
            break;
        }
    }
    Ok(ImActionSeries { residue_form, pi_over_alpha_form })
}

/// `S(alpha) - conj(S(conj alpha))`: the jump between the upper and lower sums at
/// `beta = sqrt(alpha)`, from the residue series.
pub fn action_discontinuity(alpha: Cplx) -> Result<Cplx> {
    check_alpha(alpha)?;
    let beta = beta_of(alpha);
    let res = residue_series(&make_schwinger_kernel(), beta)?;
    Ok(RESIDUE_ORIENTATION * 2.0 * PI * Cplx::new(0.0, 1.0) * beta * beta * res)
}

/// `sum_{n>=2} -a_n beta^{2n-3}`: the asymptotic series of the Schwinger kernel's Laplace
/// transform in `beta`, so that `beta^3` times its partial sums are those of `S`.
pub fn beta_series() -> FormalSeries<Real> {
    FormalSeries::new("schwinger_beta", 2, 2, -3, |n| {
        SERIES_SIGN * coeff_a(n).expect("n >= 2 by construction")
    })
}

/// Sign of `Re S(alpha) / alpha^2` at `alpha = 1e-3`, with the ratio itself.
pub fn measure_series_sign(tol: Real) -> Result<(Real, Real)> {
    let alpha = 1e-3;
    let s = action_direct(Cplx::new(alpha, 0.0), None, tol)?.s;
    let ratio = s.re / (alpha * alpha);
    Ok((ratio.signum(), ratio))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImMatch {
    ResidueForm,
    PiOverAlphaForm,
    Both,
    Neither,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRow {
    pub alpha: Cplx,
    pub s_direct: Option<Cplx>,
    pub s_borel: Option<Cplx>,
    /// `|S_direct - S_borel|`.
    pub delta: Option<Real>,
    pub distributional: Option<Real>,
    /// `|Re S_direct - distributional|`.
    pub re_delta: Option<Real>,
    pub im_series: Option<ImActionSeries>,
    /// `|Im S_direct - residue_form|`.
    pub im_delta: Option<Real>,
    pub im_match: Option<ImMatch>,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub rows: Vec<VerificationRow>,
    pub tolerance: Real,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Tolerance on every comparison.
    pub tol: Real,
    /// Ray angle for the direct integral (`None` for the default per `alpha`).
    pub theta: Option<Real>,
    /// Quadrature tolerance for both sides.
    pub quad_tol: Real,
    pub sum: SumOptions,
    /// Cap on the `Im S` series.
    pub n_max: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { tol: 1e-6, theta: None, quad_tol: 1e-12, sum: SumOptions { tol: 1e-12, ..SumOptions::default() }, n_max: 1000 }
    }
}

fn verify_row(alpha: Cplx, opts: &VerifyOptions) -> Result<VerificationRow> {
    let tol = opts.tol;
    let direct = action_direct(alpha, opts.theta, opts.quad_tol)?.s;
    let borel = action_via_borel(alpha, None, &opts.sum)?.s;
    let delta = (direct - borel).norm();
    let mut row = VerificationRow {
        alpha,
        s_direct: Some(direct),
        s_borel: Some(borel),
        delta: Some(delta),
        distributional: None,
        re_delta: None,
        im_series: None,
        im_delta: None,
        im_match: None,
        passed: delta <= tol,
        error: None,
    };
    if alpha.im == 0.0 {
        let (dist, _) = action_distributional(alpha.re, &opts.sum)?;
        let im = im_action_series(alpha.re, opts.n_max)?;
        let re_delta = (direct.re - dist).abs();
        let im_delta = (direct.im - im.residue_form).abs();
        let bound = tol * (1.0 + direct.im.abs());
        let pi_over_alpha_ok = (direct.im - im.pi_over_alpha_form).abs() <= bound;
        row.im_match = Some(match (im_delta <= bound, pi_over_alpha_ok) {
            (true, true) => ImMatch::Both,
            (true, false) => ImMatch::ResidueForm,
            (false, true) => ImMatch::PiOverAlphaForm,
            (false, false) => ImMatch::Neither,
        });
        row.passed &= re_delta <= tol && im_delta <= bound;
        row.distributional = Some(dist);
        row.re_delta = Some(re_delta);
        row.im_series = Some(im);
        row.im_delta = Some(im_delta);
    }
    Ok(row)
}

/// Compares the direct action with its Borel sums at every `alpha`.
///
/// Rows are computed in parallel and reported in input order; a failing row is recorded
/// and does not stop the others.
pub fn verify_theorem(alphas: &[Cplx], opts: &VerifyOptions) -> VerificationReport {
    let rows: Vec<VerificationRow> = alphas
        .par_iter()
        .map(|&alpha| {
            verify_row(alpha, opts).unwrap_or_else(|e| VerificationRow {
                alpha,
                s_direct: None,
                s_borel: None,
                delta: None,
                distributional: None,
                re_delta: None,
                im_series: None,
                im_delta: None,
                im_match: None,
                passed: false,
                error: Some(e.to_string()),
            })
        })
        .collect();
    let passed = rows.iter().all(|r| r.passed);
    VerificationReport { rows, tolerance: opts.tol, passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: Real, im: Real) -> Cplx {
        Cplx::new(re, im)
    }

    #[test]
    fn brackets_agree_across_switch() {
        for &x in &[c(0.25, 0.0), c(0.2, 0.15), c(0.29, -0.05), c(0.0, 0.28)] {
            let series = bracket(x, true);
            let closed = x * coth(x) - 1.0 - x * x / 3.0;
            assert!((series - closed).norm() < 1e-15, "{x}");
            let series = bracket(x, false);
            let closed = x * cot(x) - 1.0 + x * x / 3.0;
            assert!((series - closed).norm() < 1e-15, "{x}");
        }
    }

    #[test]
    fn direct_action_reference_value() {
        // 30-digit evaluation of the same integral on the ray at pi/6.
        let s = action_direct(c(0.1, 0.0), None, 1e-14).unwrap().s;
        assert!((s - c(-4.444_184_745_400_838e-4, -3.120_896_937_477_413_7e-4)).norm() < 1e-12, "{s}");
    }

    #[test]
    fn ray_angle_rules() {
        let down = c(0.0, -0.1);
        assert!(action_direct(down, Some(FRAC_PI_4), 1e-10).is_err());
        assert!(action_direct(down, Some(0.2), 1e-10).is_ok());
        assert!((default_ray_angle(down) - PI / 8.0).abs() < 1e-15);
        assert!(action_direct(c(-0.1, 0.0), None, 1e-10).is_err());
        assert!(action_direct(c(0.1, 0.0), Some(FRAC_PI_2), 1e-10).is_err());
    }

    #[test]
    fn series_sign_is_measured() {
        let (sign, ratio) = measure_series_sign(1e-16).unwrap();
        assert_eq!(sign, SERIES_SIGN);
        assert!((ratio.abs() / (2.0 / 45.0) - 1.0).abs() < 0.01);
    }

    #[test]
    fn im_series_forms() {
        let f = im_action_series(0.1, 1000).unwrap();
        assert!((f.residue_form - (-3.120_896_937_477_413_7e-4)).abs() < 1e-12);
        assert!(f.pi_over_alpha_form > 0.0);
    }

    #[test]
    fn discontinuity_at_real_alpha_is_twice_imaginary_part() {
        let d = action_discontinuity(c(0.1, 0.0)).unwrap();
        let im = im_action_series(0.1, 1000).unwrap().residue_form;
        assert!((d - c(0.0, 2.0 * im)).norm() < 1e-15);
    }

    #[test]
    fn empty_verification_passes() {
        let r = verify_theorem(&[], &VerifyOptions::default());
        assert!(r.passed && r.rows.is_empty());
    }
}
