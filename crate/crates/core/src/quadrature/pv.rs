use num_complex::Complex;

use super::damped::{tail_truncation, Growth, QuadratureResult};
use super::kronrod::adaptive_gauss_kronrod;
use super::special::{e1, exp_integral_ei, shi_complex};
use crate::error::{BorelError, Result};
use crate::kernel::PoleData;

type C = Complex<f64>;

/// Knobs of [`pv_integral`].
#[derive(Debug, Clone, PartialEq)]
pub struct PvOptions {
    /// Half-width of the subtraction window around each pole. `None` picks
    /// `min(0.3, half the smallest gap, half the first pole location)`.
    pub window: Option<f64>,
    /// Growth bound used to place the truncation point.
    pub growth: Growth<f64>,
    /// Line offset at which `growth` is evaluated for the tail estimate.
    pub tail_eta: f64,
    pub max_nodes: usize,
}

impl Default for PvOptions {
    fn default() -> Self {
        Self {
            window: None,
            growth: Growth { a: 1.0, r: f64::INFINITY },
            tail_eta: 0.1,
            max_nodes: 400_000,
        }
    }
}

/// `PV int_{a-h}^{a+h} e^{-t/z} / (t - a) dt = -2 e^{-a/z} Shi(h/z)`.
///
/// For real `z` the hyperbolic sine integral goes through `(Ei + E1)/2`; complex `z`
/// uses the power series of `Shi`.
pub fn pv_window_piece(location: f64, half_width: f64, z: C) -> Result<C> {
    let w = C::new(half_width, 0.0) / z;
    let shi_w = if z.im == 0.0 {
        let x = w.re;
        C::new(0.5 * (exp_integral_ei(x)? + e1(x)?), 0.0)
    } else {
        shi_complex(w)
    };
    Ok(-2.0 * (-C::new(location, 0.0) / z).exp() * shi_w)
}

fn default_window(poles: &[PoleData]) -> f64 {
    let mut h = 0.3f64;
    if let Some(first) = poles.first() {
        h = h.min(0.5 * first.location);
    }
    for w in poles.windows(2) {
        h = h.min(0.5 * (w[1].location - w[0].location));
    }
    h
}

/// Principal value `PV int_0^inf f(t) e^{-t/z} dt` for `f` with simple poles on the axis.
///
/// Each pole `t_k` with residue `r_k` gets a window `[t_k - h, t_k + h]` on which
/// `r_k e^{-t/z} / (t - t_k)` is subtracted; window edges and pole locations are panel
/// boundaries, so the regularised integrand is smooth on every panel. The subtracted
/// pieces are restored in closed form through [`pv_window_piece`]. `Re(1/z)` must exceed
/// the growth rate `1/R` of `opts.growth`.
pub fn pv_integral<F>(
    mut f: F,
    poles: &[PoleData],
    z: C,
    tol: f64,
    opts: &PvOptions,
) -> Result<QuadratureResult<f64>>
where
    F: FnMut(f64) -> Result<C>,
{
    if !(tol > 0.0) {
        return Err(BorelError::Domain("tolerance must be positive".into()));
    }
    if poles.iter().any(|p| !(p.location > 0.0)) {
        return Err(BorelError::Configuration("poles must lie on the open positive axis".into()));
    }
    if poles.windows(2).any(|w| !(w[0].location < w[1].location)) {
        return Err(BorelError::Configuration("pole locations must be strictly increasing".into()));
    }
    let h = opts.window.unwrap_or_else(|| default_window(poles));
    if !(h > 0.0) {
        return Err(BorelError::Configuration("window half-width must be positive".into()));
    }
    if let Some(first) = poles.first() {
        if first.location - h <= 0.0 {
            return Err(BorelError::Configuration(format!(
                "window of half-width {h} around the pole at {} reaches t = 0",
                first.location
            )));
        }
    }
    for w in poles.windows(2) {
        if w[1].location - w[0].location < 2.0 * h {
            return Err(BorelError::Configuration(format!(
                "poles at {} and {} are closer than twice the window half-width {h}",
                w[0].location, w[1].location
            )));
        }
    }

    let half_tol = 0.5 * tol;
    let mut t_max = tail_truncation(opts.growth, opts.tail_eta, z, half_tol)?;
    let active: Vec<PoleData> = poles.iter().copied().filter(|p| p.location - h < t_max).collect();
    if let Some(last) = active.last() {
        t_max = t_max.max(last.location + h);
    }

    let width = z.norm().min(1.0).max(t_max / 4096.0);
    let n_uniform = (t_max / width).ceil() as usize;
    let mut bps: Vec<f64> = (0..=n_uniform).map(|i| t_max * i as f64 / n_uniform as f64).collect();
    for p in &active {
        bps.extend([p.location - h, p.location, p.location + h]);
    }
    bps.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    bps.dedup_by(|b, a| *b - *a <= 1e-12 * t_max);

    let inv_z = z.inv();
    let integrand = |t: f64| -> Result<C> {
        let damp = (-inv_z * t).exp();
        let mut v = f(t)? * damp;
        // Windows are disjoint; at most one subtraction applies.
        if let Some(p) = active.iter().find(|p| (t - p.location).abs() < h) {
            v -= damp * (p.residue / (t - p.location));
        }
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(BorelError::NonFinite { re: t, im: 0.0 })
        }
    };
    let sum = adaptive_gauss_kronrod(integrand, &bps, half_tol, opts.max_nodes)?;

    let mut pieces = C::new(0.0, 0.0);
    for p in &active {
        pieces += p.residue * pv_window_piece(p.location, h, z)?;
    }
    Ok(QuadratureResult {
        value: sum.value + pieces,
        error_estimate: sum.error + half_tol,
        truncation_point: t_max,
        node_count: sum.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_piece_matches_excision_quadrature() {
        // Symmetric excision of (a-h, a+h) around the pole, eps -> 0 by Richardson in eps.
        let (a, h, z) = (1.0, 0.3, C::new(0.5, 0.0));
        let excised = |eps: f64| {
            let g = |t: f64| Ok(C::new((-t / z.re).exp() / (t - a), 0.0));
            let l = adaptive_gauss_kronrod(g, &[a - h, a - eps], 1e-15, 200_000).unwrap();
            let r = adaptive_gauss_kronrod(g, &[a + eps, a + h], 1e-15, 200_000).unwrap();
            (l.value + r.value).re
        };
        // Odd powers of eps only: I(eps) = PV + c1 eps + c3 eps^3 + ...
        let (i1, i2) = (excised(1e-3), excised(5e-4));
        let pv = 2.0 * i2 - i1;
        let closed = pv_window_piece(a, h, z).unwrap().re;
        assert!((pv - closed).abs() < 1e-9, "{pv} vs {closed}");
    }

    #[test]
    fn complex_window_piece_is_continuous_in_z() {
        let real = pv_window_piece(1.0, 0.3, C::new(0.5, 0.0)).unwrap();
        let near = pv_window_piece(1.0, 0.3, C::new(0.5, 1e-9)).unwrap();
        assert!((real - near).norm() < 1e-8);
    }

    #[test]
    fn classical_pv_value() {
        let poles = [PoleData { location: 1.0, residue: 1.0 }];
        let r = pv_integral(
            |t| Ok(C::new(1.0 / (t - 1.0), 0.0)),
            &poles,
            C::new(1.0, 0.0),
            1e-12,
            &PvOptions::default(),
        )
        .unwrap();
        let expected = -(-1.0f64).exp() * 1.895_117_816_355_936_8;
        assert!((r.value.re - expected).abs() < 1e-11, "{}", r.value.re);
    }

    #[test]
    fn no_poles_is_a_plain_damped_integral() {
        let r = pv_integral(|t| Ok(C::new(t, 0.0)), &[], C::new(1.0, 0.0), 1e-12, &PvOptions::default())
            .unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-11);
    }

    #[test]
    fn configuration_errors() {
        let f = |t: f64| Ok(C::new(t, 0.0));
        let z = C::new(1.0, 0.0);
        let close = [
            PoleData { location: 1.0, residue: 1.0 },
            PoleData { location: 1.2, residue: 1.0 },
        ];
        let opts = PvOptions { window: Some(0.3), ..PvOptions::default() };
        assert!(matches!(pv_integral(f, &close, z, 1e-10, &opts), Err(BorelError::Configuration(_))));
        let at_zero = [PoleData { location: 0.0, residue: 1.0 }];
        assert!(matches!(
            pv_integral(f, &at_zero, z, 1e-10, &PvOptions::default()),
            Err(BorelError::Configuration(_))
        ));
    }
}
