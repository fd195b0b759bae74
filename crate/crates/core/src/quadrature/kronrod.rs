use num_complex::Complex;
use num_traits::Float;

use super::lit;
use crate::error::{BorelError, Result};

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 tables).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: Complex<T>,
    error: T,
    roundoff: bool,
    frozen: bool,
}

/// Integral, error estimate and number of integrand evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelSum<T> {
    pub value: Complex<T>,
    pub error: T,
    pub nodes: usize,
}

fn check<T: Float>(u: T, v: Complex<T>) -> Result<Complex<T>> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(BorelError::NonFinite {
            re: u.to_f64().unwrap_or(f64::NAN),
            im: 0.0,
        })
    }
}

fn kronrod_panel<T, F>(f: &mut F, a: T, b: T) -> Result<(Complex<T>, T, bool)>
where
    T: Float,
    F: FnMut(T) -> Result<Complex<T>>,
{
    let half = lit::<T>(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let abs_half = half_len.abs();

    let mut fv1 = [Complex::new(T::zero(), T::zero()); 7];
    let mut fv2 = [Complex::new(T::zero(), T::zero()); 7];

    let f_center = check(center, f(center)?)?;
    let mut res_k = f_center * lit::<T>(WGK[7]);
    let mut res_g = f_center * lit::<T>(WG[3]);
    let mut res_abs = f_center.norm() * lit::<T>(WGK[7]);

    for j in 0..7 {
        let dx = half_len * lit::<T>(XGK[j]);
        let f1 = check(center - dx, f(center - dx)?)?;
        let f2 = check(center + dx, f(center + dx)?)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let wk = lit::<T>(WGK[j]);
        res_k = res_k + (f1 + f2) * wk;
        res_abs = res_abs + (f1.norm() + f2.norm()) * wk;
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * lit::<T>(WG[j / 2]);
        }
    }

    let mean = res_k * half;
    let mut res_asc = (f_center - mean).norm() * lit::<T>(WGK[7]);
    for j in 0..7 {
        res_asc = res_asc + ((fv1[j] - mean).norm() + (fv2[j] - mean).norm()) * lit::<T>(WGK[j]);
    }

    let value = res_k * half_len;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    let mut err = ((res_k - res_g) * half_len).norm();

    if res_asc != T::zero() && err != T::zero() {
        let scale = (lit::<T>(200.0) * err / res_asc).powf(lit(1.5));
        err = if scale < T::one() { res_asc * scale } else { res_asc };
    }
    let eps = T::epsilon();
    let floor = lit::<T>(50.0) * eps * res_abs;
    let mut roundoff = false;
    if res_abs > T::min_positive_value() / (lit::<T>(50.0) * eps) && err <= floor {
        err = floor;
        roundoff = true;
    }
    Ok((value, err, roundoff))
}

/// Globally adaptive Gauss-Kronrod (7/15) integration of a complex-valued function of a
/// real parameter.
///
/// `breakpoints` must be strictly increasing with at least two entries; they become the
/// initial panels. The panel with the largest error estimate is bisected (first index
/// wins ties) until the summed estimate drops below `tol` or `max_nodes` evaluations
/// have been spent. Panels whose estimate is at the rounding floor `50 eps int|f|` are
/// not split further; if only such panels remain, the result is returned as converged
/// with that floor as its error.
pub fn adaptive_gauss_kronrod<T, F>(
    mut f: F,
    breakpoints: &[T],
    tol: T,
    max_nodes: usize,
) -> Result<PanelSum<T>>
where
    T: Float,
    F: FnMut(T) -> Result<Complex<T>>,
{
    if breakpoints.len() < 2 {
        return Err(BorelError::Configuration("need at least two breakpoints".into()));
    }
    if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(BorelError::Configuration("breakpoints must be strictly increasing".into()));
    }
    if !(tol > T::zero()) {
        return Err(BorelError::Domain("tolerance must be positive".into()));
    }

    let mut panels = Vec::with_capacity(breakpoints.len() * 4);
    let mut nodes = 0usize;
    for w in breakpoints.windows(2) {
        let (value, error, roundoff) = kronrod_panel(&mut f, w[0], w[1])?;
        nodes += 15;
        panels.push(Panel { a: w[0], b: w[1], value, error, roundoff, frozen: roundoff });
    }

    let total_error = |ps: &[Panel<T>]| ps.iter().fold(T::zero(), |acc, p| acc + p.error);
    let total_value = |ps: &[Panel<T>]| {
        ps.iter().fold(Complex::new(T::zero(), T::zero()), |acc, p| acc + p.value)
    };

    loop {
        let err = total_error(&panels);
        if err <= tol {
            break;
        }
        let mut worst: Option<usize> = None;
        for (i, p) in panels.iter().enumerate() {
            if p.frozen {
                continue;
            }
            match worst {
                Some(w) if panels[w].error >= p.error => {}
                _ => worst = Some(i),
            }
        }
        let give_up = |nodes: usize, panels: &[Panel<T>]| {
            let v = total_value(panels);
            BorelError::NotConverged {
                best_re: v.re.to_f64().unwrap_or(f64::NAN),
                best_im: v.im.to_f64().unwrap_or(f64::NAN),
                error: total_error(panels).to_f64().unwrap_or(f64::NAN),
                tol: tol.to_f64().unwrap_or(f64::NAN),
                nodes,
            }
        };
        let Some(i) = worst else {
            // Every panel is either at the rounding floor or too narrow to split.
            if panels.iter().all(|p| p.roundoff) {
                break;
            }
            return Err(give_up(nodes, &panels));
        };
        if nodes + 30 > max_nodes {
            return Err(give_up(nodes, &panels));
        }
        let Panel { a, b, .. } = panels[i];
        let mid = lit::<T>(0.5) * (a + b);
        let scale = a.abs().max(b.abs()).max(T::one());
        if b - a <= lit::<T>(64.0) * T::epsilon() * scale {
            panels[i].frozen = true;
            continue;
        }
        let (lv, le, lr) = kronrod_panel(&mut f, a, mid)?;
        let (rv, re, rr) = kronrod_panel(&mut f, mid, b)?;
        nodes += 30;
        panels[i] = Panel { a, b: mid, value: lv, error: le, roundoff: lr, frozen: lr };
        panels.push(Panel { a: mid, b, value: rv, error: re, roundoff: rr, frozen: rr });
    }

    Ok(PanelSum {
        value: total_value(&panels),
        error: total_error(&panels),
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real<T: Float>(g: impl Fn(T) -> T) -> impl FnMut(T) -> Result<Complex<T>> {
        move |x| Ok(Complex::new(g(x), T::zero()))
    }

    #[test]
    fn polynomial_is_exact() {
        let r = adaptive_gauss_kronrod(real(|x: f64| x.powi(5) - 3.0 * x), &[0.0, 2.0], 1e-14, 1000)
            .unwrap();
        assert!((r.value.re - (64.0 / 6.0 - 6.0)).abs() < 1e-13);
        assert_eq!(r.nodes, 15);
    }

    #[test]
    fn sharp_peak_needs_subdivision() {
        let eps = 1e-3;
        let r = adaptive_gauss_kronrod(
            real(move |x: f64| eps / ((x - 0.3).powi(2) + eps * eps)),
            &[0.0, 1.0],
            1e-11,
            100_000,
        )
        .unwrap();
        let exact = (0.7f64 / eps).atan() + (0.3f64 / eps).atan();
        assert!((r.value.re - exact).abs() < 1e-10);
        assert!(r.nodes > 15);
    }

    #[test]
    fn budget_exhaustion_carries_best_estimate() {
        let err = adaptive_gauss_kronrod(real(|x: f64| x.sqrt().recip()), &[1e-300, 1.0], 1e-15, 200)
            .unwrap_err();
        assert!(matches!(err, BorelError::NotConverged { nodes, .. } if nodes <= 200));
    }

    #[test]
    fn nan_sample_is_reported() {
        let err = adaptive_gauss_kronrod(real(|x: f64| if x > 0.5 { f64::NAN } else { x }), &[0.0, 1.0], 1e-10, 1000)
            .unwrap_err();
        assert!(matches!(err, BorelError::NonFinite { .. }));
    }

    #[test]
    fn bad_breakpoints() {
        assert!(adaptive_gauss_kronrod(real(|x: f64| x), &[1.0], 1e-10, 100).is_err());
        assert!(adaptive_gauss_kronrod(real(|x: f64| x), &[1.0, 0.0], 1e-10, 100).is_err());
    }

    #[test]
    fn single_precision() {
        let r = adaptive_gauss_kronrod(real(|x: f32| x.exp()), &[0.0f32, 1.0], 1e-5, 1000).unwrap();
        assert!((r.value.re - (std::f32::consts::E - 1.0)).abs() < 1e-5);
    }
}
