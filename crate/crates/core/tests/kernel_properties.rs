use approx::assert_abs_diff_eq;
use borel_core::kernel::{bound_scan, make_euler_kernel, make_schwinger_kernel, residue, GridSpec};
use borel_core::Cplx;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn schwarz_symmetry(re in -3.0f64..6.0, im in -2.0f64..2.0) {
        for k in [make_schwinger_kernel(), make_euler_kernel()] {
            let t = Cplx::new(re, im);
            if let (Ok(a), Ok(b)) = (k.eval(t.conj()), k.eval(t)) {
                prop_assert!((a - b.conj()).norm() <= 1e-14 * a.norm().max(1.0));
            }
        }
    }

    #[test]
    fn series_matches_closed_form_inside_disk(r in 0.0f64..0.7, phi in -3.2f64..3.2) {
        let t = Cplx::from_polar(r, phi);
        let k = make_schwinger_kernel();
        prop_assert!((k.eval(t).unwrap() - k.eval_series(t).unwrap()).norm() < 1e-10);
        if r <= 0.5 {
            let e = make_euler_kernel();
            prop_assert!((e.eval(t).unwrap() - e.eval_series(t).unwrap()).norm() < 1e-10);
        }
    }
}

#[test]
fn series_at_one_tenth() {
    let k = make_schwinger_kernel();
    let t = Cplx::new(0.1, 0.0);
    assert_abs_diff_eq!(k.eval(t).unwrap().re, k.eval_series(t).unwrap().re, epsilon = 1e-12);
}

#[test]
fn poles_are_confirmed_from_four_directions() {
    let cases = [(make_schwinger_kernel(), 1), (make_schwinger_kernel(), 2), (make_euler_kernel(), 1)];
    for (kernel, k) in cases {
        let p = kernel.pole(k).unwrap();
        let r = residue(&kernel, k).unwrap();
        for d in [Cplx::new(1e-4, 0.0), Cplx::new(-1e-4, 0.0), Cplx::new(0.0, 1e-4), Cplx::new(0.0, -1e-4)] {
            let v = kernel.eval(Cplx::new(p.location, 0.0) + d).unwrap();
            let approx = (v * d).norm();
            assert!((approx / r.abs() - 1.0).abs() < 1e-3, "{} k = {k}: {approx} vs {r}", kernel.label);
        }
    }
}

#[test]
fn scan_tail_is_dominated_by_damping() {
    let k = make_schwinger_kernel();
    let short = bound_scan(&k, 1.0, GridSpec::new(30.0, 6000, 0.01, 0.85, 30)).unwrap();
    let long = bound_scan(&k, 1.0, GridSpec::new(60.0, 12000, 0.01, 0.85, 30)).unwrap();
    assert!(long.a_min <= 1.05 * short.a_min);
}

#[test]
fn euler_scan_from_the_examples() {
    let rep = bound_scan(&make_euler_kernel(), 1.0, GridSpec::new(10.0, 1000, 0.01, 0.9, 40)).unwrap();
    assert!(rep.a_min <= 1.0);
}

#[test]
fn schwinger_scan_is_finite() {
    let rep = bound_scan(&make_schwinger_kernel(), 1.0, GridSpec::new(30.0, 3000, 0.01, 0.85, 30)).unwrap();
    assert!(rep.a_min.is_finite() && rep.a_min > 0.0);
    assert_eq!(rep.failures, 0);
}
