use borel_core::series::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

proptest! {
    #[test]
    fn bernoulli_signs_alternate(m in 1usize..40) {
        let b = bernoulli_even(m);
        prop_assert!(!b.is_zero());
        prop_assert_eq!(b.is_positive(), m % 2 == 1);
    }

    #[test]
    fn optimal_truncation_ends_at_smallest_term(x in 0.01f64..0.5) {
        let s = FormalSeries::<f64>::euler();
        let n_star = optimal_truncation(&s, x).unwrap();
        prop_assert!(n_star >= 1);
        let smallest = s.term(n_star - 1, x).abs();
        for n in 0..n_star + 20 {
            prop_assert!(s.term(n, x).abs() >= smallest * (1.0 - 1e-12));
        }
    }

    #[test]
    fn partial_sums_are_consistent(x in 0.01f64..0.3, n in 0usize..15) {
        let s = FormalSeries::<f64>::schwinger();
        let a = s.partial_below(x, s.n0 + n);
        let b = eval_truncated(&s, x, n);
        prop_assert!((a - b).abs() <= 1e-15 * a.abs().max(1e-300));
    }
}

#[test]
fn zeta_sum_reproduces_bernoulli() {
    for m in 1..=20 {
        let exact = rational_to_float::<f64>(&bernoulli_even(m));
        let corrected = bernoulli_zeta_tail_corrected(m, 1_000_000).unwrap();
        assert!(((corrected - exact) / exact).abs() < 1e-12, "m = {m}");
        if m >= 2 {
            let plain = bernoulli_zeta(m, 1_000_000).unwrap();
            assert!(((plain - exact) / exact).abs() < 1e-12, "m = {m}");
        }
    }
}

#[test]
fn coefficients_from_the_examples() {
    assert!((coeff_a(2).unwrap() - 2.0 / 45.0).abs() < 1e-16);
    assert!((coeff_a(3).unwrap() - 512.0 * std::f64::consts::PI / 5040.0).abs() < 1e-15);
    for n in 2..=10 {
        assert!(coeff_a(n).unwrap() > 0.0);
    }
}
