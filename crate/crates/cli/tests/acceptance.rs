//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};

use borel_core::kernel::{bound_scan, make_euler_kernel, make_schwinger_kernel, GridSpec};
use borel_core::resummation::{
    euler_boundary, euler_direct, euler_pi_factor, remainder_profile, upper_sum, Method, SumOptions, EPS_LADDER_A,
};
use borel_core::schwinger::{action_direct, beta_series, im_action_series, verify_theorem, VerifyOptions};
use borel_core::series::{bernoulli_even, bernoulli_zeta, bernoulli_zeta_tail_corrected, coeff_a, rational_to_float};
use borel_core::{Cplx, Result};

type Outcome = Result<(bool, String)>;

fn c(re: f64, im: f64) -> Cplx {
    Cplx::new(re, im)
}

fn bernoulli() -> Outcome {
    let mut worst_corrected: f64 = 0.0;
    let mut worst_plain: f64 = 0.0;
    for m in 1..=20 {
        let exact = rational_to_float::<f64>(&bernoulli_even(m));
        let corrected = bernoulli_zeta_tail_corrected(m, 1_000_000)?;
        worst_corrected = worst_corrected.max(((corrected - exact) / exact).abs());
        if m >= 2 {
            let plain = bernoulli_zeta(m, 1_000_000)?;
            worst_plain = worst_plain.max(((plain - exact) / exact).abs());
        }
    }
    let ok = worst_corrected <= 1e-12 && worst_plain <= 1e-12;
    Ok((ok, format!("max rel err {worst_corrected:.2e} (m = 1..20, tail-corrected), {worst_plain:.2e} (m = 2..20, plain)")))
}

/// `sign * sum_n a_n t^{2n-3} / (2n-3)!`, built from the coefficient table alone.
fn coefficient_series(t: Cplx, sign: f64) -> Result<Cplx> {
    let mut sum = c(0.0, 0.0);
    for n in 2..=80usize {
        let p = 2 * n - 3;
        let fact: f64 = (1..=p).map(|k| k as f64).product();
        sum += t.powu(p as u32) * (sign * coeff_a(n)? / fact);
    }
    Ok(sum)
}

fn kernel_series() -> Outcome {
    let kernel = make_schwinger_kernel();
    let mut signs = Vec::new();
    for (j, (power, coef)) in kernel.taylor_coefficients(6).into_iter().enumerate() {
        let n = j + 2;
        let fact: f64 = (1..=power).map(f64::from).product();
        signs.push((coef * fact / coeff_a(n)?).round());
    }
    let sign = signs[0];
    let consistent = signs.iter().all(|&s| s == sign) && sign.abs() == 1.0;
    let mut worst: f64 = 0.0;
    let mut worst_flipped: f64 = 0.0;
    // The closed form cancels to O(t^4) at the origin, so the rings start at 0.02.
    for i in 1..=35 {
        let r = 0.02 * i as f64;
        for j in 0..24 {
            let t = Cplx::from_polar(r, 2.0 * PI * j as f64 / 24.0 + 0.01);
            let closed = kernel.eval_closed(t)?;
            worst = worst.max((closed - coefficient_series(t, sign)?).norm());
            worst_flipped = worst_flipped.max((closed - coefficient_series(t, -sign)?).norm());
        }
    }
    let ok = worst <= 1e-10 && consistent;
    Ok((
        ok,
        format!(
            "Taylor coefficient = {sign:+} a_n/(2n-3)!; max |closed - series| = {worst:.2e} on 0.02 <= |t| <= 0.7 \
             (opposite sign gives {worst_flipped:.2e})"
        ),
    ))
}

fn euler_triangle() -> Outcome {
    let kernel = make_euler_kernel();
    let opts = SumOptions { tol: 1e-12, ..SumOptions::default() };
    let mut worst: f64 = 0.0;
    for z in [c(0.2, 0.1), c(0.3, 0.0), c(0.5, 0.0)] {
        let mut paths = vec![
            upper_sum(&kernel, z, Method::LineShift, &opts)?.value,
            upper_sum(&kernel, z, Method::PvResidue, &opts)?.value,
            euler_direct(z, 1, 1e-13)?.value,
        ];
        if z.im == 0.0 {
            paths.push(euler_boundary(z.re, &EPS_LADDER_A, 1e-13)?.jump);
        }
        for (i, a) in paths.iter().enumerate() {
            for b in &paths[i + 1..] {
                worst = worst.max((a - b).norm());
            }
        }
    }
    let v = euler_pi_factor(0.5, 1e-13)?;
    let ok = worst <= 1e-7 && v.pi_inclusive && v.stable;
    Ok((
        ok,
        format!(
            "max pairwise diff {worst:.2e}; |d(0.5)| = {:.10} vs with pi {:.10}, without pi {:.10}; verdict {} ({})",
            v.measured,
            v.with_pi,
            v.without_pi,
            if v.pi_inclusive { "with pi" } else { "not with pi" },
            if v.stable { "stable across ladders" } else { "ladder dependent" }
        ),
    ))
}

fn theorem() -> Outcome {
    let mut alphas: Vec<Cplx> = [0.05, 0.1, 0.2].iter().map(|&a| c(a, 0.0)).collect();
    alphas.extend([PI / 4.0, -PI / 4.0, PI / 2.0, -PI / 2.0].iter().map(|&phi| Cplx::from_polar(0.1, phi)));
    let report = verify_theorem(&alphas, &VerifyOptions::default());
    let mut ok = true;
    let (mut re_worst, mut im_worst, mut cx_worst) = (0.0f64, 0.0f64, 0.0f64);
    for row in &report.rows {
        if let Some(e) = &row.error {
            return Ok((false, format!("alpha = {}: {e}", row.alpha)));
        }
        let s = row.s_direct.expect("row without error has S_direct");
        if row.alpha.im == 0.0 {
            let (re, im) = (row.re_delta.unwrap_or(f64::NAN), row.im_delta.unwrap_or(f64::NAN));
            ok &= re <= 1e-6 && im <= 1e-6 * (1.0 + s.im.abs());
            re_worst = re_worst.max(re);
            im_worst = im_worst.max(im);
        } else {
            let d = row.delta.unwrap_or(f64::NAN);
            ok &= d <= 1e-6;
            cx_worst = cx_worst.max(d);
        }
    }
    Ok((ok, format!("real: |dRe| <= {re_worst:.2e}, |dIm| <= {im_worst:.2e}; complex: |dS| <= {cx_worst:.2e}")))
}

fn bound() -> Outcome {
    let grid = GridSpec::new(30.0, 6000, 0.01, 0.85, 60);
    let schwinger = make_schwinger_kernel();
    let coarse = bound_scan(&schwinger, 1.0, grid)?;
    let fine = bound_scan(&schwinger, 1.0, grid.doubled())?;
    let change = (fine.a_min - coarse.a_min).abs() / coarse.a_min;
    let euler = bound_scan(&make_euler_kernel(), 1.0, GridSpec::new(30.0, 6000, 0.01, 0.9, 60))?;
    let ok = coarse.a_min.is_finite() && change < 0.05 && euler.a_min <= 1.0;
    Ok((
        ok,
        format!(
            "Schwinger A_min {:.6} -> {:.6} under doubling ({:.2}%); Euler A_min {:.4}",
            coarse.a_min,
            fine.a_min,
            100.0 * change,
            euler.a_min
        ),
    ))
}

fn asymptotics() -> Outcome {
    let beta = 0.02f64.sqrt();
    let p = remainder_profile(&make_schwinger_kernel(), &beta_series(), c(beta, 0.0), 12, &SumOptions::default())?;
    let rem: Vec<f64> = p.rows.iter().map(|r| r.remainder).collect();
    let falls = rem.windows(2).any(|w| w[1] < w[0]);
    let rises = rem.windows(2).any(|w| w[1] > w[0]);
    let profile_ok = falls && rises && p.argmin == p.optimal_truncation && p.fit.max_ratio <= 1.5;

    let alphas = [0.2, 0.1, 0.05];
    let mut flat = Vec::new();
    for a in alphas {
        let s = action_direct(c(a, 0.0), None, 1e-14)?.s;
        let series = im_action_series(a, 1000)?.residue_form;
        flat.push((s.im.abs() / a.powi(6), series.abs() / a.powi(6)));
    }
    let flat_ok = flat.windows(2).all(|w| w[1].0 < w[0].0 && w[1].1 < w[0].1);
    let listed: Vec<String> =
        alphas.iter().zip(&flat).map(|(a, (d, _))| format!("{a}: {d:.4e}")).collect();
    Ok((
        profile_ok && flat_ok,
        format!(
            "profile: argmin {} vs N* {}, fit max ratio {:.3}, non-monotone {}; |Im S|/alpha^6 at {} ({})",
            p.argmin,
            p.optimal_truncation,
            p.fit.max_ratio,
            falls && rises,
            listed.join(", "),
            if flat_ok { "decreasing" } else { "not decreasing" }
        ),
    ))
}

fn determinism() -> Outcome {
    let alphas = "0.05,0.1,0.2,0.1@0.7853981633974483,0.1@-0.7853981633974483,0.1@1.5707963267948966,0.1@-1.5707963267948966";
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_borel"))
            .args(["--threads", threads, "verify", "--alphas", alphas])
            .output()
            .expect("borel binary runs")
    };
    let one = run("1");
    let many = run("4");
    let ok = one.status.success() && many.status.success() && one.stdout == many.stdout && !one.stdout.is_empty();
    Ok((
        ok,
        format!(
            "verify stdout {} bytes (1 thread) vs {} bytes (4 threads), identical {}",
            one.stdout.len(),
            many.stdout.len(),
            one.stdout == many.stdout
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("Bernoulli consistency", bernoulli),
        ("kernel series vs closed form", kernel_series),
        ("Euler oracle triangle", euler_triangle),
        ("direct action vs Borel sums", theorem),
        ("growth bound scan", bound),
        ("asymptotics", asymptotics),
        ("determinism", determinism),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        all &= ok;
        println!("criterion {} {name}: {} ({detail})", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
