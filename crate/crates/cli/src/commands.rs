use borel_core::kernel::{self, make_euler_kernel, make_schwinger_kernel, BorelKernel, GridSpec};
use borel_core::resummation::{
    self, discontinuity, euler_boundary, euler_direct, euler_pi_factor, remainder_profile, summarize, upper_sum,
    EtaLadder, Method, SumOptions, EPS_LADDER_A,
};
use borel_core::schwinger::{
    self, action_direct, action_via_borel, beta_series, ImMatch, VerifyOptions, SERIES_SIGN,
};
use borel_core::series::{coeff_a, coeff_a_rational, FormalSeries};
use borel_core::Cplx;

use crate::parse::{parse_complex, parse_complex_list, parse_grid};
use crate::report::{Record, ReportEnvelope};
use crate::{CliError, KernelArg, LadderArgs, MethodArg};

type CliResult = Result<ReportEnvelope, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn make_kernel(k: KernelArg) -> BorelKernel {
    match k {
        KernelArg::Schwinger => make_schwinger_kernel(),
        KernelArg::Euler => make_euler_kernel(),
    }
}

fn kernel_name(k: KernelArg) -> &'static str {
    match k {
        KernelArg::Schwinger => "schwinger",
        KernelArg::Euler => "euler",
    }
}

fn method_of(m: MethodArg) -> Method {
    match m {
        MethodArg::LineShift => Method::LineShift,
        MethodArg::PvResidue => Method::PvResidue,
    }
}

fn sum_options(tol: f64, ladder: &LadderArgs) -> Result<SumOptions, CliError> {
    if !(tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    if ladder.eta_levels < 3 || !(ladder.eta_ratio > 0.0 && ladder.eta_ratio < 1.0) {
        return Err(usage("the η ladder needs at least 3 levels and a ratio in (0, 1)"));
    }
    Ok(SumOptions {
        tol,
        ladder: EtaLadder { start: ladder.eta0, levels: ladder.eta_levels, ratio: ladder.eta_ratio },
        pv_window: ladder.window,
        max_nodes: ladder.max_nodes,
    })
}

fn ladder_params(p: Record, ladder: &LadderArgs) -> Record {
    p.opt_num("eta0", ladder.eta0)
        .int("eta_levels", ladder.eta_levels as i64)
        .num("eta_ratio", ladder.eta_ratio)
        .opt_num("window", ladder.window)
        .int("max_nodes", ladder.max_nodes as i64)
}

pub fn coeffs(max_n: usize) -> CliResult {
    if max_n < 2 {
        return Err(usage("--max-n must be at least 2"));
    }
    let mut env = ReportEnvelope::new("coeffs", Record::new().int("max_n", max_n as i64));
    let mut all_positive = true;
    for n in 2..=max_n {
        let a = coeff_a(n)?;
        all_positive &= a > 0.0;
        env.rows.push(
            Record::new()
                .int("n", n as i64)
                .num("a_n", a)
                .text("a_n_over_pi_pow_n_minus_2", coeff_a_rational(n)?.to_string())
                .flag("positive", a > 0.0),
        );
    }
    env.passed = all_positive;
    env.summary = Record::new().num("series_sign", SERIES_SIGN).flag("all_positive", env.passed);
    Ok(env)
}

pub fn kernel_eval(k: KernelArg, points: &str, tol: f64) -> CliResult {
    let ts = parse_complex_list(points).map_err(usage)?;
    let kernel = make_kernel(k);
    let mut env = ReportEnvelope::new(
        "kernel-eval",
        Record::new().text("kernel", kernel_name(k)).text("t", points).num("tol", tol),
    );
    env.tolerances = Record::new().num("series_vs_closed", tol);
    let mut worst: f64 = 0.0;
    for t in ts {
        let closed = kernel.eval(t)?;
        let series = kernel.eval_series(t).ok();
        let diff = series.map(|s| (s - closed).norm());
        worst = worst.max(diff.unwrap_or(0.0));
        env.rows.push(
            Record::new()
                .complex("t", t)
                .complex("closed_form", closed)
                .opt_complex("series", series)
                .opt_num("difference", diff),
        );
    }
    let taylor = kernel.taylor_coefficients(4);
    let mut summary = Record::new()
        .num("convergence_radius", kernel.convergence_radius)
        .num("growth_a", kernel.growth.a)
        .num("growth_r", kernel.growth.r)
        .num("max_difference", worst);
    if k == KernelArg::Schwinger {
        // Taylor coefficient of t^{2n-3} against a_n / (2n-3)!.
        for (j, (power, c)) in taylor.iter().enumerate() {
            let n = j + 2;
            let fact: f64 = (1..=*power).map(f64::from).product();
            summary = summary.num(&format!("taylor_over_a_ratio_n{n}"), c * fact / coeff_a(n)?);
        }
    }
    env.summary = summary;
    env.passed = worst <= tol;
    Ok(env)
}

pub fn bound_scan(k: KernelArg, r: f64, grid: &str, eta_min: f64, eta_max: Option<f64>, tol: f64) -> CliResult {
    let g = parse_grid(grid).map_err(usage)?;
    let eta_max = eta_max.unwrap_or(match k {
        KernelArg::Schwinger => 0.85,
        KernelArg::Euler => 0.9,
    });
    let kernel = make_kernel(k);
    let spec = GridSpec::new(g.t_max, g.t_steps, eta_min, eta_max, g.eta_steps);
    let coarse = kernel::bound_scan(&kernel, r, spec)?;
    let fine = kernel::bound_scan(&kernel, r, spec.doubled())?;
    let change = (fine.a_min - coarse.a_min).abs() / fine.a_min;
    let mut env = ReportEnvelope::new(
        "bound-scan",
        Record::new()
            .text("kernel", kernel_name(k))
            .num("r", r)
            .num("t_max", g.t_max)
            .int("t_steps", g.t_steps as i64)
            .int("eta_steps", g.eta_steps as i64)
            .num("eta_min", eta_min)
            .num("eta_max", eta_max)
            .num("tol", tol),
    );
    for (label, rep) in [("grid", &coarse), ("doubled", &fine)] {
        env.rows.push(
            Record::new()
                .text("grid", label)
                .int("t_steps", rep.grid.t_steps as i64)
                .int("eta_steps", rep.grid.eta_steps as i64)
                .num("a_min", rep.a_min)
                .num("argmax_t", rep.argmax_t)
                .num("argmax_eta", rep.argmax_eta)
                .int("failures", rep.failures as i64),
        );
    }
    let covered = fine.a_min <= kernel.growth.a;
    env.summary = Record::new()
        .num("relative_change", change)
        .num("kernel_growth_a", kernel.growth.a)
        .flag("kernel_growth_covers_scan", covered);
    env.tolerances = Record::new().num("relative_change", tol);
    env.passed = coarse.a_min.is_finite() && coarse.failures == 0 && fine.failures == 0 && change < tol && covered;
    Ok(env)
}

pub fn sum(k: KernelArg, z: &str, tol: f64, max_n: Option<usize>, ladder: &LadderArgs) -> CliResult {
    let zc = parse_complex(z).map_err(usage)?;
    let kernel = make_kernel(k);
    let opts = sum_options(tol, ladder)?;
    let r = summarize(&kernel, zc, &opts)?;
    let params = Record::new()
        .text("kernel", kernel_name(k))
        .complex("z", zc)
        .num("tol", tol)
        .opt_num("max_n", max_n.map(|n| n as f64));
    let mut env = ReportEnvelope::new("sum", ladder_params(params, ladder));
    let allowed = 1e-8f64.max(10.0 * r.error_estimate);
    let summary = Record::new()
        .complex("z", r.z)
        .complex("upper", r.upper)
        .complex("lower", r.lower)
        .opt_num("distributional", r.distributional)
        .complex("discontinuity", r.discontinuity)
        .num("method_discrepancy", r.method_discrepancy)
        .num("error_estimate", r.error_estimate);
    env.tolerances = Record::new().num("method_discrepancy", allowed);
    env.passed = r.method_discrepancy <= allowed;
    match max_n {
        None => env.rows.push(summary),
        Some(n_max) => {
            let series: FormalSeries<f64> = match k {
                KernelArg::Euler => FormalSeries::euler(),
                KernelArg::Schwinger => beta_series(),
            };
            let p = remainder_profile(&kernel, &series, zc, n_max, &opts)?;
            for row in &p.rows {
                env.rows.push(
                    Record::new().int("n", row.n as i64).int("power", i64::from(row.power)).num("remainder", row.remainder),
                );
            }
            env.summary = summary
                .int("argmin", p.argmin as i64)
                .int("optimal_truncation", p.optimal_truncation as i64)
                .num("fit_c0", p.fit.c0)
                .num("fit_c", p.fit.c)
                .num("fit_max_ratio", p.fit.max_ratio);
        }
    }
    Ok(env)
}

pub fn euler_demo(zs: &str, tol: f64, quad_tol: f64, ladder: &LadderArgs) -> CliResult {
    let points = parse_complex_list(zs).map_err(usage)?;
    let kernel = make_euler_kernel();
    let opts = sum_options(quad_tol.max(1e-12), ladder)?;
    let params = Record::new().text("z", zs).num("tol", tol).num("quad_tol", quad_tol);
    let mut env = ReportEnvelope::new("euler-demo", ladder_params(params, ladder));
    env.tolerances = Record::new().num("triangle", tol);
    let mut passed = true;
    for z in points {
        let ls = upper_sum(&kernel, z, Method::LineShift, &opts)?.value;
        let pv = upper_sum(&kernel, z, Method::PvResidue, &opts)?.value;
        let ray = euler_direct(z, 1, quad_tol)?.value;
        let mut paths = vec![ls, pv, ray];
        let mut row = Record::new()
            .complex("z", z)
            .complex("upper_line_shift", ls)
            .complex("upper_pv_residue", pv)
            .complex("direct_ray", ray);
        if z.im == 0.0 {
            let boundary = euler_boundary(z.re, &EPS_LADDER_A, quad_tol)?.jump;
            paths.push(boundary);
            let verdict = euler_pi_factor(z.re, quad_tol)?;
            let d = discontinuity(&kernel, z.re, &opts)?;
            row = row
                .complex("direct_boundary", boundary)
                .num("jump_measured", verdict.measured)
                .num("jump_with_pi", verdict.with_pi)
                .num("jump_without_pi", verdict.without_pi)
                .text("pi_factor_verdict", if verdict.pi_inclusive { "with_pi" } else { "without_pi_or_other" })
                .flag("verdict_stable", verdict.stable)
                .complex("discontinuity_residues", d.from_residues);
            passed &= verdict.stable && verdict.pi_inclusive;
        }
        let mut spread: f64 = 0.0;
        for (i, a) in paths.iter().enumerate() {
            for b in &paths[i + 1..] {
                spread = spread.max((a - b).norm());
            }
        }
        passed &= spread <= tol;
        env.rows.push(row.num("max_pairwise_difference", spread));
    }
    env.summary = Record::new()
        .num("residue_orientation", resummation::RESIDUE_ORIENTATION)
        .num("calibrated_orientation", resummation::calibrate_orientation()?);
    env.passed = passed;
    Ok(env)
}

pub fn schwinger(
    alphas: &str,
    theta: Option<f64>,
    tol: f64,
    quad_tol: f64,
    method: Option<MethodArg>,
    ladder: &LadderArgs,
) -> CliResult {
    let points = parse_complex_list(alphas).map_err(usage)?;
    let opts = sum_options(quad_tol, ladder)?;
    let params = Record::new()
        .text("alphas", alphas)
        .opt_num("theta", theta)
        .num("tol", tol)
        .num("quad_tol", quad_tol)
        .text("method", method.map_or("default", |m| match m {
            MethodArg::LineShift => "line-shift",
            MethodArg::PvResidue => "pv-residue",
        }));
    let mut env = ReportEnvelope::new("schwinger", ladder_params(params, ladder));
    env.tolerances = Record::new().num("direct_vs_borel", tol);
    let mut passed = true;
    for alpha in points {
        let direct = action_direct(alpha, theta, quad_tol)?;
        let borel = action_via_borel(alpha, method.map(method_of), &opts)?;
        let delta = (direct.s - borel.s).norm();
        passed &= delta <= tol;
        env.rows.push(
            Record::new()
                .complex("alpha", alpha)
                .num("theta", direct.path_angle)
                .complex("s_direct", direct.s)
                .num("direct_error", direct.error_estimate)
                .complex("s_borel", borel.s)
                .num("borel_error", borel.error_estimate)
                .num("delta", delta),
        );
    }
    let (sign, ratio) = schwinger::measure_series_sign(1e-16)?;
    env.summary = Record::new()
        .num("series_sign", SERIES_SIGN)
        .num("measured_sign", sign)
        .num("re_s_over_alpha2_at_1e-3", ratio);
    env.passed = passed;
    Ok(env)
}

fn im_match_name(m: ImMatch) -> &'static str {
    match m {
        ImMatch::ResidueForm => "residue_form",
        ImMatch::PiOverAlphaForm => "pi_over_alpha_form",
        ImMatch::Both => "both",
        ImMatch::Neither => "neither",
    }
}

pub fn verify(alphas: &str, tol: f64, theta: Option<f64>, quad_tol: f64, max_n: usize, ladder: &LadderArgs) -> CliResult {
    let points: Vec<Cplx> = parse_complex_list(alphas).map_err(usage)?;
    let opts = VerifyOptions { tol, theta, quad_tol, sum: sum_options(quad_tol, ladder)?, n_max: max_n };
    let report = schwinger::verify_theorem(&points, &opts);
    let params = Record::new()
        .text("alphas", alphas)
        .num("tol", tol)
        .opt_num("theta", theta)
        .num("quad_tol", quad_tol)
        .int("max_n", max_n as i64);
    let mut env = ReportEnvelope::new("verify", ladder_params(params, ladder));
    for row in &report.rows {
        env.rows.push(
            Record::new()
                .complex("alpha", row.alpha)
                .opt_complex("s_direct", row.s_direct)
                .opt_complex("s_borel", row.s_borel)
                .opt_num("delta", row.delta)
                .opt_num("distributional", row.distributional)
                .opt_num("re_delta", row.re_delta)
                .opt_num("im_residue_form", row.im_series.map(|s| s.residue_form))
                .opt_num("im_pi_over_alpha_form", row.im_series.map(|s| s.pi_over_alpha_form))
                .opt_num("im_delta", row.im_delta)
                .opt_text("im_match", row.im_match.map(|m| im_match_name(m).to_string()))
                .flag("passed", row.passed)
                .opt_text("error", row.error.clone()),
        );
    }
    env.tolerances = Record::new()
        .num("delta", tol)
        .num("re_delta", tol)
        .text("im_delta", format!("{tol} * (1 + |Im S|)"));
    env.summary = Record::new()
        .int("rows", report.rows.len() as i64)
        .int("failed", report.rows.iter().filter(|r| !r.passed).count() as i64);
    env.passed = report.passed;
    Ok(env)
}
