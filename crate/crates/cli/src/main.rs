mod commands;
mod parse;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use borel_core::BorelError;
use clap::{Args, Parser, Subcommand, ValueEnum};

use report::ReportEnvelope;

#[derive(Debug, Parser)]
#[command(name = "borel", version, about = "Borel summation reports for the Euler series and the Schwinger action")]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// JSON envelope on stdout (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// CSV projection of the report rows.
    #[arg(long, global = true)]
    csv: bool,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall time in the envelope (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Schwinger,
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    LineShift,
    PvResidue,
}

/// η-ladder and window knobs shared by the summation commands.
#[derive(Debug, Clone, Args)]
pub struct LadderArgs {
    /// First η of the line-shift ladder (default: min(0.2, |z|/2, radius/4)).
    #[arg(long)]
    pub eta0: Option<f64>,
    /// Number of ladder levels.
    #[arg(long, default_value_t = 6)]
    pub eta_levels: usize,
    /// Ratio between consecutive ladder levels.
    #[arg(long, default_value_t = 0.5)]
    pub eta_ratio: f64,
    /// Half-width of the principal-value windows.
    #[arg(long)]
    pub window: Option<f64>,
    /// Node budget per quadrature.
    #[arg(long, default_value_t = 2_000_000)]
    pub max_nodes: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Table of the series coefficients a_n.
    Coeffs {
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
    /// Closed-form and Taylor evaluation of a kernel.
    KernelEval {
        #[arg(long, value_enum, default_value = "schwinger")]
        kernel: KernelArg,
        /// Comma list of points (a+bi or r@phi).
        #[arg(long, allow_hyphen_values = true, default_value = "0.1,0.5,0.7,0.3+0.2i")]
        t: String,
        /// Allowed closed-form/series difference.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Grid scan of |B(t+iη)| η e^{-t/R}.
    BoundScan {
        #[arg(long, value_enum, default_value = "schwinger")]
        kernel: KernelArg,
        #[arg(long = "R", default_value_t = 1.0)]
        r: f64,
        /// t_max,t_steps,eta_steps
        #[arg(long, default_value = "30,6000,60")]
        grid: String,
        #[arg(long, default_value_t = 0.01)]
        eta_min: f64,
        /// Default: 0.85 for the Schwinger kernel, 0.9 for the Euler kernel.
        #[arg(long)]
        eta_max: Option<f64>,
        /// Allowed relative change of A_min under grid doubling.
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },
    /// Upper, lower, distributional sums and discontinuity at one point.
    Sum {
        #[arg(long, value_enum, default_value = "euler")]
        kernel: KernelArg,
        #[arg(long, allow_hyphen_values = true, default_value = "0.5")]
        z: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Emit the remainder profile up to this N instead of the summary row.
        #[arg(long)]
        max_n: Option<usize>,
        #[command(flatten)]
        ladder: LadderArgs,
    },
    /// Euler oracle triangle and the measured discontinuity.
    EulerDemo {
        #[arg(long, allow_hyphen_values = true, default_value = "0.5")]
        z: String,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        /// Quadrature tolerance for the direct integrals.
        #[arg(long, default_value_t = 1e-13)]
        quad_tol: f64,
        #[command(flatten)]
        ladder: LadderArgs,
    },
    /// Direct and Borel-resummed effective action.
    Schwinger {
        #[arg(long, allow_hyphen_values = true, default_value = "0.1")]
        alphas: String,
        /// Ray angle of the direct integral (default per alpha).
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 1e-12)]
        quad_tol: f64,
        /// Optional method for the Borel side (default: by z).
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[command(flatten)]
        ladder: LadderArgs,
    },
    /// Theorem check: direct action against its Borel sums.
    Verify {
        #[arg(long, allow_hyphen_values = true, default_value = "0.05,0.1,0.2")]
        alphas: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = 1e-12)]
        quad_tol: f64,
        /// Cap on the Im S series.
        #[arg(long, default_value_t = 1000)]
        max_n: usize,
        #[command(flatten)]
        ladder: LadderArgs,
    },
}

/// Failure of a subcommand: bad input is a usage error (exit 2), anything else exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl From<BorelError> for CliError {
    fn from(e: BorelError) -> Self {
        match e {
            BorelError::Domain(_) | BorelError::OutsideDisk { .. } | BorelError::Configuration(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Compute(other.to_string()),
        }
    }
}

fn run(command: Command) -> Result<ReportEnvelope, CliError> {
    match command {
        Command::Coeffs { max_n } => commands::coeffs(max_n),
        Command::KernelEval { kernel, t, tol } => commands::kernel_eval(kernel, &t, tol),
        Command::BoundScan { kernel, r, grid, eta_min, eta_max, tol } => {
            commands::bound_scan(kernel, r, &grid, eta_min, eta_max, tol)
        }
        Command::Sum { kernel, z, tol, max_n, ladder } => commands::sum(kernel, &z, tol, max_n, &ladder),
        Command::EulerDemo { z, tol, quad_tol, ladder } => commands::euler_demo(&z, tol, quad_tol, &ladder),
        Command::Schwinger { alphas, theta, tol, quad_tol, method, ladder } => {
            commands::schwinger(&alphas, theta, tol, quad_tol, method, &ladder)
        }
        Command::Verify { alphas, tol, theta, quad_tol, max_n, ladder } => {
            commands::verify(&alphas, tol, theta, quad_tol, max_n, &ladder)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.output.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let mut envelope = match run(cli.command) {
        Ok(env) => env,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    if cli.output.timing {
        envelope.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let written = if cli.output.csv { envelope.write_csv(&mut out) } else { envelope.write_json(&mut out) };
    if let Err(e) = written.and_then(|_| out.flush()) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if envelope.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
