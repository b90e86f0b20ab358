use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use laguerre_expm::bench::{
    phi_sweep, run_experiment, run_validation, sweep_to_csv, ExperimentReport, LadderConfig, Mode, Source,
    SpectrumSampleConfig,
};
use laguerre_expm::io;
use laguerre_expm::matrix::{
    eigendecompose, error_report, eval_series, is_stable, series_coeffs_alpha0, series_coeffs_general, EigenOptions,
    StabilityCheck,
};
use laguerre_expm::scalar::BasisParams;
use laguerre_expm::spectrum::{find_tau0, minimize_phi_from, SimplexOptions, Tau0Options};
use laguerre_expm::{Error, Result};

/// Laguerre-series approximation of matrix exponentials with certified L2 error bounds.
#[derive(Parser)]
#[command(name = "lagexpm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize (tau, alpha) for a spectrum file and report the error bounds.
    Analyze {
        /// JSON array of [re, im] pairs, or `-` for stdin.
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "alpha0")]
        mode: Mode,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the series coefficients of a matrix.
    Expand {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: Option<f64>,
        /// Defaults to 0, or to the optimized value with --auto.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        /// Choose tau (and alpha, if --alpha is not given) by optimization.
        #[arg(long)]
        auto: bool,
        #[arg(long)]
        coeffs_out: Option<PathBuf>,
    },
    /// Evaluate a stored series at the given times, one CSV row per time.
    Eval {
        #[arg(long)]
        series: PathBuf,
        /// Comma-separated list of t >= 0.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        t: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one of the benchmark experiments.
    Bench {
        #[command(subcommand)]
        which: BenchCommand,
    },
    /// Run the built-in oracle checks and print a pass/fail table.
    Validate {
        #[arg(long)]
        quick: bool,
    },
    /// Tabulate phi over tau in [tau0/10, 10 tau0] from a report.
    Plotdata {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "alpha0")]
    mode: Mode,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// RLCG transmission-line ladder.
    Line {
        #[arg(long, default_value_t = 150)]
        sections: usize,
        #[arg(long, default_value_t = 10.0)]
        c0: f64,
        #[arg(long, default_value_t = 50.0)]
        l0: f64,
        #[arg(long, default_value_t = 170.0)]
        r0: f64,
        #[arg(long, default_value_t = 160.0)]
        g0: f64,
        /// Also run the quadrature error oracle (matrices up to 64x64).
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Random spectrum with Maxwell-distributed real parts and normal imaginary parts.
    Random {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 4.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        std: f64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        run: RunArgs,
    },
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Input(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn summarize(report: &ExperimentReport) {
    let s = report.final_stage();
    eprintln!(
        "N = {}  tau = {:.6e}  alpha = {:.6e}  sqrt(phi) = {:.4e}  sqrt(psi) = {:.4e}",
        report.n_trunc, s.tau, s.alpha, s.sqrt_phi, s.sqrt_psi
    );
    if let Some(k) = report.kappa {
        eprintln!("kappa = {k:.4e}");
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
}

fn run_and_emit(source: Source, run: &RunArgs, with_oracle: bool) -> Result<()> {
    let report = run_experiment(source, run.n, run.mode, with_oracle)?;
    summarize(&report);
    emit(&(report.to_json()? + "\n"), run.out.as_deref())
}

fn expand(
    matrix: &Path,
    n: usize,
    tau: Option<f64>,
    alpha: Option<f64>,
    auto: bool,
    coeffs_out: Option<&Path>,
) -> Result<()> {
    let a = io::read_matrix(matrix)?;
    let eig = eigendecompose(&a, &EigenOptions::default())?;
    let report = is_stable(&eig);
    if !report.stable {
        return Err(Error::Stability {
            lambda: num_complex_max(&eig.eigenvalues),
            context: format!("spectral abscissa {:e}", report.abscissa),
        });
    }
    let params = match (tau, auto) {
        (Some(t), false) => BasisParams::new(t, alpha.unwrap_or(0.0), n)?,
        (None, false) => return Err(Error::Input("give --tau or --auto".into())),
        (_, true) => {
            let spectrum = eig.spectrum()?;
            let stage0 = find_tau0(n, &spectrum, &Tau0Options::default())?;
            if let Some(alpha) = alpha {
                BasisParams::new(stage0.tau_opt, alpha, n)?
            } else {
                let opt = minimize_phi_from(n, &spectrum, &stage0, &SimplexOptions::default())?;
                BasisParams::new(opt.tau_opt, opt.alpha_opt, n)?
            }
        }
    };
    let series = if params.is_alpha0() {
        series_coeffs_alpha0(&a, params.tau(), n, StabilityCheck::Trusted)?
    } else {
        series_coeffs_general(&eig, &params)?
    };
    let bounds = error_report(&eig, &params)?;
    eprintln!(
        "tau = {:.6e}  alpha = {:.6e}  lower = {:.4e}  upper = {}",
        params.tau(),
        params.alpha(),
        bounds.lower,
        bounds.upper_phi.map_or("n/a (not diagonalizable)".to_string(), |u| format!("{u:.4e}"))
    );
    match coeffs_out {
        Some(path) => io::write_series(path, &series),
        None => emit(&(io::to_json(&series)? + "\n"), None),
    }
}

fn num_complex_max(values: &[laguerre_expm::scalar::ComplexScalar]) -> laguerre_expm::scalar::ComplexScalar {
    values.iter().copied().max_by(|x, y| x.re.total_cmp(&y.re)).unwrap_or_default()
}

fn eval(series: &Path, times: &[f64], out: Option<&Path>) -> Result<()> {
    let series = io::read_series(series)?;
    let m = series.dim();
    let mut csv = String::from("t");
    for i in 0..m {
        for j in 0..m {
            csv.push_str(&format!(",h{i}_{j}"));
        }
    }
    csv.push('\n');
    for &t in times {
        let h = eval_series(&series, t)?;
        csv.push_str(&format!("{t:e}"));
        for z in h.as_slice() {
            csv.push(',');
            csv.push_str(&io::format_complex(*z));
        }
        csv.push('\n');
    }
    emit(&csv, out)
}

fn validate(quick: bool) -> Result<bool> {
    let checks = run_validation(quick);
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        println!("{mark}  {:width$}  {}", c.name, c.detail);
    }
    Ok(checks.iter().all(|c| c.passed))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Analyze { spectrum, n, mode, out } => {
            run_and_emit(Source::SpectrumFile { path: spectrum }, &RunArgs { n, mode, out }, false)?
        }
        Command::Expand {
            matrix,
            n,
            tau,
            alpha,
            auto,
            coeffs_out,
        } => expand(&matrix, n, tau, alpha, auto, coeffs_out.as_deref())?,
        Command::Eval { series, t, out } => eval(&series, &t, out.as_deref())?,
        Command::Bench { which } => match which {
            BenchCommand::Line {
                sections,
                c0,
                l0,
                r0,
                g0,
                oracle,
                run,
            } => {
                let cfg = LadderConfig { sections, c0, l0, r0, g0 };
                run_and_emit(Source::Ladder(cfg), &run, oracle)?
            }
            BenchCommand::Random {
                count,
                sigma,
                mu,
                std,
                seed,
                run,
            } => {
                let cfg = SpectrumSampleConfig {
                    count,
                    sigma_maxwell: sigma,
                    mu_normal: mu,
                    sigma_normal: std,
                    seed,
                };
                run_and_emit(Source::Random(cfg), &run, false)?
            }
        },
        Command::Validate { quick } => return validate(quick),
        Command::Plotdata { report, out, points } => {
            let report: ExperimentReport = io::read_json_file(&report)?;
            let sweep = phi_sweep(&report, points)?;
            emit(&sweep_to_csv(&sweep), Some(&out))?
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
