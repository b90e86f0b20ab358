use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;
use crate::matrix::{
    direct_error_oracle, eigendecompose, error_report, is_stable, series_coeffs_alpha0, series_coeffs_general,
    spectrum_report, DenseMatrix, EigenOptions, EigenSystem, ErrorBounds, OracleOptions, OracleResult,
    StabilityCheck,
};
use crate::scalar::{BasisParams, N_MAX};
use crate::spectrum::{find_tau0, minimize_phi_from, phi, OptimizationResult, SimplexOptions, Spectrum};

use super::ladder::{build_ladder_matrix, LadderConfig};
use super::sampler::{sample_spectrum, SpectrumSampleConfig};

/// Largest matrix the oracle is run on.
pub const ORACLE_MAX_DIM: usize = 64;
/// Full mode is slow beyond this order and says so in the report.
pub const FULL_MODE_SLOW_N: usize = 12;

/// Where the spectrum (and possibly the matrix) of an experiment comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Ladder(LadderConfig),
    Random(SpectrumSampleConfig),
    MatrixFile { path: PathBuf },
    SpectrumFile { path: PathBuf },
    Matrix { matrix: DenseMatrix },
    Spectrum { spectrum: Spectrum },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `τ_0` at `α = 0` only.
    Alpha0,
    /// `τ_0` followed by the joint `(τ, α)` search.
    Full,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha0" => Ok(Mode::Alpha0),
            "full" => Ok(Mode::Full),
            _ => Err(Error::Input(format!("unknown mode {s:?} (expected alpha0 or full)"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Alpha0 => "alpha0",
            Mode::Full => "full",
        })
    }
}

/// One optimization stage with its Theorem-1 bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub tau: f64,
    pub alpha: f64,
    pub sqrt_phi: f64,
    pub sqrt_psi: f64,
    pub lower: f64,
    pub upper_phi: Option<f64>,
    pub upper_psi: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl StageReport {
    fn new(opt: &OptimizationResult, bounds: &ErrorBounds) -> Self {
        Self {
            tau: opt.tau_opt,
            alpha: opt.alpha_opt,
            sqrt_phi: opt.phi_min.sqrt(),
            sqrt_psi: opt.psi_at_opt.sqrt(),
            lower: bounds.lower,
            upper_phi: bounds.upper_phi,
            upper_psi: bounds.upper_psi,
            iterations: opt.iterations,
            converged: opt.converged,
        }
    }
}

/// Wall-clock seconds per stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub setup: f64,
    pub stage0: f64,
    pub stage1: Option<f64>,
    pub oracle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub source: Source,
    pub n_trunc: usize,
    pub mode: Mode,
    /// Matrix dimension, or the number of eigenvalues for spectrum sources.
    pub dim: usize,
    /// `None` when the eigenvector matrix is singular.
    pub kappa: Option<f64>,
    pub kappa_exact: bool,
    pub diagonalizable: bool,
    pub stage0: StageReport,
    pub stage1: Option<StageReport>,
    pub oracle: Option<OracleResult>,
    pub warnings: Vec<String>,
    pub timings: Timings,
    pub spectrum: Spectrum,
}

impl ExperimentReport {
    /// The last stage that ran.
    pub fn final_stage(&self) -> &StageReport {
        self.stage1.as_ref().unwrap_or(&self.stage0)
    }

    pub fn to_json(&self) -> Result<String> {
        io::to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        io::from_json(text)
    }
}

struct Prepared {
    spectrum: Spectrum,
    matrix: Option<(DenseMatrix, EigenSystem)>,
}

fn prepare(source: &Source) -> Result<Prepared> {
    let matrix = match source {
        Source::Ladder(cfg) => build_ladder_matrix(cfg)?,
        Source::MatrixFile { path } => io::read_matrix(path)?,
        Source::Matrix { matrix } => matrix.clone(),
        Source::Random(cfg) => {
            return Ok(Prepared {
                spectrum: sample_spectrum(cfg)?,
                matrix: None,
            })
        }
        Source::SpectrumFile { path } => {
            return Ok(Prepared {
                spectrum: io::read_spectrum(path)?,
                matrix: None,
            })
        }
        Source::Spectrum { spectrum } => {
            return Ok(Prepared {
                spectrum: spectrum.clone(),
                matrix: None,
            })
        }
    };
    let eig = eigendecompose(&matrix, &EigenOptions::default())?;
    let report = is_stable(&eig);
    if !report.stable {
        let lambda = eig
            .eigenvalues
            .iter()
            .copied()
            .max_by(|x, y| x.re.total_cmp(&y.re))
            .expect("non-empty spectrum");
        return Err(Error::Stability {
            lambda,
            context: format!("input matrix has spectral abscissa {:e}", report.abscissa),
        });
    }
    Ok(Prepared {
        spectrum: eig.spectrum()?,
        matrix: Some((matrix, eig)),
    })
}

fn bounds(prep: &Prepared, params: &BasisParams) -> Result<ErrorBounds> {
    match &prep.matrix {
        Some((_, eig)) => error_report(eig, params),
        None => spectrum_report(&prep.spectrum, params),
    }
}

/// Runs the pipeline: eigen-decomposition (matrix sources), `τ_0` at `α = 0`, the joint search in
/// full mode, bounds at each stage and optionally the quadrature oracle for matrices up to
/// [`ORACLE_MAX_DIM`].
///
/// Bare spectra are read as diagonal matrices, so their `κ` is 1.
pub fn run_experiment(source: Source, n_trunc: usize, mode: Mode, with_oracle: bool) -> Result<ExperimentReport> {
    if n_trunc > N_MAX {
        return Err(Error::Parameter(format!("truncation order {n_trunc} exceeds N_MAX = {N_MAX}")));
    }
    let mut warnings = Vec::new();
    let mut timings = Timings::default();

    let clock = Instant::now();
    let prep = prepare(&source)?;
    timings.setup = clock.elapsed().as_secs_f64();

    let (kappa, kappa_exact, diagonalizable) = match &prep.matrix {
        Some((_, eig)) => (eig.kappa.is_finite().then_some(eig.kappa), eig.kappa_exact, eig.diagonalizable),
        None => (Some(1.0), true, true),
    };
    if !diagonalizable {
        warnings.push(
            "matrix is not numerically diagonalizable: only the lower bound is certified".to_string(),
        );
    } else if !kappa_exact {
        warnings.push("kappa is the Frobenius-product upper estimate (power iteration failed)".to_string());
    }
    if mode == Mode::Full && n_trunc > FULL_MODE_SLOW_N {
        warnings.push(format!("full mode with N = {n_trunc} > {FULL_MODE_SLOW_N} is slow"));
    }

    let opts = SimplexOptions::default();
    let clock = Instant::now();
    let opt0 = find_tau0(n_trunc, &prep.spectrum, &opts.tau0)?;
    let params0 = BasisParams::alpha0(opt0.tau_opt, n_trunc)?;
    let stage0 = StageReport::new(&opt0, &bounds(&prep, &params0)?);
    timings.stage0 = clock.elapsed().as_secs_f64();

    let stage1 = if mode == Mode::Full {
        let clock = Instant::now();
        let opt1 = minimize_phi_from(n_trunc, &prep.spectrum, &opt0, &opts)?;
        if !opt1.converged {
            warnings.push(format!("(tau, alpha) search stopped after {} iterations", opt1.iterations));
        }
        let params1 = BasisParams::new(opt1.tau_opt, opt1.alpha_opt, n_trunc)?;
        let stage = StageReport::new(&opt1, &bounds(&prep, &params1)?);
        timings.stage1 = Some(clock.elapsed().as_secs_f64());
        Some(stage)
    } else {
        None
    };

    let mut oracle = None;
    if with_oracle {
        match &prep.matrix {
            Some((a, eig)) if a.dim() <= ORACLE_MAX_DIM => {
                let clock = Instant::now();
                let fin = stage1.as_ref().unwrap_or(&stage0);
                let params = BasisParams::new(fin.tau, fin.alpha, n_trunc)?;
                let series = if params.is_alpha0() {
                    Some(series_coeffs_alpha0(a, params.tau(), n_trunc, StabilityCheck::Trusted)?)
                } else if eig.diagonalizable {
                    Some(series_coeffs_general(eig, &params)?)
                } else {
                    warnings.push("oracle skipped: alpha != 0 needs a diagonalizable matrix".to_string());
                    None
                };
                if let Some(series) = series {
                    let res = direct_error_oracle(a, &series, &OracleOptions::default())?;
                    if let Some(w) = &res.warning {
                        warnings.push(w.clone());
                    }
                    oracle = Some(res);
                    timings.oracle = Some(clock.elapsed().as_secs_f64());
                }
            }
            Some((a, _)) => warnings.push(format!(
                "oracle skipped: dimension {} exceeds {ORACLE_MAX_DIM}",
                a.dim()
            )),
            None => warnings.push("oracle skipped: no matrix for a spectrum source".to_string()),
        }
    }

    Ok(ExperimentReport {
        dim: prep.matrix.as_ref().map_or(prep.spectrum.len(), |(a, _)| a.dim()),
        source,
        n_trunc,
        mode,
        kappa,
        kappa_exact,
        diagonalizable,
        stage0,
        stage1,
        oracle,
        warnings,
        timings,
        spectrum: prep.spectrum,
    })
}

/// One row of [`phi_sweep`]; `None` marks points where φ could not be evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub tau: f64,
    pub phi_alpha0: Option<f64>,
    /// φ at the report's `α_1` (full-mode reports only).
    pub phi_alpha1: Option<f64>,
}

/// φ on `points` log-spaced values of τ over `[τ_0/10, 10 τ_0]`.
pub fn phi_sweep(report: &ExperimentReport, points: usize) -> Result<Vec<SweepPoint>> {
    if points < 2 {
        return Err(Error::Parameter("a sweep needs at least two points".into()));
    }
    let tau0 = report.stage0.tau;
    let alpha1 = report.stage1.as_ref().map(|s| s.alpha);
    let (lo, hi) = ((0.1 * tau0).ln(), (10.0 * tau0).ln());
    Ok((0..points)
        .map(|i| {
            let tau = (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp();
            let at = |alpha| phi(report.n_trunc, tau, alpha, &report.spectrum).ok();
            SweepPoint {
                tau,
                phi_alpha0: at(0.0),
                phi_alpha1: alpha1.and_then(at),
            }
        })
        .collect())
}

pub fn sweep_to_csv(points: &[SweepPoint]) -> String {
    let cell = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
    let mut out = String::from("tau,phi_alpha0,sqrt_phi_alpha0,phi_alpha1\n");
    for p in points {
        out.push_str(&format!(
            "{:e},{},{},{}\n",
            p.tau,
            cell(p.phi_alpha0),
            cell(p.phi_alpha0.map(f64::sqrt)),
            cell(p.phi_alpha1)
        ));
    }
    out
}
