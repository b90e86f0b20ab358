use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

use super::dense::DenseMatrix;
use super::eigen::{eigendecompose, is_stable, EigenOptions};
use super::expm::expm_t;
use super::quadrature::{gauss_laguerre_rule, gauss_legendre_rule, RULE_MAX};
use super::series::{eval_series, LaguerreSeries};

/// Options for [`direct_error_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOptions {
    /// Target node count; the schedule starts at half of it and doubles up to 512.
    pub nodes: usize,
    /// Relative change between successive rules accepted as converged.
    pub rel_tol: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            nodes: 256,
            rel_tol: 1e-6,
        }
    }
}

/// Quadrature estimate of `‖e^{A·} − H_N‖_{L2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub error: f64,
    pub nodes_used: usize,
    pub converged: bool,
    pub warning: Option<String>,
}

/// Ratio of successive panels in the graded rule near `t = 0`.
const GRADING: f64 = 0.15;

/// `√∫₀^∞ ‖e^{At} − H_N(t)‖_F² dt`, independent of the coefficient formulas.
///
/// With `σ = min(τ, −max Re λ_k)` the integral is rewritten as
/// `σ⁻¹ ∫₀^∞ e^{−x} [e^{x} ‖E(x/σ)‖_F²] dx` and evaluated by Gauss–Laguerre rules of doubling
/// size; `e^{At}` at each node comes from Padé scaling and squaring.
///
/// For `α ≠ 0` the basis carries a factor `t^{α/2}`, which is not smooth at `t = 0`. Then only
/// `[1/σ, ∞)` is treated this way, and `[0, 1/σ]` is covered by Gauss–Legendre panels shrinking
/// geometrically towards the origin.
pub fn direct_error_oracle(a: &DenseMatrix, series: &LaguerreSeries, opts: &OracleOptions) -> Result<OracleResult> {
    if a.dim() != series.dim() {
        return Err(Error::Shape(format!(
            "matrix is {0}x{0} but the series is {1}x{1}",
            a.dim(),
            series.dim()
        )));
    }
    if opts.nodes < 2 || opts.nodes > RULE_MAX {
        return Err(Error::Parameter(format!("node count {} outside 2..={RULE_MAX}", opts.nodes)));
    }
    let eig = eigendecompose(a, &EigenOptions::default())?;
    let report = is_stable(&eig);
    if !report.stable {
        return Err(Error::Stability {
            lambda: Complex64::new(report.abscissa, 0.0),
            context: "oracle needs a stable matrix (value shown is the spectral abscissa)".into(),
        });
    }
    let sigma = series.params.tau().min(-report.abscissa);
    let alpha = series.params.alpha();
    let sq_error = |t: f64| -> Result<f64> { Ok(expm_t(a, t)?.sub(&eval_series(series, t)?)?.frobenius_norm().powi(2)) };

    // ∫_{t0}^∞ by the m-point Gauss–Laguerre rule in x = σ(t − t0).
    let tail = |t0: f64, m: usize| -> Result<f64> {
        let rule = gauss_laguerre_rule(m, 0.0)?;
        let mut acc = CompensatedSum::new();
        for (&x, &lw) in rule.nodes.iter().zip(&rule.log_weights) {
            let f = sq_error(t0 + x / sigma)?;
            if f > 0.0 {
                acc.add((lw + x + f.ln()).exp());
            }
        }
        Ok(acc.value() / sigma)
    };
    // ∫_0^{t1} on panels [t1 r^{k+1}, t1 r^k], down to where the neglected piece is below 1e−18
    // in the worst case f ~ t^α; the last sliver is estimated as for a pure power.
    let head = |t1: f64, m: usize| -> Result<f64> {
        let (xs, ws) = gauss_legendre_rule(m)?;
        let expo = 1.0 + alpha.min(0.0);
        let floor = (1e-18f64.powf(1.0 / expo) * t1).max(1e-300);
        let panels = ((floor / t1).ln() / GRADING.ln()).ceil() as usize;
        let mut acc = CompensatedSum::new();
        let mut hi = t1;
        for _ in 0..panels {
            let lo = hi * GRADING;
            let (mid, half) = (0.5 * (hi + lo), 0.5 * (hi - lo));
            for (&x, &w) in xs.iter().zip(&ws) {
                acc.add(half * w * sq_error(mid + half * x)?);
            }
            hi = lo;
        }
        acc.add(hi * sq_error(hi)? / expo);
        Ok(acc.value())
    };
    let integral = |level: usize| -> Result<(f64, usize)> {
        let m = ((opts.nodes / 2).max(2) << level).min(RULE_MAX);
        let value = if alpha == 0.0 {
            tail(0.0, m)?
        } else {
            let t1 = 1.0 / sigma;
            head(t1, 16 + 8 * level)? + tail(t1, m)?
        };
        Ok((value, m))
    };

    let (mut prev, _) = integral(0)?;
    let mut level = 1;
    loop {
        let (cur, m) = integral(level)?;
        let change = (cur - prev).abs();
        let converged = change <= opts.rel_tol * cur.abs() || (cur == 0.0 && prev == 0.0);
        if converged || m == RULE_MAX {
            let warning = (!converged).then(|| {
                format!(
                    "quadrature not converged: relative change {:.2e} at {m} Laguerre nodes",
                    change / cur.abs().max(f64::MIN_POSITIVE)
                )
            });
            return Ok(OracleResult {
                error: cur.max(0.0).sqrt(),
                nodes_used: m,
                converged,
                warning,
            });
        }
        prev = cur;
        level += 1;
    }
}
