//! Scalar building blocks: generalized Laguerre functions, the Laguerre coefficients of
//! `t ↦ e^{λt}`, the truncation error functional ζ and its derivative in the scale τ.
//!
//! Everything here is a pure function of its arguments.

mod basis;
mod coeffs;
mod hypergeometric;
mod zeta;

pub use basis::{eval_laguerre_fn, eval_laguerre_poly, laguerre_fns, laguerre_normalization};
pub use coeffs::{
    d_coeff, q_coeff, q_coeff_hypergeometric, s_coeff, s_coeff_hypergeometric, s_coeff_seq,
    s_coeff_seq_alpha0, LaguerreKernel, ScalarCoeffSeq, N_COEFF_MAX,
};
pub use hypergeometric::hyp2f1_terminating;
pub use zeta::{dzeta_dtau, zeta, zeta_closed_form_alpha0, zeta_series};

pub(crate) use zeta::{dzeta_dtau_with, zeta_with};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex scalars (eigenvalues, coefficients) are plain `Complex64`.
pub type ComplexScalar = Complex64;

/// Largest supported truncation order. Beyond it rounding dominates the series.
pub const N_MAX: usize = 50;

/// Scale `tau`, generalization order `alpha` and truncation order `n_trunc` of a truncated
/// Laguerre basis `l_0 .. l_N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct BasisParams {
    tau: f64,
    alpha: f64,
    n_trunc: usize,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    tau: f64,
    alpha: f64,
    n_trunc: usize,
}

impl TryFrom<RawParams> for BasisParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        BasisParams::new(raw.tau, raw.alpha, raw.n_trunc)
    }
}

impl From<BasisParams> for RawParams {
    fn from(p: BasisParams) -> Self {
        RawParams {
            tau: p.tau,
            alpha: p.alpha,
            n_trunc: p.n_trunc,
        }
    }
}

impl BasisParams {
    pub fn new(tau: f64, alpha: f64, n_trunc: usize) -> Result<Self> {
        validate_tau_alpha(tau, alpha)?;
        if n_trunc > N_MAX {
            return Err(Error::Parameter(format!(
                "truncation order {n_trunc} exceeds N_MAX = {N_MAX}"
            )));
        }
        Ok(Self {
            tau,
            alpha,
            n_trunc,
        })
    }

    /// Ordinary Laguerre basis (`alpha = 0`).
    pub fn alpha0(tau: f64, n_trunc: usize) -> Result<Self> {
        Self::new(tau, 0.0, n_trunc)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_trunc(&self) -> usize {
        self.n_trunc
    }

    pub fn is_alpha0(&self) -> bool {
        self.alpha == 0.0
    }

    pub fn with_tau(self, tau: f64) -> Result<Self> {
        Self::new(tau, self.alpha, self.n_trunc)
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(self.tau, alpha, self.n_trunc)
    }

    pub fn with_n_trunc(self, n_trunc: usize) -> Result<Self> {
        Self::new(self.tau, self.alpha, n_trunc)
    }
}

pub(crate) fn validate_tau_alpha(tau: f64, alpha: f64) -> Result<()> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::Parameter(format!("tau must be finite and > 0, got {tau}")));
    }
    validate_alpha(alpha)
}

pub(crate) fn validate_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > -1.0) {
        return Err(Error::Domain(format!("alpha must be finite and > -1, got {alpha}")));
    }
    Ok(())
}

/// Rejects eigenvalues with `Re λ >= 0` or non-finite components.
pub(crate) fn check_stable(lambda: Complex64) -> Result<()> {
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite eigenvalue {lambda}")));
    }
    if lambda.re >= 0.0 {
        return Err(Error::Stability {
            lambda,
            context: "Re(lambda) must be < 0".into(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_reject_out_of_range_values() {
        assert!(BasisParams::new(1.0, 0.0, N_MAX).is_ok());
        assert!(matches!(BasisParams::new(0.0, 0.0, 3), Err(Error::Parameter(_))));
        assert!(matches!(BasisParams::new(-1.0, 0.0, 3), Err(Error::Parameter(_))));
        assert!(matches!(BasisParams::new(f64::NAN, 0.0, 3), Err(Error::Parameter(_))));
        assert!(matches!(BasisParams::new(1.0, -1.0, 3), Err(Error::Domain(_))));
        assert!(matches!(BasisParams::new(1.0, 0.0, N_MAX + 1), Err(Error::Parameter(_))));
    }

    #[test]
    fn params_deserialize_with_validation() {
        let p: BasisParams = serde_json::from_str(r#"{"tau":2.0,"alpha":0.5,"n_trunc":7}"#).unwrap();
        assert_eq!(p, BasisParams::new(2.0, 0.5, 7).unwrap());
        assert!(serde_json::from_str::<BasisParams>(r#"{"tau":-2.0,"alpha":0.5,"n_trunc":7}"#).is_err());
    }

    #[test]
    fn stability_check_is_strict() {
        assert!(check_stable(Complex64::new(-1e-300, 5.0)).is_ok());
        assert!(matches!(
            check_stable(Complex64::new(0.0, 1.0)),
            Err(Error::Stability { .. })
        ));
        assert!(matches!(check_stable(Complex64::new(f64::NAN, 0.0)), Err(Error::Domain(_))));
    }
}
