//! Error functionals over a whole spectrum and the choice of `(τ, α)`.
//!
//! `φ(N, τ, α) = Σ_k ζ(N, τ, α, λ_k)` is the objective, `ψ = max_k ζ` is reported alongside.

mod nelder_mead;
mod tau0;

pub use nelder_mead::{minimize_phi, minimize_phi_from, SimplexOptions};
pub use tau0::{find_tau0, Tau0Options};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{check_stable, dzeta_dtau_with, zeta_closed_form_alpha0, zeta_with, BasisParams, LaguerreKernel};
use crate::sum::CompensatedSum;

/// Non-empty multiset of eigenvalues, all with negative real part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct Spectrum {
    eigenvalues: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for Spectrum {
    type Error = Error;

    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        Spectrum::new(v)
    }
}

impl From<Spectrum> for Vec<Complex64> {
    fn from(s: Spectrum) -> Self {
        s.eigenvalues
    }
}

impl Spectrum {
    pub fn new(eigenvalues: Vec<Complex64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::Parameter("spectrum must contain at least one eigenvalue".into()));
        }
        for (k, &lambda) in eigenvalues.iter().enumerate() {
            check_stable(lambda).map_err(|e| e.at_eigenvalue(k))?;
        }
        Ok(Self { eigenvalues })
    }

    /// Spectrum of real eigenvalues.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Multiplies every eigenvalue by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Parameter(format!("scale factor must be finite and > 0, got {c}")));
        }
        Self::new(self.eigenvalues.iter().map(|l| l * c).collect())
    }

    /// Spectral abscissa `max_k Re λ_k`.
    pub fn abscissa(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// φ and ψ from one pass over the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralError {
    pub phi: f64,
    pub psi: f64,
}

/// φ and ψ together. Each ζ is evaluated once.
pub fn spectral_error(n_trunc: usize, tau: f64, alpha: f64, spectrum: &Spectrum) -> Result<SpectralError> {
    let params = BasisParams::new(tau, alpha, n_trunc)?;
    let kernel = (!params.is_alpha0()).then(|| LaguerreKernel::new(&params));
    let mut sum = CompensatedSum::new();
    let mut psi = 0.0f64;
    for (k, &lambda) in spectrum.eigenvalues().iter().enumerate() {
        let z = match &kernel {
            None => zeta_closed_form_alpha0(n_trunc, tau, lambda),
            Some(kernel) => zeta_with(&params, kernel, lambda),
        }
        .map_err(|e| e.at_eigenvalue(k))?;
        sum.add(z);
        psi = psi.max(z);
    }
    Ok(SpectralError { phi: sum.value(), psi })
}

/// `φ(N, τ, α) = Σ_k ζ(N, τ, α, λ_k)`.
pub fn phi(n_trunc: usize, tau: f64, alpha: f64, spectrum: &Spectrum) -> Result<f64> {
    Ok(spectral_error(n_trunc, tau, alpha, spectrum)?.phi)
}

/// `ψ(N, τ, α) = max_k ζ(N, τ, α, λ_k)`.
pub fn psi(n_trunc: usize, tau: f64, alpha: f64, spectrum: &Spectrum) -> Result<f64> {
    Ok(spectral_error(n_trunc, tau, alpha, spectrum)?.psi)
}

/// `∂φ/∂τ = Σ_k ∂ζ(λ_k)/∂τ`.
pub fn dphi_dtau(n_trunc: usize, tau: f64, alpha: f64, spectrum: &Spectrum) -> Result<f64> {
    let params = BasisParams::new(tau, alpha, n_trunc)?;
    let kernel = LaguerreKernel::with_len(tau, alpha, 0, n_trunc + 2)?;
    let mut sum = CompensatedSum::new();
    for (k, &lambda) in spectrum.eigenvalues().iter().enumerate() {
        sum.add(dzeta_dtau_with(&params, &kernel, lambda).map_err(|e| e.at_eigenvalue(k))?);
    }
    Ok(sum.value())
}

/// Result of [`find_tau0`] or [`minimize_phi`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub tau_opt: f64,
    pub alpha_opt: f64,
    pub phi_min: f64,
    pub psi_at_opt: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Final sign-change bracket of `∂φ/∂τ` (α = 0 stage only).
    pub bracket: Option<(f64, f64)>,
}
