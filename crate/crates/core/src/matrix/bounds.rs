use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::BasisParams;
use crate::spectrum::{spectral_error, Spectrum};

use super::eigen::EigenSystem;

/// Two-sided certificate for `‖e^{A·} − H_N‖_{L2}`:
/// `√ψ ≤ error ≤ κ√φ ≤ κ√(Mψ)`.
///
/// The upper bounds need a diagonalizable matrix and are `None` otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBounds {
    pub phi: f64,
    pub psi: f64,
    pub kappa: f64,
    pub lower: f64,
    pub upper_phi: Option<f64>,
    pub upper_psi: Option<f64>,
}

/// Bounds from an eigen-decomposition.
pub fn error_report(eig: &EigenSystem, params: &BasisParams) -> Result<ErrorBounds> {
    let spectrum = eig.spectrum()?;
    let kappa = if eig.diagonalizable { Some(eig.kappa) } else { None };
    bounds_for_spectrum(&spectrum, params, kappa, eig.kappa)
}

/// Bounds for a bare spectrum, read as the diagonal matrix `diag(λ_k)` with `κ = 1`.
pub fn spectrum_report(spectrum: &Spectrum, params: &BasisParams) -> Result<ErrorBounds> {
    bounds_for_spectrum(spectrum, params, Some(1.0), 1.0)
}

fn bounds_for_spectrum(
    spectrum: &Spectrum,
    params: &BasisParams,
    kappa_for_upper: Option<f64>,
    kappa: f64,
) -> Result<ErrorBounds> {
    let err = spectral_error(params.n_trunc(), params.tau(), params.alpha(), spectrum)?;
    let m = spectrum.len() as f64;
    let upper_phi = kappa_for_upper.map(|k| k * err.phi.sqrt());
    // φ ≤ Mψ holds exactly; the max only absorbs rounding in the two sums.
    let upper_psi = kappa_for_upper.map(|k| (k * (m * err.psi).sqrt()).max(k * err.phi.sqrt()));
    Ok(ErrorBounds {
        phi: err.phi,
        psi: err.psi,
        kappa,
        lower: err.psi.sqrt(),
        upper_phi,
        upper_psi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{eigendecompose, DenseMatrix, EigenOptions};
    use num_complex::Complex64;

    #[test]
    fn diagonal_bounds() {
        let d = [Complex64::new(-1.0, 0.0), Complex64::new(-2.0, 1.0), Complex64::new(-0.5, -3.0)];
        let eig = eigendecompose(&DenseMatrix::from_diag(&d).unwrap(), &EigenOptions::default()).unwrap();
        let p = BasisParams::alpha0(1.5, 4).unwrap();
        let b = error_report(&eig, &p).unwrap();
        assert!((b.kappa - 1.0).abs() < 1e-12);
        assert_eq!(b.lower, b.psi.sqrt());
        let up = b.upper_phi.unwrap();
        assert!((up - b.phi.sqrt()).abs() <= 1e-12 * up);
        assert!(b.lower <= up && up <= b.upper_psi.unwrap());
    }

    #[test]
    fn defective_matrix_keeps_lower_bound_only() {
        let j = DenseMatrix::from_real(2, &[-1.0, 1.0, 0.0, -1.0]).unwrap();
        let eig = eigendecompose(&j, &EigenOptions::default()).unwrap();
        let b = error_report(&eig, &BasisParams::alpha0(1.0, 3).unwrap()).unwrap();
        assert!(b.lower > 0.0);
        assert!(b.upper_phi.is_none() && b.upper_psi.is_none());
    }
}
