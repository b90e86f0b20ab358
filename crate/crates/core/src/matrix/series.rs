use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{laguerre_fns, BasisParams, LaguerreKernel};

use super::dense::DenseMatrix;
use super::eigen::{eigendecompose, is_stable, EigenOptions, EigenSystem};

/// Truncated series `H_N(t) = Σ_{n≤N} S_n l_{n,τ}^α(t)` of `e^{At}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaguerreSeries {
    pub params: BasisParams,
    pub coeffs: Vec<DenseMatrix>,
}

impl LaguerreSeries {
    /// Checks that there are `N + 1` coefficients of one common dimension.
    pub fn new(params: BasisParams, coeffs: Vec<DenseMatrix>) -> Result<Self> {
        if coeffs.len() != params.n_trunc() + 1 {
            return Err(Error::Shape(format!(
                "{} coefficient matrices for truncation order {}",
                coeffs.len(),
                params.n_trunc()
            )));
        }
        let m = coeffs[0].dim();
        if coeffs.iter().any(|s| s.dim() != m) {
            return Err(Error::Shape("coefficient matrices differ in dimension".into()));
        }
        Ok(Self { params, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }
}

/// Whether [`series_coeffs_alpha0`] verifies stability by an eigen-decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityCheck {
    Verify,
    /// The caller already knows `A` is stable.
    Trusted,
}

/// `α = 0` coefficients by `S_0 = −2√τ (2A−τI)⁻¹`, `S_{n+1} = (2A+τI)(2A−τI)⁻¹ S_n`.
///
/// One LU factorization of `2A − τI` yields both `S_0` and the ratio matrix, which is formed
/// once. No diagonalization is involved, so defective matrices are fine.
pub fn series_coeffs_alpha0(
    a: &DenseMatrix,
    tau: f64,
    n_trunc: usize,
    check: StabilityCheck,
) -> Result<LaguerreSeries> {
    let params = BasisParams::alpha0(tau, n_trunc)?;
    if check == StabilityCheck::Verify {
        let eig = eigendecompose(a, &EigenOptions::default())?;
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
                context: format!("spectral abscissa {:e} >= 0", report.abscissa),
            });
        }
    }
    let two_a = a.scale(Complex64::new(2.0, 0.0));
    let minus = two_a.shift(Complex64::new(-tau, 0.0));
    let plus = two_a.shift(Complex64::new(tau, 0.0));
    let lu = minus
        .lu()
        .map_err(|_| Error::Parameter(format!("2A - tau I is singular for tau = {tau}")))?;
    let rcond = lu.rcond();
    if rcond < f64::EPSILON * a.dim() as f64 {
        return Err(Error::Parameter(format!(
            "2A - tau I is numerically singular for tau = {tau} (reciprocal condition {rcond:e})"
        )));
    }
    let ratio = lu.solve(&plus)?;
    let mut s = lu.inverse()?.scale(Complex64::new(-2.0 * tau.sqrt(), 0.0));
    let mut coeffs = Vec::with_capacity(n_trunc + 1);
    for _ in 0..n_trunc {
        let next = ratio.mul_unchecked(&s);
        coeffs.push(s);
        s = next;
    }
    coeffs.push(s);
    LaguerreSeries::new(params, coeffs)
}

/// Coefficients through the functional calculus `S_n = T diag(s_n(λ_k)) T⁻¹`.
pub fn series_coeffs_general(eig: &EigenSystem, params: &BasisParams) -> Result<LaguerreSeries> {
    let t_inv = match (&eig.t_inverse, eig.diagonalizable) {
        (Some(inv), true) => inv,
        _ => {
            return Err(Error::Unsupported(
                "matrix is not diagonalizable; functional calculus with Jordan blocks is not \
                 implemented (use the alpha = 0 recursion instead)"
                    .into(),
            ))
        }
    };
    let spectrum = eig.spectrum()?;
    let kernel = LaguerreKernel::new(params);
    let scalar: Vec<Vec<Complex64>> = spectrum
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(k, &l)| kernel.coefficients(l).map_err(|e| e.at_eigenvalue(k)))
        .collect::<Result<_>>()?;
    let m = eig.dim();
    let t = &eig.t_matrix;
    let mut coeffs = Vec::with_capacity(params.n_trunc() + 1);
    for n in 0..=params.n_trunc() {
        let mut td = t.clone();
        for i in 0..m {
            for (k, s) in scalar.iter().enumerate() {
                td[(i, k)] *= s[n];
            }
        }
        coeffs.push(td.mul_unchecked(t_inv));
    }
    LaguerreSeries::new(*params, coeffs)
}

/// `H_N(t) = Σ_n S_n l_{n,τ}^α(t)`.
pub fn eval_series(series: &LaguerreSeries, t: f64) -> Result<DenseMatrix> {
    let basis = laguerre_fns(&series.params, t)?;
    let mut out = DenseMatrix::zeros(series.dim());
    for (s, l) in series.coeffs.iter().zip(basis) {
        out.axpy(Complex64::new(l, 0.0), s);
    }
    Ok(out)
}
