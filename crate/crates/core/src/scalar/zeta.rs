use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

use super::coeffs::{d_coeff_raw, LaguerreKernel, N_COEFF_MAX};
use super::{check_stable, BasisParams};

/// Below this fraction of `‖h_λ‖²` the Parseval complement has lost half its digits and the
/// tail is summed directly instead.
const COMPLEMENT_SWITCH: f64 = 1e-8;
/// Below this fraction the complement is not trusted at all.
const COMPLEMENT_FLOOR: f64 = 1e-12;
/// Negative complements down to this fraction of `‖h_λ‖²` are rounding and clamp to zero.
const NEGATIVE_CLAMP: f64 = 1e-14;
/// Relative size of the estimated remainder at which a direct tail sum stops.
const TAIL_TOL: f64 = 1e-10;

/// Squared L2 error `ζ(N, τ, α, λ)` of the N-truncated Laguerre expansion of `e^{λt}`.
///
/// For `α = 0` the closed form `ρ^{2N+2} / (−2 Re λ)`, `ρ = |2λ+τ| / |2λ−τ|`, is used.
/// Otherwise `ζ = ‖h_λ‖² − Σ_{n≤N} |s_n|²` with compensated summation, switching to the direct
/// tail `Σ_{n>N} |s_n|²` (at most `4N + 200` terms) when the complement is too small to carry
/// half of the working precision.
pub fn zeta(params: &BasisParams, lambda: Complex64) -> Result<f64> {
    if params.is_alpha0() {
        return zeta_closed_form_alpha0(params.n_trunc(), params.tau(), lambda);
    }
    zeta_with(params, &LaguerreKernel::new(params), lambda)
}

/// `α = 0` closed form of ζ. `|2λ−τ|² − |2λ+τ|² = −8τ Re λ` is used for the denominator so that
/// no cancellation occurs for eigenvalues near the imaginary axis.
pub fn zeta_closed_form_alpha0(n_trunc: usize, tau: f64, lambda: Complex64) -> Result<f64> {
    check_stable(lambda)?;
    let rho = (lambda * 2.0 + tau).norm() / (lambda * 2.0 - tau).norm();
    Ok(rho.powi(2 * n_trunc as i32 + 2) / (-2.0 * lambda.re))
}

/// ζ through the coefficient series even when `α = 0`, bypassing the closed form.
///
/// Mainly useful as an independent check of [`zeta_closed_form_alpha0`].
pub fn zeta_series(params: &BasisParams, lambda: Complex64) -> Result<f64> {
    zeta_with(params, &LaguerreKernel::new(params), lambda)
}

/// ζ through the coefficient series regardless of `α`: Parseval complement, then direct tail.
pub(crate) fn zeta_with(params: &BasisParams, kernel: &LaguerreKernel, lambda: Complex64) -> Result<f64> {
    check_stable(lambda)?;
    let norm_sq = 1.0 / (-2.0 * lambda.re);
    let coeffs = kernel.coefficients(lambda)?;
    let mut acc = CompensatedSum::new();
    acc.add(norm_sq);
    for s in &coeffs[..=params.n_trunc()] {
        acc.add(-s.norm_sqr());
    }
    let complement = acc.value();
    if complement < -NEGATIVE_CLAMP * norm_sq {
        return Err(Error::Accuracy {
            message: format!(
                "Parseval complement is negative ({complement:e}) beyond rounding for lambda = {lambda}"
            ),
            partial: complement,
        });
    }
    if complement >= COMPLEMENT_SWITCH * norm_sq {
        return Ok(complement);
    }
    match tail_sum(params, lambda) {
        Ok(tail) => Ok(tail),
        Err(_) if complement >= COMPLEMENT_FLOOR * norm_sq => Ok(complement),
        Err(e) => Err(e),
    }
}

/// `Σ_{n>N} |s_n|²` summed until the estimated remainder is negligible.
fn tail_sum(params: &BasisParams, lambda: Complex64) -> Result<f64> {
    let n = params.n_trunc();
    let cap = 4 * n + 200;
    let len = (n + 1 + cap).min(N_COEFF_MAX + 1);
    let kernel = LaguerreKernel::with_len(params.tau(), params.alpha(), 0, len)?;
    let coeffs = kernel.coefficients(lambda)?;
    let mut acc = CompensatedSum::new();
    let mut prev = f64::INFINITY;
    for (k, s) in coeffs.iter().enumerate().skip(n + 1) {
        let term = s.norm_sqr();
        acc.add(term);
        let partial = acc.value();
        if term == 0.0 && prev == 0.0 {
            return Ok(partial);
        }
        // The larger of a geometric and an algebraic (~1/k²) remainder estimate.
        let ratio = term / prev;
        let geometric = if ratio < 1.0 { ratio / (1.0 - ratio) } else { f64::INFINITY };
        let remainder = term * geometric.max(k as f64 + 1.0);
        if k > n + 1 && remainder <= TAIL_TOL * partial {
            return Ok(partial);
        }
        prev = term;
    }
    Err(Error::Accuracy {
        message: format!(
            "tail sum for lambda = {lambda} did not converge within {} terms",
            len - n - 1
        ),
        partial: acc.value(),
    })
}

/// `∂ζ/∂τ = −2 d_{N+1} Re(s_{N+1,λ} s_{N,λ̄})`.
pub fn dzeta_dtau(params: &BasisParams, lambda: Complex64) -> Result<f64> {
    let kernel = LaguerreKernel::with_len(params.tau(), params.alpha(), 0, params.n_trunc() + 2)?;
    dzeta_dtau_with(params, &kernel, lambda)
}

/// As [`dzeta_dtau`] with a caller-supplied kernel of length at least `N + 2`.
pub(crate) fn dzeta_dtau_with(
    params: &BasisParams,
    kernel: &LaguerreKernel,
    lambda: Complex64,
) -> Result<f64> {
    let n = params.n_trunc();
    let coeffs = kernel.coefficients(lambda)?;
    // s_{N,λ̄} is the conjugate of s_{N,λ}
    let product = coeffs[n + 1] * coeffs[n].conj();
    Ok(-2.0 * d_coeff_raw(n + 1, params.tau(), params.alpha()) * product.re)
}
