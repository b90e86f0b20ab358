use crate::error::{Error, Result};

use super::{validate_alpha, BasisParams, N_MAX};

/// Generalized Laguerre polynomial `L_n^α(t)` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1+α−t) L_k − (k+α) L_{k−1}`, run on differences of consecutive terms.
pub fn eval_laguerre_poly(n: usize, alpha: f64, t: f64) -> Result<f64> {
    if n > N_MAX {
        return Err(Error::Parameter(format!("degree {n} exceeds N_MAX = {N_MAX}")));
    }
    validate_alpha(alpha)?;
    if !t.is_finite() {
        return Err(Error::Domain(format!("t must be finite, got {t}")));
    }
    Ok(*laguerre_poly_values(n, alpha, t).last().expect("n + 1 values"))
}

/// `L_0^α(x) .. L_n^α(x)`, unchecked.
///
/// Uses the difference form `d_{k+1} = ((k+α) d_k − x L_k)/(k+1)`, `L_{k+1} = L_k + d_{k+1}`,
/// which is the same recurrence without absorbing a small `x` into `2k+1+α`.
pub(crate) fn laguerre_poly_values(n: usize, alpha: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut p = 1.0;
    let mut d = alpha - x;
    out.push(p);
    for k in 1..=n {
        p += d;
        out.push(p);
        let kf = k as f64;
        d = ((kf + alpha) * d - x * p) / (kf + 1.0);
    }
    out
}

/// Normalization factors `sqrt(n! / Γ(n+α+1))` for `n = 0..=n_max`.
///
/// Built from `lnΓ(α+1)` and the ratio `sqrt(n / (n+α))`, so no factorial is ever formed.
pub fn laguerre_normalization(n_max: usize, alpha: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut c = (-0.5 * libm::lgamma(alpha + 1.0)).exp();
    out.push(c);
    for n in 1..=n_max {
        let nf = n as f64;
        c *= (nf / (nf + alpha)).sqrt();
        out.push(c);
    }
    out
}

/// Laguerre function
/// `l_{n,τ}^α(t) = sqrt(n!/Γ(n+α+1)) τ^{(α+1)/2} t^{α/2} e^{−τt/2} L_n^α(τt)`.
pub fn eval_laguerre_fn(n: usize, params: &BasisParams, t: f64) -> Result<f64> {
    if n > N_MAX {
        return Err(Error::Parameter(format!("index {n} exceeds N_MAX = {N_MAX}")));
    }
    Ok(laguerre_fns_upto(n, params.tau(), params.alpha(), t)?[n])
}

/// All basis values `l_0(t) .. l_N(t)` of a truncated basis.
pub fn laguerre_fns(params: &BasisParams, t: f64) -> Result<Vec<f64>> {
    laguerre_fns_upto(params.n_trunc(), params.tau(), params.alpha(), t)
}

pub(crate) fn laguerre_fns_upto(n: usize, tau: f64, alpha: f64, t: f64) -> Result<Vec<f64>> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("t must be finite and >= 0, got {t}")));
    }
    let x = tau * t;
    // sqrt(τ) (τt)^{α/2} e^{−τt/2}, combined in log form so large τt neither overflows the
    // power nor underflows the exponential prematurely.
    let envelope = if x == 0.0 {
        if alpha == 0.0 {
            tau.sqrt()
        } else if alpha > 0.0 {
            0.0
        } else {
            return Err(Error::Domain(format!(
                "l_n^alpha is unbounded at t = 0 for alpha = {alpha} < 0"
            )));
        }
    } else {
        tau.sqrt() * (0.5 * alpha * x.ln() - 0.5 * x).exp()
    };
    let norms = laguerre_normalization(n, alpha);
    let polys = laguerre_poly_values(n, alpha, x);
    Ok(norms
        .iter()
        .zip(&polys)
        .map(|(c, p)| c * envelope * p)
        .collect())
}
