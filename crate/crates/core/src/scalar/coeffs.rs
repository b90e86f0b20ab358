use num_complex::Complex64;

use crate::error::{Error, Result};

use super::basis::laguerre_normalization;
use super::hypergeometric::hyp2f1_terminating;
use super::{check_stable, validate_tau_alpha, BasisParams};

/// Largest coefficient index any routine here will form (tail sums run past `N_MAX`).
pub const N_COEFF_MAX: usize = 512;

/// Largest power `j` accepted by [`q_coeff`].
const MOMENT_MAX: usize = 10;

/// Coefficients `s_0 .. s_N` of `e^{λt}` in one truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarCoeffSeq {
    pub params: BasisParams,
    pub lambda: Complex64,
    pub values: Vec<Complex64>,
}

/// Precomputed λ-independent data for the Laguerre coefficients of `t^j e^{λt}`.
///
/// With `σ = τ/2 − λ` and `β = −(τ/2 + λ)/σ` the generating function of the coefficients is
///
/// ```text
/// Σ_n q_n w^n / (c_n τ^{(α+1)/2}) = Γ(α/2+j+1) σ^{−(α/2+j+1)} (1−w)^{j−α/2} (1−βw)^{−(α/2+j+1)}
/// ```
///
/// with `c_n = sqrt(n!/Γ(n+α+1))`. Coefficients are read off as a Cauchy product of the two
/// binomial series. This is the closed `₂F₁(−n, α/2+j+1; α+1; τ/σ)` formula expanded in `β`
/// instead of `τ/σ`; since `|β| < 1` whenever `Re λ < 0`, the product does not suffer the
/// exponential cancellation of the plain hypergeometric sum.
#[derive(Debug, Clone)]
pub struct LaguerreKernel {
    tau: f64,
    alpha: f64,
    exponent: f64,
    /// Series of `(1−w)^{j−α/2}`.
    left: Vec<f64>,
    /// `Γ(α/2+j+1) τ^{(α+1)/2} c_n`.
    scale: Vec<f64>,
}

impl LaguerreKernel {
    /// Kernel for `s_0 .. s_N` of the given basis.
    pub fn new(params: &BasisParams) -> Self {
        Self::build(params.tau(), params.alpha(), 0, params.n_trunc() + 1)
    }

    /// Kernel producing `len` coefficients of `t^j e^{λt}`. Validates all arguments.
    pub fn with_len(tau: f64, alpha: f64, j: usize, len: usize) -> Result<Self> {
        validate_tau_alpha(tau, alpha)?;
        if len == 0 || len > N_COEFF_MAX + 1 {
            return Err(Error::Parameter(format!(
                "coefficient count {len} outside 1..={}",
                N_COEFF_MAX + 1
            )));
        }
        if j > MOMENT_MAX {
            return Err(Error::Parameter(format!("power j = {j} exceeds {MOMENT_MAX}")));
        }
        Ok(Self::build(tau, alpha, j, len))
    }

    fn build(tau: f64, alpha: f64, j: usize, len: usize) -> Self {
        let half = 0.5 * alpha;
        let exponent = half + j as f64 + 1.0;
        let shift = half - j as f64;
        let mut left = Vec::with_capacity(len);
        let mut a = 1.0;
        left.push(a);
        for k in 1..len {
            a *= (shift + (k - 1) as f64) / k as f64;
            left.push(a);
        }
        let prefactor = libm::tgamma(exponent) * tau.powf(0.5 * (alpha + 1.0));
        let scale = laguerre_normalization(len - 1, alpha)
            .into_iter()
            .map(|c| prefactor * c)
            .collect();
        Self {
            tau,
            alpha,
            exponent,
            left,
            scale,
        }
    }

    pub fn len(&self) -> usize {
        self.scale.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scale.is_empty()
    }

    /// Coefficients for one eigenvalue, `Re λ < 0` required.
    pub fn coefficients(&self, lambda: Complex64) -> Result<Vec<Complex64>> {
        check_stable(lambda)?;
        let half_tau = 0.5 * self.tau;
        let sigma = Complex64::new(half_tau, 0.0) - lambda;
        // Re σ = τ/2 − Re λ > 0 keeps the principal power away from its branch cut.
        assert!(sigma.re > 0.0, "Re(tau/2 - lambda) must be positive");
        let beta = -(lambda + half_tau) / sigma;
        let power = if self.exponent == 1.0 {
            sigma.inv()
        } else {
            (-self.exponent * sigma.ln()).exp()
        };

        let len = self.len();
        let mut right = Vec::with_capacity(len);
        let mut b = Complex64::new(1.0, 0.0);
        right.push(b);
        for k in 1..len {
            b *= beta * ((self.exponent + (k - 1) as f64) / k as f64);
            right.push(b);
        }

        let mut out = Vec::with_capacity(len);
        for n in 0..len {
            let conv: Complex64 = (0..=n).map(|k| right[n - k] * self.left[k]).sum();
            out.push(conv * power * self.scale[n]);
        }
        if out.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Domain(format!(
                "non-finite Laguerre coefficient for lambda = {lambda}, tau = {}, alpha = {}",
                self.tau, self.alpha
            )));
        }
        Ok(out)
    }
}

/// Laguerre coefficient `s_{n,τ,α,λ} = ∫₀^∞ e^{λt} l_{n,τ}^α(t) dt`, `n ≤ N_COEFF_MAX`.
pub fn s_coeff(n: usize, params: &BasisParams, lambda: Complex64) -> Result<Complex64> {
    let kernel = LaguerreKernel::with_len(params.tau(), params.alpha(), 0, n + 1)?;
    Ok(kernel.coefficients(lambda)?[n])
}

/// `s_0 .. s_N` for a general basis.
pub fn s_coeff_seq(params: &BasisParams, lambda: Complex64) -> Result<ScalarCoeffSeq> {
    let values = LaguerreKernel::new(params).coefficients(lambda)?;
    Ok(ScalarCoeffSeq {
        params: *params,
        lambda,
        values,
    })
}

/// `s_0 .. s_N` for `α = 0` by the geometric recursion
/// `s_0 = −2√τ/(2λ−τ)`, `s_{n+1} = (2λ+τ)/(2λ−τ) s_n`.
pub fn s_coeff_seq_alpha0(params: &BasisParams, lambda: Complex64) -> Result<ScalarCoeffSeq> {
    if !params.is_alpha0() {
        return Err(Error::Parameter(format!(
            "recursive coefficients need alpha = 0, got {}",
            params.alpha()
        )));
    }
    check_stable(lambda)?;
    let tau = params.tau();
    let denom = lambda * 2.0 - tau;
    let ratio = (lambda * 2.0 + tau) / denom;
    let mut s = -2.0 * tau.sqrt() / denom;
    let mut values = Vec::with_capacity(params.n_trunc() + 1);
    values.push(s);
    for _ in 0..params.n_trunc() {
        s *= ratio;
        values.push(s);
    }
    Ok(ScalarCoeffSeq {
        params: *params,
        lambda,
        values,
    })
}

/// Laguerre coefficient of `t^j e^{λt}`, i.e. `∫₀^∞ t^j e^{λt} l_{n,τ}^α(t) dt`, `j ≤ 10`.
pub fn q_coeff(n: usize, j: usize, params: &BasisParams, lambda: Complex64) -> Result<Complex64> {
    let kernel = LaguerreKernel::with_len(params.tau(), params.alpha(), j, n + 1)?;
    Ok(kernel.coefficients(lambda)?[n])
}

/// [`s_coeff`] through the literal closed form
/// `Γ(α/2+1) τ^{(α+1)/2} C(n+α, n) c_n (τ/2−λ)^{−(α/2+1)} ₂F₁(−n, α/2+1; α+1; τ/(τ/2−λ))`.
///
/// Kept as an independent route for cross-checks. For `|τ/(τ/2−λ)|` near 2 (eigenvalues close to
/// the imaginary axis) the terms grow like `3ⁿ` and even the double-double sum loses digits
/// beyond `n ≈ 30`.
pub fn s_coeff_hypergeometric(n: usize, params: &BasisParams, lambda: Complex64) -> Result<Complex64> {
    q_coeff_hypergeometric(n, 0, params, lambda)
}

/// [`q_coeff`] through the closed hypergeometric form with `Γ(α/2+j+1)` and the matching power
/// `(τ/2−λ)^{−(α/2+j+1)}`.
pub fn q_coeff_hypergeometric(
    n: usize,
    j: usize,
    params: &BasisParams,
    lambda: Complex64,
) -> Result<Complex64> {
    if j > MOMENT_MAX {
        return Err(Error::Parameter(format!("power j = {j} exceeds {MOMENT_MAX}")));
    }
    check_stable(lambda)?;
    let (tau, alpha) = (params.tau(), params.alpha());
    let sigma = Complex64::new(0.5 * tau, 0.0) - lambda;
    let exponent = 0.5 * alpha + j as f64 + 1.0;
    let nf = n as f64;
    // C(n+α, n) sqrt(n!/Γ(n+α+1)) = sqrt(Γ(n+α+1)/n!) / Γ(α+1)
    let binom_norm =
        (0.5 * (libm::lgamma(nf + alpha + 1.0) - libm::lgamma(nf + 1.0)) - libm::lgamma(alpha + 1.0)).exp();
    let prefactor = libm::tgamma(exponent) * tau.powf(0.5 * (alpha + 1.0)) * binom_norm;
    let hyp = hyp2f1_terminating(n, exponent, alpha + 1.0, tau / sigma)?;
    Ok(hyp * prefactor * (-exponent * sigma.ln()).exp())
}

/// `d_0 = 0`, `d_n = sqrt(n(n+α)) / (2τ)`: the coupling in `∂l_n/∂τ = d_{n+1} l_{n+1} − d_n l_{n−1}`.
pub fn d_coeff(n: usize, params: &BasisParams) -> f64 {
    d_coeff_raw(n, params.tau(), params.alpha())
}

pub(crate) fn d_coeff_raw(n: usize, tau: f64, alpha: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    (nf * (nf + alpha)).sqrt() / (2.0 * tau)
}
