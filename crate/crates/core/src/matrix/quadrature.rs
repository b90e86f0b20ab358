use crate::error::{Error, Result};
use crate::scalar::validate_alpha;

/// Largest supported rule size.
pub const RULE_MAX: usize = 512;

/// m-point Gauss rule for `∫₀^∞ t^α e^{−t} f(t) dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLaguerreRule {
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `ln w_i`; weights of large rules underflow long before their products with `e^{x_i}` do.
    pub log_weights: Vec<f64>,
}

impl GaussLaguerreRule {
    /// `Σ w_i f(x_i)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Nodes are the eigenvalues of the Jacobi matrix of the generalized Laguerre recurrence
/// (diagonal `2k+α+1`, off-diagonal `√(k(k+α))`), found by implicit QL and polished by Newton
/// steps on `L_m^α`. Weights use `w_i = Γ(m+α+1) x_i / (m! (m+α)² L_{m−1}^α(x_i)²)` in
/// logarithmic form, which keeps full relative accuracy for the tiny weights of large nodes.
pub fn gauss_laguerre_rule(m: usize, alpha: f64) -> Result<GaussLaguerreRule> {
    if m == 0 || m > RULE_MAX {
        return Err(Error::Parameter(format!("rule size {m} outside 1..={RULE_MAX}")));
    }
    validate_alpha(alpha)?;
    let mut diag: Vec<f64> = (0..m).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let mut off: Vec<f64> = (0..m)
        .map(|k| if k + 1 < m { ((k as f64 + 1.0) * (k as f64 + 1.0 + alpha)).sqrt() } else { 0.0 })
        .collect();
    tridiagonal_ql(&mut diag, &mut off)?;
    diag.sort_by(f64::total_cmp);

    let mf = m as f64;
    let log_const = libm::lgamma(mf + alpha + 1.0) - libm::lgamma(mf + 1.0) - 2.0 * (mf + alpha).ln();
    let mut nodes = Vec::with_capacity(m);
    let mut log_weights = Vec::with_capacity(m);
    for &x0 in &diag {
        let mut x = x0;
        for _ in 0..3 {
            let (pm, pm1, _) = scaled_laguerre_pair(m, alpha, x);
            let deriv = (mf * pm - (mf + alpha) * pm1) / x;
            if deriv == 0.0 {
                break;
            }
            let step = pm / deriv;
            if !(step.abs() <= 1e-6 * x.max(1.0)) {
                break;
            }
            x -= step;
            if step.abs() <= 1e-16 * x {
                break;
            }
        }
        let (_, pm1, log_scale) = scaled_laguerre_pair(m, alpha, x);
        nodes.push(x);
        log_weights.push(log_const + x.ln() - 2.0 * (pm1.abs().ln() + log_scale));
    }
    let weights = log_weights.iter().map(|l| l.exp()).collect();
    Ok(GaussLaguerreRule {
        alpha,
        nodes,
        weights,
        log_weights,
    })
}

/// m-point Gauss–Legendre rule on `[−1, 1]`: Newton iteration on `P_m` from Chebyshev-type
/// initial guesses, weights `2 / ((1−x²) P_m'(x)²)`.
pub fn gauss_legendre_rule(m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 || m > RULE_MAX {
        return Err(Error::Parameter(format!("rule size {m} outside 1..={RULE_MAX}")));
    }
    let mf = m as f64;
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut deriv = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                (p0, p1) = (p1, ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf);
            }
            let pm = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            deriv = mf * (x * pm - pm1) / (x * x - 1.0);
            let step = pm / deriv;
            x -= step;
            if step.abs() <= 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok((nodes, weights))
}

/// `(L_m, L_{m−1})·e^{−s}` and `s`.
///
/// Runs the recurrence on differences `d_k = L_k − L_{k−1}`,
/// `d_{k+1} = ((k+α) d_k − x L_k)/(k+1)`, so `x` is never added to `2k+1+α` and small nodes keep
/// their low-order bits. Values are renormalized whenever they grow large.
fn scaled_laguerre_pair(m: usize, alpha: f64, x: f64) -> (f64, f64, f64) {
    const BIG: f64 = 1e150;
    let mut p = 1.0;
    let mut d = alpha - x;
    let mut log_scale = 0.0;
    for k in 1..m {
        let kf = k as f64;
        p += d;
        d = ((kf + alpha) * d - x * p) / (kf + 1.0);
        if p.abs() > BIG {
            p /= BIG;
            d /= BIG;
            log_scale += BIG.ln();
        }
    }
    (p + d, p, log_scale)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson-type shifts.
/// `off[i]` couples rows `i` and `i+1`; both inputs are overwritten, eigenvalues land in `diag`.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numerical(format!(
                    "tridiagonal QL did not converge for eigenvalue {l}"
                )));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}
