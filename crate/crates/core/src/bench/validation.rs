//! Self-check table behind `lagexpm validate`: the oracle comparisons of the test suite at a
//! smaller scale, runnable on any installed binary.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::{
    direct_error_oracle, eigendecompose, error_report, eval_series, expm_t, gauss_laguerre_rule,
    series_coeffs_alpha0, series_coeffs_general, DenseMatrix, EigenOptions, OracleOptions, StabilityCheck,
};
use crate::scalar::{
    dzeta_dtau, laguerre_fns, s_coeff_hypergeometric, s_coeff_seq, zeta, zeta_closed_form_alpha0, zeta_series,
    BasisParams,
};
use crate::spectrum::{find_tau0, minimize_phi, SimplexOptions, Spectrum, Tau0Options};

use super::rng::Stream;
use super::testgen::{random_diagonal, random_diagonalizable, random_real_stable};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &str, result: Result<(bool, String)>) -> CheckOutcome {
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckOutcome {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Runs every check; `quick` shrinks the random sample sizes.
pub fn run_validation(quick: bool) -> Vec<CheckOutcome> {
    let reps = if quick { 5 } else { 25 };
    vec![
        outcome("zeta three-way anchor", zeta_anchor()),
        outcome("tau0 single-eigenvalue anchor", tau0_anchor()),
        outcome("Gauss-Laguerre moments", quadrature_moments()),
        outcome("basis orthonormality", orthonormality()),
        outcome("hypergeometric vs recursion", hypergeometric_path(reps)),
        outcome("dzeta/dtau vs finite differences", derivative(reps * 4)),
        outcome("alpha0 recursion vs functional calculus", cross_path(reps)),
        outcome("diagonal equality", diagonal_equality(reps)),
        outcome("Theorem-1 sandwich", sandwich(reps)),
        outcome("end-to-end vs scaling and squaring", end_to_end()),
    ]
}

fn zeta_anchor() -> Result<(bool, String)> {
    let lambda = Complex64::new(-1.0, 0.0);
    let params = BasisParams::alpha0(1.0, 10)?;
    let exact = 0.5 * 3f64.powi(-22);
    let closed = zeta_closed_form_alpha0(10, 1.0, lambda)?;
    let series = zeta_series(&params, lambda)?;
    let a = DenseMatrix::from_diag(&[lambda])?;
    let s = series_coeffs_alpha0(&a, 1.0, 10, StabilityCheck::Trusted)?;
    let quad = direct_error_oracle(&a, &s, &OracleOptions::default())?.error.powi(2);
    let worst = [closed, series, quad].iter().map(|&v| rel(v, exact)).fold(0.0, f64::max);
    Ok((worst <= 1e-8, format!("max relative deviation {worst:.1e}")))
}

fn tau0_anchor() -> Result<(bool, String)> {
    let s = Spectrum::from_real(&[-3.0])?;
    let mut worst: f64 = 0.0;
    for n in [0, 5, 20, 50] {
        let r = find_tau0(n, &s, &Tau0Options::default())?;
        worst = worst.max((r.tau_opt - 6.0).abs()).max(r.phi_min);
    }
    let full = minimize_phi(10, &s, &SimplexOptions::default())?;
    let ok = worst <= 1e-8 && full.alpha_opt.abs() <= 1e-4;
    Ok((ok, format!("max |tau-6| or phi {worst:.1e}, alpha1 {:.1e}", full.alpha_opt)))
}

fn quadrature_moments() -> Result<(bool, String)> {
    let rule = gauss_laguerre_rule(16, 0.0)?;
    let mut worst: f64 = 0.0;
    let mut fact = 1.0;
    for k in 0..=31 {
        if k > 0 {
            fact *= k as f64;
        }
        worst = worst.max(rel(rule.integrate(|x| x.powi(k)), fact));
    }
    Ok((worst <= 1e-10, format!("max relative moment error {worst:.1e}")))
}

fn orthonormality() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for &(tau, alpha) in &[(1.0, 0.0), (0.5, -0.5), (3.0, 2.0)] {
        // l_n l_m = t^α e^{−τt}·poly, so the rule for t^α e^{−x} with x = τt is exact.
        let rule = gauss_laguerre_rule(40, alpha)?;
        let params = BasisParams::new(tau, alpha, 20)?;
        let mut gram = [[0.0; 21]; 21];
        for (&x, &lw) in rule.nodes.iter().zip(&rule.log_weights) {
            let t = x / tau;
            let l = laguerre_fns(&params, t)?;
            // the rule already carries x^α e^{−x}; divide it back out of l_n l_m
            let w = (lw + x - alpha * x.ln()).exp() / tau;
            for i in 0..=20 {
                for j in 0..=20 {
                    gram[i][j] += w * l[i] * l[j];
                }
            }
        }
        for (i, row) in gram.iter().enumerate() {
            for (j, &g) in row.iter().enumerate() {
                worst = worst.max((g - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    Ok((worst <= 1e-8, format!("max |G - I| {worst:.1e}")))
}

fn random_lambda(s: &mut Stream) -> Complex64 {
    Complex64::new(s.uniform_in(-5.0, -0.1), s.uniform_in(-5.0, 5.0))
}

fn hypergeometric_path(reps: usize) -> Result<(bool, String)> {
    let mut s = Stream::new(11, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..reps {
        let params = BasisParams::new(s.uniform_in(0.2, 10.0), s.uniform_in(-0.9, 5.0), 15)?;
        let lambda = random_lambda(&mut s);
        let seq = s_coeff_seq(&params, lambda)?;
        for (n, &c) in seq.values.iter().enumerate() {
            let h = s_coeff_hypergeometric(n, &params, lambda)?;
            worst = worst.max((h - c).norm() / c.norm().max(f64::MIN_POSITIVE));
        }
    }
    Ok((worst <= 1e-12, format!("max relative difference {worst:.1e}")))
}

fn derivative(reps: usize) -> Result<(bool, String)> {
    let mut s = Stream::new(12, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..reps {
        let n = (s.uniform() * 21.0) as usize;
        let tau = (s.uniform_in(0.1f64.ln(), 50f64.ln())).exp();
        let alpha = if s.uniform() < 0.3 { 0.0 } else { s.uniform_in(-0.9, 5.0) };
        let lambda = random_lambda(&mut s);
        let params = BasisParams::new(tau, alpha, n)?;
        // ζ·(ln ζ)′ with a step below the scale |2λ+τ| on which ρ^{2N+2} varies
        let ln_f = |t: f64| -> Result<f64> { Ok(zeta(&params.with_tau(t)?, lambda)?.ln()) };
        let h = 1e-3 * tau.min((lambda * 2.0 + tau).norm());
        let d = |h: f64| -> Result<f64> { Ok((ln_f(tau + h)? - ln_f(tau - h)?) / (2.0 * h)) };
        let fd = zeta(&params, lambda)? * (4.0 * d(h / 2.0)? - d(h)?) / 3.0;
        let an = dzeta_dtau(&params, lambda)?;
        let scale = an.abs().max(fd.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max((an - fd).abs() / scale);
    }
    Ok((worst <= 1e-5, format!("max relative difference {worst:.1e}")))
}

fn cross_path(reps: usize) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for seed in 0..reps as u64 {
        let m = 2 + (seed as usize % 5);
        let a = random_diagonalizable(m, 100 + seed)?.a;
        let eig = eigendecompose(&a, &EigenOptions::default())?;
        let params = BasisParams::alpha0(1.0 + seed as f64 * 0.3, 12)?;
        let rec = series_coeffs_alpha0(&a, params.tau(), 12, StabilityCheck::Trusted)?;
        let gen = series_coeffs_general(&eig, &params)?;
        for (x, y) in rec.coeffs.iter().zip(&gen.coeffs) {
            worst = worst.max(x.sub(y)?.frobenius_norm() / x.frobenius_norm().max(f64::MIN_POSITIVE));
        }
    }
    Ok((worst <= 1e-8, format!("max relative difference {worst:.1e}")))
}

fn diagonal_equality(reps: usize) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for seed in 0..reps as u64 {
        let d = random_diagonal(2 + seed as usize % 5, 200 + seed)?;
        let eig = eigendecompose(&d, &EigenOptions::default())?;
        let spectrum = eig.spectrum()?;
        let tau = find_tau0(6, &spectrum, &Tau0Options::default())?.tau_opt;
        let params = BasisParams::alpha0(tau, 6)?;
        let series = series_coeffs_alpha0(&d, tau, 6, StabilityCheck::Trusted)?;
        let oracle = direct_error_oracle(&d, &series, &OracleOptions::default())?.error;
        let bounds = error_report(&eig, &params)?;
        worst = worst.max(rel(oracle, bounds.phi.sqrt()));
    }
    Ok((worst <= 1e-8, format!("max relative difference {worst:.1e}")))
}

fn sandwich(reps: usize) -> Result<(bool, String)> {
    let mut violations = 0;
    for seed in 0..reps as u64 {
        let m = 2 + seed as usize % 4;
        let a = random_diagonalizable(m, 300 + seed)?.a;
        let eig = eigendecompose(&a, &EigenOptions::default())?;
        let n = [5, 10, 20][seed as usize % 3];
        let tau = find_tau0(n, &eig.spectrum()?, &Tau0Options::default())?.tau_opt;
        let params = BasisParams::alpha0(tau, n)?;
        let series = series_coeffs_general(&eig, &params)?;
        let err = direct_error_oracle(&a, &series, &OracleOptions::default())?.error;
        let b = error_report(&eig, &params)?;
        let (up, up2) = (b.upper_phi.unwrap_or(f64::NAN), b.upper_psi.unwrap_or(f64::NAN));
        if !(b.lower <= err + 1e-8 && err <= up + 1e-8 && up <= up2) {
            violations += 1;
        }
    }
    Ok((violations == 0, format!("{violations} violations in {reps} cases")))
}

fn end_to_end() -> Result<(bool, String)> {
    let a = random_real_stable(5, 7)?;
    let eig = eigendecompose(&a, &EigenOptions::default())?;
    let tau = find_tau0(30, &eig.spectrum()?, &Tau0Options::default())?.tau_opt;
    let series = series_coeffs_alpha0(&a, tau, 30, StabilityCheck::Trusted)?;
    let mut worst: f64 = 0.0;
    for t in [0.1, 1.0, 5.0] {
        worst = worst.max(eval_series(&series, t)?.sub(&expm_t(&a, t)?)?.frobenius_norm());
    }
    Ok((worst <= 1e-5, format!("max Frobenius error {worst:.1e}")))
}
