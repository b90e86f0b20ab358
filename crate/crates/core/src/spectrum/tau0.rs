use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

use super::{spectral_error, OptimizationResult, Spectrum};

/// Options for [`find_tau0`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tau0Options {
    pub tau_init: f64,
    pub tol_rel: f64,
    pub max_iter: usize,
}

impl Default for Tau0Options {
    fn default() -> Self {
        Self {
            tau_init: 1.0,
            tol_rel: 1e-10,
            max_iter: 200,
        }
    }
}

/// Once the bracket is this narrow (relative), bisection hands over to Newton steps.
const NEWTON_HANDOVER: f64 = 1e-3;
const BRACKET_RANGE: f64 = 1e8;

/// `∂φ/∂τ` at `α = 0` as `Σ_k ±exp(L_k − L_ref)`.
///
/// With `ρ_k = |2λ_k+τ|/|2λ_k−τ|` each term is
/// `−4(N+1)(2|λ|−τ)(2|λ|+τ) ρ^{2N} / |2λ−τ|⁴`, which underflows long before its sign stops
/// mattering, so only logarithms are formed. Passing `lref` evaluates on a common scale, which is
/// what finite differences need.
struct ScaledDerivative<'a> {
    n_trunc: usize,
    spectrum: &'a Spectrum,
}

impl ScaledDerivative<'_> {
    fn eval(&self, tau: f64, lref: Option<f64>) -> (f64, f64) {
        let n = self.n_trunc as f64;
        let mut terms = Vec::with_capacity(self.spectrum.len());
        for lambda in self.spectrum.eigenvalues() {
            let two_abs = 2.0 * lambda.norm();
            let factor = (two_abs - tau) * (two_abs + tau);
            if factor == 0.0 {
                continue;
            }
            let minus = (lambda * 2.0 - tau).norm();
            let plus = (lambda * 2.0 + tau).norm();
            let log_rho = if n == 0.0 { 0.0 } else { 2.0 * n * (plus.ln() - minus.ln()) };
            let log_mag = (4.0 * (n + 1.0) * factor.abs()).ln() + log_rho - 4.0 * minus.ln();
            if log_mag == f64::NEG_INFINITY {
                continue;
            }
            terms.push((-factor.signum(), log_mag));
        }
        let lref = lref.unwrap_or_else(|| {
            terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max)
        });
        if terms.is_empty() || lref == f64::NEG_INFINITY {
            return (0.0, lref);
        }
        let value = terms
            .iter()
            .map(|&(sign, l)| sign * (l - lref).exp())
            .collect::<CompensatedSum>()
            .value();
        (value, lref)
    }
}

/// Optimal scale `τ_0` at `α = 0`: the root of `∂φ/∂τ`.
///
/// Starting at `tau_init`, the sign of `∂φ/∂τ` decides whether to double or halve until a sign
/// change is bracketed inside `[1e-8, 1e8]·tau_init`. The bracket is then narrowed by bisection
/// and finished with Newton steps on a central-difference slope, each step safeguarded by the
/// bracket. Global monotonicity of `∂φ/∂τ` is not assumed; the bracket actually used is returned.
pub fn find_tau0(n_trunc: usize, spectrum: &Spectrum, opts: &Tau0Options) -> Result<OptimizationResult> {
    if !(opts.tau_init.is_finite() && opts.tau_init > 0.0) {
        return Err(Error::Parameter(format!("tau_init must be > 0, got {}", opts.tau_init)));
    }
    if !(opts.tol_rel > 0.0) {
        return Err(Error::Parameter(format!("tol_rel must be > 0, got {}", opts.tol_rel)));
    }
    // validates n_trunc against N_MAX
    spectral_error(n_trunc, opts.tau_init, 0.0, spectrum)?;

    let g = ScaledDerivative { n_trunc, spectrum };
    let mut iterations = 0usize;
    let finish = |tau: f64, bracket: (f64, f64), iterations: usize, converged: bool| {
        let err = spectral_error(n_trunc, tau, 0.0, spectrum)?;
        Ok(OptimizationResult {
            tau_opt: tau,
            alpha_opt: 0.0,
            phi_min: err.phi,
            psi_at_opt: err.psi,
            iterations,
            converged,
            bracket: Some(bracket),
        })
    };

    let tau_init = opts.tau_init;
    let g0 = g.eval(tau_init, None).0;
    if g0 == 0.0 {
        return finish(tau_init, (tau_init, tau_init), 0, true);
    }
    // Expand until g(lo) < 0 < g(hi).
    let (mut lo, mut hi) = if g0 < 0.0 {
        let mut lo = tau_init;
        loop {
            let hi = 2.0 * lo;
            iterations += 1;
            if hi > BRACKET_RANGE * tau_init {
                return Err(Error::Bracket {
                    lo: tau_init,
                    hi: BRACKET_RANGE * tau_init,
                });
            }
            let gh = g.eval(hi, None).0;
            if gh == 0.0 {
                return finish(hi, (lo, hi), iterations, true);
            }
            if gh > 0.0 {
                break (lo, hi);
            }
            lo = hi;
        }
    } else {
        let mut hi = tau_init;
        loop {
            let lo = 0.5 * hi;
            iterations += 1;
            if lo < tau_init / BRACKET_RANGE {
                return Err(Error::Bracket {
                    lo: tau_init / BRACKET_RANGE,
                    hi: tau_init,
                });
            }
            let gl = g.eval(lo, None).0;
            if gl == 0.0 {
                return finish(lo, (lo, hi), iterations, true);
            }
            if gl < 0.0 {
                break (lo, hi);
            }
            hi = lo;
        }
    };

    let mut x = 0.5 * (lo + hi);
    let mut prev_width = f64::INFINITY;
    while iterations < opts.max_iter {
        iterations += 1;
        if hi - lo <= opts.tol_rel * x {
            return finish(0.5 * (lo + hi), (lo, hi), iterations, true);
        }
        let (gx, lref) = g.eval(x, None);
        if gx == 0.0 {
            return finish(x, (lo, hi), iterations, true);
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        // Newton only while the bracket keeps halving: at a multiple root (a single real
        // eigenvalue gives order 2N+1) it converges linearly from one side.
        let width = hi - lo;
        let mut next = None;
        if hi / lo - 1.0 < NEWTON_HANDOVER && width <= 0.5 * prev_width {
            let h = 1e-6 * x;
            let slope = (g.eval(x + h, Some(lref)).0 - g.eval(x - h, Some(lref)).0) / (2.0 * h);
            if slope > 0.0 {
                let step = gx / slope;
                let candidate = x - step;
                if candidate > lo && candidate < hi {
                    next = Some(candidate);
                    // A short step only means convergence once a sign change confirms it.
                    if step.abs() <= 0.5 * opts.tol_rel * x {
                        let d = 0.5 * opts.tol_rel * candidate;
                        let (a, b) = (candidate - d, candidate + d);
                        let (ga, gb) = (g.eval(a, None).0, g.eval(b, None).0);
                        if ga <= 0.0 && gb >= 0.0 {
                            return finish(candidate, (a.max(lo), b.min(hi)), iterations, true);
                        }
                        if ga > 0.0 {
                            hi = hi.min(a);
                        } else {
                            lo = lo.max(b);
                        }
                        next = None;
                    }
                }
            }
        }
        prev_width = width;
        x = next.unwrap_or_else(|| if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) });
    }
    Err(Error::Convergence {
        message: "optimal tau search exhausted its iteration budget".into(),
        iterations,
        best: vec![0.5 * (lo + hi), lo, hi],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{dphi_dtau, phi};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn single_eigenvalue_matches_exactly() {
        let s = Spectrum::from_real(&[-3.0]).unwrap();
        for n in [0, 10, 50] {
            let r = find_tau0(n, &s, &Tau0Options::default()).unwrap();
            assert!((r.tau_opt - 6.0).abs() <= 1e-8, "{r:?}");
            assert!(r.phi_min <= 1e-14);
            assert!(r.converged);
        }
        // τ = 6 is hit exactly by bisection; these roots of order 2N+1 are not.
        for lambda in [-4.403967299291297, -0.37, -123.4] {
            let s = Spectrum::from_real(&[lambda]).unwrap();
            for n in [1, 4, 20] {
                let r = find_tau0(n, &s, &Tau0Options::default()).unwrap();
                assert!((r.tau_opt / (-2.0 * lambda) - 1.0).abs() <= 1e-9, "{lambda} {n}: {r:?}");
            }
        }
    }

    #[test]
    fn scaled_derivative_has_correct_sign() {
        let s = Spectrum::new(vec![Complex64::new(-1.0, 3.0), Complex64::new(-4.0, 0.5), Complex64::new(-0.3, 0.0)])
            .unwrap();
        let g = ScaledDerivative { n_trunc: 7, spectrum: &s };
        for tau in [0.2, 1.0, 3.0, 9.0, 40.0] {
            let exact = dphi_dtau(7, tau, 0.0, &s).unwrap();
            let (scaled, lref) = g.eval(tau, None);
            assert_eq!(scaled.signum(), exact.signum());
            assert_relative_eq!(scaled * lref.exp(), exact, max_relative = 1e-10);
        }
    }

    #[test]
    fn underflowing_derivative_keeps_sign() {
        // For N = 50 the raw derivative underflows well before the optimum is reached.
        let s = Spectrum::from_real(&[-3.0, -3.5]).unwrap();
        let r = find_tau0(50, &s, &Tau0Options::default()).unwrap();
        assert!(r.tau_opt > 6.0 && r.tau_opt < 7.0);
        let d = 1e-3 * r.tau_opt;
        let p0 = phi(50, r.tau_opt, 0.0, &s).unwrap();
        assert!(phi(50, r.tau_opt + d, 0.0, &s).unwrap() >= p0);
        assert!(phi(50, r.tau_opt - d, 0.0, &s).unwrap() >= p0);
    }

    #[test]
    fn bracket_failure_and_bad_options() {
        // τ_0 = 6e9 lies outside [1e-8, 1e8]·tau_init
        let s = Spectrum::from_real(&[-3e9]).unwrap();
        assert!(matches!(find_tau0(3, &s, &Tau0Options::default()), Err(Error::Bracket { .. })));
        let s = Spectrum::from_real(&[-1.0]).unwrap();
        let opts = Tau0Options { tau_init: 0.0, ..Default::default() };
        assert!(matches!(find_tau0(3, &s, &opts), Err(Error::Parameter(_))));
    }

    #[test]
    fn tiny_budget_reports_best_iterate() {
        let s = Spectrum::from_real(&[-1.0, -7.0]).unwrap();
        let opts = Tau0Options { max_iter: 4, ..Default::default() };
        match find_tau0(5, &s, &opts) {
            Err(Error::Convergence { best, .. }) => assert!(best[0] > 0.0),
            other => panic!("expected convergence error, got {other:?}"),
        }
    }
}
