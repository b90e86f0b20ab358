use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{find_tau0, spectral_error, OptimizationResult, Spectrum, Tau0Options};

/// Options for [`minimize_phi`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexOptions {
    pub alpha_bounds: (f64, f64),
    pub tol: f64,
    pub max_iter: usize,
    /// Options of the α = 0 stage.
    pub tau0: Tau0Options,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            alpha_bounds: (-0.99, 10.0),
            tol: 1e-8,
            max_iter: 500,
            tau0: Tau0Options::default(),
        }
    }
}

/// Relative size of the initial simplex edges in `τ/τ_0` and in `α`.
const INITIAL_STEP: f64 = 0.05;
/// Simplex diameter in `(τ/τ_0, α)` below which the search stops unconditionally.
const X_TOL: f64 = 1e-7;

/// Minimizes `φ(N, τ, α)` over `τ > 0` and `α` in `alpha_bounds`.
///
/// Runs [`find_tau0`] and continues with [`minimize_phi_from`].
pub fn minimize_phi(n_trunc: usize, spectrum: &Spectrum, opts: &SimplexOptions) -> Result<OptimizationResult> {
    let stage0 = find_tau0(n_trunc, spectrum, &opts.tau0)?;
    minimize_phi_from(n_trunc, spectrum, &stage0, opts)
}

/// Nelder–Mead descent in `(τ/τ_0, α)` started from the simplex
/// `(1, 0), (1.05, 0), (1, 0.05)` around an α = 0 result.
///
/// Points outside the α bounds, with `τ ≤ 0`, or where φ cannot be evaluated to working accuracy
/// are rejected as `+∞`. The first vertex is the α = 0 optimum, so the returned φ never exceeds
/// `φ(τ_0, 0)`.
pub fn minimize_phi_from(
    n_trunc: usize,
    spectrum: &Spectrum,
    stage0: &OptimizationResult,
    opts: &SimplexOptions,
) -> Result<OptimizationResult> {
    let (a_lo, a_hi) = opts.alpha_bounds;
    if !(a_lo > -1.0 && a_lo <= 0.0 && a_hi >= 0.0 && a_hi.is_finite()) {
        return Err(Error::Parameter(format!(
            "alpha bounds must satisfy -1 < lo <= 0 <= hi, got ({a_lo}, {a_hi})"
        )));
    }
    let tau0 = stage0.tau_opt;
    let objective = |x: [f64; 2]| -> f64 {
        if !(x[0] > 0.0 && x[1] >= a_lo && x[1] <= a_hi) {
            return f64::INFINITY;
        }
        match spectral_error(n_trunc, x[0] * tau0, x[1], spectrum) {
            Ok(e) if e.phi.is_finite() => e.phi,
            _ => f64::INFINITY,
        }
    };

    let mut simplex = [
        ([1.0, 0.0], stage0.phi_min),
        ([1.0 + INITIAL_STEP, 0.0], 0.0),
        ([1.0, INITIAL_STEP], 0.0),
    ];
    simplex[1].1 = objective(simplex[1].0);
    simplex[2].1 = objective(simplex[2].0);

    let mut iterations = 0usize;
    let converged = loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0];
        let diameter = simplex[1..]
            .iter()
            .map(|v| dist(v.0, best.0))
            .fold(0.0, f64::max);
        let spread = simplex[2].1 - best.1;
        if diameter <= X_TOL || (spread <= opts.tol * best.1.abs() && diameter <= opts.tol.sqrt()) {
            break true;
        }
        if iterations >= opts.max_iter {
            break false;
        }
        let e1 = sub(simplex[1].0, best.0);
        let e2 = sub(simplex[2].0, best.0);
        if (e1[0] * e2[1] - e1[1] * e2[0]).abs() <= 1e-14 * diameter * diameter {
            return Err(Error::Convergence {
                message: "simplex collapsed before reaching tolerance".into(),
                iterations,
                best: vec![best.0[0] * tau0, best.0[1], best.1],
            });
        }
        iterations += 1;

        let centroid = scale(add(simplex[0].0, simplex[1].0), 0.5);
        let worst = simplex[2];
        let reflected = along(centroid, worst.0, -1.0);
        let fr = objective(reflected);
        if fr < simplex[0].1 {
            let expanded = along(centroid, worst.0, -2.0);
            let fe = objective(expanded);
            simplex[2] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[1].1 {
            simplex[2] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst.1 {
            let p = along(centroid, worst.0, -0.5);
            (p, objective(p))
        } else {
            let p = along(centroid, worst.0, 0.5);
            (p, objective(p))
        };
        if fc < fr.min(worst.1) {
            simplex[2] = (contracted, fc);
            continue;
        }
        for v in simplex.iter_mut().skip(1) {
            v.0 = along(best.0, v.0, 0.5);
            v.1 = objective(v.0);
        }
    };

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, _) = simplex[0];
    let err = spectral_error(n_trunc, x[0] * tau0, x[1], spectrum)?;
    Ok(OptimizationResult {
        tau_opt: x[0] * tau0,
        alpha_opt: x[1],
        phi_min: err.phi,
        psi_at_opt: err.psi,
        iterations: stage0.iterations + iterations,
        converged,
        bracket: stage0.bracket,
    })
}

fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn scale(a: [f64; 2], c: f64) -> [f64; 2] {
    [a[0] * c, a[1] * c]
}

/// `c + t (p − c)`.
fn along(c: [f64; 2], p: [f64; 2], t: f64) -> [f64; 2] {
    add(c, scale(sub(p, c), t))
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = sub(a, b);
    d[0].hypot(d[1])
}
