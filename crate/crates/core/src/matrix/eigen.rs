use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

use super::dense::{largest_singular_value, normalize, vec_norm, DenseMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Options for [`eigendecompose`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    /// Largest accepted `‖Av − λv‖₂` relative to `max(1, ‖A‖_F)`.
    pub diag_residual_tol: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            diag_residual_tol: 1e-8,
        }
    }
}

/// Eigenvalues and unit-column eigenvectors `T` of a square matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSystem {
    pub eigenvalues: Vec<Complex64>,
    pub t_matrix: DenseMatrix,
    /// `None` when `T` could not be inverted at all.
    pub t_inverse: Option<DenseMatrix>,
    /// `‖T‖₂ ‖T⁻¹‖₂`, infinite without an inverse.
    pub kappa: f64,
    /// False when power iteration failed and `kappa` is the Frobenius bound `‖T‖_F ‖T⁻¹‖_F`.
    pub kappa_exact: bool,
    pub diagonalizable: bool,
    /// `max_k ‖A v_k − λ_k v_k‖₂`.
    pub residual: f64,
}

/// Outcome of [`is_stable`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub stable: bool,
    /// `max_k Re λ_k`.
    pub abscissa: f64,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues as a [`Spectrum`]; fails with a stability error when any `Re λ ≥ 0`.
    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::new(self.eigenvalues.clone())
    }
}

/// Strict stability test `max Re λ < 0`.
pub fn is_stable(eig: &EigenSystem) -> StabilityReport {
    let abscissa = eig.eigenvalues.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    StabilityReport {
        stable: abscissa < 0.0,
        abscissa,
    }
}

/// Eigen-decomposition `A = T D T⁻¹`.
///
/// Parlett–Reinsch balancing, Householder reduction to Hessenberg form and a complex
/// single-shift QR iteration (Wilkinson shifts, exceptional shifts every 10 stalled sweeps) give
/// the Schur form; eigenvectors come from back-substitution on the triangular factor.
pub fn eigendecompose(a: &DenseMatrix, opts: &EigenOptions) -> Result<EigenSystem> {
    let m = a.dim();
    let (mut h, scaling) = balance(a);
    let mut z = hessenberg(&mut h);
    schur(&mut h, &mut z)?;
    let eigenvalues = h.diagonal();

    let x = triangular_eigenvectors(&h);
    // V = D Z X, then unit columns
    let mut t = z.mul_unchecked(&x);
    for j in 0..m {
        let mut col: Vec<Complex64> = (0..m).map(|i| t[(i, j)] * scaling[i]).collect();
        normalize(&mut col);
        for i in 0..m {
            t[(i, j)] = col[i];
        }
    }

    let a_norm = a.frobenius_norm().max(1.0);
    let residual = (0..m)
        .map(|j| {
            let v = t.column(j);
            let av = a.mul_vec(&v);
            let r: Vec<Complex64> = av.iter().zip(&v).map(|(x, y)| x - eigenvalues[j] * y).collect();
            vec_norm(&r)
        })
        .fold(0.0, f64::max);

    let lu = t.lu();
    let rcond = lu.as_ref().map(|lu| lu.rcond()).unwrap_or(0.0);
    let t_inverse = lu.and_then(|lu| lu.inverse()).ok();

    let (kappa, kappa_exact) = match &t_inverse {
        None => (f64::INFINITY, false),
        Some(inv) => {
            let (s1, ok1) = largest_singular_value(&t, 1e-10, 5000);
            let (s2, ok2) = largest_singular_value(inv, 1e-10, 5000);
            if ok1 && ok2 {
                ((s1 * s2).max(1.0), true)
            } else {
                ((t.frobenius_norm() * inv.frobenius_norm()).max(1.0), false)
            }
        }
    };

    let identity_error = t_inverse
        .as_ref()
        .map(|inv| t.mul_unchecked(inv).shift(Complex64::new(-1.0, 0.0)).frobenius_norm())
        .unwrap_or(f64::INFINITY);
    let diagonalizable = rcond >= 1e3 * f64::EPSILON * m as f64
        && residual <= opts.diag_residual_tol * a_norm
        && identity_error <= 1e-8 * (m as f64).sqrt();

    Ok(EigenSystem {
        eigenvalues,
        t_matrix: t,
        t_inverse,
        kappa,
        kappa_exact,
        diagonalizable,
        residual,
    })
}

fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity `D⁻¹ A D` with powers of two equalizing row and column norms.
fn balance(a: &DenseMatrix) -> (DenseMatrix, Vec<f64>) {
    let m = a.dim();
    let mut b = a.clone();
    let mut d = vec![1.0; m];
    const RADIX: f64 = 2.0;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..m {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..m {
                if j != i {
                    c += abs1(b[(j, i)]);
                    r += abs1(b[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c >= g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                d[i] *= f;
                for j in 0..m {
                    b[(i, j)] /= f;
                    b[(j, i)] *= f;
                }
            }
        }
    }
    (b, d)
}

/// Reduces `h` to upper Hessenberg form in place and returns the accumulated unitary `Q`.
fn hessenberg(h: &mut DenseMatrix) -> DenseMatrix {
    let m = h.dim();
    let mut q = DenseMatrix::identity(m);
    for k in 0..m.saturating_sub(2) {
        let mut v: Vec<Complex64> = (k + 1..m).map(|i| h[(i, k)]).collect();
        let xnorm = vec_norm(&v);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if v[0] == ZERO { Complex64::new(1.0, 0.0) } else { v[0] / v[0].norm() };
        v[0] += phase * xnorm;
        normalize(&mut v);
        // H ← (I − 2vvᴴ) H
        for j in 0..m {
            let dot: Complex64 = (0..v.len()).map(|r| v[r].conj() * h[(k + 1 + r, j)]).sum();
            for r in 0..v.len() {
                h[(k + 1 + r, j)] -= 2.0 * v[r] * dot;
            }
        }
        // H ← H (I − 2vvᴴ), Q ← Q (I − 2vvᴴ)
        for mat in [&mut *h, &mut q] {
            for i in 0..m {
                let dot: Complex64 = (0..v.len()).map(|r| mat[(i, k + 1 + r)] * v[r]).sum();
                for r in 0..v.len() {
                    mat[(i, k + 1 + r)] -= 2.0 * dot * v[r].conj();
                }
            }
        }
        for i in k + 2..m {
            h[(i, k)] = ZERO;
        }
    }
    q
}

/// `(c, s)` with `[[c, s], [−s̄, c]] [x; y] = [r; 0]`, `c` real.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    if y == ZERO {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let n = ax.hypot(y.norm());
    (ax / n, (x / ax) * y.conj() / n)
}

/// Complex Schur form by implicit single-shift QR on a Hessenberg matrix. `z` accumulates the
/// transformations.
fn schur(h: &mut DenseMatrix, z: &mut DenseMatrix) -> Result<()> {
    let m = h.dim();
    let max_sweeps = 30 * m;
    let mut sweeps = 0usize;
    let mut stalled = 0usize;
    let mut hi = m - 1;
    let norm = h.frobenius_norm();
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let mut scale = abs1(h[(lo - 1, lo - 1)]) + abs1(h[(lo, lo)]);
            if scale == 0.0 {
                scale = norm;
            }
            if abs1(h[(lo, lo - 1)]) <= f64::EPSILON * scale {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            stalled = 0;
            continue;
        }
        sweeps += 1;
        stalled += 1;
        if sweeps > max_sweeps {
            return Err(Error::Numerical(format!(
                "QR iteration did not converge within {max_sweeps} sweeps"
            )));
        }

        let shift = if stalled.is_multiple_of(10) {
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for k in lo..hi {
            let (x, y) = if k == lo {
                (h[(lo, lo)] - shift, h[(lo + 1, lo)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let first_col = if k == lo { lo } else { k - 1 };
            for j in first_col..m {
                let (h1, h2) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = c * h1 + s * h2;
                h[(k + 1, j)] = -s.conj() * h1 + c * h2;
            }
            let last_row = (k + 2).min(hi);
            for i in 0..=last_row {
                let (h1, h2) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = h1 * c + h2 * s.conj();
                h[(i, k + 1)] = -h1 * s + h2 * c;
            }
            for i in 0..m {
                let (z1, z2) = (z[(i, k)], z[(i, k + 1)]);
                z[(i, k)] = z1 * c + z2 * s.conj();
                z[(i, k + 1)] = -z1 * s + z2 * c;
            }
            if k > lo {
                h[(k + 1, k - 1)] = ZERO;
            }
        }
    }
    Ok(())
}

/// Eigenvalue of `[[a, b], [c, d]]` closer to `d`.
fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (l1, l2) = (mid + disc, mid - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvectors of an upper-triangular matrix as columns; column k has `x_k = 1`, zeros below.
///
/// Tiny denominators `t_jj − t_kk` (repeated eigenvalues) are replaced by `ε‖T‖` so that
/// defective structure shows up as nearly parallel columns instead of infinities.
fn triangular_eigenvectors(t: &DenseMatrix) -> DenseMatrix {
    let m = t.dim();
    let small = (f64::EPSILON * t.frobenius_norm()).max(f64::MIN_POSITIVE);
    let mut x = DenseMatrix::zeros(m);
    let mut col = vec![ZERO; m];
    for k in 0..m {
        col.iter_mut().for_each(|v| *v = ZERO);
        col[k] = Complex64::new(1.0, 0.0);
        let lambda = t[(k, k)];
        for j in (0..k).rev() {
            let sum: Complex64 = (j + 1..=k).map(|i| t[(j, i)] * col[i]).sum();
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < small {
                denom = Complex64::new(small, 0.0);
            }
            col[j] = -sum / denom;
            let big = col[j].norm();
            if big > 1e150 {
                for v in col[j..=k].iter_mut() {
                    *v /= big;
                }
            }
        }
        normalize(&mut col[..=k]);
        for i in 0..=k {
            x[(i, k)] = col[i];
        }
    }
    x
}
