//! Seeded random stable matrices with known eigenvectors, for tests and the validation table.

use num_complex::Complex64;

use crate::error::Result;
use crate::matrix::DenseMatrix;

use super::rng::Stream;

/// `A = T D T⁻¹` together with its factors.
#[derive(Debug, Clone)]
pub struct KnownMatrix {
    pub a: DenseMatrix,
    pub t: DenseMatrix,
    pub eigenvalues: Vec<Complex64>,
}

/// Stable eigenvalues with `Re λ ∈ [−4, −0.3]` and `Im λ ∈ [−3, 3]`.
pub fn random_eigenvalues(s: &mut Stream, m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|_| Complex64::new(s.uniform_in(-4.0, -0.3), s.uniform_in(-3.0, 3.0)))
        .collect()
}

/// `I + E/2` with `E` uniform complex entries in the unit box: invertible with moderate `κ`.
pub fn random_well_conditioned(s: &mut Stream, m: usize) -> Result<DenseMatrix> {
    let data = (0..m * m)
        .map(|k| {
            let diag = if k % (m + 1) == 0 { 1.0 } else { 0.0 };
            Complex64::new(diag + 0.5 * s.uniform_in(-1.0, 1.0), 0.5 * s.uniform_in(-1.0, 1.0))
        })
        .collect();
    DenseMatrix::new(m, data)
}

/// Complex diagonalizable stable `m × m` matrix.
pub fn random_diagonalizable(m: usize, seed: u64) -> Result<KnownMatrix> {
    let mut s = Stream::new(seed, 0);
    let eigenvalues = random_eigenvalues(&mut s, m);
    let t = random_well_conditioned(&mut s, m)?;
    let a = t.matmul(&DenseMatrix::from_diag(&eigenvalues)?)?.matmul(&t.inverse()?)?;
    Ok(KnownMatrix { a, t, eigenvalues })
}

/// Random stable diagonal matrix.
pub fn random_diagonal(m: usize, seed: u64) -> Result<DenseMatrix> {
    let mut s = Stream::new(seed, 0);
    DenseMatrix::from_diag(&random_eigenvalues(&mut s, m))
}

/// Real stable matrix `P B P⁻¹`, `B` block diagonal with `2×2` rotation-scaling blocks
/// `[[a, b], [−b, a]]` (eigenvalues `a ± ib`) and a trailing real eigenvalue for odd `m`.
pub fn random_real_stable(m: usize, seed: u64) -> Result<DenseMatrix> {
    let mut s = Stream::new(seed, 0);
    let mut b = vec![0.0; m * m];
    let mut k = 0;
    while k < m {
        let a = s.uniform_in(-4.0, -0.3);
        if k + 1 < m {
            let w = s.uniform_in(0.1, 3.0);
            b[k * m + k] = a;
            b[(k + 1) * m + k + 1] = a;
            b[k * m + k + 1] = w;
            b[(k + 1) * m + k] = -w;
            k += 2;
        } else {
            b[k * m + k] = a;
            k += 1;
        }
    }
    let p: Vec<f64> = (0..m * m)
        .map(|k| if k % (m + 1) == 0 { 1.0 } else { 0.0 } + 0.5 * s.uniform_in(-1.0, 1.0))
        .collect();
    let p = DenseMatrix::from_real(m, &p)?;
    p.matmul(&DenseMatrix::from_real(m, &b)?)?.matmul(&p.inverse()?)
}
