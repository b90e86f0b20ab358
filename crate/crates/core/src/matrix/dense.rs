use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const M_MAX: usize = 1024;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix, row-major.
///
/// Serializes as `{"m": M, "entries": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct DenseMatrix {
    m: usize,
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    m: usize,
    entries: Vec<Complex64>,
}

impl TryFrom<RawMatrix> for DenseMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        DenseMatrix::new(raw.m, raw.entries)
    }
}

impl From<DenseMatrix> for RawMatrix {
    fn from(a: DenseMatrix) -> Self {
        RawMatrix {
            m: a.m,
            entries: a.data,
        }
    }
}

impl DenseMatrix {
    /// Validating constructor: `data.len() == m²`, `1 ≤ m ≤ M_MAX`, all entries finite.
    pub fn new(m: usize, data: Vec<Complex64>) -> Result<Self> {
        if m == 0 || m > M_MAX {
            return Err(Error::Shape(format!("dimension {m} outside 1..={M_MAX}")));
        }
        if data.len() != m * m {
            return Err(Error::Shape(format!(
                "{} entries do not form a {m}x{m} matrix",
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Domain(format!("non-finite entry at ({}, {})", k / m, k % m)));
        }
        Ok(Self { m, data })
    }

    /// Square matrix from rows; fails unless every row has as many entries as there are rows.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Shape("matrix rows must all have length equal to the row count".into()));
        }
        Self::new(m, rows.into_iter().flatten().collect())
    }

    pub fn from_real(m: usize, data: &[f64]) -> Result<Self> {
        Self::new(m, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_diag(diag: &[Complex64]) -> Result<Self> {
        let m = diag.len();
        let mut data = vec![ZERO; m * m];
        for (i, &d) in diag.iter().enumerate() {
            data[i * m + i] = d;
        }
        Self::new(m, data)
    }

    pub fn zeros(m: usize) -> Self {
        assert!((1..=M_MAX).contains(&m), "dimension {m} outside 1..={M_MAX}");
        Self {
            m,
            data: vec![ZERO; m * m],
        }
    }

    pub fn identity(m: usize) -> Self {
        let mut a = Self::zeros(m);
        for i in 0..m {
            a.data[i * m + i] = ONE;
        }
        a
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.m..(i + 1) * self.m]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.m).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.m).map(|i| self[(i, i)]).collect()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        // scaled to avoid overflow for huge entries
        let scale = self.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let s: f64 = self.data.iter().map(|z| (z / scale).norm_sqr()).sum();
        scale * s.sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.m)
            .map(|j| (0..self.m).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> Self {
        let m = self.m;
        let mut out = Self::zeros(m);
        for i in 0..m {
            for j in 0..m {
                out.data[j * m + i] = self.data[i * m + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            m: self.m,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// `self + c I`.
    pub fn shift(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.m {
            out.data[i * self.m + i] += c;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            m: self.m,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            m: self.m,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// `self += c · other`.
    pub(crate) fn axpy(&mut self, c: Complex64, other: &Self) {
        debug_assert_eq!(self.m, other.m);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let m = self.m;
        let mut out = vec![ZERO; m * m];
        for i in 0..m {
            let out_row = &mut out[i * m..(i + 1) * m];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * m..(k + 1) * m];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Self { m, data: out }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.m)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::Shape(format!("dimension mismatch: {} vs {}", self.m, other.m)));
        }
        Ok(())
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<Lu> {
        Lu::factor(self)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.lu()?.inverse()
    }

    /// Largest singular value by power iteration on `AᴴA`.
    pub fn norm_2(&self) -> f64 {
        largest_singular_value(self, 1e-12, 5000).0
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.m && j < self.m, "index ({i}, {j}) out of bounds for {0}x{0}", self.m);
        &self.data[i * self.m + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.m && j < self.m, "index ({i}, {j}) out of bounds for {0}x{0}", self.m);
        &mut self.data[i * self.m + j]
    }
}

/// `P A = L U` with unit lower `L`; both factors share one array.
#[derive(Debug, Clone)]
pub struct Lu {
    factors: DenseMatrix,
    perm: Vec<usize>,
    norm_1: f64,
}

impl Lu {
    fn factor(a: &DenseMatrix) -> Result<Self> {
        let m = a.m;
        let mut f = a.clone();
        let mut perm: Vec<usize> = (0..m).collect();
        for k in 0..m {
            let p = (k..m)
                .max_by(|&x, &y| f.data[x * m + k].norm().total_cmp(&f.data[y * m + k].norm()))
                .expect("non-empty range");
            if f.data[p * m + k] == ZERO {
                return Err(Error::Numerical(format!("matrix is singular (zero pivot in column {k})")));
            }
            if p != k {
                for j in 0..m {
                    f.data.swap(k * m + j, p * m + j);
                }
                perm.swap(k, p);
            }
            let pivot = f.data[k * m + k];
            for i in k + 1..m {
                let l = f.data[i * m + k] / pivot;
                f.data[i * m + k] = l;
                if l == ZERO {
                    continue;
                }
                for j in k + 1..m {
                    let u = f.data[k * m + j];
                    f.data[i * m + j] -= l * u;
                }
            }
        }
        Ok(Self {
            factors: f,
            perm,
            norm_1: a.norm_1(),
        })
    }

    pub fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let m = self.factors.m;
        let f = &self.factors.data;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..m {
            let mut s = x[i];
            for j in 0..i {
                s -= f[i * m + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..m).rev() {
            let mut s = x[i];
            for j in i + 1..m {
                s -= f[i * m + j] * x[j];
            }
            x[i] = s / f[i * m + i];
        }
        x
    }

    /// `A⁻¹ B`.
    pub fn solve(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let m = self.factors.m;
        if b.m != m {
            return Err(Error::Shape(format!("dimension mismatch: {m} vs {}", b.m)));
        }
        let mut out = DenseMatrix::zeros(m);
        for j in 0..m {
            let x = self.solve_vec(&b.column(j));
            for i in 0..m {
                out.data[i * m + j] = x[i];
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        self.solve(&DenseMatrix::identity(self.factors.m))
    }

    /// Reciprocal 1-norm condition number `1 / (‖A‖₁ ‖A⁻¹‖₁)`, from the explicit inverse.
    pub fn rcond(&self) -> f64 {
        match self.inverse() {
            Ok(inv) => {
                let denom = self.norm_1 * inv.norm_1();
                if denom.is_finite() && denom > 0.0 {
                    1.0 / denom
                } else {
                    0.0
                }
            }
            Err(_) => 0.0,
        }
    }
}

/// Power iteration on `AᴴA`. Returns the estimate and whether the relative change of the
/// Rayleigh quotient fell below `tol` within `max_iter` steps.
pub(crate) fn largest_singular_value(a: &DenseMatrix, tol: f64, max_iter: usize) -> (f64, bool) {
    let m = a.m;
    let ah = a.adjoint();
    // deterministic start vector with no special alignment
    let mut v: Vec<Complex64> = (0..m)
        .map(|k| Complex64::new(1.0 + (k as f64 * 0.7).sin(), 0.3 * (k as f64 * 1.3).cos()))
        .collect();
    normalize(&mut v);
    let mut estimate = 0.0;
    for _ in 0..max_iter {
        let w = ah.mul_vec(&a.mul_vec(&v));
        let rayleigh: f64 = w.iter().zip(&v).map(|(x, y)| (x * y.conj()).re).sum();
        let norm = vec_norm(&w);
        if norm == 0.0 {
            return (0.0, true);
        }
        v = w.into_iter().map(|x| x / norm).collect();
        let next = rayleigh.max(0.0).sqrt();
        if (next - estimate).abs() <= tol * next {
            return (next.max(estimate), true);
        }
        estimate = next;
    }
    (estimate, false)
}

pub(crate) fn vec_norm(v: &[Complex64]) -> f64 {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    scale * v.iter().map(|z| (z / scale).norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn normalize(v: &mut [Complex64]) {
    let n = vec_norm(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}
