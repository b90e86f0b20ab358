use num_complex::Complex64;

use crate::error::{Error, Result};

use super::dense::DenseMatrix;

/// Padé(13) coefficients.
const B: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
/// Largest 1-norm for which Padé(13) is accurate to double precision without scaling.
const THETA_13: f64 = 5.371920351148152;

/// `e^A` by scaling and squaring with a degree-13 Padé approximant.
pub fn expm(a: &DenseMatrix) -> Result<DenseMatrix> {
    let m = a.dim();
    let norm = a.norm_1();
    if !norm.is_finite() {
        return Err(Error::Domain("matrix exponential of a non-finite matrix".into()));
    }
    let s = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as i32 } else { 0 };
    let a = a.scale(Complex64::new(2f64.powi(-s), 0.0));
    let c = |k: usize| Complex64::new(B[k], 0.0);

    let a2 = a.mul_unchecked(&a);
    let a4 = a2.mul_unchecked(&a2);
    let a6 = a4.mul_unchecked(&a2);
    let id = DenseMatrix::identity(m);

    let mut inner = a6.scale(c(13));
    inner.axpy(c(11), &a4);
    inner.axpy(c(9), &a2);
    let mut u = a6.mul_unchecked(&inner);
    u.axpy(c(7), &a6);
    u.axpy(c(5), &a4);
    u.axpy(c(3), &a2);
    u.axpy(c(1), &id);
    let u = a.mul_unchecked(&u);

    let mut inner = a6.scale(c(12));
    inner.axpy(c(10), &a4);
    inner.axpy(c(8), &a2);
    let mut v = a6.mul_unchecked(&inner);
    v.axpy(c(6), &a6);
    v.axpy(c(4), &a4);
    v.axpy(c(2), &a2);
    v.axpy(c(0), &id);

    let p = v.add(&u)?;
    let q = v.sub(&u)?;
    let mut r = q.lu()?.solve(&p)?;
    for _ in 0..s {
        r = r.mul_unchecked(&r);
    }
    Ok(r)
}

/// `e^{At}`.
pub fn expm_t(a: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("t must be finite, got {t}")));
    }
    expm(&a.scale(Complex64::new(t, 0.0)))
}
