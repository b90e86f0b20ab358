use num_complex::Complex64;

use crate::error::{Error, Result};

/// Terminating Gauss hypergeometric polynomial `₂F₁(−n, a; b; z)`.
///
/// The (n+1)-term sum is accumulated with incrementally updated term ratios in double-double
/// arithmetic. When the plain sum would cancel badly it is replaced by the Pfaff form
/// `(1−z)^n ₂F₁(−n, b−a; b; z/(z−1))`; whichever form has the smaller sum of absolute terms,
/// i.e. the smaller rounding-error bound, is returned.
pub fn hyp2f1_terminating(n: usize, a: f64, b: f64, z: Complex64) -> Result<Complex64> {
    if !(a.is_finite() && b.is_finite() && z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("non-finite hypergeometric argument".into()));
    }
    for k in 0..n {
        if b + k as f64 == 0.0 {
            return Err(Error::Domain(format!(
                "2F1(-{n}, {a}; {b}; z): Pochhammer (b)_k vanishes at k = {k}"
            )));
        }
    }
    let (direct, direct_bound) = series_with_bound(n, a, b, z);
    if n == 0 || direct_bound <= 16.0 * direct.norm() {
        return Ok(direct);
    }
    let one_minus_z = Complex64::new(1.0, 0.0) - z;
    if one_minus_z.norm() == 0.0 {
        return Ok(direct);
    }
    let w = -z / one_minus_z;
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Ok(direct);
    }
    let (inner, inner_bound) = series_with_bound(n, b - a, b, w);
    let scale = one_minus_z.powi(n as i32);
    let pfaff_bound = inner_bound * scale.norm();
    if pfaff_bound < direct_bound {
        Ok(inner * scale)
    } else {
        Ok(direct)
    }
}

/// Partial sum and the sum of absolute values of its terms.
///
/// Term ratios and the running sum are kept in double-double arithmetic, so cancellation between
/// terms of size up to ~10¹⁵ times the result still leaves full double accuracy.
fn series_with_bound(n: usize, a: f64, b: f64, z: Complex64) -> (Complex64, f64) {
    let z = CDd::from(z);
    let mut term = CDd::from(Complex64::new(1.0, 0.0));
    let mut sum = term;
    let mut abs_sum = 1.0;
    let nf = n as f64;
    for k in 0..n {
        let kf = k as f64;
        let num = Dd::from(kf - nf).mul(Dd::sum(a, kf));
        let den = Dd::sum(b, kf).mul(Dd::from(kf + 1.0));
        term = term.mul(z).scale(num.div(den));
        sum = sum.add(term);
        abs_sum += term.to_complex().norm();
    }
    (sum.to_complex(), abs_sum)
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd {
        hi: s,
        lo: (a - (s - bb)) + (b - bb),
    }
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Dd {
    /// Exact `a + b`.
    fn sum(a: f64, b: f64) -> Self {
        two_sum(a, b)
    }

    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(r.hi, r.lo + t.lo)
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi))
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::from(q1)).neg());
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Dd::from(q2)).neg());
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2).add(Dd::from(q3))
    }
}

#[derive(Debug, Clone, Copy)]
struct CDd {
    re: Dd,
    im: Dd,
}

impl From<Complex64> for CDd {
    fn from(z: Complex64) -> Self {
        CDd {
            re: Dd::from(z.re),
            im: Dd::from(z.im),
        }
    }
}

impl CDd {
    fn add(self, o: CDd) -> CDd {
        CDd {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    fn mul(self, o: CDd) -> CDd {
        CDd {
            re: self.re.mul(o.re).add(self.im.mul(o.im).neg()),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    fn scale(self, c: Dd) -> CDd {
        CDd {
            re: self.re.mul(c),
            im: self.im.mul(c),
        }
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self.re.hi + self.re.lo, self.im.hi + self.im.lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(hyp2f1_terminating(0, 7.0, 3.0, c(0.4, 0.1)).unwrap(), c(1.0, 0.0));
        assert_relative_eq!(hyp2f1_terminating(1, 1.0, 2.0, c(1.0, 0.0)).unwrap().re, 0.5);
        assert_eq!(hyp2f1_terminating(2, 1.0, 1.0, c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn equal_parameters_give_binomial_power() {
        // ₂F₁(−n, a; a; z) = (1 − z)^n, where the plain sum cancels catastrophically for |z| ≈ 2.
        let z = c(1.9, 0.05);
        for n in [5usize, 20, 40] {
            let got = hyp2f1_terminating(n, 2.5, 2.5, z).unwrap();
            let want = (c(1.0, 0.0) - z).powi(n as i32);
            assert_relative_eq!((got - want).norm() / want.norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn pole_in_denominator_is_reported() {
        assert!(matches!(hyp2f1_terminating(3, 1.0, -2.0, c(0.3, 0.0)), Err(Error::Domain(_))));
        // b = −2 is not reached when only two terms are formed
        assert!(hyp2f1_terminating(2, 1.0, -2.0, c(0.3, 0.0)).is_ok());
    }

    #[test]
    fn matches_explicit_cubic() {
        // ₂F₁(−3, a; b; z) = 1 − 3az/b + 3a(a+1)z²/(b(b+1)) − a(a+1)(a+2)z³/(b(b+1)(b+2))
        let (a, b, z) = (0.75, 1.5, c(0.3, -0.4));
        let want = c(1.0, 0.0) - z * (3.0 * a / b) + z * z * (3.0 * a * (a + 1.0) / (b * (b + 1.0)))
            - z * z * z * (a * (a + 1.0) * (a + 2.0) / (b * (b + 1.0) * (b + 2.0)));
        let got = hyp2f1_terminating(3, a, b, z).unwrap();
        assert!((got - want).norm() < 1e-15);
    }
}
