use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Uniform RLCG ladder: `sections` identical cells sharing the totals `c0, l0, r0, g0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderConfig {
    pub sections: usize,
    pub c0: f64,
    pub l0: f64,
    pub r0: f64,
    pub g0: f64,
}

impl Default for LadderConfig {
    /// The 150-section line with `C0 = 10, L0 = 50, R0 = 170, G0 = 160`.
    fn default() -> Self {
        Self {
            sections: 150,
            c0: 10.0,
            l0: 50.0,
            r0: 170.0,
            g0: 160.0,
        }
    }
}

impl LadderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sections == 0 {
            return Err(Error::Config("ladder needs at least one section".into()));
        }
        if self.sections > crate::matrix::M_MAX / 2 {
            return Err(Error::Config(format!(
                "{} sections exceed the matrix size limit {}",
                self.sections,
                crate::matrix::M_MAX
            )));
        }
        for (name, v) in [("c0", self.c0), ("l0", self.l0), ("r0", self.r0), ("g0", self.g0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Per-section `(C, L, R, G)`.
    pub fn per_section(&self) -> (f64, f64, f64, f64) {
        let n = self.sections as f64;
        (self.c0 / n, self.l0 / n, self.r0 / n, self.g0 / n)
    }
}

/// State matrix of the ladder in the variables `(U_1..U_n, I_1..I_n)`.
///
/// Cell `k` has a series `R–L` branch carrying `I_k` from node `k` back towards node `k−1`, and a
/// shunt `G‖C` at node `k`:
///
/// ```text
/// C U_k' = I_{k+1} − I_k − G U_k
/// L I_k' = U_k − U_{k−1} − R I_k
/// ```
///
/// with the input port short-circuited (`U_0 = 0`) and the far end open (`I_{n+1} = 0`). One section
/// gives `[[−G/C, −1/C], [1/L, −R/L]]`.
pub fn build_ladder_matrix(cfg: &LadderConfig) -> Result<DenseMatrix> {
    cfg.validate()?;
    let n = cfg.sections;
    let (c, l, r, g) = cfg.per_section();
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    let mut set = |i: usize, j: usize, v: f64| a[i * m + j] = v;
    for k in 0..n {
        let (u, i) = (k, n + k);
        set(u, u, -g / c);
        set(u, i, -1.0 / c);
        if k + 1 < n {
            set(u, i + 1, 1.0 / c);
        }
        set(i, i, -r / l);
        set(i, u, 1.0 / l);
        if k > 0 {
            set(i, u - 1, -1.0 / l);
        }
    }
    DenseMatrix::from_real(m, &a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{eigendecompose, is_stable, EigenOptions};

    #[test]
    fn single_section() {
        let cfg = LadderConfig {
            sections: 1,
            c0: 2.0,
            l0: 4.0,
            r0: 3.0,
            g0: 5.0,
        };
        let a = build_ladder_matrix(&cfg).unwrap();
        let want = [-2.5, -0.5, 0.25, -0.75];
        for (z, w) in a.as_slice().iter().zip(want) {
            assert_eq!(z.re, w);
            assert_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn entries_scale_with_sections() {
        let base = LadderConfig::default();
        let a1 = build_ladder_matrix(&LadderConfig { sections: 3, ..base }).unwrap();
        let a2 = build_ladder_matrix(&LadderConfig { sections: 6, ..base }).unwrap();
        // Doubling n halves every element value: G/C and R/L stay, 1/C and 1/L double.
        assert_eq!(a2[(0, 0)].re, a1[(0, 0)].re);
        assert_eq!(a2[(6, 6)].re, a1[(3, 3)].re);
        assert_eq!(a2[(0, 6)].re, 2.0 * a1[(0, 3)].re);
        assert_eq!(a2[(6, 0)].re, 2.0 * a1[(3, 0)].re);
    }

    #[test]
    fn stable_over_sweep() {
        let base = LadderConfig::default();
        for n in [1usize, 10, 40] {
            for s in [0.5, 1.0, 2.0] {
                let cfg = LadderConfig {
                    sections: n,
                    c0: base.c0 * s,
                    l0: base.l0 * s,
                    r0: base.r0 * s,
                    g0: base.g0 * s,
                };
                let eig = eigendecompose(&build_ladder_matrix(&cfg).unwrap(), &EigenOptions::default()).unwrap();
                assert!(is_stable(&eig).stable, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn rejects_bad_config() {
        let bad = LadderConfig { r0: 0.0, ..LadderConfig::default() };
        assert!(matches!(build_ladder_matrix(&bad), Err(Error::Config(_))));
        let bad = LadderConfig { sections: 0, ..LadderConfig::default() };
        assert!(matches!(build_ladder_matrix(&bad), Err(Error::Config(_))));
        let bad = LadderConfig { c0: f64::NAN, ..LadderConfig::default() };
        assert!(matches!(build_ladder_matrix(&bad), Err(Error::Config(_))));
    }
}
