use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

use super::rng::Stream;

/// Random spectrum: `Re λ = −Maxwell(σ_maxwell)`, `Im λ ~ N(μ, σ_normal²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSampleConfig {
    pub count: usize,
    pub sigma_maxwell: f64,
    pub mu_normal: f64,
    pub sigma_normal: f64,
    pub seed: u64,
}

impl Default for SpectrumSampleConfig {
    fn default() -> Self {
        Self {
            count: 200,
            sigma_maxwell: 4.0,
            mu_normal: 0.0,
            sigma_normal: 1.0,
            seed: 0,
        }
    }
}

impl SpectrumSampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Config("sample count must be at least 1".into()));
        }
        if !(self.sigma_maxwell > 0.0 && self.sigma_maxwell.is_finite()) {
            return Err(Error::Config(format!("sigma_maxwell must be positive, got {}", self.sigma_maxwell)));
        }
        if !(self.sigma_normal > 0.0 && self.sigma_normal.is_finite()) {
            return Err(Error::Config(format!("sigma_normal must be positive, got {}", self.sigma_normal)));
        }
        if !self.mu_normal.is_finite() {
            return Err(Error::Config("mu_normal must be finite".into()));
        }
        Ok(())
    }
}

/// Draws the spectrum for `cfg`; identical seeds give identical spectra on every platform.
///
/// Real parts come from ChaCha20 stream 0 as `σ‖(n₁, n₂, n₃)‖` (zero norms are redrawn),
/// imaginary parts from stream 1.
pub fn sample_spectrum(cfg: &SpectrumSampleConfig) -> Result<Spectrum> {
    cfg.validate()?;
    let mut re_stream = Stream::new(cfg.seed, 0);
    let mut im_stream = Stream::new(cfg.seed, 1);
    let eigenvalues = (0..cfg.count)
        .map(|_| {
            let radius = loop {
                let (a, b, c) = (re_stream.normal(), re_stream.normal(), re_stream.normal());
                let r = (a * a + b * b + c * c).sqrt();
                if r > 0.0 {
                    break r;
                }
            };
            let im = cfg.mu_normal + cfg.sigma_normal * im_stream.normal();
            Complex64::new(-cfg.sigma_maxwell * radius, im)
        })
        .collect();
    Spectrum::new(eigenvalues)
}
