//! Structural properties of the scalar functions, the optimizers, the matrix layer and the
//! experiment pipeline.

use laguerre_expm::bench::testgen::{random_diagonalizable, random_real_stable, random_well_conditioned};
use laguerre_expm::bench::{build_ladder_matrix, run_experiment, LadderConfig, Mode, Source, SpectrumSampleConfig, Stream};
use laguerre_expm::io::{matrix_from_csv, matrix_to_csv};
use laguerre_expm::matrix::{
    direct_error_oracle, eigendecompose, error_report, expm_t, is_stable, series_coeffs_alpha0, series_coeffs_general,
    DenseMatrix, EigenOptions, OracleOptions, StabilityCheck,
};
use laguerre_expm::scalar::{s_coeff, s_coeff_seq, s_coeff_seq_alpha0, zeta, BasisParams};
use laguerre_expm::spectrum::{
    find_tau0, minimize_phi, minimize_phi_from, phi, psi, SimplexOptions, Spectrum, Tau0Options,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn lambda_strategy() -> impl Strategy<Value = Complex64> {
    (-5.0..-0.1f64, -5.0..5.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn spectrum_strategy(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(lambda_strategy(), 1..=max_len)
}

fn alpha_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), -0.9..5.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugate_eigenvalue_gives_conjugate_coefficients(
        lambda in lambda_strategy(), tau in 0.1..50.0f64, alpha in alpha_strategy(), n in 0usize..=30,
    ) {
        let p = BasisParams::new(tau, alpha, n).unwrap();
        let s = s_coeff(n, &p, lambda).unwrap();
        let c = s_coeff(n, &p, lambda.conj()).unwrap();
        let scale = s.norm().max(f64::MIN_POSITIVE);
        prop_assert!((c - s.conj()).norm() <= 4.0 * f64::EPSILON * scale, "{s} vs {c}");
    }

    #[test]
    fn alpha0_recursion_matches_general_coefficients(
        lambda in lambda_strategy(), tau in 0.1..50.0f64, n in 0usize..=30,
    ) {
        let p = BasisParams::alpha0(tau, n).unwrap();
        let rec = s_coeff_seq_alpha0(&p, lambda).unwrap().values;
        for (k, r) in rec.iter().enumerate() {
            let g = s_coeff(k, &p, lambda).unwrap();
            prop_assert!((g - r).norm() <= 1e-12 * g.norm().max(r.norm()), "k={k}: {g} vs {r}");
        }
    }

    #[test]
    fn parseval_consistency(lambda in lambda_strategy(), tau in 0.1..50.0f64, alpha in alpha_strategy()) {
        let p = BasisParams::new(tau, alpha, 40).unwrap();
        let energy: f64 = s_coeff_seq(&p, lambda).unwrap().values.iter().map(|s| s.norm_sqr()).sum();
        let total = energy + zeta(&p, lambda).unwrap();
        prop_assert!(rel(total, 1.0 / (-2.0 * lambda.re)) <= 1e-10);
    }

    #[test]
    fn zeta_non_increasing_in_n(lambda in lambda_strategy(), tau in 0.1..50.0f64, alpha in alpha_strategy()) {
        let mut prev = f64::INFINITY;
        for n in 0..=50 {
            let z = zeta(&BasisParams::new(tau, alpha, n).unwrap(), lambda).unwrap();
            prop_assert!(z >= 0.0 && z <= prev * (1.0 + 1e-12), "n={n}: {z} after {prev}");
            prev = z;
        }
    }

    #[test]
    fn zeta_scale_covariance(
        lambda in lambda_strategy(), tau in 0.1..20.0f64, alpha in alpha_strategy(), n in 0usize..=30,
    ) {
        let z = zeta(&BasisParams::new(tau, alpha, n).unwrap(), lambda).unwrap();
        // For α ≠ 0 the Parseval complement amplifies coefficient rounding by ‖h‖²/ζ; between the
        // complement's well-conditioned range and the direct-tail range the identity holds only
        // to about ε‖h‖²/ζ.
        let frac = z * (-2.0 * lambda.re);
        prop_assume!(alpha == 0.0 || frac >= 1e-2 || frac < 1e-9);
        for c in [0.5, 2.0, 10.0] {
            let zc = zeta(&BasisParams::new(c * tau, alpha, n).unwrap(), lambda * c).unwrap();
            prop_assert!(rel(zc, z / c) <= 1e-12, "c={c}: {zc} vs {}", z / c);
        }
    }

    #[test]
    fn phi_dominates_psi(eigs in spectrum_strategy(8), tau in 0.1..50.0f64, alpha in alpha_strategy(), n in 0usize..=20) {
        let s = Spectrum::new(eigs).unwrap();
        let (f, g) = (phi(n, tau, alpha, &s).unwrap(), psi(n, tau, alpha, &s).unwrap());
        prop_assert!(f >= g && g >= 0.0);
        prop_assert!(f <= s.len() as f64 * g * (1.0 + 1e-12));
    }

    #[test]
    fn functionals_ignore_spectrum_order(eigs in spectrum_strategy(8), tau in 0.1..50.0f64, alpha in alpha_strategy(), n in 0usize..=20) {
        let s = Spectrum::new(eigs.clone()).unwrap();
        let r = Spectrum::new(eigs.into_iter().rev().collect()).unwrap();
        prop_assert!(rel(phi(n, tau, alpha, &s).unwrap(), phi(n, tau, alpha, &r).unwrap()) <= 1e-14);
        prop_assert_eq!(psi(n, tau, alpha, &s).unwrap(), psi(n, tau, alpha, &r).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tau0_is_a_local_minimum(eigs in spectrum_strategy(10), n in 1usize..=20) {
        let s = Spectrum::new(eigs).unwrap();
        let r = find_tau0(n, &s, &Tau0Options::default()).unwrap();
        let f0 = phi(n, r.tau_opt, 0.0, &s).unwrap();
        for d in [-1e-3, 1e-3] {
            let f = phi(n, r.tau_opt * (1.0 + d), 0.0, &s).unwrap();
            prop_assert!(f >= f0 * (1.0 - 1e-12), "{f} < {f0}");
        }
    }

    #[test]
    fn optimizers_ignore_spectrum_order(eigs in spectrum_strategy(6), n in 1usize..=12) {
        let s = Spectrum::new(eigs.clone()).unwrap();
        let r = Spectrum::new(eigs.into_iter().rev().collect()).unwrap();
        let (a, b) = (
            find_tau0(n, &s, &Tau0Options::default()).unwrap(),
            find_tau0(n, &r, &Tau0Options::default()).unwrap(),
        );
        prop_assert!(rel(a.tau_opt, b.tau_opt) <= 1e-8);
        let (a, b) = (
            minimize_phi(n, &s, &SimplexOptions::default()).unwrap(),
            minimize_phi(n, &r, &SimplexOptions::default()).unwrap(),
        );
        prop_assert!(rel(a.phi_min, b.phi_min) <= 1e-6);
    }

    #[test]
    fn full_stage_never_worse(eigs in spectrum_strategy(10), n in 1usize..=15) {
        let s = Spectrum::new(eigs).unwrap();
        let opts = SimplexOptions::default();
        let stage0 = find_tau0(n, &s, &opts.tau0).unwrap();
        let stage1 = minimize_phi_from(n, &s, &stage0, &opts).unwrap();
        prop_assert!(stage1.phi_min <= stage0.phi_min);
        prop_assert!(stage1.alpha_opt >= opts.alpha_bounds.0 && stage1.alpha_opt <= opts.alpha_bounds.1);
    }

    #[test]
    fn optimal_scale_follows_spectrum_scale(eigs in spectrum_strategy(6), n in 1usize..=12, c in 0.2..5.0f64) {
        let s = Spectrum::new(eigs).unwrap();
        let sc = s.scaled(c).unwrap();
        let (a, b) = (
            find_tau0(n, &s, &Tau0Options::default()).unwrap(),
            find_tau0(n, &sc, &Tau0Options::default()).unwrap(),
        );
        prop_assert!(rel(b.tau_opt, c * a.tau_opt) <= 1e-8);
        let opts = SimplexOptions::default();
        let (a1, b1) = (minimize_phi(n, &s, &opts).unwrap(), minimize_phi(n, &sc, &opts).unwrap());
        // φ(cτ, α; cΛ) = φ(τ, α; Λ)/c, so the optimum value must scale and the location up to the
        // flatness of the minimum. Minima can sit at φ ≈ 0, hence the floor relative to Σ‖h_λ‖².
        let energy: f64 = s.eigenvalues().iter().map(|l| 1.0 / (-2.0 * l.re)).sum();
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-6 * x.abs().max(y.abs()) + 1e-12 * energy;
        prop_assert!(close(b1.phi_min * c, a1.phi_min));
        let at_mapped = phi(n, a1.tau_opt * c, a1.alpha_opt, &sc).unwrap();
        prop_assert!(close(at_mapped * c, b1.phi_min * c));
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn matrix_paths_agree_on_diagonalizable_matrices() {
    for seed in 0..50u64 {
        let k = random_diagonalizable(1 + (seed % 6) as usize, 300 + seed).unwrap();
        let eig = eigendecompose(&k.a, &EigenOptions::default()).unwrap();
        let tau = 0.5 + (seed % 7) as f64;
        let p = BasisParams::alpha0(tau, 12).unwrap();
        let rec = series_coeffs_alpha0(&k.a, tau, 12, StabilityCheck::Verify).unwrap();
        let gen = series_coeffs_general(&eig, &p).unwrap();
        for (r, g) in rec.coeffs.iter().zip(&gen.coeffs) {
            let diff = r.sub(g).unwrap().frobenius_norm();
            assert!(diff <= 1e-8 * r.frobenius_norm(), "seed {seed}: {diff}");
        }
    }
}

#[test]
fn coefficients_follow_similarity() {
    let mut s = Stream::new(11, 0);
    for seed in 0..20u64 {
        let a = random_real_stable(2 + (seed % 4) as usize, 400 + seed).unwrap();
        let p = random_well_conditioned(&mut s, a.dim()).unwrap();
        let pa = p.matmul(&a).unwrap().matmul(&p.inverse().unwrap()).unwrap();
        for alpha in [0.0, 0.6] {
            let params = BasisParams::new(2.0, alpha, 8).unwrap();
            let base = series_coeffs_general(&eigendecompose(&a, &EigenOptions::default()).unwrap(), &params).unwrap();
            let moved = series_coeffs_general(&eigendecompose(&pa, &EigenOptions::default()).unwrap(), &params).unwrap();
            for (b, m) in base.coeffs.iter().zip(&moved.coeffs) {
                let expect = p.matmul(b).unwrap().matmul(&p.inverse().unwrap()).unwrap();
                let diff = expect.sub(m).unwrap().frobenius_norm();
                assert!(diff <= 1e-7 * expect.frobenius_norm().max(1e-300), "seed {seed} alpha {alpha}: {diff}");
            }
        }
    }
}

#[test]
fn real_matrix_gives_real_coefficients() {
    for seed in 0..20u64 {
        let a = random_real_stable(2 + (seed % 5) as usize, 500 + seed).unwrap();
        let eig = eigendecompose(&a, &EigenOptions::default()).unwrap();
        for alpha in [0.0, -0.4, 1.7] {
            let series = series_coeffs_general(&eig, &BasisParams::new(1.5, alpha, 10).unwrap()).unwrap();
            for s in &series.coeffs {
                assert!(s.max_abs_imag() <= 1e-12 * s.frobenius_norm(), "seed {seed} alpha {alpha}");
            }
        }
        let series = series_coeffs_alpha0(&a, 1.5, 10, StabilityCheck::Verify).unwrap();
        assert!(series.coeffs.iter().all(|s| s.max_abs_imag() <= 1e-12 * s.frobenius_norm()));
    }
}

#[test]
fn bounds_sandwich_the_true_error() {
    for seed in 0..15u64 {
        let k = random_diagonalizable(2 + (seed % 4) as usize, 600 + seed).unwrap();
        let eig = eigendecompose(&k.a, &EigenOptions::default()).unwrap();
        let alpha = [0.0, -0.3, 0.8][(seed % 3) as usize];
        let p = BasisParams::new(1.0 + seed as f64 * 0.3, alpha, 6).unwrap();
        let series = series_coeffs_general(&eig, &p).unwrap();
        let oracle = direct_error_oracle(&k.a, &series, &OracleOptions::default()).unwrap();
        let b = error_report(&eig, &p).unwrap();
        assert!(oracle.converged);
        assert!(b.lower <= oracle.error + 1e-8, "seed {seed}: {} > {}", b.lower, oracle.error);
        assert!(oracle.error <= b.upper_phi.unwrap() + 1e-8, "seed {seed}");
        assert!(b.upper_phi.unwrap() <= b.upper_psi.unwrap() * (1.0 + 1e-12));
    }
}

#[test]
fn norm_inequalities() {
    let mut s = Stream::new(12, 0);
    for m in 1..8 {
        let a = random_well_conditioned(&mut s, m).unwrap().shift(c(-1.0, 0.3));
        let b = random_well_conditioned(&mut s, m).unwrap();
        assert!(a.norm_2() <= a.frobenius_norm() * (1.0 + 1e-12));
        let ab = a.matmul(&b).unwrap().frobenius_norm();
        assert!(ab <= a.norm_2() * b.frobenius_norm() * (1.0 + 1e-12));
    }
}

#[test]
fn matrix_text_formats_round_trip_bit_exact() {
    let mut s = Stream::new(13, 0);
    for m in [1usize, 3, 7] {
        let data = (0..m * m)
            .map(|_| c(s.normal() * 10f64.powf(s.uniform_in(-300.0, 300.0)), s.normal() / 3.0))
            .collect();
        let a = DenseMatrix::new(m, data).unwrap();
        let from_csv = matrix_from_csv(&matrix_to_csv(&a)).unwrap();
        let from_json: DenseMatrix = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        for back in [from_csv, from_json] {
            for (x, y) in a.as_slice().iter().zip(back.as_slice()) {
                assert_eq!((x.re.to_bits(), x.im.to_bits()), (y.re.to_bits(), y.im.to_bits()));
            }
        }
    }
}

#[test]
fn truncated_series_converges_to_exponential() {
    let a = random_real_stable(4, 700).unwrap();
    let eig = eigendecompose(&a, &EigenOptions::default()).unwrap();
    let spectrum = eig.spectrum().unwrap();
    let opt = find_tau0(30, &spectrum, &Tau0Options::default()).unwrap();
    let series = series_coeffs_alpha0(&a, opt.tau_opt, 30, StabilityCheck::Verify).unwrap();
    for t in [0.0, 0.3, 1.0, 4.0] {
        let err = expm_t(&a, t).unwrap().sub(&laguerre_expm::matrix::eval_series(&series, t).unwrap()).unwrap();
        assert!(err.frobenius_norm() < 1e-5, "t={t}: {}", err.frobenius_norm());
    }
}

#[test]
fn pipeline_matches_direct_optimizer() {
    for seed in [3u64, 4, 5] {
        let cfg = SpectrumSampleConfig { count: 40, seed, ..Default::default() };
        let report = run_experiment(Source::Random(cfg), 10, Mode::Alpha0, false).unwrap();
        let direct = find_tau0(10, &report.spectrum, &Tau0Options::default()).unwrap();
        assert_eq!(report.stage0.tau, direct.tau_opt);
        assert_eq!(report.stage0.sqrt_phi, direct.phi_min.sqrt());
        assert!(report.stage1.is_none());

        let full = run_experiment(Source::Random(cfg), 10, Mode::Full, false).unwrap();
        let stage1 = minimize_phi_from(10, &full.spectrum, &direct, &SimplexOptions::default()).unwrap();
        let s1 = full.stage1.unwrap();
        assert_eq!((s1.tau, s1.alpha), (stage1.tau_opt, stage1.alpha_opt));
    }
}

#[test]
fn reports_round_trip_byte_identical() {
    let cfg = LadderConfig { sections: 6, ..Default::default() };
    for mode in [Mode::Alpha0, Mode::Full] {
        let report = run_experiment(Source::Ladder(cfg), 8, mode, true).unwrap();
        let text = report.to_json().unwrap();
        let back = laguerre_expm::bench::ExperimentReport::from_json(&text).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.to_json().unwrap(), text);
    }
}

#[test]
fn ladder_stable_across_sweep() {
    let base = LadderConfig::default();
    for sections in [1usize, 10, 150] {
        for scale in [0.5, 1.0, 2.0] {
            let cfg = LadderConfig {
                sections,
                c0: base.c0 * scale,
                l0: base.l0 * scale,
                r0: base.r0 * scale,
                g0: base.g0 * scale,
            };
            let a = build_ladder_matrix(&cfg).unwrap();
            assert_eq!(a.dim(), 2 * sections);
            let report = is_stable(&eigendecompose(&a, &EigenOptions::default()).unwrap());
            assert!(report.stable, "n={sections} scale={scale}: abscissa {}", report.abscissa);
        }
    }
}

/// Seed-locked random spectrum (count 200, seed 1000), N = 10, full mode. The spectrum is committed
/// as a fixture; the numbers were recorded from the first run validated by the acceptance suite.
#[test]
fn random_spectrum_regression() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/random_seed1000.json");
    let fixture = laguerre_expm::io::read_spectrum(&path).unwrap();
    let cfg = SpectrumSampleConfig { seed: 1000, ..Default::default() };
    let drawn = laguerre_expm::bench::sample_spectrum(&cfg).unwrap();
    assert_eq!(drawn, fixture, "sampler no longer reproduces the committed draw");

    let r = run_experiment(Source::SpectrumFile { path }, 10, Mode::Full, false).unwrap();
    let s1 = r.stage1.as_ref().unwrap();
    let locked = [
        (r.stage0.tau, TAU0),
        (r.stage0.sqrt_phi, SQRT_PHI0),
        (s1.tau, TAU1),
        (s1.alpha, ALPHA1),
        (s1.sqrt_phi, SQRT_PHI1),
    ];
    for (i, (got, want)) in locked.into_iter().enumerate() {
        assert!((got - want).abs() <= 1e-9 * want.abs().max(1e-3), "field {i}: {got:e} vs {want:e}");
    }
}

const TAU0: f64 = 2.8528565205964513;
const SQRT_PHI0: f64 = 0.3380599959461628;
const TAU1: f64 = 2.8023804451393675;
const ALPHA1: f64 = -0.024577479303525246;
const SQRT_PHI1: f64 = 0.33624586854029526;
