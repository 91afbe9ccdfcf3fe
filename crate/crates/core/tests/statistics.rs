use cvclone::gaussian::{GaussianState, Quadrature};
use cvclone::interactions::{evolve, squeezing_hamiltonian};
use cvclone::telecloning::{teleclone, TeleclonePlan};
use cvclone::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

/// Two-sided Kolmogorov–Smirnov statistic against a normal law.
fn ks_statistic(mut samples: Vec<f64>, law: &Normal) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = law.cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn homodyne_outcomes_follow_the_marginal() {
    let s = evolve(
        &squeezing_hamiltonian(2, std::f64::consts::FRAC_PI_2).unwrap(),
        0.4,
    )
    .unwrap();
    let state = GaussianState::coherent(&[Complex64::new(0.7, -0.2); 3])
        .unwrap()
        .apply(&s)
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (mode, quad, idx) in [(0, Quadrature::X, 0), (1, Quadrature::P, 3)] {
        let law = Normal::new(state.mean()[idx], state.cov()[(idx, idx)].sqrt()).unwrap();
        let samples: Vec<f64> = (0..10_000)
            .map(|_| state.homodyne(mode, quad, None, &mut rng).unwrap().outcome)
            .collect();
        // 1% critical value for n = 10⁴.
        let d = ks_statistic(samples, &law);
        assert!(d < 1.63 / 100.0, "mode {mode}: D = {d}");
    }
}

#[test]
fn monte_carlo_converges_on_the_analytic_fidelity() {
    let xi = Complex64::new(0.8, 0.5);
    for n in [2, 4] {
        let report = teleclone(n, xi, &TeleclonePlan::new(n, 7, 10_000).unwrap()).unwrap();
        let analytic = n as f64 / (2 * n - 1) as f64;
        assert!(
            (report.monte_carlo_fidelity_mean - analytic).abs() < 1e-2,
            "{report:?}"
        );
        assert!(
            (report.monte_carlo_clone_mean.re - xi.re).abs()
                < 3.0 * report.monte_carlo_clone_mean_stderr[0]
        );
        assert!(
            (report.monte_carlo_clone_mean.im - xi.im).abs()
                < 3.0 * report.monte_carlo_clone_mean_stderr[1]
        );
    }
}

#[test]
fn standard_error_halves_when_samples_quadruple() {
    let xi = Complex64::new(-0.4, 1.0);
    let small = teleclone(3, xi, &TeleclonePlan::new(3, 5, 4_000).unwrap()).unwrap();
    let large = teleclone(3, xi, &TeleclonePlan::new(3, 5, 16_000).unwrap()).unwrap();
    let ratio = large.monte_carlo_fidelity_stderr / small.monte_carlo_fidelity_stderr;
    assert!((ratio - 0.5).abs() < 0.05, "ratio {ratio}");
}
