//! Two-pulse `1 → N` cloning of a coherent cavity state onto N vibrational modes.
//!
//! Pulse 1 (beam splitter, area `π/(2√N)`) spreads `|ξ⟩` evenly over the
//! vibrational modes as `|ξ/√N⟩` each. Pulse 2 (collective squeezer, area
//! `arccosh(√N)/√N`) amplifies the symmetric vibrational mode by `√N` against
//! the cavity, which ends up as the ancilla. Each clone is a coherent state
//! at `ξ` with `(N − 1)/N` vacuum units of added noise per quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gaussian::GaussianState;
use crate::interactions::{
    beam_splitter_hamiltonian, evolve, squeezing_hamiltonian, ProtocolParams, CAVITY,
};
use crate::report::{complex_pair, GridSpec, ModeMoments, QSample};

/// Agreement required between simulated and closed-form results.
pub const CLONE_TOL: f64 = 1e-9;
/// Agreement required between states that should be identical.
pub const STATE_TOL: f64 = 1e-10;

/// `N/(2N − 1)`.
pub fn closed_form_fidelity(n_clones: usize) -> f64 {
    assert!(n_clones >= 1, "clone count must be at least 1");
    let n = n_clones as f64;
    n / (2.0 * n - 1.0)
}

/// Per-quadrature clone variance `(3N − 2)/(2N)`, one vacuum unit (½) plus `(N − 1)/N`.
pub fn clone_variance(n_clones: usize) -> f64 {
    assert!(n_clones >= 1, "clone count must be at least 1");
    let n = n_clones as f64;
    (3.0 * n - 2.0) / (2.0 * n)
}

/// Husimi function of every clone:
/// `N/((2N − 1)π) · exp(−N |α − ξ|²/(2N − 1))`.
pub fn closed_form_q(n_clones: usize, xi: Complex64, alpha: Complex64) -> f64 {
    let f = closed_form_fidelity(n_clones);
    f / PI * (-f * (alpha - xi).norm_sqr()).exp()
}

/// Full N+1 mode states at both stages of the protocol.
#[derive(Debug, Clone)]
pub struct CloneRun {
    pub params: ProtocolParams,
    pub after_transfer: GaussianState,
    pub output: GaussianState,
}

pub fn simulate_clone(n_clones: usize, xi: Complex64) -> Result<CloneRun> {
    let params = ProtocolParams::cloning(n_clones, xi)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_clones + 1];
    amplitudes[CAVITY] = xi;
    let input = GaussianState::coherent(&amplitudes)?;

    let transfer = evolve(
        &beam_splitter_hamiltonian(n_clones, params.phi_a)?,
        params.transfer_area,
    )?;
    let squeeze = evolve(
        &squeezing_hamiltonian(n_clones, params.phi_a)?,
        params.squeezing_area,
    )?;
    let after_transfer = input.apply(&transfer)?;
    let output = after_transfer.apply(&squeeze)?;
    Ok(CloneRun {
        params,
        after_transfer,
        output,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CloneMoments {
    pub mean: [f64; 2],
    pub cov: [[f64; 2]; 2],
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloneReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(with = "complex_pair")]
    pub xi: Complex64,
    pub per_clone: Vec<CloneMoments>,
    pub ancilla: ModeMoments,
    pub closed_form_fidelity: f64,
    pub max_fidelity_deviation: f64,
    /// Largest moment difference between any clone and the first one.
    pub max_pairwise_deviation: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_grid: Option<Vec<QSample>>,
}

impl CloneReport {
    pub fn fidelity(&self) -> f64 {
        self.per_clone[0].fidelity
    }
}

pub fn run_clone(n_clones: usize, xi: Complex64) -> Result<CloneReport> {
    let run = simulate_clone(n_clones, xi)?;
    let closed = closed_form_fidelity(n_clones);
    let mut per_clone = Vec::with_capacity(n_clones);
    for b in 1..=n_clones {
        let moments = ModeMoments::of(&run.output, b)?;
        let fidelity = run.output.reduce(&[b])?.fidelity_with_coherent(xi)?;
        per_clone.push(CloneMoments {
            mean: moments.mean,
            cov: moments.cov,
            fidelity,
        });
    }
    let first = ModeMoments {
        mean: per_clone[0].mean,
        cov: per_clone[0].cov,
    };
    let max_pairwise_deviation = per_clone
        .iter()
        .map(|c| {
            first
                .max_deviation(&ModeMoments {
                    mean: c.mean,
                    cov: c.cov,
                })
                .max((c.fidelity - per_clone[0].fidelity).abs())
        })
        .fold(0.0, f64::max);
    let max_fidelity_deviation = per_clone
        .iter()
        .map(|c| (c.fidelity - closed).abs())
        .fold(0.0, f64::max);
    Ok(CloneReport {
        n: n_clones,
        xi,
        per_clone,
        ancilla: ModeMoments::of(&run.output, CAVITY)?,
        closed_form_fidelity: closed,
        max_fidelity_deviation,
        max_pairwise_deviation,
        q_grid: None,
    })
}

/// Samples the clone Husimi function of `b_1` next to the closed form.
///
/// Points are evaluated in parallel; each value depends only on its node.
pub fn clone_q_grid(n_clones: usize, xi: Complex64, grid: &GridSpec) -> Result<Vec<QSample>> {
    let clone = simulate_clone(n_clones, xi)?.output.reduce(&[1])?;
    grid.nodes()
        .into_par_iter()
        .map(|alpha| {
            let simulated = clone.q_function(alpha)?;
            let closed_form = closed_form_q(n_clones, xi, alpha);
            Ok(QSample {
                alpha,
                simulated,
                closed_form,
                abs_diff: (simulated - closed_form).abs(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntermediateCheck {
    pub passed: bool,
    pub max_mean_deviation: f64,
    pub max_cov_deviation: f64,
    #[serde(with = "complex_pair")]
    pub cavity_amplitude: Complex64,
    #[serde(with = "crate::report::complex_pairs")]
    pub clone_amplitudes: Vec<Complex64>,
}

/// Compares the state after the transfer pulse with `|0⟩|ξ/√N⟩^⊗N`.
pub fn intermediate_state_check(n_clones: usize, xi: Complex64) -> Result<IntermediateCheck> {
    let run = simulate_clone(n_clones, xi)?;
    let mut target = vec![xi / (n_clones as f64).sqrt(); n_clones + 1];
    target[CAVITY] = Complex64::new(0.0, 0.0);
    let expected = GaussianState::coherent(&target)?;
    let state = &run.after_transfer;
    let max_mean_deviation = (state.mean() - expected.mean()).abs().max();
    let max_cov_deviation = (state.cov() - expected.cov()).abs().max();
    Ok(IntermediateCheck {
        passed: max_mean_deviation < STATE_TOL && max_cov_deviation < STATE_TOL,
        max_mean_deviation,
        max_cov_deviation,
        cavity_amplitude: state.amplitude(CAVITY)?,
        clone_amplitudes: (1..=n_clones)
            .map(|b| state.amplitude(b))
            .collect::<Result<_>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_clone_is_perfect() {
        let report = run_clone(1, c(0.8, -0.4)).unwrap();
        assert_eq!(report.per_clone.len(), 1);
        assert!((report.fidelity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_clones_hit_two_thirds() {
        let report = run_clone(2, c(1.0, 0.0)).unwrap();
        for clone in &report.per_clone {
            assert!((clone.fidelity - 2.0 / 3.0).abs() < CLONE_TOL);
            // Two vacuum units in total: cov = I.
            assert!((clone.cov[0][0] - 1.0).abs() < STATE_TOL);
            assert!((clone.cov[1][1] - 1.0).abs() < STATE_TOL);
            assert!(clone.cov[0][1].abs() < STATE_TOL);
            assert!((clone.mean[0] - 2f64.sqrt()).abs() < STATE_TOL);
        }
        assert!(report.max_pairwise_deviation < STATE_TOL);
    }

    #[test]
    fn five_clones() {
        let report = run_clone(5, c(0.7, -0.2)).unwrap();
        assert!(report.max_fidelity_deviation < CLONE_TOL);
        assert!((report.fidelity() - 5.0 / 9.0).abs() < CLONE_TOL);
    }

    #[test]
    fn clone_covariance_is_noise_formula() {
        for n in 1..=8 {
            let report = run_clone(n, c(0.3, 0.1)).unwrap();
            let v = clone_variance(n);
            for clone in &report.per_clone {
                assert!((clone.cov[0][0] - v).abs() < STATE_TOL, "N={n}");
                assert!((clone.cov[1][1] - v).abs() < STATE_TOL, "N={n}");
            }
        }
    }

    #[test]
    fn fidelity_does_not_depend_on_input() {
        for n in [2, 3, 6] {
            let fids: Vec<f64> = [c(0.0, 0.0), c(1.0, 0.0), c(3.0, 4.0), c(0.0, -2.0)]
                .iter()
                .map(|&xi| run_clone(n, xi).unwrap().fidelity())
                .collect();
            for f in &fids {
                assert!((f - fids[0]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn antisymmetric_modes_stay_vacuum() {
        let n = 4;
        let run = simulate_clone(n, c(1.5, -0.5)).unwrap();
        for state in [&run.after_transfer, &run.output] {
            for i in 1..n {
                // (b_i − b_{i+1})/√2 as a 2×(2n+2) row map on quadratures.
                let mut m = DMatrix::zeros(2, 2 * (n + 1));
                for q in 0..2 {
                    m[(q, 2 * i + q)] = 1.0 / 2f64.sqrt();
                    m[(q, 2 * (i + 1) + q)] = -1.0 / 2f64.sqrt();
                }
                let mean = &m * state.mean();
                let cov = &m * state.cov() * m.transpose();
                assert!(mean.abs().max() < STATE_TOL);
                assert!((cov - DMatrix::identity(2, 2) * 0.5).abs().max() < STATE_TOL);
            }
        }
    }

    #[test]
    fn intermediate_states() {
        let check = intermediate_state_check(2, c(1.0, 0.0)).unwrap();
        assert!(check.passed, "{check:?}");
        assert!(check.cavity_amplitude.norm() < STATE_TOL);
        for a in &check.clone_amplitudes {
            assert!((a - c(1.0 / 2f64.sqrt(), 0.0)).norm() < STATE_TOL);
        }
        let zero = intermediate_state_check(3, c(0.0, 0.0)).unwrap();
        assert!(zero.passed);
        assert!(zero.clone_amplitudes.iter().all(|a| a.norm() < STATE_TOL));
        let three = intermediate_state_check(3, c(0.0, 1.0)).unwrap();
        assert!(three.passed);
    }

    #[test]
    fn closed_form_values() {
        let xi = c(0.4, 0.9);
        assert!((closed_form_q(2, xi, xi) - 2.0 / (3.0 * PI)).abs() < 1e-15);
        assert!((closed_form_q(1, xi, xi) - 1.0 / PI).abs() < 1e-15);
        let expected = 4.0 / (7.0 * PI) * (-4.0f64 / 7.0).exp();
        assert!((closed_form_q(4, c(0.0, 0.0), c(1.0, 0.0)) - expected).abs() < 1e-15);
        let sim = simulate_clone(4, c(0.0, 0.0))
            .unwrap()
            .output
            .reduce(&[2])
            .unwrap();
        assert!((sim.q_function(c(1.0, 0.0)).unwrap() - expected).abs() < CLONE_TOL);
    }

    #[test]
    fn q_grid_matches_closed_form() {
        let xi = c(1.0, 0.0);
        let grid = GridSpec::new(xi, 3.0, 41).unwrap();
        let samples = clone_q_grid(2, xi, &grid).unwrap();
        assert_eq!(samples.len(), 41 * 41);
        assert!(samples.iter().all(|s| s.abs_diff < CLONE_TOL));
    }
}
