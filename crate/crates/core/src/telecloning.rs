//! Multimode telecloning resource and the `1 → N` telecloning protocol.
//!
//! The resource is the vacuum of `a, b_1..b_N` after a collective squeezing
//! pulse of area `r/√N`, with `e^{2r} = (√N + 1)/(√N − 1)`. The cavity mode
//! `a` is EPR-correlated with the symmetric mode `(b_1 + … + b_N)/√N` and
//! stays with the sender.
//!
//! Telecloning follows the usual continuous-variable teleportation layout:
//! the input is mixed with `a` on a balanced beam splitter, one output port
//! is homodyned in `x` and the other in `p`, and every receiver displaces its
//! `b_j` by the scaled outcomes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

use crate::cloning::closed_form_fidelity;
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, Quadrature, SymplecticTransform};
use crate::interactions::{evolve, squeezing_hamiltonian, telecloning_squeezing, PROTOCOL_PHASE};
use crate::report::complex_pair;

/// Input mode in the `N + 2` mode telecloning register.
const INPUT: usize = 0;
/// Sender's half of the resource.
const SENDER: usize = 1;

/// How many Monte Carlo shots are checked for outcome-independent covariance.
const COV_CHECK_SHOTS: usize = 100;

pub fn resource_state(n_clones: usize) -> Result<GaussianState> {
    let r = telecloning_squeezing(n_clones)?;
    let area = r / (n_clones as f64).sqrt();
    let pulse = evolve(&squeezing_hamiltonian(n_clones, PROTOCOL_PHASE)?, area)?;
    GaussianState::vacuum(n_clones + 1)?.apply(&pulse)
}

/// Which beam-splitter port carries which homodyne, fixed by the sign of the
/// resource correlations so that feedforward cancels the sender's noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BellLayout {
    /// Mode (in the `N + 2` register) whose `x` is measured.
    pub x_port: usize,
    /// Mode whose `p` is measured.
    pub p_port: usize,
}

impl BellLayout {
    /// After the beam splitter, mode 0 holds `(in − a)/√2` and mode 1 holds
    /// `(in + a)/√2`. With `⟨x_a x_b⟩ < 0` the sum port carries the small
    /// `x_a + x_S` noise and is measured in `x`; likewise for `p`.
    pub fn from_resource(resource: &GaussianState) -> Result<Self> {
        let cov = resource.cov();
        let (cx, cp) = (cov[(0, 2)], cov[(1, 3)]);
        let x_port = if cx < 0.0 { SENDER } else { INPUT };
        let p_port = if cp < 0.0 { SENDER } else { INPUT };
        if x_port == p_port || cx == 0.0 || cp == 0.0 {
            return Err(Error::SingularConditioning(
                "resource lacks EPR-type correlations between a and b".into(),
            ));
        }
        Ok(Self { x_port, p_port })
    }

    fn measured_indices(&self) -> [usize; 2] {
        [2 * self.x_port, 2 * self.p_port + 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TeleclonePlan {
    #[serde(rename = "N")]
    pub n: usize,
    pub r: f64,
    /// Receiver displacement is `gain · (m_x + i m_p)` in amplitude units.
    pub gain: f64,
    pub seed: u64,
    pub samples: usize,
    pub layout: BellLayout,
}

impl TeleclonePlan {
    pub fn new(n_clones: usize, seed: u64, samples: usize) -> Result<Self> {
        let r = telecloning_squeezing(n_clones)?;
        let resource = resource_state(n_clones)?;
        let layout = BellLayout::from_resource(&resource)?;
        let gain = calibrate_gain(n_clones, layout)?;
        Ok(Self {
            n: n_clones,
            r,
            gain,
            seed,
            samples,
            layout,
        })
    }
}

fn bell_mixer(n_clones: usize) -> Result<SymplecticTransform> {
    SymplecticTransform::beam_splitter(n_clones + 2, INPUT, SENDER, FRAC_PI_4)
}

/// Gain giving unit transfer of the input mean to every clone.
///
/// The ensemble-averaged clone mean is `√2 · gain · ∂⟨m⟩/∂⟨r_in⟩ · ⟨r_in⟩`,
/// since conditional means of the zero-mean resource average to zero.
fn calibrate_gain(n_clones: usize, layout: BellLayout) -> Result<f64> {
    let mixer = bell_mixer(n_clones)?;
    let [ix, ip] = layout.measured_indices();
    let tx = 2f64.sqrt() * mixer.matrix()[(ix, 2 * INPUT)];
    let tp = 2f64.sqrt() * mixer.matrix()[(ip, 2 * INPUT + 1)];
    if tx.abs() < 1e-12 || tp.abs() < 1e-12 || (tx - tp).abs() > 1e-12 {
        return Err(Error::SingularConditioning(format!(
            "input does not reach the detectors symmetrically (tx = {tx}, tp = {tp})"
        )));
    }
    Ok(1.0 / tx)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TelecloneReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(with = "complex_pair")]
    pub xi: Complex64,
    pub r: f64,
    pub gain: f64,
    pub seed: u64,
    pub samples: usize,
    /// Fidelity of each outcome-averaged clone (deterministic covariance route).
    pub per_clone_fidelity: Vec<f64>,
    pub analytic_fidelity: f64,
    pub max_fidelity_deviation: f64,
    pub max_pairwise_deviation: f64,
    pub monte_carlo_fidelity_mean: f64,
    pub monte_carlo_fidelity_stderr: f64,
    #[serde(with = "complex_pair")]
    pub monte_carlo_clone_mean: Complex64,
    pub monte_carlo_clone_mean_stderr: [f64; 2],
    /// Largest deviation of a sampled conditional covariance from the deterministic one.
    pub conditional_cov_spread: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome_log: Option<Vec<[f64; 2]>>,
}

/// Register state `|ξ⟩_in ⊗ resource` after the Bell beam splitter.
fn mixed_register(n_clones: usize, xi: Complex64) -> Result<GaussianState> {
    let resource = resource_state(n_clones)?;
    let dim = 2 * (n_clones + 2);
    let mut mean = DVector::zeros(dim);
    let mut cov = DMatrix::zeros(dim, dim);
    let input = GaussianState::coherent(&[xi])?;
    mean.rows_mut(0, 2).copy_from(input.mean());
    cov.view_mut((0, 0), (2, 2)).copy_from(input.cov());
    cov.view_mut((2, 2), (dim - 2, dim - 2))
        .copy_from(resource.cov());
    GaussianState::from_moments(mean, cov)?.apply(&bell_mixer(n_clones)?)
}

/// Deterministic route: joint-Gaussian conditioning on both outcomes at once.
struct Conditioning {
    /// Clone-register mean before feedforward, unconditional.
    mean: DVector<f64>,
    /// Covariance of the clone register given the outcomes.
    conditional_cov: DMatrix<f64>,
    /// Outcome mean and covariance.
    outcome_mean: DVector<f64>,
    outcome_cov: DMatrix<f64>,
    /// `K = V_Rq V_qq⁻¹`.
    kalman: DMatrix<f64>,
}

fn condition(register: &GaussianState, layout: BellLayout) -> Result<Conditioning> {
    let q = layout.measured_indices();
    let rest: Vec<usize> = (2 * (SENDER + 1)..register.mean().len()).collect();
    let v = register.cov();
    let vqq = DMatrix::from_fn(2, 2, |i, j| v[(q[i], q[j])]);
    let vrq = DMatrix::from_fn(rest.len(), 2, |i, j| v[(rest[i], q[j])]);
    let vrr = DMatrix::from_fn(rest.len(), rest.len(), |i, j| v[(rest[i], rest[j])]);
    let inv = vqq
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularConditioning("outcome covariance is singular".into()))?;
    let kalman = &vrq * inv;
    let conditional_cov = &vrr - &kalman * vrq.transpose();
    Ok(Conditioning {
        mean: DVector::from_fn(rest.len(), |i, _| register.mean()[rest[i]]),
        conditional_cov: (&conditional_cov + conditional_cov.transpose()) * 0.5,
        outcome_mean: DVector::from_fn(2, |i, _| register.mean()[q[i]]),
        outcome_cov: vqq,
        kalman,
    })
}

/// Feedforward map from outcomes `(m_x, m_p)` to clone-register quadrature shifts.
fn feedforward(n_clones: usize, gain: f64) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(2 * n_clones, 2);
    for j in 0..n_clones {
        g[(2 * j, 0)] = 2f64.sqrt() * gain;
        g[(2 * j + 1, 1)] = 2f64.sqrt() * gain;
    }
    g
}

/// Clone register averaged over Bell outcomes, after feedforward.
pub fn averaged_clones(
    n_clones: usize,
    xi: Complex64,
    plan: &TeleclonePlan,
) -> Result<GaussianState> {
    let register = mixed_register(n_clones, xi)?;
    let c = condition(&register, plan.layout)?;
    let g = feedforward(n_clones, plan.gain);
    let spread = &c.kalman + &g;
    let mean = &c.mean + &g * &c.outcome_mean;
    let cov = &c.conditional_cov + &spread * &c.outcome_cov * spread.transpose();
    GaussianState::from_moments(mean, (&cov + cov.transpose()) * 0.5)
}

/// One Bell-measurement shot through sequential homodynes.
#[derive(Debug, Clone)]
pub struct Shot {
    pub outcomes: [f64; 2],
    /// Clone register after feedforward.
    pub clones: GaussianState,
}

pub fn sample_shot(
    register: &GaussianState,
    plan: &TeleclonePlan,
    rng: &mut ChaCha8Rng,
) -> Result<Shot> {
    let layout = plan.layout;
    let first = register.homodyne(layout.x_port, Quadrature::X, None, rng)?;
    // Removing x_port shifts later mode indices down by one.
    let p_mode = if layout.p_port > layout.x_port {
        layout.p_port - 1
    } else {
        layout.p_port
    };
    let second = first.state.homodyne(p_mode, Quadrature::P, None, rng)?;
    let outcomes = [first.outcome, second.outcome];
    let shift = Complex64::new(outcomes[0], outcomes[1]) * plan.gain;
    let mut clones = second.state;
    for j in 0..clones.n_modes() {
        clones = clones.displace(j, shift)?;
    }
    Ok(Shot { outcomes, clones })
}

fn shot_rng(seed: u64, shot: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot as u64);
    rng
}

struct ShotSummary {
    outcomes: [f64; 2],
    fidelity: f64,
    amplitude: Complex64,
    cov_deviation: f64,
}

pub fn teleclone(n_clones: usize, xi: Complex64, plan: &TeleclonePlan) -> Result<TelecloneReport> {
    teleclone_with_log(n_clones, xi, plan, false)
}

/// Runs both the deterministic and the Monte Carlo routes.
///
/// Shot `k` draws from ChaCha8 seeded with `plan.seed` on stream `k`, so
/// results are reproducible and independent of thread scheduling.
pub fn teleclone_with_log(
    n_clones: usize,
    xi: Complex64,
    plan: &TeleclonePlan,
    log_outcomes: bool,
) -> Result<TelecloneReport> {
    if plan.n != n_clones {
        return Err(Error::InvalidParameter(format!(
            "plan was built for N = {}, not {n_clones}",
            plan.n
        )));
    }
    let analytic = closed_form_fidelity(n_clones);
    let averaged = averaged_clones(n_clones, xi, plan)?;
    let per_clone_fidelity = (0..n_clones)
        .map(|j| averaged.reduce(&[j])?.fidelity_with_coherent(xi))
        .collect::<Result<Vec<_>>>()?;
    let max_fidelity_deviation = per_clone_fidelity
        .iter()
        .map(|f| (f - analytic).abs())
        .fold(0.0, f64::max);
    let first = averaged.reduce(&[0])?;
    let max_pairwise_deviation = (1..n_clones)
        .map(|j| {
            let other = averaged.reduce(&[j])?;
            Ok((other.mean() - first.mean())
                .abs()
                .max()
                .max((other.cov() - first.cov()).abs().max()))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let register = mixed_register(n_clones, xi)?;
    let deterministic_cov = condition(&register, plan.layout)?.conditional_cov;
    let summaries = (0..plan.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = shot_rng(plan.seed, k);
            let shot = sample_shot(&register, plan, &mut rng)?;
            let clone = shot.clones.reduce(&[0])?;
            let cov_deviation = if k < COV_CHECK_SHOTS {
                (shot.clones.cov() - &deterministic_cov).abs().max()
            } else {
                0.0
            };
            Ok(ShotSummary {
                outcomes: shot.outcomes,
                fidelity: clone.fidelity_with_coherent(xi)?,
                amplitude: clone.amplitude(0)?,
                cov_deviation,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let samples = summaries.len().max(1) as f64;
    let mean_of = |f: &dyn Fn(&ShotSummary) -> f64| summaries.iter().map(f).sum::<f64>() / samples;
    let stderr_of = |f: &dyn Fn(&ShotSummary) -> f64, mean: f64| {
        if summaries.len() < 2 {
            return f64::NAN;
        }
        let var = summaries.iter().map(|s| (f(s) - mean).powi(2)).sum::<f64>() / (samples - 1.0);
        (var / samples).sqrt()
    };
    let fid_mean = mean_of(&|s| s.fidelity);
    let re_mean = mean_of(&|s| s.amplitude.re);
    let im_mean = mean_of(&|s| s.amplitude.im);

    Ok(TelecloneReport {
        n: n_clones,
        xi,
        r: plan.r,
        gain: plan.gain,
        seed: plan.seed,
        samples: plan.samples,
        per_clone_fidelity,
        analytic_fidelity: analytic,
        max_fidelity_deviation,
        max_pairwise_deviation,
        monte_carlo_fidelity_mean: fid_mean,
        monte_carlo_fidelity_stderr: stderr_of(&|s| s.fidelity, fid_mean),
        monte_carlo_clone_mean: Complex64::new(re_mean, im_mean),
        monte_carlo_clone_mean_stderr: [
            stderr_of(&|s| s.amplitude.re, re_mean),
            stderr_of(&|s| s.amplitude.im, im_mean),
        ],
        conditional_cov_spread: summaries
            .iter()
            .map(|s| s.cov_deviation)
            .fold(0.0, f64::max),
        outcome_log: log_outcomes.then(|| summaries.iter().map(|s| s.outcomes).collect()),
    })
}

/// One term of the printed resource Wigner exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormTerm {
    pub name: String,
    /// Weight in the printed exponent.
    pub printed_weight: f64,
    /// Least-squares weight of the same term in the simulated exponent,
    /// expressed in the printed variables.
    pub fitted_weight: f64,
}

/// Comparison of the simulated resource Wigner function with the printed
/// closed form
/// `(2/π)^{N+1} exp[−e^{−2r}(x_a + X)² − e^{2r}(p_a + P)² − e^{2r}(x_a − X)²
///  − e^{−2r}(p_a − P)² − (1/N) Σ_{i,j}((x_i − x_j)² + (p_i − p_j)²)]`
/// with `X = Σ x_i/√N`, `P = Σ p_i/√N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFormReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub r: f64,
    /// Variance ratio of the squeezed and antisqueezed collective quadratures.
    pub squeezing_ratio: f64,
    pub expected_ratio: f64,
    /// `+1` if the printed variables map onto ours directly, `−1` if the
    /// vibrational quadratures enter with flipped sign.
    pub b_orientation: i8,
    /// Best-fit `s²` for printed variables `r' = s·D·r`.
    pub scale_squared: f64,
    /// Relative Frobenius residual after the best single-scale fit.
    pub residual: f64,
    /// Residual with the other orientation, for the record.
    pub residual_other_orientation: f64,
    pub terms: Vec<FormTerm>,
    /// Relative residual after fitting each term weight independently.
    pub term_fit_residual: f64,
    pub printed_prefactor: f64,
    /// Simulated peak density expressed in the printed variables.
    pub implied_prefactor: f64,
}

/// Printed exponent terms in our interleaved ordering, as `(name, weight, matrix)`.
/// The exponent is `−rᵀ T r` summed over the terms.
fn printed_terms(n_clones: usize, r: f64, orientation: f64) -> Vec<(String, f64, DMatrix<f64>)> {
    let dim = 2 * (n_clones + 1);
    let nf = n_clones as f64;
    let collective = |q: usize, sign: f64| {
        let mut u = DVector::<f64>::zeros(dim);
        u[q] = 1.0;
        for b in 1..=n_clones {
            u[2 * b + q] = sign * orientation / nf.sqrt();
        }
        &u * u.transpose()
    };
    let mut pairwise = DMatrix::zeros(dim, dim);
    for q in 0..2 {
        for i in 1..=n_clones {
            for j in 1..=n_clones {
                let mut d = DVector::<f64>::zeros(dim);
                d[2 * i + q] += 1.0;
                d[2 * j + q] -= 1.0;
                pairwise += &d * d.transpose();
            }
        }
    }
    let (sq, anti) = ((-2.0 * r).exp(), (2.0 * r).exp());
    vec![
        ("(x_a + X)^2".into(), sq, collective(0, 1.0)),
        ("(p_a + P)^2".into(), anti, collective(1, 1.0)),
        ("(x_a - X)^2".into(), anti, collective(0, -1.0)),
        ("(p_a - P)^2".into(), sq, collective(1, -1.0)),
        (
            "sum_ij (x_i - x_j)^2 + (p_i - p_j)^2".into(),
            1.0 / nf,
            pairwise,
        ),
    ]
}

fn frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

pub fn wigner_quadratic_form_check(n_clones: usize) -> Result<QuadraticFormReport> {
    let r = telecloning_squeezing(n_clones)?;
    let resource = resource_state(n_clones)?;
    let cov = resource.cov();
    let inv = cov.clone().try_inverse().ok_or(Error::SingularCovariance {
        det: cov.determinant(),
    })?;
    // Wigner exponent is −rᵀ (V⁻¹/2) r.
    let simulated = inv * 0.5;

    let fit = |orientation: f64| {
        let total = printed_terms(n_clones, r, orientation).into_iter().fold(
            DMatrix::zeros(simulated.nrows(), simulated.ncols()),
            |acc, (_, w, t)| acc + t * w,
        );
        let s2 = frobenius(&simulated, &total) / frobenius(&total, &total);
        let residual = (&simulated - &total * s2).norm() / simulated.norm();
        (s2, residual)
    };
    let (plus, minus) = (fit(1.0), fit(-1.0));
    let (orientation, (scale_squared, residual), other) = if minus.1 < plus.1 {
        (-1.0, minus, plus.1)
    } else {
        (1.0, plus, minus.1)
    };

    // Term-by-term least squares in the Frobenius inner product.
    let terms = printed_terms(n_clones, r, orientation);
    let k = terms.len();
    let gram = DMatrix::from_fn(k, k, |i, j| frobenius(&terms[i].2, &terms[j].2));
    let rhs = DVector::from_fn(k, |i, _| frobenius(&terms[i].2, &simulated));
    let weights = gram
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SingularConditioning("printed terms are degenerate".into()))?;
    let refit = terms.iter().zip(weights.iter()).fold(
        DMatrix::zeros(simulated.nrows(), simulated.ncols()),
        |acc, ((_, _, t), &w)| acc + t * w,
    );
    let term_fit_residual = (&simulated - refit).norm() / simulated.norm();
    let terms = terms
        .into_iter()
        .zip(weights.iter())
        .map(|((name, printed, _), &w)| FormTerm {
            name,
            printed_weight: printed,
            fitted_weight: w / scale_squared,
        })
        .collect();

    // Collective variances of (x_a ± σX)/√2 and (p_a ± σP)/√2.
    let dim = cov.nrows();
    let collective_var = |q: usize, sign: f64| {
        let mut u = DVector::<f64>::zeros(dim);
        u[q] = 1.0 / 2f64.sqrt();
        for b in 1..=n_clones {
            u[2 * b + q] = sign * orientation / (2.0 * n_clones as f64).sqrt();
        }
        (u.transpose() * cov * &u)[(0, 0)]
    };
    let vars = [
        collective_var(0, 1.0),
        collective_var(0, -1.0),
        collective_var(1, 1.0),
        collective_var(1, -1.0),
    ];
    let smallest = vars.iter().cloned().fold(f64::INFINITY, f64::min);
    let largest = vars.iter().cloned().fold(0.0, f64::max);

    let modes = (n_clones + 1) as i32;
    let peak = resource.wigner(&vec![0.0; dim])?;
    Ok(QuadraticFormReport {
        n: n_clones,
        r,
        squeezing_ratio: smallest / largest,
        expected_ratio: (-4.0 * r).exp(),
        b_orientation: orientation as i8,
        scale_squared,
        residual,
        residual_other_orientation: other,
        terms,
        term_fit_residual,
        printed_prefactor: (2.0 / PI).powi(modes),
        implied_prefactor: peak / scale_squared.powi(modes),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloning::run_clone;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn resource_is_pure_and_centered() {
        for n in 2..=6 {
            let s = resource_state(n).unwrap();
            assert!((s.purity() - 1.0).abs() < 1e-10);
            assert!(s.mean().iter().all(|&m| m == 0.0));
        }
        assert!(resource_state(1).is_err());
    }

    #[test]
    fn layout_uses_distinct_ports() {
        let layout = BellLayout::from_resource(&resource_state(3).unwrap()).unwrap();
        assert_ne!(layout.x_port, layout.p_port);
    }

    #[test]
    fn gain_is_unity() {
        let plan = TeleclonePlan::new(3, 1, 10).unwrap();
        assert!((plan.gain - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_fidelity_matches_cloner() {
        for n in [2, 3, 4, 5] {
            let plan = TeleclonePlan::new(n, 0, 0).unwrap();
            let report = teleclone(n, c(0.3, -0.8), &plan).unwrap();
            let local = run_clone(n, c(0.3, -0.8)).unwrap();
            for f in &report.per_clone_fidelity {
                assert!((f - local.fidelity()).abs() < 1e-9);
            }
            assert!(report.max_pairwise_deviation < 1e-10);
        }
    }

    #[test]
    fn sequential_homodyne_matches_joint_conditioning() {
        let n = 3;
        let plan = TeleclonePlan::new(n, 5, 1).unwrap();
        let register = mixed_register(n, c(1.0, 1.0)).unwrap();
        let joint = condition(&register, plan.layout).unwrap();
        let mut rng = shot_rng(5, 0);
        let shot = sample_shot(&register, &plan, &mut rng).unwrap();
        assert!((shot.clones.cov() - &joint.conditional_cov).abs().max() < 1e-12);
        // Conditional mean + feedforward from the joint formula.
        let m = DVector::from_row_slice(&shot.outcomes);
        let expected = &joint.mean
            + &joint.kalman * (&m - &joint.outcome_mean)
            + feedforward(n, plan.gain) * &m;
        assert!((shot.clones.mean() - expected).abs().max() < 1e-12);
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let plan = TeleclonePlan::new(2, 42, 200).unwrap();
        let a = teleclone_with_log(2, c(0.5, 0.0), &plan, true).unwrap();
        let b = teleclone_with_log(2, c(0.5, 0.0), &plan, true).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.outcome_log.as_ref().unwrap().len(), 200);
        let other = TeleclonePlan { seed: 43, ..plan };
        let c2 = teleclone(2, c(0.5, 0.0), &other).unwrap();
        assert_ne!(a.monte_carlo_fidelity_mean, c2.monte_carlo_fidelity_mean);
    }

    #[test]
    fn rejects_mismatched_plan() {
        let plan = TeleclonePlan::new(2, 0, 1).unwrap();
        assert!(teleclone(3, c(0.0, 0.0), &plan).is_err());
        assert!(TeleclonePlan::new(1, 0, 1).is_err());
    }

    #[test]
    fn printed_wigner_form_matches_up_to_convention() {
        for n in 2..=5 {
            let report = wigner_quadratic_form_check(n).unwrap();
            assert_eq!(report.b_orientation, -1);
            assert!((report.scale_squared - 0.5).abs() < 1e-10, "{report:?}");
            assert!(report.residual < 1e-10, "{report:?}");
            assert!(report.residual_other_orientation > 0.1);
            for t in &report.terms {
                assert!((t.fitted_weight - t.printed_weight).abs() < 1e-9, "{t:?}");
            }
            assert!((report.implied_prefactor / report.printed_prefactor - 1.0).abs() < 1e-9);
            assert!((report.squeezing_ratio / report.expected_ratio - 1.0).abs() < 1e-9);
        }
    }
}
