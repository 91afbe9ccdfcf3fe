//! Truncated Fock-space simulator, used as an independent oracle for the
//! Gaussian backend on small instances.
//!
//! Amplitudes are stored densely with mode 0 as the most significant index.
//! Ladder operators are the usual truncated matrices: `a|n⟩ = √n|n−1⟩` and
//! `a†|d−1⟩ = 0`. Time evolution applies `exp(−iH·area)` to the state by a
//! sub-stepped Taylor series of the truncated Hamiltonian, which is exact in
//! the truncated space up to rounding; it shares nothing with the phase-space
//! exponential in [`crate::interactions`].

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cloning::simulate_clone;
use crate::error::{Error, Result};
use crate::interactions::{cloning_squeezing_area, cloning_transfer_area, CAVITY, PROTOCOL_PHASE};
use crate::report::complex_pair;

/// Oracle comparisons are meaningful only below this truncation loss.
pub const LEAKAGE_BUDGET: f64 = 1e-8;
/// Norm loss tolerated after evolution before the run is flagged.
pub const EVOLUTION_LEAKAGE_LIMIT: f64 = 1e-6;
/// Largest Hilbert-space dimension accepted by [`compare_backends`].
pub const MAX_DIMENSION: usize = 200_000;
/// Agreement required between the two backends.
pub const BACKEND_TOL: f64 = 1e-4;

/// Bound on `‖H·dt‖` per Taylor step.
const MAX_STEP_NORM: f64 = 3.0;
const TAYLOR_TERMS: usize = 80;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Pure state on a tensor product of truncated oscillators.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
    leakage: f64,
}

/// `e^{−|ξ|²/2} ξⁿ/√n!` for `n < cutoff`.
fn coherent_amplitudes(xi: Complex64, cutoff: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(cutoff);
    let mut c = Complex64::new((-0.5 * xi.norm_sqr()).exp(), 0.0);
    for n in 0..cutoff {
        out.push(c);
        c = c * xi / ((n + 1) as f64).sqrt();
    }
    out
}

impl FockState {
    pub fn coherent(xi: Complex64, cutoff: usize) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::Truncation(format!(
                "cutoff must be at least 2, got {cutoff}"
            )));
        }
        let amplitudes = coherent_amplitudes(xi, cutoff);
        // Poisson tail beyond the cutoff, summed directly to avoid 1 − Σ cancellation.
        let mut tail = 0.0;
        let mut term = amplitudes[cutoff - 1].norm_sqr();
        for n in cutoff.. {
            term *= xi.norm_sqr() / n as f64;
            tail += term;
            if term <= tail * 1e-17 || term == 0.0 {
                break;
            }
        }
        Ok(Self {
            dims: vec![cutoff],
            amplitudes,
            leakage: tail,
        })
    }

    pub fn vacuum(cutoff: usize) -> Result<Self> {
        Self::coherent(ZERO, cutoff)
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &FockState) -> Self {
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            dims,
            amplitudes,
            leakage: self.leakage + other.leakage - self.leakage * other.leakage,
        }
    }

    pub fn product(factors: &[FockState]) -> Result<Self> {
        let (first, rest) = factors.split_first().ok_or(Error::NoModes)?;
        Ok(rest.iter().fold(first.clone(), |acc, f| acc.tensor(f)))
    }

    pub fn n_modes(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Probability lost to truncation when the state was prepared.
    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn ensure_leakage(&self, bound: f64) -> Result<()> {
        if self.leakage > bound {
            Err(Error::Truncation(format!(
                "leakage {:e} exceeds {bound:e}; raise the cutoff",
                self.leakage
            )))
        } else {
            Ok(())
        }
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    /// Largest population found in any mode's top level.
    pub fn boundary_population(&self) -> f64 {
        let strides = self.strides();
        (0..self.n_modes())
            .map(|k| {
                self.amplitudes
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (i / strides[k]) % self.dims[k] == self.dims[k] - 1)
                    .map(|(_, a)| a.norm_sqr())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    fn lower(&self, mode: usize, v: &[Complex64]) -> Vec<Complex64> {
        let strides = self.strides();
        let (s, d) = (strides[mode], self.dims[mode]);
        let mut out = vec![ZERO; v.len()];
        for (i, amp) in v.iter().enumerate() {
            let n = (i / s) % d;
            if n > 0 {
                out[i - s] += amp * (n as f64).sqrt();
            }
        }
        out
    }

    /// Quadrature means and symmetrized covariance, in the same convention
    /// as [`crate::gaussian::GaussianState`].
    ///
    /// Only lowering operators are applied, so the moments are exact for the
    /// stored state viewed as a vector in the untruncated space.
    pub fn quadrature_moments(&self) -> (DVector<f64>, DMatrix<f64>) {
        let n = self.n_modes();
        let psi = &self.amplitudes;
        let norm = self.norm_sqr();
        let inner = |u: &[Complex64], v: &[Complex64]| -> Complex64 {
            u.iter()
                .zip(v)
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex64>()
                / norm
        };
        let lowered: Vec<Vec<Complex64>> = (0..n).map(|k| self.lower(k, psi)).collect();
        let alpha: Vec<Complex64> = lowered.iter().map(|l| inner(psi, l)).collect();
        let mut normal = DMatrix::from_element(n, n, ZERO);
        let mut anomalous = DMatrix::from_element(n, n, ZERO);
        for k in 0..n {
            for l in 0..n {
                normal[(k, l)] = inner(&lowered[k], &lowered[l]);
                anomalous[(k, l)] = inner(psi, &self.lower(k, &lowered[l]));
            }
        }

        let mut mean = DVector::zeros(2 * n);
        for k in 0..n {
            mean[2 * k] = 2f64.sqrt() * alpha[k].re;
            mean[2 * k + 1] = 2f64.sqrt() * alpha[k].im;
        }
        let mut cov = DMatrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            for l in 0..n {
                let (m, nn) = (anomalous[(k, l)], normal[(k, l)]);
                let delta = if k == l { 0.5 } else { 0.0 };
                cov[(2 * k, 2 * l)] = m.re + nn.re + delta;
                cov[(2 * k + 1, 2 * l + 1)] = -m.re + nn.re + delta;
                cov[(2 * k, 2 * l + 1)] = m.im + nn.im;
            }
        }
        for k in 0..n {
            for l in 0..n {
                cov[(2 * l + 1, 2 * k)] = cov[(2 * k, 2 * l + 1)];
            }
        }
        let cov = cov - &mean * mean.transpose();
        (mean, cov)
    }

    /// Single-mode density matrix after tracing out every other mode.
    pub fn reduced_density(&self, mode: usize) -> Result<DMatrix<Complex64>> {
        if mode >= self.n_modes() {
            return Err(Error::ModeOutOfRange {
                index: mode,
                n_modes: self.n_modes(),
            });
        }
        let d = self.dims[mode];
        let s = self.strides()[mode];
        let mut rho = DMatrix::from_element(d, d, ZERO);
        // Visit each environment configuration once (indices with n_mode = 0).
        for base in (0..self.amplitudes.len()).filter(|i| (i / s).is_multiple_of(d)) {
            for m in 0..d {
                let am = self.amplitudes[base + m * s];
                if am == ZERO {
                    continue;
                }
                for n in 0..d {
                    rho[(m, n)] += am * self.amplitudes[base + n * s].conj();
                }
            }
        }
        Ok(rho)
    }
}

/// `⟨α|ρ|α⟩/π` for a truncated single-mode density matrix.
pub fn husimi(rho: &DMatrix<Complex64>, alpha: Complex64) -> f64 {
    let c = coherent_amplitudes(alpha, rho.nrows());
    let mut acc = ZERO;
    for m in 0..rho.nrows() {
        for n in 0..rho.ncols() {
            acc += c[m].conj() * rho[(m, n)] * c[n];
        }
    }
    acc.re / PI
}

/// `⟨ξ|ρ|ξ⟩`.
pub fn coherent_fidelity(rho: &DMatrix<Complex64>, xi: Complex64) -> f64 {
    PI * husimi(rho, xi)
}

/// Truncated `a` and `a†` as dense matrices.
pub fn ladder_matrices(cutoff: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut a = DMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        a[(n - 1, n)] = (n as f64).sqrt();
    }
    let adag = a.transpose();
    (a, adag)
}

/// `max |[a, a†] − I|` over the first `cutoff − 1` levels; the top level is
/// the expected truncation artifact.
pub fn commutator_defect(cutoff: usize) -> f64 {
    let (a, adag) = ladder_matrices(cutoff);
    let comm = &a * &adag - &adag * &a;
    let m = cutoff - 1;
    (comm.view((0, 0), (m, m)) - DMatrix::identity(m, m))
        .abs()
        .max()
}

/// Which effective interaction to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coupling {
    /// `e^{iφ} a Σ b_j† + h.c.`
    Exchange,
    /// `e^{iφ} a Σ b_j + h.c.`
    Squeezing,
}

/// One product term `coeff · op(m1) op(m2)` with raise/lower flags.
#[derive(Debug, Clone, Copy)]
struct Term {
    coeff: Complex64,
    ops: [(usize, bool); 2],
}

fn hamiltonian_terms(coupling: Coupling, n_modes: usize, phi: f64) -> Vec<Term> {
    let c = Complex64::from_polar(1.0, phi);
    let mut terms = Vec::new();
    for b in 1..n_modes {
        match coupling {
            Coupling::Exchange => {
                // c b† a + c̄ a† b
                terms.push(Term {
                    coeff: c,
                    ops: [(b, true), (CAVITY, false)],
                });
                terms.push(Term {
                    coeff: c.conj(),
                    ops: [(CAVITY, true), (b, false)],
                });
            }
            Coupling::Squeezing => {
                // c a b + c̄ a† b†
                terms.push(Term {
                    coeff: c,
                    ops: [(CAVITY, false), (b, false)],
                });
                terms.push(Term {
                    coeff: c.conj(),
                    ops: [(CAVITY, true), (b, true)],
                });
            }
        }
    }
    terms
}

impl FockState {
    fn apply_hamiltonian(&self, terms: &[Term], v: &[Complex64], out: &mut [Complex64]) {
        let strides = self.strides();
        out.iter_mut().for_each(|o| *o = ZERO);
        for term in terms {
            let [(m1, r1), (m2, r2)] = term.ops;
            let (s1, d1, s2, d2) = (strides[m1], self.dims[m1], strides[m2], self.dims[m2]);
            for (i, amp) in v.iter().enumerate() {
                if *amp == ZERO {
                    continue;
                }
                // Right operator acts first.
                let n2 = (i / s2) % d2;
                let (j, f2) = if r2 {
                    if n2 + 1 >= d2 {
                        continue;
                    }
                    (i + s2, ((n2 + 1) as f64).sqrt())
                } else {
                    if n2 == 0 {
                        continue;
                    }
                    (i - s2, (n2 as f64).sqrt())
                };
                let n1 = (j / s1) % d1;
                let (k, f1) = if r1 {
                    if n1 + 1 >= d1 {
                        continue;
                    }
                    (j + s1, ((n1 + 1) as f64).sqrt())
                } else {
                    if n1 == 0 {
                        continue;
                    }
                    (j - s1, (n1 as f64).sqrt())
                };
                out[k] += term.coeff * amp * (f1 * f2);
            }
        }
    }

    /// Upper bound on the spectral norm of the truncated Hamiltonian.
    fn hamiltonian_bound(&self, terms: &[Term]) -> f64 {
        terms
            .iter()
            .map(|t| {
                let op_norm = |(m, _): (usize, bool)| ((self.dims[m] - 1) as f64).sqrt();
                t.coeff.norm() * op_norm(t.ops[0]) * op_norm(t.ops[1])
            })
            .sum()
    }
}

/// Applies `exp(−iH·pulse_area)` for one of the two effective couplings.
/// Mode 0 is the cavity and every other mode a vibrational mode.
pub fn evolve_fock(
    state: &FockState,
    coupling: Coupling,
    phi: f64,
    pulse_area: f64,
) -> Result<FockState> {
    if !pulse_area.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "pulse area must be finite, got {pulse_area}"
        )));
    }
    if state.n_modes() < 2 {
        return Err(Error::InvalidParameter(
            "need the cavity and at least one vibrational mode".into(),
        ));
    }
    state.ensure_leakage(EVOLUTION_LEAKAGE_LIMIT)?;
    let terms = hamiltonian_terms(coupling, state.n_modes(), phi);
    let bound = state.hamiltonian_bound(&terms);
    let steps = (bound * pulse_area.abs() / MAX_STEP_NORM).ceil().max(1.0) as usize;
    let dt = pulse_area / steps as f64;

    let mut psi = state.amplitudes.clone();
    let mut term = vec![ZERO; psi.len()];
    let mut scratch = vec![ZERO; psi.len()];
    let factor = Complex64::new(0.0, -dt);
    for _ in 0..steps {
        term.copy_from_slice(&psi);
        let mut next = psi.clone();
        for k in 1..=TAYLOR_TERMS {
            state.apply_hamiltonian(&terms, &term, &mut scratch);
            let scale = factor / k as f64;
            let mut size = 0.0;
            for (t, s) in term.iter_mut().zip(&scratch) {
                *t = s * scale;
                size += t.norm_sqr();
            }
            for (n, t) in next.iter_mut().zip(&term) {
                *n += t;
            }
            if size.sqrt() < 1e-17 {
                break;
            }
        }
        psi = next;
    }

    let out = FockState {
        dims: state.dims.clone(),
        amplitudes: psi,
        leakage: state.leakage,
    };
    let loss = (1.0 - state.leakage) - out.norm_sqr();
    if loss.abs() > EVOLUTION_LEAKAGE_LIMIT {
        return Err(Error::Truncation(format!(
            "norm drifted by {loss:e} during evolution"
        )));
    }
    Ok(out)
}

/// Cutoff heuristic: `max(12, ⌈|ξ|² + 6|ξ| + 8 cosh²(√N · area)⌉)`.
pub fn suggested_cutoff(xi: Complex64, n_clones: usize, squeezing_area: f64) -> usize {
    let amp = xi.norm();
    let gain = ((n_clones as f64).sqrt() * squeezing_area).cosh().powi(2);
    let heuristic = (amp * amp + 6.0 * amp + 8.0 * gain).ceil() as usize;
    heuristic.max(12)
}

/// Cloning sequence run in both backends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendComparison {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(with = "complex_pair")]
    pub xi: Complex64,
    /// Levels kept for each vibrational mode.
    pub cutoff: usize,
    /// Levels kept for the cavity mode.
    pub cavity_cutoff: usize,
    pub dimension: usize,
    pub leakage: f64,
    /// Largest top-level population of any mode after the protocol.
    pub boundary_population: f64,
    pub max_mean_deviation: f64,
    /// Largest deviation within any single mode's 2×2 covariance block.
    pub max_cov_deviation: f64,
    /// Largest deviation between modes; reported, not gated.
    pub max_cross_cov_deviation: f64,
    pub max_fidelity_deviation: f64,
    pub gaussian_fidelities: Vec<f64>,
    pub fock_fidelities: Vec<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

/// Levels kept for the cavity in [`compare_backends`].
///
/// The cavity leaves the protocol as the amplified ancilla, close to thermal
/// with `n̄ = sinh²(√N·area)(1 + |ξ|²)` photons. Its cutoff is the smallest
/// `d ≥ max(cutoff, suggested_cutoff)` whose thermal tail `(n̄/(n̄+1))^d` is
/// inside [`LEAKAGE_BUDGET`].
pub fn cavity_cutoff(n_clones: usize, xi: Complex64, cutoff: usize) -> usize {
    let area = cloning_squeezing_area(n_clones);
    let floor = cutoff.max(suggested_cutoff(xi, n_clones, area));
    let n_bar = ((n_clones as f64).sqrt() * area).sinh().powi(2) * (1.0 + xi.norm_sqr());
    if n_bar <= 0.0 {
        return floor;
    }
    let ratio = n_bar / (n_bar + 1.0);
    let tail = (LEAKAGE_BUDGET.ln() / ratio.ln()).ceil() as usize;
    floor.max(tail)
}

/// Runs the cloning sequence in both backends with `cutoff` levels per
/// vibrational mode and [`cavity_cutoff`] levels for the cavity.
pub fn compare_backends(
    n_clones: usize,
    xi: Complex64,
    cutoff: usize,
) -> Result<BackendComparison> {
    compare_backends_truncated(n_clones, xi, cavity_cutoff(n_clones, xi, cutoff), cutoff)
}

/// [`compare_backends`] with an explicit cavity cutoff.
pub fn compare_backends_truncated(
    n_clones: usize,
    xi: Complex64,
    cavity_cutoff: usize,
    cutoff: usize,
) -> Result<BackendComparison> {
    if n_clones == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let dimension = cutoff
        .checked_pow(n_clones as u32)
        .and_then(|d| d.checked_mul(cavity_cutoff))
        .filter(|&d| d <= MAX_DIMENSION)
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "{cavity_cutoff}·{cutoff}^{n_clones} amplitudes exceed the oracle limit of {MAX_DIMENSION}"
            ))
        })?;

    let gaussian = simulate_clone(n_clones, xi)?.output;

    let mut factors = vec![FockState::coherent(xi, cavity_cutoff)?];
    for _ in 0..n_clones {
        factors.push(FockState::vacuum(cutoff)?);
    }
    let input = FockState::product(&factors)?;
    input.ensure_leakage(LEAKAGE_BUDGET)?;
    let transferred = evolve_fock(
        &input,
        Coupling::Exchange,
        PROTOCOL_PHASE,
        cloning_transfer_area(n_clones),
    )?;
    let output = evolve_fock(
        &transferred,
        Coupling::Squeezing,
        PROTOCOL_PHASE,
        cloning_squeezing_area(n_clones),
    )?;

    let (mean, cov) = output.quadrature_moments();
    let mean_diff = (&mean - gaussian.mean()).abs();
    let cov_diff = (&cov - gaussian.cov()).abs();
    let max_mean_deviation = mean_diff.max();
    let mut max_cov_deviation = 0.0f64;
    let mut max_cross_cov_deviation = 0.0f64;
    for (i, j) in (0..2 * (n_clones + 1)).flat_map(|i| (0..2 * (n_clones + 1)).map(move |j| (i, j)))
    {
        if i / 2 == j / 2 {
            max_cov_deviation = max_cov_deviation.max(cov_diff[(i, j)]);
        } else {
            max_cross_cov_deviation = max_cross_cov_deviation.max(cov_diff[(i, j)]);
        }
    }
    let mut gaussian_fidelities = Vec::with_capacity(n_clones);
    let mut fock_fidelities = Vec::with_capacity(n_clones);
    for b in 1..=n_clones {
        gaussian_fidelities.push(gaussian.reduce(&[b])?.fidelity_with_coherent(xi)?);
        fock_fidelities.push(coherent_fidelity(&output.reduced_density(b)?, xi));
    }
    let max_fidelity_deviation = gaussian_fidelities
        .iter()
        .zip(&fock_fidelities)
        .map(|(g, f)| (g - f).abs())
        .fold(0.0, f64::max);
    let passed = max_mean_deviation < BACKEND_TOL
        && max_cov_deviation < BACKEND_TOL
        && max_fidelity_deviation < BACKEND_TOL
        && output.leakage() < LEAKAGE_BUDGET;
    Ok(BackendComparison {
        n: n_clones,
        xi,
        cutoff,
        cavity_cutoff,
        dimension,
        leakage: output.leakage(),
        boundary_population: output.boundary_population(),
        max_mean_deviation,
        max_cov_deviation,
        max_cross_cov_deviation,
        max_fidelity_deviation,
        gaussian_fidelities,
        fock_fidelities,
        tolerance: BACKEND_TOL,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussianState;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn overlap(a: &FockState, b: &FockState) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| x.conj() * y)
            .sum::<Complex64>()
            .norm_sqr()
    }

    #[test]
    fn coherent_vacuum_and_leakage() {
        let v = FockState::vacuum(5).unwrap();
        assert_eq!(v.amplitudes()[0], c(1.0, 0.0));
        assert!(v.amplitudes()[1..].iter().all(|a| *a == ZERO));
        assert_eq!(v.leakage(), 0.0);
        // Poisson(1) tail beyond n = 19: Σ_{n≥20} e^{-1}/n! ≈ 4.1e-19.
        let s = FockState::coherent(c(1.0, 0.0), 20).unwrap();
        let tail: f64 = (20..40)
            .map(|n| (-1.0f64).exp() / (1..=n).map(|k| k as f64).product::<f64>())
            .sum();
        assert!(s.leakage() < 1e-12);
        assert!((s.leakage() - tail).abs() < 1e-25);
        assert!(FockState::coherent(c(1.0, 0.0), 1).is_err());
        assert!(FockState::coherent(c(3.0, 0.0), 4)
            .unwrap()
            .ensure_leakage(1e-8)
            .is_err());
    }

    #[test]
    fn coherent_photon_number() {
        let xi = c(1.2, -0.5);
        let s = FockState::coherent(xi, 30).unwrap();
        let n: f64 = s
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(k, a)| k as f64 * a.norm_sqr())
            .sum();
        assert!((n - xi.norm_sqr()).abs() < 1e-10);
    }

    #[test]
    fn commutator_only_fails_at_top() {
        assert!(commutator_defect(10) < 1e-12);
        let (a, adag) = ladder_matrices(6);
        let comm = &a * &adag - &adag * &a;
        assert!((comm[(5, 5)] + 5.0).abs() < 1e-12);
    }

    #[test]
    fn zero_area_is_identity() {
        let s = FockState::product(&[
            FockState::coherent(c(0.3, 0.2), 8).unwrap(),
            FockState::vacuum(8).unwrap(),
        ])
        .unwrap();
        let out = evolve_fock(&s, Coupling::Squeezing, FRAC_PI_2, 0.0).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn exchange_pulse_splits_coherent_state() {
        let xi = c(0.5, 0.0);
        let d = 16;
        let s = FockState::product(&[
            FockState::coherent(xi, d).unwrap(),
            FockState::vacuum(d).unwrap(),
            FockState::vacuum(d).unwrap(),
        ])
        .unwrap();
        let out = evolve_fock(&s, Coupling::Exchange, FRAC_PI_2, cloning_transfer_area(2)).unwrap();
        let half = xi / 2f64.sqrt();
        let target = FockState::product(&[
            FockState::vacuum(d).unwrap(),
            FockState::coherent(half, d).unwrap(),
            FockState::coherent(half, d).unwrap(),
        ])
        .unwrap();
        assert!(overlap(&out, &target) > 1.0 - 1e-8);
    }

    #[test]
    fn exchange_pulse_for_three_modes_imaginary_input() {
        // |i⟩ → |0⟩|i/√3⟩^⊗3.
        let d = 16;
        let mut factors = vec![FockState::coherent(c(0.0, 1.0), d).unwrap()];
        factors.extend((0..3).map(|_| FockState::vacuum(d).unwrap()));
        let s = FockState::product(&factors).unwrap();
        let out = evolve_fock(&s, Coupling::Exchange, FRAC_PI_2, cloning_transfer_area(3)).unwrap();
        let part = c(0.0, 1.0 / 3f64.sqrt());
        let mut target = vec![FockState::vacuum(d).unwrap()];
        target.extend((0..3).map(|_| FockState::coherent(part, d).unwrap()));
        assert!(overlap(&out, &FockState::product(&target).unwrap()) > 1.0 - 1e-8);
    }

    #[test]
    fn squeezer_photon_number() {
        let d = 30;
        for t in [0.2, 0.45, 0.6] {
            let s =
                FockState::product(&[FockState::vacuum(d).unwrap(), FockState::vacuum(d).unwrap()])
                    .unwrap();
            let out = evolve_fock(&s, Coupling::Squeezing, FRAC_PI_2, t).unwrap();
            let rho = out.reduced_density(0).unwrap();
            let n: f64 = (0..d).map(|k| k as f64 * rho[(k, k)].re).sum();
            assert!((n - t.sinh().powi(2)).abs() < 1e-6, "t={t}: {n}");
        }
    }

    #[test]
    fn evolution_preserves_norm() {
        let d = 12;
        let s = FockState::product(&[
            FockState::coherent(c(0.4, -0.3), d).unwrap(),
            FockState::coherent(c(-0.2, 0.1), d).unwrap(),
        ])
        .unwrap();
        let before = s.norm_sqr();
        for coupling in [Coupling::Exchange, Coupling::Squeezing] {
            let out = evolve_fock(&s, coupling, 0.7, 0.3).unwrap();
            assert!((out.norm_sqr() - before).abs() < 1e-12);
        }
    }

    #[test]
    fn product_state_reduces_to_pure() {
        let xi = c(0.6, 0.2);
        let s = FockState::product(&[
            FockState::coherent(xi, 14).unwrap(),
            FockState::coherent(c(0.1, 0.0), 14).unwrap(),
        ])
        .unwrap();
        let rho = s.reduced_density(0).unwrap();
        let purity = (&rho * &rho).trace().re;
        assert!((purity - 1.0).abs() < 1e-12);
        assert!((rho.trace().re - s.norm_sqr()).abs() < 1e-14);
        assert!((coherent_fidelity(&rho, xi) - 1.0).abs() < 1e-10);
        assert!(s.reduced_density(2).is_err());
    }

    #[test]
    fn moments_of_coherent_product_match_gaussian() {
        let amps = [c(0.5, -0.2), c(0.0, 0.7)];
        let fock = FockState::product(&[
            FockState::coherent(amps[0], 20).unwrap(),
            FockState::coherent(amps[1], 20).unwrap(),
        ])
        .unwrap();
        let (mean, cov) = fock.quadrature_moments();
        let g = GaussianState::coherent(&amps).unwrap();
        assert!((&mean - g.mean()).abs().max() < 1e-10);
        assert!((&cov - g.cov()).abs().max() < 1e-10);
    }

    #[test]
    fn clone_fidelity_from_density() {
        let cmp = compare_backends(2, c(0.5, 0.0), 16).unwrap();
        for f in &cmp.fock_fidelities {
            assert!((f - 2.0 / 3.0).abs() < 1e-5, "{f}");
        }
    }

    #[test]
    fn husimi_matches_gaussian_q() {
        let xi = c(0.5, 0.0);
        let d = 16;
        let mut factors = vec![FockState::coherent(xi, d).unwrap()];
        factors.extend((0..2).map(|_| FockState::vacuum(d).unwrap()));
        let s = FockState::product(&factors).unwrap();
        let s = evolve_fock(&s, Coupling::Exchange, FRAC_PI_2, cloning_transfer_area(2)).unwrap();
        let s = evolve_fock(
            &s,
            Coupling::Squeezing,
            FRAC_PI_2,
            cloning_squeezing_area(2),
        )
        .unwrap();
        let rho = s.reduced_density(1).unwrap();
        let g = simulate_clone(2, xi).unwrap().output.reduce(&[1]).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let alpha = xi + c(-2.0 + 0.5 * i as f64, -2.0 + 0.5 * j as f64);
                let diff = (husimi(&rho, alpha) - g.q_function(alpha).unwrap()).abs();
                assert!(diff < 1e-5, "{alpha}: {diff}");
            }
        }
    }

    #[test]
    fn vacuum_input_agrees_tightly() {
        let cmp = compare_backends(2, c(0.0, 0.0), 16).unwrap();
        assert!(cmp.max_fidelity_deviation < 1e-9, "{cmp:?}");
    }

    #[test]
    fn rejects_oversized_instances() {
        assert!(compare_backends(6, c(0.1, 0.0), 16).is_err());
        assert!(compare_backends(0, c(0.1, 0.0), 16).is_err());
    }

    #[test]
    fn cutoff_heuristic() {
        assert_eq!(suggested_cutoff(c(0.0, 0.0), 1, 0.0), 12);
        let area = cloning_squeezing_area(3);
        // cosh² = 3 ⇒ 0.09 + 1.8 + 24 → 26
        assert_eq!(suggested_cutoff(c(0.3, 0.0), 3, area), 26);
    }
}
