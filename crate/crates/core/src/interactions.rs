//! Effective cavity–motion couplings as quadratic Hamiltonians.
//!
//! Mode 0 is the cavity field `a`; modes `1..=N` are the vibrational modes
//! `b_1..b_N`. Coupling strengths are folded into dimensionless pulse areas,
//! so every Hamiltonian here has unit strength.
//!
//! Sign convention: states evolve under `exp(-iH·area)`, which in phase
//! space is `S = exp(Ω M · area)` for `H = ½ rᵀ M r`. With `φ = π/2` the
//! beam-splitter pulse of area `π/(2√N)` maps `|ξ⟩|0…0⟩` to
//! `|0⟩|ξ/√N⟩…|ξ/√N⟩` with no extra phase.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{symplectic_form, SymplecticTransform};

/// Index of the cavity mode.
pub const CAVITY: usize = 0;

/// Laser phase used by every protocol in this crate.
pub const PROTOCOL_PHASE: f64 = FRAC_PI_2;

/// `H = ½ rᵀ M r` over the interleaved quadrature vector `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    coeff: DMatrix<f64>,
}

impl QuadraticHamiltonian {
    pub fn zeros(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::NoModes);
        }
        Ok(Self {
            coeff: DMatrix::zeros(2 * n_modes, 2 * n_modes),
        })
    }

    pub fn from_matrix(coeff: DMatrix<f64>) -> Result<Self> {
        let dim = coeff.nrows();
        if dim == 0 {
            return Err(Error::NoModes);
        }
        if !dim.is_multiple_of(2) || coeff.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim + dim % 2,
                got: coeff.ncols(),
            });
        }
        let asymmetry = (&coeff - coeff.transpose()).abs().max();
        if asymmetry > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "Hamiltonian matrix must be symmetric (asymmetry {asymmetry:e})"
            )));
        }
        Ok(Self { coeff })
    }

    pub fn n_modes(&self) -> usize {
        self.coeff.nrows() / 2
    }

    pub fn coeff(&self) -> &DMatrix<f64> {
        &self.coeff
    }

    fn add_symmetric(&mut self, u: usize, v: usize, value: f64) {
        self.coeff[(u, v)] += value;
        self.coeff[(v, u)] += value;
    }

    /// Adds `c a_j† a_k + c̄ a_k† a_j` for `j ≠ k`.
    pub fn add_hopping(&mut self, j: usize, k: usize, c: Complex64) -> Result<()> {
        self.check_pair(j, k)?;
        let (xj, pj, xk, pk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
        // 2 Re[c (x_j − i p_j)(x_k + i p_k)/2]
        self.add_symmetric(xj, xk, c.re);
        self.add_symmetric(pj, pk, c.re);
        self.add_symmetric(xj, pk, -c.im);
        self.add_symmetric(pj, xk, c.im);
        Ok(())
    }

    /// Adds `c a_j a_k + c̄ a_j† a_k†` for `j ≠ k`.
    pub fn add_pair(&mut self, j: usize, k: usize, c: Complex64) -> Result<()> {
        self.check_pair(j, k)?;
        let (xj, pj, xk, pk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
        // 2 Re[c (x_j + i p_j)(x_k + i p_k)/2]
        self.add_symmetric(xj, xk, c.re);
        self.add_symmetric(pj, pk, -c.re);
        self.add_symmetric(xj, pk, -c.im);
        self.add_symmetric(pj, xk, -c.im);
        Ok(())
    }

    fn check_pair(&self, j: usize, k: usize) -> Result<()> {
        let n = self.n_modes();
        for m in [j, k] {
            if m >= n {
                return Err(Error::ModeOutOfRange {
                    index: m,
                    n_modes: n,
                });
            }
        }
        if j == k {
            return Err(Error::DuplicateMode(j));
        }
        Ok(())
    }

    /// `Ω M`, the generator of the linear Heisenberg flow `ṙ = Ω M r`.
    pub fn generator(&self) -> DMatrix<f64> {
        symplectic_form(self.n_modes()) * &self.coeff
    }

    pub fn evolve(&self, pulse_area: f64) -> Result<SymplecticTransform> {
        evolve(self, pulse_area)
    }
}

/// `e^{iφ} a (b_1† + … + b_N†) + h.c.`, the passive cavity–motion exchange.
pub fn beam_splitter_hamiltonian(n_clones: usize, phi: f64) -> Result<QuadraticHamiltonian> {
    if n_clones == 0 {
        return Err(Error::InvalidParameter(
            "need at least one vibrational mode".into(),
        ));
    }
    let mut h = QuadraticHamiltonian::zeros(n_clones + 1)?;
    let c = Complex64::from_polar(1.0, phi);
    for b in 1..=n_clones {
        h.add_hopping(b, CAVITY, c)?;
    }
    Ok(h)
}

/// `e^{iφ} a (b_1 + … + b_N) + h.c.`, the active collective two-mode squeezer.
pub fn squeezing_hamiltonian(n_clones: usize, phi: f64) -> Result<QuadraticHamiltonian> {
    if n_clones == 0 {
        return Err(Error::InvalidParameter(
            "need at least one vibrational mode".into(),
        ));
    }
    let mut h = QuadraticHamiltonian::zeros(n_clones + 1)?;
    let c = Complex64::from_polar(1.0, phi);
    for b in 1..=n_clones {
        h.add_pair(CAVITY, b, c)?;
    }
    Ok(h)
}

/// `S = exp(Ω M · pulse_area)`, rejected unless symplectic to tolerance.
pub fn evolve(h: &QuadraticHamiltonian, pulse_area: f64) -> Result<SymplecticTransform> {
    if !pulse_area.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "pulse area must be finite, got {pulse_area}"
        )));
    }
    let generator = h.generator() * pulse_area;
    let matrix = generator.exp();
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(Error::Exponential("non-finite entries".into()));
    }
    let dim = matrix.nrows();
    SymplecticTransform::new(matrix, DVector::zeros(dim)).map_err(|e| match e {
        Error::NotSymplectic { residual } => {
            Error::Exponential(format!("symplectic residual {residual:e}"))
        }
        other => other,
    })
}

/// Beam-splitter pulse area `π/(2√N)` that moves the cavity amplitude onto the
/// symmetric vibrational mode.
pub fn cloning_transfer_area(n_clones: usize) -> f64 {
    PI / (2.0 * (n_clones as f64).sqrt())
}

/// Squeezing pulse area `arccosh(√N)/√N`.
pub fn cloning_squeezing_area(n_clones: usize) -> f64 {
    let root = (n_clones as f64).sqrt();
    root.acosh() / root
}

/// Collective squeezing `r` with `e^{2r} = (√N + 1)/(√N − 1)`.
pub fn telecloning_squeezing(n_clones: usize) -> Result<f64> {
    if n_clones < 2 {
        return Err(Error::InvalidParameter(format!(
            "telecloning needs N >= 2 (squeezing diverges at N = {n_clones})"
        )));
    }
    let root = (n_clones as f64).sqrt();
    Ok(0.5 * ((root + 1.0) / (root - 1.0)).ln())
}

/// Laser settings for one protocol run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    pub n_clones: usize,
    pub xi: Complex64,
    pub phi_a: f64,
    /// `Ω₁ t₁`
    pub transfer_area: f64,
    /// `Ω₂ t₂`
    pub squeezing_area: f64,
}

impl ProtocolParams {
    pub fn cloning(n_clones: usize, xi: Complex64) -> Result<Self> {
        if n_clones == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        Ok(Self {
            n_clones,
            xi,
            phi_a: PROTOCOL_PHASE,
            transfer_area: cloning_transfer_area(n_clones),
            squeezing_area: cloning_squeezing_area(n_clones),
        })
    }

    pub fn telecloning(n_clones: usize) -> Result<Self> {
        let r = telecloning_squeezing(n_clones)?;
        Ok(Self {
            n_clones,
            xi: Complex64::new(0.0, 0.0),
            phi_a: PROTOCOL_PHASE,
            transfer_area: 0.0,
            squeezing_area: r / (n_clones as f64).sqrt(),
        })
    }
}
