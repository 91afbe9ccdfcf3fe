//! Gaussian states of `n` bosonic modes.
//!
//! Quadratures are ordered `(x1, p1, ..., xn, pn)` with `[x, p] = i` and
//! `a = (x + ip)/√2`, so the vacuum covariance is `I/2` and a coherent
//! amplitude `ξ` sits at mean `(√2 Re ξ, √2 Im ξ)`.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Symmetry tolerance accepted by [`GaussianState::from_moments`].
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Lowest eigenvalue of `V + iΩ/2` still counted as physical.
pub const UNCERTAINTY_TOL: f64 = 1e-10;
/// Symplectic-condition tolerance (scaled by `max(1, |S|²)`).
pub const SYMPLECTIC_TOL: f64 = 1e-10;
/// Relative singular-value cutoff of the homodyne pseudo-inverse.
pub const PINV_RCOND: f64 = 1e-12;
/// Covariance determinants below this are treated as singular.
pub const SINGULAR_DET: f64 = 1e-300;

/// The standard symplectic form `Ω = ⊕ [[0, 1], [-1, 0]]`.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Quadrature mean `(√2 Re ξ, √2 Im ξ)` of the coherent state `|ξ⟩`.
pub fn coherent_mean(xi: Complex64) -> [f64; 2] {
    [2f64.sqrt() * xi.re, 2f64.sqrt() * xi.im]
}

/// Inverse of [`coherent_mean`].
pub fn amplitude_from_mean(x: f64, p: f64) -> Complex64 {
    Complex64::new(x, p) / 2f64.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    X,
    P,
}

impl Quadrature {
    fn offset(self) -> usize {
        match self {
            Quadrature::X => 0,
            Quadrature::P => 1,
        }
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

fn symmetrized(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// Gaussian unitary in phase space: `r ↦ S r + d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    matrix: DMatrix<f64>,
    displacement: DVector<f64>,
}

impl SymplecticTransform {
    /// Checks `Sᵀ Ω S = Ω` before accepting the matrix.
    pub fn new(matrix: DMatrix<f64>, displacement: DVector<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 {
            return Err(Error::NoModes);
        }
        if !dim.is_multiple_of(2) || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim + dim % 2,
                got: matrix.ncols(),
            });
        }
        if displacement.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: displacement.len(),
            });
        }
        let residual = symplectic_residual(&matrix);
        let scale = max_abs(&matrix).powi(2).max(1.0);
        if residual > SYMPLECTIC_TOL * scale {
            return Err(Error::NotSymplectic { residual });
        }
        Ok(Self {
            matrix,
            displacement,
        })
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
            displacement: DVector::zeros(2 * n_modes),
        }
    }

    /// Phase rotation `a_k → e^{-iθ} a_k` of a single mode.
    pub fn rotation(n_modes: usize, mode: usize, theta: f64) -> Result<Self> {
        check_mode(mode, n_modes)?;
        let mut t = Self::identity(n_modes);
        let (s, c) = theta.sin_cos();
        let k = 2 * mode;
        t.matrix[(k, k)] = c;
        t.matrix[(k, k + 1)] = s;
        t.matrix[(k + 1, k)] = -s;
        t.matrix[(k + 1, k + 1)] = c;
        Ok(t)
    }

    /// Real beam splitter mixing modes `i` and `j`:
    /// `a_i → cos θ a_i − sin θ a_j`, `a_j → sin θ a_i + cos θ a_j`.
    pub fn beam_splitter(n_modes: usize, i: usize, j: usize, theta: f64) -> Result<Self> {
        check_mode(i, n_modes)?;
        check_mode(j, n_modes)?;
        if i == j {
            return Err(Error::DuplicateMode(i));
        }
        let mut t = Self::identity(n_modes);
        let (s, c) = theta.sin_cos();
        for q in 0..2 {
            let (ii, jj) = (2 * i + q, 2 * j + q);
            t.matrix[(ii, ii)] = c;
            t.matrix[(ii, jj)] = -s;
            t.matrix[(jj, ii)] = s;
            t.matrix[(jj, jj)] = c;
        }
        Ok(t)
    }

    /// Pure displacement of one mode by the coherent amplitude `xi`.
    pub fn displacement(n_modes: usize, mode: usize, xi: Complex64) -> Result<Self> {
        check_mode(mode, n_modes)?;
        let mut t = Self::identity(n_modes);
        let [dx, dp] = coherent_mean(xi);
        t.displacement[2 * mode] = dx;
        t.displacement[2 * mode + 1] = dp;
        Ok(t)
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn displacement_vector(&self) -> &DVector<f64> {
        &self.displacement
    }

    /// The transform that applies `self` first and `then` second.
    pub fn then(&self, then: &SymplecticTransform) -> Result<Self> {
        if then.matrix.nrows() != self.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                got: then.matrix.nrows(),
            });
        }
        Ok(Self {
            matrix: &then.matrix * &self.matrix,
            displacement: &then.matrix * &self.displacement + &then.displacement,
        })
    }

    /// True when `S` is orthogonal, i.e. the map is passive (photon-number conserving).
    pub fn is_passive(&self, tol: f64) -> bool {
        let dim = self.matrix.nrows();
        let gram = self.matrix.transpose() * &self.matrix;
        max_abs(&(gram - DMatrix::identity(dim, dim))) < tol
    }
}

/// `max |Sᵀ Ω S − Ω|`.
pub fn symplectic_residual(matrix: &DMatrix<f64>) -> f64 {
    let omega = symplectic_form(matrix.nrows() / 2);
    max_abs(&(matrix.transpose() * &omega * matrix - omega))
}

fn check_mode(mode: usize, n_modes: usize) -> Result<()> {
    if mode >= n_modes {
        Err(Error::ModeOutOfRange {
            index: mode,
            n_modes,
        })
    } else {
        Ok(())
    }
}

/// Outcome of a single-quadrature homodyne measurement.
#[derive(Debug, Clone)]
pub struct Homodyne {
    pub outcome: f64,
    pub state: GaussianState,
}

/// A Gaussian state given by its quadrature mean and covariance.
///
/// Values are immutable; every operation returns a new state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::NoModes);
        }
        Ok(Self {
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
        })
    }

    /// Product of coherent states with the given amplitudes.
    pub fn coherent(amplitudes: &[Complex64]) -> Result<Self> {
        let mut state = Self::vacuum(amplitudes.len())?;
        for (k, xi) in amplitudes.iter().enumerate() {
            let [x, p] = coherent_mean(*xi);
            state.mean[2 * k] = x;
            state.mean[2 * k + 1] = p;
        }
        Ok(state)
    }

    /// Builds a state from raw moments, rejecting asymmetric or unphysical covariances.
    pub fn from_moments(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 {
            return Err(Error::NoModes);
        }
        if !dim.is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: dim + 1,
                got: dim,
            });
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: cov.nrows(),
            });
        }
        let asymmetry = max_abs(&(&cov - cov.transpose()));
        if asymmetry > SYMMETRY_TOL * max_abs(&cov).max(1.0) {
            return Err(Error::AsymmetricCovariance { asymmetry });
        }
        let state = Self {
            mean,
            cov: symmetrized(cov),
        };
        let min_eigenvalue = state.min_uncertainty_eigenvalue();
        if min_eigenvalue < -UNCERTAINTY_TOL {
            return Err(Error::Unphysical { min_eigenvalue });
        }
        Ok(state)
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Mean of one mode as a coherent amplitude `(x + ip)/√2`.
    pub fn amplitude(&self, mode: usize) -> Result<Complex64> {
        check_mode(mode, self.n_modes())?;
        Ok(amplitude_from_mean(
            self.mean[2 * mode],
            self.mean[2 * mode + 1],
        ))
    }

    pub fn displace(&self, mode: usize, xi: Complex64) -> Result<Self> {
        check_mode(mode, self.n_modes())?;
        let [dx, dp] = coherent_mean(xi);
        let mut out = self.clone();
        out.mean[2 * mode] += dx;
        out.mean[2 * mode + 1] += dp;
        Ok(out)
    }

    pub fn apply(&self, transform: &SymplecticTransform) -> Result<Self> {
        if transform.matrix.nrows() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                got: transform.matrix.nrows(),
            });
        }
        let s = &transform.matrix;
        Ok(Self {
            mean: s * &self.mean + &transform.displacement,
            cov: symmetrized(s * &self.cov * s.transpose()),
        })
    }

    /// Gaussian partial trace: keeps the listed modes, in the listed order.
    pub fn reduce(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::NoModes);
        }
        let n = self.n_modes();
        for (pos, &k) in keep.iter().enumerate() {
            check_mode(k, n)?;
            if keep[..pos].contains(&k) {
                return Err(Error::DuplicateMode(k));
            }
        }
        let idx: Vec<usize> = keep.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        Ok(Self {
            mean: DVector::from_fn(idx.len(), |i, _| self.mean[idx[i]]),
            cov: DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.cov[(idx[i], idx[j])]),
        })
    }

    /// Smallest eigenvalue of the Hermitian matrix `V + iΩ/2`.
    pub fn min_uncertainty_eigenvalue(&self) -> f64 {
        let omega = symplectic_form(self.n_modes());
        let herm = DMatrix::from_fn(self.cov.nrows(), self.cov.ncols(), |i, j| {
            Complex::new(self.cov[(i, j)], 0.5 * omega[(i, j)])
        });
        herm.symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |acc, &v| acc.min(v))
    }

    pub fn satisfies_uncertainty(&self) -> bool {
        self.min_uncertainty_eigenvalue() >= -UNCERTAINTY_TOL
    }

    /// `Tr ρ² = 1/√det(2V)`.
    pub fn purity(&self) -> f64 {
        1.0 / (&self.cov * 2.0).determinant().sqrt()
    }

    /// Husimi function `⟨α|ρ|α⟩/π` of a single-mode state.
    pub fn q_function(&self, alpha: Complex64) -> Result<f64> {
        if self.n_modes() != 1 {
            return Err(Error::NotSingleMode(self.n_modes()));
        }
        let [ax, ap] = coherent_mean(alpha);
        let dx = ax - self.mean[0];
        let dp = ap - self.mean[1];
        // The coherent probe adds one vacuum unit of noise.
        let a = self.cov[(0, 0)] + 0.5;
        let b = self.cov[(0, 1)];
        let d = self.cov[(1, 1)] + 0.5;
        let det = a * d - b * b;
        let quad = (d * dx * dx - 2.0 * b * dx * dp + a * dp * dp) / det;
        Ok((-0.5 * quad).exp() / (PI * det.sqrt()))
    }

    /// `⟨ξ|ρ|ξ⟩` for a single-mode state.
    pub fn fidelity_with_coherent(&self, xi: Complex64) -> Result<f64> {
        Ok(PI * self.q_function(xi)?)
    }

    /// Normalized Wigner density at a phase-space point.
    pub fn wigner(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                got: point.len(),
            });
        }
        let det = self.cov.determinant();
        if det.abs() < SINGULAR_DET {
            return Err(Error::SingularCovariance { det });
        }
        let inv = self
            .cov
            .clone()
            .try_inverse()
            .ok_or(Error::SingularCovariance { det })?;
        let delta = DVector::from_column_slice(point) - &self.mean;
        let quad = (delta.transpose() * inv * &delta)[(0, 0)];
        let n = self.n_modes() as i32;
        Ok((-0.5 * quad).exp() / ((2.0 * PI).powi(n) * det.sqrt()))
    }

    /// Homodyne detection of one quadrature of `mode`; the measured mode is
    /// removed from the returned state.
    ///
    /// With `outcome = None` the result is drawn from the Gaussian marginal of
    /// the measured quadrature using `rng`.
    pub fn homodyne<R: Rng + ?Sized>(
        &self,
        mode: usize,
        quadrature: Quadrature,
        outcome: Option<f64>,
        rng: &mut R,
    ) -> Result<Homodyne> {
        let n = self.n_modes();
        check_mode(mode, n)?;
        if n < 2 {
            return Err(Error::NoModes);
        }
        let measured = 2 * mode + quadrature.offset();
        let variance = self.cov[(measured, measured)];
        let outcome = match outcome {
            Some(v) => v,
            None => {
                let normal = Normal::new(self.mean[measured], variance.max(0.0).sqrt())
                    .map_err(|e| Error::SingularConditioning(e.to_string()))?;
                normal.sample(rng)
            }
        };

        let rest: Vec<usize> = (0..n).filter(|&k| k != mode).collect();
        let rest_idx: Vec<usize> = rest.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let block = [2 * mode, 2 * mode + 1];

        // Π V_B Π with Π projecting onto the measured quadrature.
        let mut projected = DMatrix::zeros(2, 2);
        let m = quadrature.offset();
        projected[(m, m)] = variance;
        let svd = projected.svd(true, true);
        let largest = svd.singular_values.max();
        if largest <= 0.0 {
            return Err(Error::SingularConditioning(format!(
                "measured quadrature variance is {variance:e}"
            )));
        }
        let pinv = svd
            .pseudo_inverse(PINV_RCOND * largest)
            .map_err(|e| Error::SingularConditioning(e.to_string()))?;

        let cross = DMatrix::from_fn(rest_idx.len(), 2, |i, j| self.cov[(rest_idx[i], block[j])]);
        let cov_rest = DMatrix::from_fn(rest_idx.len(), rest_idx.len(), |i, j| {
            self.cov[(rest_idx[i], rest_idx[j])]
        });
        let mean_rest = DVector::from_fn(rest_idx.len(), |i, _| self.mean[rest_idx[i]]);
        let mut innovation = DVector::zeros(2);
        innovation[m] = outcome - self.mean[measured];

        let gain = &cross * pinv;
        let cov = symmetrized(&cov_rest - &gain * cross.transpose());
        let mean = mean_rest + &gain * innovation;
        Ok(Homodyne {
            outcome,
            state: Self { mean, cov },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_moments() {
        let v = GaussianState::vacuum(3).unwrap();
        assert_eq!(v.n_modes(), 3);
        assert!(v.mean().iter().all(|&x| x == 0.0));
        assert_eq!(v.cov(), &(DMatrix::identity(6, 6) * 0.5));
        assert_eq!(GaussianState::vacuum(0), Err(Error::NoModes));
    }

    #[test]
    fn passive_maps_leave_vacuum_alone() {
        let v = GaussianState::vacuum(2).unwrap();
        let bs = SymplecticTransform::beam_splitter(2, 0, 1, 0.3).unwrap();
        let out = v.apply(&bs).unwrap();
        assert!((out.cov() - v.cov()).abs().max() < 1e-15);
        let rot = SymplecticTransform::rotation(1, 0, PI / 2.0).unwrap();
        let v1 = GaussianState::vacuum(1).unwrap();
        assert!((v1.apply(&rot).unwrap().cov() - v1.cov()).abs().max() < 1e-15);
    }

    #[test]
    fn displace_convention() {
        let v = GaussianState::vacuum(1).unwrap();
        assert_eq!(v.displace(0, c(0.0, 0.0)).unwrap(), v);
        let d = v.displace(0, c(1.0, 0.0)).unwrap();
        assert!((d.mean()[0] - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(d.mean()[1], 0.0);
        let xi = c(0.3, 0.4);
        let q = v.displace(0, xi).unwrap().q_function(xi).unwrap();
        assert!((q - 1.0 / PI).abs() < 1e-15);
        assert!(matches!(
            v.displace(1, xi),
            Err(Error::ModeOutOfRange {
                index: 1,
                n_modes: 1
            })
        ));
    }

    #[test]
    fn rejects_non_symplectic() {
        let m = DMatrix::identity(2, 2) * 2.0;
        assert!(matches!(
            SymplecticTransform::new(m, DVector::zeros(2)),
            Err(Error::NotSymplectic { .. })
        ));
        let v = GaussianState::vacuum(2).unwrap();
        assert!(matches!(
            v.apply(&SymplecticTransform::identity(1)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reduce_restricts_blocks() {
        let s = GaussianState::coherent(&[c(1.0, 0.0), c(0.0, -2.0), c(0.5, 0.5)]).unwrap();
        let r = s.reduce(&[1]).unwrap();
        assert_eq!(r, GaussianState::coherent(&[c(0.0, -2.0)]).unwrap());
        let swapped = s.reduce(&[2, 0]).unwrap();
        assert_eq!(
            swapped,
            GaussianState::coherent(&[c(0.5, 0.5), c(1.0, 0.0)]).unwrap()
        );
        assert_eq!(s.reduce(&[]), Err(Error::NoModes));
        assert_eq!(s.reduce(&[0, 0]), Err(Error::DuplicateMode(0)));
        assert!(s.reduce(&[3]).is_err());
    }

    #[test]
    fn q_function_of_vacuum() {
        let v = GaussianState::vacuum(1).unwrap();
        for alpha in [c(0.0, 0.0), c(1.0, -0.5), c(-2.0, 1.5)] {
            let expected = (-alpha.norm_sqr()).exp() / PI;
            assert!((v.q_function(alpha).unwrap() - expected).abs() < 1e-15);
        }
        let two = GaussianState::vacuum(2).unwrap();
        assert_eq!(two.q_function(c(0.0, 0.0)), Err(Error::NotSingleMode(2)));
    }

    #[test]
    fn wigner_of_vacuum() {
        let v = GaussianState::vacuum(1).unwrap();
        assert!((v.wigner(&[0.0, 0.0]).unwrap() - 1.0 / PI).abs() < 1e-15);
        // Midpoint rule over ±8 (beyond that the tail is below e^-64).
        let n = 400;
        let h = 16.0 / n as f64;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                let x = -8.0 + (i as f64 + 0.5) * h;
                let p = -8.0 + (j as f64 + 0.5) * h;
                total += v.wigner(&[x, p]).unwrap();
            }
        }
        assert!((total * h * h - 1.0).abs() < 1e-6);
        assert!(v.wigner(&[0.0]).is_err());
    }

    #[test]
    fn wigner_reports_singular_covariance() {
        let state = GaussianState {
            mean: DVector::zeros(2),
            cov: DMatrix::zeros(2, 2),
        };
        assert!(matches!(
            state.wigner(&[0.0, 0.0]),
            Err(Error::SingularCovariance { .. })
        ));
    }

    #[test]
    fn from_moments_rejects_bad_covariances() {
        let mut asym = DMatrix::identity(2, 2) * 0.5;
        asym[(0, 1)] = 0.1;
        assert!(matches!(
            GaussianState::from_moments(DVector::zeros(2), asym),
            Err(Error::AsymmetricCovariance { .. })
        ));
        let too_small = DMatrix::identity(2, 2) * 0.25;
        assert!(matches!(
            GaussianState::from_moments(DVector::zeros(2), too_small),
            Err(Error::Unphysical { .. })
        ));
        // Squeezed vacuum saturates the bound.
        let sq = DMatrix::from_diagonal(&DVector::from_vec(vec![0.05, 5.0]));
        assert!(GaussianState::from_moments(DVector::zeros(2), sq).is_ok());
    }

    #[test]
    fn coherent_fidelity_is_one() {
        let xi = c(-1.2, 0.7);
        let s = GaussianState::coherent(&[xi]).unwrap();
        assert!((s.fidelity_with_coherent(xi).unwrap() - 1.0).abs() < 1e-15);
        assert!((s.amplitude(0).unwrap() - xi).norm() < 1e-15);
    }

    #[test]
    fn homodyne_on_product_leaves_partner() {
        let s = GaussianState::coherent(&[c(0.4, -0.1), c(1.0, 2.0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = s.homodyne(0, Quadrature::X, None, &mut rng).unwrap();
        assert_eq!(h.state, s.reduce(&[1]).unwrap());
        let h = s.homodyne(1, Quadrature::P, Some(3.0), &mut rng).unwrap();
        assert_eq!(h.outcome, 3.0);
        assert_eq!(h.state, s.reduce(&[0]).unwrap());
        let single = GaussianState::vacuum(1).unwrap();
        assert!(single.homodyne(0, Quadrature::X, None, &mut rng).is_err());
        assert!(s.homodyne(2, Quadrature::X, None, &mut rng).is_err());
    }

    fn two_mode_squeezed(r: f64) -> GaussianState {
        let (ch, sh) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
        #[rustfmt::skip]
        let cov = DMatrix::from_row_slice(4, 4, &[
            ch, 0.0, sh, 0.0,
            0.0, ch, 0.0, -sh,
            sh, 0.0, ch, 0.0,
            0.0, -sh, 0.0, ch,
        ]);
        GaussianState::from_moments(DVector::zeros(4), cov).unwrap()
    }

    #[test]
    fn homodyne_on_two_mode_squeezed_vacuum() {
        // Schur complement by hand: ch − sh²/ch = 1/(2 cosh 2r).
        let r = 0.8;
        let s = two_mode_squeezed(r);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = s.homodyne(0, Quadrature::X, Some(0.9), &mut rng).unwrap();
        let expected_var = 0.5 / (2.0 * r).cosh();
        assert!((h.state.cov()[(0, 0)] - expected_var).abs() < 1e-14);
        assert!((h.state.cov()[(1, 1)] - 0.5 * (2.0 * r).cosh()).abs() < 1e-14);
        // Conditional mean: (sh/ch)·outcome = tanh(2r)·0.9.
        assert!((h.state.mean()[0] - (2.0 * r).tanh() * 0.9).abs() < 1e-14);
    }

    #[test]
    fn homodyne_samples_are_seed_deterministic() {
        let s = two_mode_squeezed(0.3);
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            s.homodyne(1, Quadrature::P, None, &mut rng)
                .unwrap()
                .outcome
        };
        assert_eq!(draw(11), draw(11));
        assert_ne!(draw(11), draw(12));
    }
}
