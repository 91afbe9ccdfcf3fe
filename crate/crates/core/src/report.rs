//! Serializable report pieces shared by the protocol modules.
//!
//! Complex numbers are written as `[re, im]` arrays.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;

/// Version tag written at the top of every JSON report.
pub const SCHEMA_VERSION: u32 = 1;

pub mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

pub mod complex_pairs {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        zs.iter()
            .map(|z| [z.re, z.im])
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect())
    }
}

/// First and second moments of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeMoments {
    pub mean: [f64; 2],
    pub cov: [[f64; 2]; 2],
}

impl ModeMoments {
    pub fn of(state: &GaussianState, mode: usize) -> Result<Self> {
        let single = state.reduce(&[mode])?;
        let (m, v) = (single.mean(), single.cov());
        Ok(Self {
            mean: [m[0], m[1]],
            cov: [[v[(0, 0)], v[(0, 1)]], [v[(1, 0)], v[(1, 1)]]],
        })
    }

    /// Largest absolute entry-wise difference of means and covariances.
    pub fn max_deviation(&self, other: &ModeMoments) -> f64 {
        let mean = (0..2).map(|i| (self.mean[i] - other.mean[i]).abs());
        let cov = (0..4).map(|k| (self.cov[k / 2][k % 2] - other.cov[k / 2][k % 2]).abs());
        mean.chain(cov).fold(0.0, f64::max)
    }
}

/// Square sampling window in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(with = "complex_pair")]
    pub center: Complex64,
    pub half_width: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(center: Complex64, half_width: f64, points: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grid half-width must be positive, got {half_width}"
            )));
        }
        if points < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2 points per axis, got {points}"
            )));
        }
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(Error::InvalidParameter("grid center must be finite".into()));
        }
        Ok(Self {
            center,
            half_width,
            points,
        })
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    /// Grid nodes, row-major: the real part is the slow index.
    pub fn nodes(&self) -> Vec<Complex64> {
        let h = self.step();
        let start = self.center - Complex64::new(self.half_width, self.half_width);
        (0..self.points)
            .flat_map(|i| {
                (0..self.points).map(move |j| start + Complex64::new(i as f64 * h, j as f64 * h))
            })
            .collect()
    }
}

/// One node of a sampled Husimi grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QSample {
    #[serde(with = "complex_pair")]
    pub alpha: Complex64,
    pub simulated: f64,
    pub closed_form: f64,
    pub abs_diff: f64,
}
