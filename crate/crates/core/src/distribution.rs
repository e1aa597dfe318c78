//! Observed and interventional distributions over binary `(z, x, y)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Entries below this are rejected; entries in `[-NEG_TOL, 0)` are clamped.
pub const NEG_TOL: f64 = 1e-12;
/// Allowed deviation of each per-`z` block sum from one.
pub const NORM_TOL: f64 = 1e-9;

/// Table indexed `[z][x][y]`.
pub type Table = [[[f64; 2]; 2]; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistributionError {
    #[error("non-finite probability at (z={z}, x={x}, y={y})")]
    NonFinite { z: usize, x: usize, y: usize },

    #[error("negative probability {value:e} at (z={z}, x={x}, y={y})")]
    Negative { z: usize, x: usize, y: usize, value: f64 },

    #[error("probabilities for z={z} sum to {sum}, not 1")]
    NotNormalized { z: usize, sum: f64 },

    #[error("no samples in arm z={0}")]
    EmptyArm(usize),
}

fn cells() -> impl Iterator<Item = (usize, usize, usize)> {
    (0..2).flat_map(|z| (0..2).flat_map(move |x| (0..2).map(move |y| (z, x, y))))
}

fn check_table(p: &Table) -> Result<(), DistributionError> {
    for (z, x, y) in cells() {
        let v = p[z][x][y];
        if !v.is_finite() {
            return Err(DistributionError::NonFinite { z, x, y });
        }
        if v < -NEG_TOL {
            return Err(DistributionError::Negative { z, x, y, value: v });
        }
    }
    for (z, block) in p.iter().enumerate() {
        let sum: f64 = block.iter().flatten().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(DistributionError::NotNormalized { z, sum });
        }
    }
    Ok(())
}

/// `p(x, y | z)` for binary `z`, `x`, `y`.
///
/// Construction validates the table and clamps tiny negative entries to
/// zero. Values are otherwise kept as given so serialization round-trips
/// bit-exactly; [`ObservedDistribution::renormalized`] rescales each block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservedDistribution {
    p: Table,
}

impl ObservedDistribution {
    pub fn new(p: Table) -> Result<Self, DistributionError> {
        check_table(&p)?;
        let mut p = p;
        for v in p.iter_mut().flatten().flatten() {
            *v = v.max(0.0);
        }
        Ok(Self { p })
    }

    /// Copy with each `z` block rescaled to sum to one.
    pub fn renormalized(&self) -> Self {
        let mut p = self.p;
        for block in p.iter_mut() {
            let sum: f64 = block.iter().flatten().sum();
            for v in block.iter_mut().flatten() {
                *v /= sum;
            }
        }
        Self { p }
    }

    /// Uniform table, `p(x, y | z) = 1/4`.
    pub fn uniform() -> Self {
        Self { p: [[[0.25; 2]; 2]; 2] }
    }

    /// Normalizes integer counts per `z` arm.
    pub fn from_counts(counts: &[[[u64; 2]; 2]; 2]) -> Result<Self, DistributionError> {
        let mut p = [[[0.0; 2]; 2]; 2];
        for z in 0..2 {
            let total: u64 = counts[z].iter().flatten().sum();
            if total == 0 {
                return Err(DistributionError::EmptyArm(z));
            }
            for x in 0..2 {
                for y in 0..2 {
                    p[z][x][y] = counts[z][x][y] as f64 / total as f64;
                }
            }
        }
        Self::new(p)
    }

    /// `p(x, y | z)`.
    #[inline]
    pub fn get(&self, z: usize, x: usize, y: usize) -> f64 {
        self.p[z][x][y]
    }

    pub fn table(&self) -> &Table {
        &self.p
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &ObservedDistribution) -> f64 {
        cells().map(|(z, x, y)| (self.get(z, x, y) - other.get(z, x, y)).abs()).fold(0.0, f64::max)
    }
}

impl<'de> Deserialize<'de> for ObservedDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            p: Table,
        }
        let raw = Raw::deserialize(deserializer)?;
        ObservedDistribution::new(raw.p).map_err(serde::de::Error::custom)
    }
}

/// Distribution of `(x', y)` given `z'` when the signal reaching the `Y`
/// node is reset to `(x, z)`. Indexed `[z'][x'][y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InterventionalDistribution {
    pub q: Table,
    pub intervention_x: u8,
    pub intervention_z: u8,
}

impl InterventionalDistribution {
    #[inline]
    pub fn get(&self, z_obs: usize, x_obs: usize, y: usize) -> f64 {
        self.q[z_obs][x_obs][y]
    }

    /// `Q(Y = y | Z = z')`, marginalizing the observed `x'`.
    pub fn outcome_marginal(&self, z_obs: usize, y: usize) -> f64 {
        self.q[z_obs][0][y] + self.q[z_obs][1][y]
    }
}
