//! Classical response-function models of the instrumental network.
//!
//! A latent type fixes both `X = f(Z)` and `Y = g(X)`, so the exclusion
//! restriction holds unit by unit. Data generated this way must always fall
//! inside the LP bounds.

use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distribution::{DistributionError, ObservedDistribution};

pub const NUM_TYPES: usize = 16;
const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicalError {
    #[error("expected {NUM_TYPES} weights, got {0}")]
    WeightCount(usize),

    #[error("weight {index} is {value} (must be finite and nonnegative)")]
    BadWeight { index: usize, value: f64 },

    #[error("weights sum to {0}, not 1")]
    NotNormalized(f64),

    #[error("sample size must be positive")]
    EmptySample,

    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

/// How `X` responds to `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreatmentResponse {
    AlwaysZero,
    AlwaysOne,
    Complier,
    Defier,
}

/// How `Y` responds to `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeResponse {
    AlwaysZero,
    AlwaysOne,
    Helped,
    Hurt,
}

impl TreatmentResponse {
    pub const ALL: [Self; 4] = [Self::AlwaysZero, Self::AlwaysOne, Self::Complier, Self::Defier];

    pub fn respond(self, z: u8) -> u8 {
        match self {
            Self::AlwaysZero => 0,
            Self::AlwaysOne => 1,
            Self::Complier => z,
            Self::Defier => 1 - z,
        }
    }
}

impl OutcomeResponse {
    pub const ALL: [Self; 4] = [Self::AlwaysZero, Self::AlwaysOne, Self::Helped, Self::Hurt];

    pub fn respond(self, x: u8) -> u8 {
        match self {
            Self::AlwaysZero => 0,
            Self::AlwaysOne => 1,
            Self::Helped => x,
            Self::Hurt => 1 - x,
        }
    }
}

/// Type pair for weight index `k`; treatment type is the major index.
pub fn response_type(k: usize) -> (TreatmentResponse, OutcomeResponse) {
    (TreatmentResponse::ALL[k / 4], OutcomeResponse::ALL[k % 4])
}

/// Distribution over the 16 `(f, g)` response-type pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResponseFunctionModel {
    weights: Vec<f64>,
}

impl ResponseFunctionModel {
    pub fn new(weights: Vec<f64>) -> Result<Self, ClassicalError> {
        if weights.len() != NUM_TYPES {
            return Err(ClassicalError::WeightCount(weights.len()));
        }
        if let Some((index, &value)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(ClassicalError::BadWeight { index, value });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(ClassicalError::NotNormalized(sum));
        }
        Ok(Self { weights })
    }

    /// All mass on one type pair.
    pub fn point_mass(f: TreatmentResponse, g: OutcomeResponse) -> Self {
        let k = TreatmentResponse::ALL.iter().position(|&t| t == f).unwrap() * 4
            + OutcomeResponse::ALL.iter().position(|&t| t == g).unwrap();
        let mut weights = vec![0.0; NUM_TYPES];
        weights[k] = 1.0;
        Self { weights }
    }

    pub fn uniform() -> Self {
        Self { weights: vec![1.0 / NUM_TYPES as f64; NUM_TYPES] }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn types(&self) -> impl Iterator<Item = (TreatmentResponse, OutcomeResponse, f64)> + '_ {
        self.weights.iter().enumerate().map(|(k, &w)| {
            let (f, g) = response_type(k);
            (f, g, w)
        })
    }
}

impl<'de> Deserialize<'de> for ResponseFunctionModel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            weights: Vec<f64>,
        }
        ResponseFunctionModel::new(Raw::deserialize(deserializer)?.weights).map_err(serde::de::Error::custom)
    }
}

/// `p(x, y | z)`: total weight of types with `f(z) = x` and `g(x) = y`.
pub fn classical_observed(m: &ResponseFunctionModel) -> ObservedDistribution {
    let mut p = [[[0.0; 2]; 2]; 2];
    for z in 0..2u8 {
        for (f, g, w) in m.types() {
            let x = f.respond(z);
            p[z as usize][x as usize][g.respond(x) as usize] += w;
        }
    }
    ObservedDistribution::new(p).expect("valid model gives a valid distribution")
}

/// `P(g(1) = 1) − P(g(0) = 1)`.
pub fn classical_true_ace(m: &ResponseFunctionModel) -> f64 {
    m.types().map(|(_, g, w)| w * (g.respond(1) as f64 - g.respond(0) as f64)).sum()
}

/// Weights uniform on the simplex: 16 normalized standard-exponential draws
/// from a ChaCha8 stream seeded with `seed`.
pub fn random_model(seed: u64) -> ResponseFunctionModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<f64> = (0..NUM_TYPES).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    let mut weights: Vec<f64> = draws.iter().map(|d| d / total).collect();
    // push the rounding residue into the largest weight so the sum is exact
    let residue = 1.0 - weights.iter().sum::<f64>();
    let k = (0..NUM_TYPES).max_by(|&a, &b| weights[a].total_cmp(&weights[b])).unwrap();
    weights[k] += residue;
    ResponseFunctionModel { weights }
}

/// Finite-sample draw from a classical model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledDataset {
    pub n: u64,
    pub seed: u64,
    /// Indexed `[z][x][y]`.
    pub counts: [[[u64; 2]; 2]; 2],
}

impl SampledDataset {
    /// Counts normalized within each `z` arm.
    pub fn empirical(&self) -> Result<ObservedDistribution, DistributionError> {
        ObservedDistribution::from_counts(&self.counts)
    }
}

/// `n` i.i.d. units: fair-coin `z`, type drawn by weight, `(x, y)` from the
/// type's responses.
pub fn sample_dataset(m: &ResponseFunctionModel, n: u64, seed: u64) -> Result<SampledDataset, ClassicalError> {
    if n == 0 {
        return Err(ClassicalError::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let types = WeightedIndex::new(&m.weights).expect("validated weights");
    let mut counts = [[[0u64; 2]; 2]; 2];
    for _ in 0..n {
        let z: u8 = rng.random_range(0..2);
        let (f, g) = response_type(types.sample(&mut rng));
        let x = f.respond(z);
        counts[z as usize][x as usize][g.respond(x) as usize] += 1;
    }
    Ok(SampledDataset { n, seed, counts })
}
