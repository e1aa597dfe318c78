use thiserror::Error;

use crate::classical::ClassicalError;
use crate::counterfactual::CounterfactualError;
use crate::distribution::DistributionError;
use crate::linalg::LinalgError;
use crate::quantum::QuantumError;
use crate::simplex::SolverError;

/// Any failure from this crate, tagged by the module that raised it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("linalg: {0}")]
    Linalg(#[from] LinalgError),

    #[error("distribution: {0}")]
    Distribution(#[from] DistributionError),

    #[error("quantum model: {0}")]
    Quantum(#[from] QuantumError),

    #[error("solver: {0}")]
    Solver(#[from] SolverError),

    #[error("counterfactual LP: {0}")]
    Counterfactual(#[from] CounterfactualError),

    #[error("classical model: {0}")]
    Classical(#[from] ClassicalError),
}

impl Error {
    /// Whether the failure came from the LP solver rather than bad input.
    pub fn is_solver(&self) -> bool {
        matches!(
            self,
            Error::Solver(_)
                | Error::Counterfactual(CounterfactualError::Solver(_) | CounterfactualError::Unbounded(_))
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
