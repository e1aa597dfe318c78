//! Dense linear programming in equality form.
//!
//! Programs are `min/max c·x  s.t.  A x = b,  x ≥ 0`. [`solve`] is a
//! two-phase primal simplex on a dense tableau with Bland's rule;
//! [`enumerate_vertices`] is an exhaustive basic-solution oracle for small
//! instances, used to cross-check the solver.

mod tableau;
mod vertex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use tableau::solve;
pub use vertex::{enumerate_vertices, MAX_ORACLE_ROWS, MAX_ORACLE_VARS};

/// Default optimality / feasibility tolerance for [`solve`].
pub const DEFAULT_TOL: f64 = 1e-9;
/// Smallest pivot magnitude accepted in ratio tests.
pub const PIVOT_TOL: f64 = 1e-9;
/// Tableau entries at or below this magnitude are flushed to zero.
pub const ZERO_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("malformed program: {0}")]
    Malformed(String),

    #[error("simplex stalled: {phase} exceeded {limit} pivots")]
    Stall { phase: &'static str, limit: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("program too large for vertex enumeration ({rows} rows, {vars} variables)")]
    Capacity { rows: usize, vars: usize },
}

/// `min/max objective·x  s.t.  eq_matrix x = eq_rhs,  x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub eq_matrix: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub sense: Sense,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, eq_matrix: Vec<Vec<f64>>, eq_rhs: Vec<f64>, sense: Sense) -> Self {
        Self { num_vars: objective.len(), objective, eq_matrix, eq_rhs, sense }
    }

    pub fn num_rows(&self) -> usize {
        self.eq_matrix.len()
    }

    /// Dimension and finiteness checks.
    pub fn check(&self) -> Result<(), SolverError> {
        if self.objective.len() != self.num_vars {
            return Err(SolverError::Malformed(format!(
                "objective has {} entries for {} variables",
                self.objective.len(),
                self.num_vars
            )));
        }
        if self.eq_rhs.len() != self.eq_matrix.len() {
            return Err(SolverError::Malformed(format!(
                "{} right-hand sides for {} rows",
                self.eq_rhs.len(),
                self.eq_matrix.len()
            )));
        }
        if let Some(i) = self.eq_matrix.iter().position(|r| r.len() != self.num_vars) {
            return Err(SolverError::Malformed(format!("row {i} has the wrong length")));
        }
        let finite =
            self.objective.iter().chain(&self.eq_rhs).chain(self.eq_matrix.iter().flatten()).all(|v| v.is_finite());
        if !finite {
            return Err(SolverError::Malformed("non-finite coefficient".into()));
        }
        Ok(())
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// `‖A x − b‖∞`.
    pub fn max_residual(&self, x: &[f64]) -> f64 {
        self.eq_matrix
            .iter()
            .zip(&self.eq_rhs)
            .map(|(row, b)| (row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - b).abs())
            .fold(0.0, f64::max)
    }

    /// Same program with the sense flipped and the objective negated.
    pub fn negated(&self) -> Self {
        Self {
            objective: self.objective.iter().map(|c| -c).collect(),
            sense: match self.sense {
                Sense::Min => Sense::Max,
                Sense::Max => Sense::Min,
            },
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Solution {
    pub status: Status,
    pub objective_value: Option<f64>,
    pub x: Option<Vec<f64>>,
    pub iterations: usize,
}

impl Solution {
    fn without_point(status: Status, iterations: usize) -> Self {
        Self { status, objective_value: None, x: None, iterations }
    }

    fn optimal(lp: &LinearProgram, x: Vec<f64>, iterations: usize) -> Self {
        Self { status: Status::Optimal, objective_value: Some(lp.objective_at(&x)), x: Some(x), iterations }
    }
}
