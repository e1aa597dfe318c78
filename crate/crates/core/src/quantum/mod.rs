//! Quantum instrumental network `Z -> X -> Y` with a shared quantum source.
//!
//! Node `X` measures its half of the state with the POVM selected by `z`;
//! node `Y` measures the other half with the POVM selected by `x` only.
//! Outcome probabilities follow the Born rule on the joint state.

mod born;
mod preset;
pub mod random;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{LinalgError, Matrix, JACOBI_TOL};

pub use born::{
    born_distribution, check_marginal_exogeneity, interventional_distribution, potential_outcome_marginal, true_ace,
    MarginalExogeneityReport,
};
pub use preset::bell_preset;

/// Tolerance for Hermiticity, positivity, trace and completeness checks.
pub const VALIDATION_TOL: f64 = 1e-10;
/// Largest imaginary part tolerated in a Born-rule trace.
pub const IMAG_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("invalid scenario: {}", format_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("trace for {context} has imaginary part {imag:e}")]
    ImaginaryResidue { context: String, imag: f64 },

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Which invariant a [`Violation`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Dimension,
    OutcomeCount,
    Hermiticity,
    Positivity,
    Trace,
    Completeness,
    Eigensolver,
}

/// A failed scenario invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Name of the offending object, e.g. `rho` or `measurementsA[1]`.
    pub object: String,
    pub check: Check,
    /// Size of the failure in the check's own units.
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?} check failed (residual {:e})", self.object, self.check, self.residual)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    pub mat: Matrix,
}

impl DensityOperator {
    pub fn new(mat: Matrix) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    fn violations(&self, name: &str, dim: usize, out: &mut Vec<Violation>) {
        if !self.mat.is_square() || self.mat.rows() != dim {
            out.push(Violation {
                object: name.into(),
                check: Check::Dimension,
                residual: (self.mat.rows().max(self.mat.cols()) as f64 - dim as f64).abs(),
            });
            return;
        }
        if psd_violations(&self.mat, name, out) {
            let tr = self.mat.trace().expect("square").re;
            if (tr - 1.0).abs() > VALIDATION_TOL {
                out.push(Violation { object: name.into(), check: Check::Trace, residual: (tr - 1.0).abs() });
            }
        }
    }
}

/// Binary-or-larger POVM; effects indexed by outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    pub effects: Vec<Matrix>,
}

impl Povm {
    pub fn new(effects: Vec<Matrix>) -> Self {
        Self { effects }
    }

    pub fn effect(&self, outcome: usize) -> &Matrix {
        &self.effects[outcome]
    }

    fn violations(&self, name: &str, dim: usize, out: &mut Vec<Violation>) {
        if self.effects.len() != 2 {
            out.push(Violation {
                object: name.into(),
                check: Check::OutcomeCount,
                residual: (self.effects.len() as f64 - 2.0).abs(),
            });
        }
        let mut shapes_ok = true;
        for (k, e) in self.effects.iter().enumerate() {
            let object = format!("{name}[{k}]");
            if !e.is_square() || e.rows() != dim {
                shapes_ok = false;
                out.push(Violation {
                    object,
                    check: Check::Dimension,
                    residual: (e.rows().max(e.cols()) as f64 - dim as f64).abs(),
                });
                continue;
            }
            psd_violations(e, &object, out);
        }
        if shapes_ok && !self.effects.is_empty() {
            let sum = self.effects.iter().skip(1).fold(self.effects[0].clone(), |acc, e| &acc + e);
            let residual = sum.max_abs_diff(&Matrix::identity(dim)).expect("square");
            if residual > VALIDATION_TOL {
                out.push(Violation { object: name.into(), check: Check::Completeness, residual });
            }
        }
    }
}

/// Records Hermiticity and positivity failures; returns `true` when the
/// matrix is Hermitian (so later checks are meaningful).
fn psd_violations(m: &Matrix, name: &str, out: &mut Vec<Violation>) -> bool {
    let herm = m.hermiticity_residual();
    if herm > VALIDATION_TOL {
        out.push(Violation { object: name.into(), check: Check::Hermiticity, residual: herm });
        return false;
    }
    let symmetrized = (m + &m.dagger()).scale(0.5);
    match symmetrized.eig_hermitian(JACOBI_TOL) {
        Ok(eig) => {
            let min = eig[0];
            if min < -VALIDATION_TOL {
                out.push(Violation { object: name.into(), check: Check::Positivity, residual: -min });
            }
        }
        Err(_) => {
            out.push(Violation { object: name.into(), check: Check::Eigensolver, residual: f64::NAN });
        }
    }
    true
}

/// Density operator on `A ⊗ B` plus the two measurement families.
///
/// `measurements_a[z]` is the POVM used at `X` when `Z = z` (effects
/// indexed by `x`); `measurements_b[x]` is the POVM used at `Y` when
/// `X = x` (effects indexed by `y`).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumInstrumentalScenario {
    pub dim_a: usize,
    pub dim_b: usize,
    pub rho: DensityOperator,
    pub measurements_a: [Povm; 2],
    pub measurements_b: [Povm; 2],
}

impl QuantumInstrumentalScenario {
    /// All violated invariants; empty iff the scenario is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.dim_a == 0 || self.dim_b == 0 {
            out.push(Violation { object: "dims".into(), check: Check::Dimension, residual: 0.0 });
            return out;
        }
        self.rho.violations("rho", self.dim_a * self.dim_b, &mut out);
        for (z, povm) in self.measurements_a.iter().enumerate() {
            povm.violations(&format!("measurementsA[{z}]"), self.dim_a, &mut out);
        }
        for (x, povm) in self.measurements_b.iter().enumerate() {
            povm.violations(&format!("measurementsB[{x}]"), self.dim_b, &mut out);
        }
        out
    }

    /// `Ok(())` iff [`Self::validate`] is empty.
    pub fn ensure_valid(&self) -> Result<(), QuantumError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(QuantumError::Invalid(v))
        }
    }

    /// Parses the scenario JSON document. Shapes are checked here; physical
    /// invariants are left to [`Self::validate`].
    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str::<ScenarioDocument>(s).map(Into::into)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ScenarioDocument::from(self)).expect("plain data")
    }
}

/// Free function form of [`QuantumInstrumentalScenario::validate`].
pub fn validate_scenario(s: &QuantumInstrumentalScenario) -> Vec<Violation> {
    s.validate()
}

/// Wire form: `measurementsA[z][x]` and `measurementsB[x][y]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ScenarioDocument {
    dim_a: usize,
    dim_b: usize,
    rho: Matrix,
    measurements_a: [[Matrix; 2]; 2],
    measurements_b: [[Matrix; 2]; 2],
}

impl From<ScenarioDocument> for QuantumInstrumentalScenario {
    fn from(d: ScenarioDocument) -> Self {
        let povm = |[e0, e1]: [Matrix; 2]| Povm::new(vec![e0, e1]);
        let [a0, a1] = d.measurements_a;
        let [b0, b1] = d.measurements_b;
        Self {
            dim_a: d.dim_a,
            dim_b: d.dim_b,
            rho: DensityOperator::new(d.rho),
            measurements_a: [povm(a0), povm(a1)],
            measurements_b: [povm(b0), povm(b1)],
        }
    }
}

impl From<&QuantumInstrumentalScenario> for ScenarioDocument {
    fn from(s: &QuantumInstrumentalScenario) -> Self {
        let pair = |p: &Povm| [p.effects[0].clone(), p.effects[1].clone()];
        Self {
            dim_a: s.dim_a,
            dim_b: s.dim_b,
            rho: s.rho.mat.clone(),
            measurements_a: [pair(&s.measurements_a[0]), pair(&s.measurements_a[1])],
            measurements_b: [pair(&s.measurements_b[0]), pair(&s.measurements_b[1])],
        }
    }
}
