//! Quantum instrumental networks and causal-effect bounds.
//!
//! Simulates a bipartite quantum network with an instrument `Z`, treatment
//! `X` and outcome `Y`, bounds the average causal effect of `X` on `Y` by
//! linear programming under counterfactual assumptions, and checks whether
//! the true quantum effect escapes those bounds.

// binary tables read more clearly with explicit (z, x, y) indices
#![allow(clippy::needless_range_loop)]

pub mod classical;
pub mod counterfactual;
pub mod distribution;
pub mod error;
pub mod linalg;
pub mod quantum;
pub mod report;
pub mod simplex;

pub use classical::{
    classical_observed, classical_true_ace, random_model, sample_dataset, ResponseFunctionModel, SampledDataset,
};
pub use counterfactual::{ace_bounds, build_lp, AssumptionSet, BoundsResult};
pub use distribution::{InterventionalDistribution, ObservedDistribution};
pub use error::{Error, Result};
pub use linalg::{ComplexScalar, Matrix};
pub use quantum::{
    bell_preset, born_distribution, check_marginal_exogeneity, true_ace, DensityOperator, Povm,
    QuantumInstrumentalScenario,
};
pub use report::{falsify_pipeline, render_report, FalsificationReport, Format, Verdict};
pub use simplex::{solve, LinearProgram, Sense, Solution, Status};
