//! Fixtures shared by the benchmarks.

use qiv_core::classical::{classical_observed, random_model};
use qiv_core::distribution::ObservedDistribution;
use qiv_core::quantum::{bell_preset, born_distribution, QuantumInstrumentalScenario};
use qiv_core::simplex::LinearProgram;
use qiv_core::{build_lp, AssumptionSet, Sense};

pub fn bell() -> QuantumInstrumentalScenario {
    bell_preset()
}

pub fn bell_distribution() -> ObservedDistribution {
    born_distribution(&bell_preset()).expect("preset is valid")
}

/// Observed distributions of the first `n` seeded classical models.
pub fn classical_distributions(n: u64) -> Vec<ObservedDistribution> {
    (0..n).map(|seed| classical_observed(&random_model(seed))).collect()
}

/// The largest program the pipeline solves.
pub fn individual_lp() -> LinearProgram {
    build_lp(&bell_distribution(), AssumptionSet::JeIndividualEr, Sense::Min)
}
