//! Bounds on the average causal effect of `X` on `Y` by linear programming.
//!
//! The decision variables are the 64 conditional probabilities
//! `q(x, y00, y01, y10, y11 | z)` of the observed treatment jointly with the
//! four potential outcomes `Y(x', z')`. Constraints encode joint
//! exogeneity, optionally an exclusion restriction (stratified or
//! individual), normalization and agreement with the observed
//! distribution. The objective is
//! `P(Y(1,0) = 1 | Z = 0) − P(Y(0,0) = 1 | Z = 0)`.

mod index;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distribution::{DistributionError, ObservedDistribution, Table};
use crate::simplex::{self, LinearProgram, Sense, Solution, SolverError, Status, DEFAULT_TOL};

pub use index::{decode_index, encode_index, CounterfactualIndex, NUM_COLUMNS};

/// Row counts per constraint family.
pub const JOINT_EXOGENEITY_ROWS: usize = 16;
pub const STRATIFIED_ROWS: usize = 8;
pub const NORMALIZATION_ROWS: usize = 2;
pub const OBSERVATION_ROWS: usize = 8;
pub const EXCLUSION_ROWS: usize = 48;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CounterfactualError {
    #[error("column {0} out of range 0..64")]
    ColumnOutOfRange(usize),

    #[error(transparent)]
    Distribution(#[from] DistributionError),

    #[error(transparent)]
    Solver(#[from] SolverError),

    #[error("{0:?} program reported unbounded; the feasible set is bounded so this is a bug")]
    Unbounded(Sense),
}

/// Counterfactual assumptions layered on top of the observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AssumptionSet {
    /// Joint exogeneity of `Z` and the potential-outcome vector only.
    JeOnly,
    /// Joint exogeneity plus equal potential-outcome distributions across
    /// `z` within each observed `(X, Z)` stratum.
    JeStratifiedEr,
    /// Joint exogeneity plus `Y(x, 0) = Y(x, 1)` for every unit.
    JeIndividualEr,
}

impl AssumptionSet {
    pub const ALL: [AssumptionSet; 3] =
        [AssumptionSet::JeOnly, AssumptionSet::JeStratifiedEr, AssumptionSet::JeIndividualEr];

    pub fn as_str(&self) -> &'static str {
        match self {
            AssumptionSet::JeOnly => "JE_ONLY",
            AssumptionSet::JeStratifiedEr => "JE_STRATIFIED_ER",
            AssumptionSet::JeIndividualEr => "JE_INDIVIDUAL_ER",
        }
    }

    /// Number of equality rows in the program for this set.
    pub fn row_count(&self) -> usize {
        let base = JOINT_EXOGENEITY_ROWS + NORMALIZATION_ROWS + OBSERVATION_ROWS;
        match self {
            AssumptionSet::JeOnly => base,
            AssumptionSet::JeStratifiedEr => base + STRATIFIED_ROWS,
            AssumptionSet::JeIndividualEr => base + STRATIFIED_ROWS + EXCLUSION_ROWS,
        }
    }
}

impl fmt::Display for AssumptionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AssumptionSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "je" | "je_only" => Ok(AssumptionSet::JeOnly),
            "strat" | "je_stratified_er" => Ok(AssumptionSet::JeStratifiedEr),
            "indiv" | "je_individual_er" => Ok(AssumptionSet::JeIndividualEr),
            _ => Err(format!("unknown assumption set '{s}' (expected je, strat or indiv)")),
        }
    }
}

fn row_where(pred: impl Fn(&CounterfactualIndex) -> f64) -> Vec<f64> {
    CounterfactualIndex::all().map(|i| pred(&i)).collect()
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// ACE coefficients: `+1` where `y10 = 1`, `−1` where `y00 = 1`, on `z = 0`.
pub fn ace_objective() -> Vec<f64> {
    row_where(|i| if i.z == 0 { indicator(i.y10 == 1) - indicator(i.y00 == 1) } else { 0.0 })
}

/// Observation rows in order: `(x, z)` arms `(0,0), (1,0), (0,1), (1,1)`,
/// each for revealed outcome `y = 0, 1`.
const OBSERVATION_ARMS: [(u8, u8); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

/// Builds the program for one assumption set and optimization sense.
///
/// Rows, in order: joint exogeneity (16), stratified exclusion (8, unless
/// `JeOnly`), normalization (2), observations (8), and for
/// `JeIndividualEr` one zero-forcing row per column with `y00 ≠ y01` or
/// `y10 ≠ y11` (48). Observation right-hand sides use the renormalized
/// distribution.
pub fn build_lp(obs: &ObservedDistribution, assumptions: AssumptionSet, sense: Sense) -> LinearProgram {
    let p = obs.renormalized();
    let mut rows = Vec::with_capacity(assumptions.row_count());
    let mut rhs = Vec::with_capacity(assumptions.row_count());

    for pattern in 0..16u8 {
        let (y00, y01, y10, y11) = (pattern >> 3 & 1, pattern >> 2 & 1, pattern >> 1 & 1, pattern & 1);
        rows.push(row_where(|i| {
            if (i.y00, i.y01, i.y10, i.y11) != (y00, y01, y10, y11) {
                0.0
            } else if i.z == 0 {
                1.0
            } else {
                -1.0
            }
        }));
        rhs.push(0.0);
    }

    if assumptions != AssumptionSet::JeOnly {
        for x in 0..2 {
            for z in 0..2 {
                let stratum = |i: &CounterfactualIndex| i.x == x && i.z == z;
                rows.push(row_where(|i| if stratum(i) { indicator(i.y00 == 0) - indicator(i.y01 == 0) } else { 0.0 }));
                rhs.push(0.0);
                rows.push(row_where(|i| if stratum(i) { indicator(i.y10 == 1) - indicator(i.y11 == 1) } else { 0.0 }));
                rhs.push(0.0);
            }
        }
    }

    for z in 0..2 {
        rows.push(row_where(|i| indicator(i.z == z)));
        rhs.push(1.0);
    }

    for (x, z) in OBSERVATION_ARMS {
        for y in 0..2 {
            rows.push(row_where(|i| indicator(i.x == x && i.z == z && i.outcome(x, z) == y)));
            rhs.push(p.get(z as usize, x as usize, y as usize));
        }
    }

    if assumptions == AssumptionSet::JeIndividualEr {
        for idx in CounterfactualIndex::all().filter(|i| !i.satisfies_exclusion()) {
            let mut row = vec![0.0; NUM_COLUMNS];
            row[idx.encode()] = 1.0;
            rows.push(row);
            rhs.push(0.0);
        }
    }

    debug_assert_eq!(rows.len(), assumptions.row_count());
    LinearProgram::new(ace_objective(), rows, rhs, sense)
}

/// Observed distribution implied by a point `q` (the observation rows
/// applied to `q`), indexed `[z][x][y]`.
pub fn implied_observation(q: &[f64]) -> Table {
    let mut t = [[[0.0; 2]; 2]; 2];
    for (idx, v) in CounterfactualIndex::all().zip(q) {
        t[idx.z as usize][idx.x as usize][idx.observed_outcome() as usize] += v;
    }
    t
}

/// Solved interval for one assumption set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundsResult {
    pub assumptions: AssumptionSet,
    /// Minimum ACE; `None` unless `lower_status` is optimal.
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub lower_status: Status,
    pub upper_status: Status,
    /// Number of equality rows in the program.
    pub rows: usize,
    pub witness_lower: Option<Vec<f64>>,
    pub witness_upper: Option<Vec<f64>>,
}

impl BoundsResult {
    pub fn is_optimal(&self) -> bool {
        self.lower_status == Status::Optimal && self.upper_status == Status::Optimal
    }

    /// `(lower, upper)` when both solves are optimal.
    pub fn interval(&self) -> Option<(f64, f64)> {
        Some((self.lower?, self.upper?))
    }

    /// Whether `value` lies in `[lower − slack, upper + slack]`.
    pub fn contains(&self, value: f64, slack: f64) -> bool {
        self.interval().is_some_and(|(lo, hi)| value >= lo - slack && value <= hi + slack)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

/// Lower and upper ACE bounds under `assumptions`.
pub fn ace_bounds(obs: &ObservedDistribution, assumptions: AssumptionSet) -> Result<BoundsResult, CounterfactualError> {
    let solve = |sense| -> Result<Solution, CounterfactualError> {
        let sol = simplex::solve(&build_lp(obs, assumptions, sense), DEFAULT_TOL)?;
        if sol.status == Status::Unbounded {
            return Err(CounterfactualError::Unbounded(sense));
        }
        Ok(sol)
    };
    let lo = solve(Sense::Min)?;
    let hi = solve(Sense::Max)?;
    Ok(BoundsResult {
        assumptions,
        lower: lo.objective_value,
        upper: hi.objective_value,
        lower_status: lo.status,
        upper_status: hi.status,
        rows: assumptions.row_count(),
        witness_lower: lo.x,
        witness_upper: hi.x,
    })
}
