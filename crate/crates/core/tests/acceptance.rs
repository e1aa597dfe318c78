//! Acceptance suite. Each test prints one `[PASS]`/`[FAIL]` line for its
//! criterion before asserting; run with `--nocapture` to see them.

use qiv_core::classical::{classical_observed, classical_true_ace, random_model};
use qiv_core::counterfactual::{ace_bounds, AssumptionSet, BoundsResult};
use qiv_core::quantum::random::random_scenario;
use qiv_core::quantum::{bell_preset, born_distribution, check_marginal_exogeneity, true_ace};
use qiv_core::report::{falsify_pipeline, Verdict};
use qiv_core::simplex::{enumerate_vertices, solve, LinearProgram, Sense, Status, DEFAULT_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CLASSICAL_MODELS: u64 = 200;
const CONTAINMENT_MODELS: u64 = 500;
const RANDOM_SCENARIOS: u64 = 100;
const RANDOM_LPS: u64 = 500;

fn verdict(criterion: u8, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {criterion}: {detail}");
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn bounds_for(seed: u64) -> [BoundsResult; 3] {
    let obs = classical_observed(&random_model(seed));
    AssumptionSet::ALL.map(|a| ace_bounds(&obs, a).expect("classical data never breaks the solver"))
}

#[test]
fn criterion_1_bell_probabilities() {
    let hi = 0.4268;
    let lo = 0.0732;
    let expected = [[[hi, lo], [lo, hi]], [[lo, hi], [lo, hi]]];
    let p = born_distribution(&bell_preset()).unwrap();
    let worst = p
        .table()
        .iter()
        .flatten()
        .flatten()
        .zip(expected.iter().flatten().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    verdict(1, worst <= 5e-5, format!("Bell probabilities, max deviation {worst:.2e} (tol 5e-5)"));
}

#[test]
fn criterion_2_stratified_lower_bound() {
    let p = born_distribution(&bell_preset()).unwrap();
    let b = ace_bounds(&p, AssumptionSet::JeStratifiedEr).unwrap();
    let lower = b.lower.unwrap_or(f64::NAN);
    let pass = b.lower_status == Status::Optimal && (lower - 0.1339).abs() <= 5e-4;
    verdict(2, pass, format!("stratified lower bound {lower:.6} (want 0.1339 ± 5e-4)"));
}

#[test]
fn criterion_3_true_ace_and_verdict() {
    let ace = true_ace(&bell_preset()).unwrap();
    let r = falsify_pipeline(&bell_preset()).unwrap();
    let margin = r.margin.unwrap_or(f64::NAN);
    let pass = ace.abs() <= 1e-12 && r.verdict == Verdict::JointExogeneityFalsified && margin >= 0.13;
    verdict(3, pass, format!("true ACE {ace:.1e}, verdict {}, margin {margin:.4} (want ≥ 0.13)", r.verdict.as_str()));
}

#[test]
fn criterion_4_stratified_equals_individual() {
    let mut worst = 0.0f64;
    let mut status_mismatch = 0;
    for seed in 0..CLASSICAL_MODELS {
        let [_, strat, indiv] = bounds_for(seed);
        if (strat.lower_status, strat.upper_status) != (indiv.lower_status, indiv.upper_status) {
            status_mismatch += 1;
            continue;
        }
        if let (Some((a, b)), Some((c, d))) = (strat.interval(), indiv.interval()) {
            worst = worst.max((a - c).abs()).max((b - d).abs());
        }
    }
    let pass = status_mismatch == 0 && worst <= 1e-7;
    verdict(
        4,
        pass,
        format!(
            "{CLASSICAL_MODELS} models, max endpoint gap {worst:.2e} (tol 1e-7), status mismatches {status_mismatch}"
        ),
    );
}

#[test]
fn criterion_5_classical_containment() {
    let mut escapes = Vec::new();
    for seed in 0..CONTAINMENT_MODELS {
        let ace = classical_true_ace(&random_model(seed));
        for b in bounds_for(seed) {
            if !b.contains(ace, 1e-7) {
                escapes.push((seed, b.assumptions));
            }
        }
    }
    verdict(
        5,
        escapes.is_empty(),
        format!("{CONTAINMENT_MODELS} models x 3 assumption sets, escapes {escapes:?} (slack 1e-7)"),
    );
}

#[test]
fn criterion_6_marginal_exogeneity() {
    let mut worst = check_marginal_exogeneity(&bell_preset(), 1e-10).unwrap().max_deviation;
    for seed in 0..RANDOM_SCENARIOS {
        let r = check_marginal_exogeneity(&random_scenario(seed), 1e-10).unwrap();
        worst = worst.max(r.max_deviation);
    }
    verdict(
        6,
        worst <= 1e-10,
        format!("Bell + {RANDOM_SCENARIOS} random scenarios, max deviation {worst:.2e} (tol 1e-10)"),
    );
}

/// Small LP with integer data. Half the programs get a right-hand side
/// built from a nonnegative point so they are feasible; the rest are
/// arbitrary and often infeasible. Free objectives make unbounded cases
/// common.
fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.random_range(1..=10);
    let m = rng.random_range(0..=6.min(n));
    let mut int = |lo: i32, hi: i32| rng.random_range(lo..=hi) as f64;
    let a: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| int(-3, 3)).collect()).collect();
    let feasible = int(0, 1) == 1.0;
    let b = if feasible {
        let x0: Vec<f64> = (0..n).map(|_| int(0, 2)).collect();
        a.iter().map(|row| row.iter().zip(&x0).map(|(r, x)| r * x).sum()).collect()
    } else {
        (0..m).map(|_| int(-5, 5)).collect()
    };
    let c = (0..n).map(|_| int(-4, 4)).collect();
    let sense = if int(0, 1) == 1.0 { Sense::Max } else { Sense::Min };
    LinearProgram::new(c, a, b, sense)
}

#[test]
fn criterion_7_solver_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut disagreements = Vec::new();
    let mut tally = [0usize; 3];
    for k in 0..RANDOM_LPS {
        let lp = random_lp(&mut rng);
        let fast = solve(&lp, DEFAULT_TOL).unwrap();
        let slow = enumerate_vertices(&lp).unwrap();
        tally[fast.status as usize] += 1;
        let agree = fast.status == slow.status
            && match (fast.objective_value, slow.objective_value) {
                (Some(a), Some(b)) => (a - b).abs() <= 1e-8,
                (None, None) => true,
                _ => false,
            };
        if !agree {
            disagreements.push((k, fast.status, slow.status, fast.objective_value, slow.objective_value));
        }
    }
    verdict(
        7,
        disagreements.is_empty(),
        format!(
            "{RANDOM_LPS} LPs (optimal {}, infeasible {}, unbounded {}), disagreements {disagreements:?}",
            tally[0], tally[1], tally[2]
        ),
    );
}

#[test]
fn criterion_8_assumption_monotonicity() {
    let mut violations = Vec::new();
    for seed in 0..CLASSICAL_MODELS {
        let [je, strat, indiv] = bounds_for(seed);
        for (outer, inner) in [(&je, &strat), (&strat, &indiv)] {
            let Some((lo_in, hi_in)) = inner.interval() else { continue };
            let nested =
                outer.interval().is_some_and(|(lo_out, hi_out)| lo_out <= lo_in + 1e-9 && hi_out >= hi_in - 1e-9);
            if !nested {
                violations.push((seed, outer.assumptions, inner.assumptions));
            }
        }
    }
    verdict(
        8,
        violations.is_empty(),
        format!(
            "{CLASSICAL_MODELS} models, JE_ONLY ⊇ JE_STRATIFIED_ER ⊇ JE_INDIVIDUAL_ER, violations {violations:?}"
        ),
    );
}
