//! End-to-end falsification pipeline and its reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::counterfactual::{ace_bounds, AssumptionSet, BoundsResult};
use crate::distribution::ObservedDistribution;
use crate::error::Result;
use crate::quantum::QuantumInstrumentalScenario;
use crate::quantum::{born_distribution, check_marginal_exogeneity, true_ace, MarginalExogeneityReport};
use crate::simplex::Status;

/// Slack when comparing the true ACE against the bound edges.
pub const VERDICT_TOL: f64 = 1e-9;
/// Threshold for the marginal exogeneity check inside the pipeline.
pub const MARGINAL_TOL: f64 = 1e-10;

/// The assumption set the verdict is decided on.
pub const VERDICT_ASSUMPTIONS: AssumptionSet = AssumptionSet::JeStratifiedEr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    JointExogeneityFalsified,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Consistent => "CONSISTENT",
            Verdict::JointExogeneityFalsified => "JOINT_EXOGENEITY_FALSIFIED",
        }
    }

    pub fn is_falsified(&self) -> bool {
        *self == Verdict::JointExogeneityFalsified
    }

    /// Verdict and signed margin from the true ACE and one bounds result.
    ///
    /// The margin is `max(lower − ace, ace − upper)`: positive outside the
    /// interval, negative inside. If either solve is infeasible the data
    /// already contradict the assumptions, so the verdict is falsified and
    /// there is no margin.
    pub fn from_bounds(true_ace: f64, bounds: &BoundsResult) -> (Verdict, Option<f64>) {
        match bounds.interval() {
            Some((lo, hi)) => {
                let verdict = if true_ace < lo - VERDICT_TOL || true_ace > hi + VERDICT_TOL {
                    Verdict::JointExogeneityFalsified
                } else {
                    Verdict::Consistent
                };
                (verdict, Some((lo - true_ace).max(true_ace - hi)))
            }
            None => (Verdict::JointExogeneityFalsified, None),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FalsificationReport {
    pub observed: ObservedDistribution,
    pub bounds_by_assumption: BTreeMap<AssumptionSet, BoundsResult>,
    pub true_ace: f64,
    pub marginal_exogeneity: MarginalExogeneityReport,
    pub verdict: Verdict,
    pub margin: Option<f64>,
}

impl FalsificationReport {
    /// Assembles a report, deriving the verdict from the stratified bounds.
    ///
    /// # Panics
    /// If `bounds_by_assumption` lacks the stratified entry.
    pub fn new(
        observed: ObservedDistribution,
        bounds_by_assumption: BTreeMap<AssumptionSet, BoundsResult>,
        true_ace: f64,
        marginal_exogeneity: MarginalExogeneityReport,
    ) -> Self {
        let (verdict, margin) = Verdict::from_bounds(true_ace, &bounds_by_assumption[&VERDICT_ASSUMPTIONS]);
        Self { observed, bounds_by_assumption, true_ace, marginal_exogeneity, verdict, margin }
    }

    /// Verdict recomputed from the stored ACE and bounds.
    pub fn recompute_verdict(&self) -> Option<(Verdict, Option<f64>)> {
        let b = self.bounds_by_assumption.get(&VERDICT_ASSUMPTIONS)?;
        Some(Verdict::from_bounds(self.true_ace, b))
    }

    pub fn bounds(&self, a: AssumptionSet) -> Option<&BoundsResult> {
        self.bounds_by_assumption.get(&a)
    }
}

/// Born distribution, bounds under every assumption set (solved in
/// parallel), true ACE, marginal exogeneity check and verdict.
pub fn falsify_pipeline(s: &QuantumInstrumentalScenario) -> Result<FalsificationReport> {
    let observed = born_distribution(s)?;
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> =
            AssumptionSet::ALL.iter().map(|&a| scope.spawn(move || ace_bounds(&observed, a))).collect();
        handles.into_iter().map(|h| h.join().expect("bounds thread panicked")).collect()
    });
    let mut bounds = BTreeMap::new();
    for r in results {
        let r = r?;
        log::debug!("{}: [{:?}, {:?}]", r.assumptions, r.lower, r.upper);
        bounds.insert(r.assumptions, r);
    }
    let ace = true_ace(s)?;
    let marginal = check_marginal_exogeneity(s, MARGINAL_TOL)?;
    Ok(FalsificationReport::new(observed, bounds, ace, marginal))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Deterministic rendering without color.
pub fn render_report(r: &FalsificationReport, format: Format) -> String {
    match format {
        Format::Text => render_text(r, false),
        Format::Json => render_json(r),
    }
}

/// Pretty JSON with fixed key order; floats round-trip exactly.
pub fn render_json(r: &FalsificationReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("plain data");
    s.push('\n');
    s
}

pub fn parse_report(json: &str) -> serde_json::Result<FalsificationReport> {
    serde_json::from_str(json)
}

fn fmt_bound(v: Option<f64>, status: Status) -> String {
    match v {
        Some(v) => format!("{v:.4}"),
        None => format!("{status:?}").to_uppercase(),
    }
}

/// Plain-text tables. `color` wraps the verdict in ANSI escapes.
pub fn render_text(r: &FalsificationReport, color: bool) -> String {
    let mut out = String::new();
    out.push_str("Observed distribution p(x,y|z)\n");
    out.push_str("  z  x  y       p\n");
    for z in 0..2 {
        for x in 0..2 {
            for y in 0..2 {
                let _ = writeln!(out, "  {z}  {x}  {y}  {:>6.4}", r.observed.get(z, x, y));
            }
        }
    }

    out.push_str("\nACE bounds\n");
    let _ = writeln!(out, "  {:<18} {:>8} {:>8} {:>5}", "assumptions", "lower", "upper", "rows");
    for (a, b) in &r.bounds_by_assumption {
        let _ = writeln!(
            out,
            "  {:<18} {:>8} {:>8} {:>5}",
            a.as_str(),
            fmt_bound(b.lower, b.lower_status),
            fmt_bound(b.upper, b.upper_status),
            b.rows
        );
    }

    out.push('\n');
    let _ = writeln!(out, "  {:<20} {:.4}", "true ACE", r.true_ace);
    let me = &r.marginal_exogeneity;
    let _ = writeln!(
        out,
        "  {:<20} {} (max deviation {:.1e})",
        "marginal exogeneity",
        if me.holds { "holds" } else { "VIOLATED" },
        me.max_deviation
    );
    let margin = r.margin.map_or_else(|| "n/a".to_string(), |m| format!("{m:.4}"));
    let _ = writeln!(out, "  {:<20} {margin}", "margin");
    let verdict = match (color, r.verdict) {
        (false, v) => v.as_str().to_string(),
        (true, Verdict::Consistent) => format!("\x1b[32m{}\x1b[0m", r.verdict.as_str()),
        (true, Verdict::JointExogeneityFalsified) => format!("\x1b[1;31m{}\x1b[0m", r.verdict.as_str()),
    };
    let _ = writeln!(out, "  {:<20} {verdict}", "verdict");
    out
}
