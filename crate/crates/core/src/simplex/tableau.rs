use std::fmt::Write as _;

use log::{log_enabled, trace, Level};

use super::{LinearProgram, Sense, Solution, SolverError, Status, PIVOT_TOL, ZERO_TOL};

/// Dense tableau: `rows` constraint rows over `cols` columns plus a
/// right-hand side, and a reduced-cost row whose last entry is the negated
/// objective value.
struct Tableau {
    cols: usize,
    a: Vec<Vec<f64>>,
    cost: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.a[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<(), SolverError> {
        let p = self.a[r][c];
        for v in self.a[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = std::mem::take(&mut self.a[r]);
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            eliminate(row, &pivot_row, c);
        }
        eliminate(&mut self.cost, &pivot_row, c);
        self.a[r] = pivot_row;
        self.a[r][c] = 1.0;
        self.basis[r] = c;

        if self.a.iter().flatten().chain(&self.cost).any(|v| v.is_nan()) {
            return Err(SolverError::Numerical(format!("NaN after pivot on ({r}, {c})")));
        }
        Ok(())
    }

    /// Bland's rule: lowest-index improving column among the first
    /// `eligible` columns.
    fn entering(&self, eligible: usize, tol: f64) -> Option<usize> {
        (0..eligible).find(|&j| self.cost[j] < -tol)
    }

    /// Minimum-ratio row; ties go to the smallest basic variable index.
    fn leaving(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.a.len() {
            let a = self.a[r][c];
            if a <= PIVOT_TOL {
                continue;
            }
            let ratio = self.rhs(r).max(0.0) / a;
            best = match best {
                None => Some((r, ratio)),
                Some((br, bratio)) => {
                    let tie = (ratio - bratio).abs() <= 1e-12 * (1.0 + bratio.abs());
                    if (!tie && ratio < bratio) || (tie && self.basis[r] < self.basis[br]) {
                        Some((r, ratio))
                    } else {
                        Some((br, bratio))
                    }
                }
            };
        }
        best.map(|(r, _)| r)
    }

    /// Runs pivots until optimal (`Ok(true)`) or unbounded (`Ok(false)`).
    fn optimize(
        &mut self,
        eligible: usize,
        tol: f64,
        limit: usize,
        phase: &'static str,
        iterations: &mut usize,
    ) -> Result<bool, SolverError> {
        let mut pivots = 0;
        loop {
            let Some(c) = self.entering(eligible, tol) else {
                return Ok(true);
            };
            let Some(r) = self.leaving(c) else {
                return Ok(false);
            };
            if pivots == limit {
                return Err(SolverError::Stall { phase, limit });
            }
            self.pivot(r, c)?;
            pivots += 1;
            *iterations += 1;
            if log_enabled!(Level::Trace) {
                trace!("{phase} pivot {pivots} on ({r}, {c})\n{}", self.dump());
            }
        }
    }

    /// Tab-separated dump: one line per row, basis index first.
    fn dump(&self) -> String {
        let mut out = String::new();
        for (r, row) in self.a.iter().enumerate() {
            let _ = write!(out, "{}", self.basis[r]);
            for v in row {
                let _ = write!(out, "\t{v:.6}");
            }
            out.push('\n');
        }
        out.push_str("obj");
        for v in &self.cost {
            let _ = write!(out, "\t{v:.6}");
        }
        out
    }
}

fn eliminate(row: &mut [f64], pivot_row: &[f64], c: usize) {
    let f = row[c];
    if f == 0.0 {
        return;
    }
    for (v, p) in row.iter_mut().zip(pivot_row) {
        *v -= f * p;
        if v.abs() <= ZERO_TOL {
            *v = 0.0;
        }
    }
    row[c] = 0.0;
}

/// Two-phase primal simplex.
///
/// Phase 1 minimizes the sum of artificial variables after flipping rows
/// with negative right-hand side; the program is infeasible when that
/// minimum exceeds `tol`. Artificials left basic at zero are pivoted out,
/// or their rows are dropped as redundant when no pivot exists. Phase 2
/// minimizes the objective (negated for `Max`). Both phases use Bland's
/// rule and are capped at `10·(m + n)` pivots.
pub fn solve(lp: &LinearProgram, tol: f64) -> Result<Solution, SolverError> {
    lp.check()?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(SolverError::Malformed(format!("tolerance must be positive, got {tol}")));
    }
    let n = lp.num_vars;
    let m = lp.num_rows();
    let limit = 10 * (m + n);
    let mut iterations = 0;

    // phase 1: [A | I | b] with artificial basis
    let cols = n + m;
    let mut a = Vec::with_capacity(m);
    for (i, (row, &b)) in lp.eq_matrix.iter().zip(&lp.eq_rhs).enumerate() {
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        let mut t = vec![0.0; cols + 1];
        for (j, v) in row.iter().enumerate() {
            t[j] = sign * v;
        }
        t[n + i] = 1.0;
        t[cols] = sign * b;
        a.push(t);
    }
    let mut cost = vec![0.0; cols + 1];
    for row in &a {
        for j in 0..n {
            cost[j] -= row[j];
        }
        cost[cols] -= row[cols];
    }
    let mut t = Tableau { cols, a, cost, basis: (n..n + m).collect() };

    t.optimize(cols, tol, limit, "phase 1", &mut iterations)?;
    let infeasibility: f64 = (0..m).filter(|&r| t.basis[r] >= n).map(|r| t.rhs(r)).sum();
    if infeasibility > tol {
        return Ok(Solution::without_point(Status::Infeasible, iterations));
    }

    // drive remaining artificials out of the basis
    let mut redundant = Vec::new();
    for r in 0..m {
        if t.basis[r] < n {
            continue;
        }
        let best =
            (0..n).map(|j| (j, t.a[r][j].abs())).filter(|&(_, v)| v > PIVOT_TOL).max_by(|x, y| x.1.total_cmp(&y.1));
        match best {
            Some((j, _)) => t.pivot(r, j)?,
            None => redundant.push(r),
        }
    }

    // phase 2 tableau: drop artificial columns and redundant rows
    let mut a = Vec::with_capacity(m - redundant.len());
    let mut basis = Vec::with_capacity(m - redundant.len());
    for r in 0..m {
        if redundant.contains(&r) {
            continue;
        }
        let mut row = t.a[r][..n].to_vec();
        row.push(t.rhs(r));
        a.push(row);
        basis.push(t.basis[r]);
    }
    let c: Vec<f64> = match lp.sense {
        Sense::Min => lp.objective.clone(),
        Sense::Max => lp.objective.iter().map(|v| -v).collect(),
    };
    let mut cost = c.clone();
    cost.push(0.0);
    for (row, &bj) in a.iter().zip(&basis) {
        let cb = c[bj];
        if cb != 0.0 {
            for (v, r) in cost.iter_mut().zip(row) {
                *v -= cb * r;
            }
        }
    }
    let mut t = Tableau { cols: n, a, cost, basis };

    if !t.optimize(n, tol, limit, "phase 2", &mut iterations)? {
        return Ok(Solution::without_point(Status::Unbounded, iterations));
    }

    let mut x = vec![0.0; n];
    for (r, &j) in t.basis.iter().enumerate() {
        x[j] = t.rhs(r);
    }
    let residual = lp.max_residual(&x);
    let scale = lp.eq_rhs.iter().fold(1.0f64, |acc, b| acc.max(b.abs()));
    if residual > 1e-8 * scale {
        return Err(SolverError::Numerical(format!("optimal point violates constraints by {residual:e}")));
    }
    Ok(Solution::optimal(lp, x, iterations))
}

#[cfg(test)]
mod tests {
    use super::super::DEFAULT_TOL;
    use super::*;

    fn lp(c: &[f64], a: &[&[f64]], b: &[f64], sense: Sense) -> LinearProgram {
        LinearProgram::new(c.to_vec(), a.iter().map(|r| r.to_vec()).collect(), b.to_vec(), sense)
    }

    #[test]
    fn simple_optimum() {
        let s = solve(&lp(&[1.0, 1.0], &[&[1.0, 1.0]], &[1.0], Sense::Min), DEFAULT_TOL).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!((s.objective_value.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_rhs_is_infeasible() {
        let s = solve(&lp(&[0.0], &[&[1.0]], &[-1.0], Sense::Min), DEFAULT_TOL).unwrap();
        assert_eq!(s.status, Status::Infeasible);
        assert!(s.x.is_none() && s.objective_value.is_none());
    }

    #[test]
    fn unconstrained_max_is_unbounded() {
        let s = solve(&lp(&[1.0], &[], &[], Sense::Max), DEFAULT_TOL).unwrap();
        assert_eq!(s.status, Status::Unbounded);
    }

    #[test]
    fn maximization_and_flipped_rows() {
        // max 3x + 2y  s.t.  x + y + s1 = 4, -(x + 3y) + s2 = -6
        let p = lp(&[3.0, 2.0, 0.0, 0.0], &[&[1.0, 1.0, 1.0, 0.0], &[-1.0, -3.0, 0.0, 1.0]], &[4.0, -6.0], Sense::Max);
        let s = solve(&p, DEFAULT_TOL).unwrap();
        assert_eq!(s.status, Status::Optimal);
        // optimum at x = 3, y = 1
        assert!((s.objective_value.unwrap() - 11.0).abs() < 1e-12);
        assert!(p.max_residual(s.x.as_ref().unwrap()) < 1e-12);
    }

    #[test]
    fn duplicate_rows_are_dropped() {
        let p =
            lp(&[1.0, 2.0, 0.0], &[&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0], &[0.0, 1.0, 0.0]], &[2.0, 2.0, 0.5], Sense::Min);
        let s = solve(&p, DEFAULT_TOL).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!((s.objective_value.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inconsistent_duplicates_are_infeasible() {
        let p = lp(&[1.0, 1.0], &[&[1.0, 1.0], &[1.0, 1.0]], &[1.0, 2.0], Sense::Min);
        assert_eq!(solve(&p, DEFAULT_TOL).unwrap().status, Status::Infeasible);
    }

    #[test]
    fn zero_rows_are_tolerated() {
        let p = lp(&[1.0, -1.0], &[&[0.0, 0.0], &[1.0, 1.0]], &[0.0, 3.0], Sense::Min);
        let s = solve(&p, DEFAULT_TOL).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!((s.objective_value.unwrap() + 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let p = lp(&[1.0], &[], &[], Sense::Min);
        assert!(solve(&p, 0.0).is_err());
    }

    #[test]
    fn cycling_prone_program_terminates() {
        // Beale's classic cycling example, converted to equality form
        let p = lp(
            &[-0.75, 150.0, -0.02, 6.0, 0.0, 0.0, 0.0],
            &[
                &[0.25, -60.0, -0.04, 9.0, 1.0, 0.0, 0.0],
                &[0.5, -90.0, -0.02, 3.0, 0.0, 1.0, 0.0],
                &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            ],
            &[0.0, 0.0, 1.0],
            Sense::Min,
        );
        let s = solve(&p, DEFAULT_TOL).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!((s.objective_value.unwrap() + 0.05).abs() < 1e-12);
    }
}
