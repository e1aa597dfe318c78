use super::{LinearProgram, Sense, Solution, SolverError, Status};

pub const MAX_ORACLE_VARS: usize = 24;
pub const MAX_ORACLE_ROWS: usize = 12;

const SINGULAR_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;

/// Brute-force optimum over all basic solutions.
///
/// Rows are first reduced to a linearly independent subset (an inconsistent
/// dependent row means infeasible). Every column subset of that size is then
/// solved by Gaussian elimination with partial pivoting; singular bases are
/// skipped and nonnegative solutions are compared. Unboundedness is detected
/// by running the same enumeration on the recession cone
/// `{d ≥ 0, A d = 0, Σ d = 1}`.
pub fn enumerate_vertices(lp: &LinearProgram) -> Result<Solution, SolverError> {
    lp.check()?;
    if lp.num_vars > MAX_ORACLE_VARS || lp.num_rows() > MAX_ORACLE_ROWS {
        return Err(SolverError::Capacity { rows: lp.num_rows(), vars: lp.num_vars });
    }
    let (best, tried) = best_vertex(lp);
    let Some(x) = best else {
        return Ok(Solution::without_point(Status::Infeasible, tried));
    };

    let mut cone = lp.clone();
    for row in cone.eq_rhs.iter_mut() {
        *row = 0.0;
    }
    cone.eq_matrix.push(vec![1.0; lp.num_vars]);
    cone.eq_rhs.push(1.0);
    cone.sense = Sense::Min;
    if lp.sense == Sense::Max {
        cone.objective = lp.objective.iter().map(|c| -c).collect();
    }
    let (ray, ray_tried) = best_vertex(&cone);
    let tried = tried + ray_tried;
    if let Some(d) = ray {
        if cone.objective_at(&d) < -FEAS_TOL {
            return Ok(Solution::without_point(Status::Unbounded, tried));
        }
    }
    Ok(Solution::optimal(lp, x, tried))
}

fn best_vertex(lp: &LinearProgram) -> (Option<Vec<f64>>, usize) {
    let n = lp.num_vars;
    let Some(rows) = independent_rows(lp) else {
        return (None, 0);
    };
    let a: Vec<&[f64]> = rows.iter().map(|&i| lp.eq_matrix[i].as_slice()).collect();
    let b: Vec<f64> = rows.iter().map(|&i| lp.eq_rhs[i]).collect();
    let k = rows.len();
    if k > n {
        return (None, 0);
    }

    let better = |new: f64, old: f64| match lp.sense {
        Sense::Min => new < old,
        Sense::Max => new > old,
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut tried = 0;
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        tried += 1;
        if let Some(xb) = solve_square(&a, &b, &subset) {
            if xb.iter().all(|&v| v >= -FEAS_TOL) {
                let mut x = vec![0.0; n];
                for (&j, v) in subset.iter().zip(xb) {
                    x[j] = v;
                }
                if lp.max_residual(&x) <= 1e-8 {
                    let value = lp.objective_at(&x);
                    if best.as_ref().is_none_or(|(_, v)| better(value, *v)) {
                        best = Some((x, value));
                    }
                }
            }
        }
        if !next_combination(&mut subset, n) {
            break;
        }
    }
    (best.map(|(x, _)| x), tried)
}

/// Indices of a maximal independent row subset, or `None` if some dependent
/// row contradicts the others.
fn independent_rows(lp: &LinearProgram) -> Option<Vec<usize>> {
    let n = lp.num_vars;
    let mut echelon: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut keep = Vec::new();
    for (i, (row, &b)) in lp.eq_matrix.iter().zip(&lp.eq_rhs).enumerate() {
        let mut v = row.clone();
        v.push(b);
        let scale = v.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
        for (pc, e) in &echelon {
            let f = v[*pc] / e[*pc];
            if f != 0.0 {
                for (x, y) in v.iter_mut().zip(e) {
                    *x -= f * y;
                }
            }
        }
        let (pc, mag) =
            v[..n]
                .iter()
                .enumerate()
                .map(|(j, x)| (j, x.abs()))
                .fold((0, 0.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if mag > SINGULAR_TOL * scale {
            echelon.push((pc, v));
            keep.push(i);
        } else if v[n].abs() > 1e-9 * scale {
            return None;
        }
    }
    Some(keep)
}

/// Solves `A[:, cols] x = b` for square selections; `None` when singular.
fn solve_square(a: &[&[f64]], b: &[f64], cols: &[usize]) -> Option<Vec<f64>> {
    let k = cols.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r: Vec<f64> = cols.iter().map(|&j| row[j]).collect();
            r.push(rhs);
            r
        })
        .collect();
    for col in 0..k {
        let p = (col..k).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[p][col].abs() <= SINGULAR_TOL {
            return None;
        }
        m.swap(col, p);
        for r in col + 1..k {
            let f = m[r][col] / m[col][col];
            if f != 0.0 {
                for c in col..=k {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    let mut x = vec![0.0; k];
    for r in (0..k).rev() {
        let s: f64 = (r + 1..k).map(|c| m[r][c] * x[c]).sum();
        x[r] = (m[r][k] - s) / m[r][r];
    }
    Some(x)
}

/// Advances `idx` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
