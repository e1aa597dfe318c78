use serde::{Deserialize, Serialize};

use crate::distribution::{InterventionalDistribution, ObservedDistribution, Table};
use crate::linalg::Matrix;

use super::{QuantumError, QuantumInstrumentalScenario, IMAG_TOL};

/// `tr[(a ⊗ b) ρ]` with its imaginary part checked and discarded.
fn born_trace(
    s: &QuantumInstrumentalScenario,
    a: &Matrix,
    b: &Matrix,
    context: impl FnOnce() -> String,
) -> Result<f64, QuantumError> {
    let t = a.kron(b).mat_mul(&s.rho.mat)?.trace()?;
    if t.im.abs() > IMAG_TOL {
        return Err(QuantumError::ImaginaryResidue { context: context(), imag: t.im });
    }
    Ok(t.re)
}

/// Observed `p(x, y | z) = tr[(M_x^z ⊗ N_y^x) ρ]`.
pub fn born_distribution(s: &QuantumInstrumentalScenario) -> Result<ObservedDistribution, QuantumError> {
    s.ensure_valid()?;
    let mut p: Table = [[[0.0; 2]; 2]; 2];
    for (z, m) in s.measurements_a.iter().enumerate() {
        for x in 0..2 {
            for y in 0..2 {
                let n = s.measurements_b[x].effect(y);
                p[z][x][y] = born_trace(s, m.effect(x), n, || format!("p({x},{y}|{z})"))?;
            }
        }
    }
    // tiny negative roundoff is clamped by the constructor
    ObservedDistribution::new(p).map_err(|e| {
        QuantumError::Invalid(vec![super::Violation {
            object: format!("born distribution ({e})"),
            check: super::Check::Completeness,
            residual: f64::NAN,
        }])
    })
}

/// Distribution under the thought experiment where the signal reaching `Y`
/// is reset to `(x, z)`: `Q(x', y | z') = tr[(M_{x'}^{z'} ⊗ N_y^x) ρ]`.
///
/// The measurement at `Y` ignores `z`, so the table does not depend on it.
pub fn interventional_distribution(
    s: &QuantumInstrumentalScenario,
    x: u8,
    z: u8,
) -> Result<InterventionalDistribution, QuantumError> {
    assert!(x < 2 && z < 2, "binary intervention expected");
    s.ensure_valid()?;
    let n_povm = &s.measurements_b[x as usize];
    let mut q: Table = [[[0.0; 2]; 2]; 2];
    for (z_obs, m) in s.measurements_a.iter().enumerate() {
        for x_obs in 0..2 {
            for y in 0..2 {
                q[z_obs][x_obs][y] =
                    born_trace(s, m.effect(x_obs), n_povm.effect(y), || format!("Q_{x}{z}({x_obs},{y}|{z_obs})"))?;
            }
        }
    }
    Ok(InterventionalDistribution { q, intervention_x: x, intervention_z: z })
}

/// `(P(Y(x,·) = 0), P(Y(x,·) = 1))` computed as `tr[(I ⊗ N_y^x) ρ]`.
pub fn potential_outcome_marginal(s: &QuantumInstrumentalScenario, x: u8) -> Result<[f64; 2], QuantumError> {
    assert!(x < 2, "binary treatment expected");
    s.ensure_valid()?;
    let id = Matrix::identity(s.dim_a);
    let n_povm = &s.measurements_b[x as usize];
    let mut out = [0.0; 2];
    for (y, v) in out.iter_mut().enumerate() {
        *v = born_trace(s, &id, n_povm.effect(y), || format!("P(Y({x},z)={y})"))?;
    }
    Ok(out)
}

/// `P(Y(1,0) = 1) − P(Y(0,0) = 1)`.
pub fn true_ace(s: &QuantumInstrumentalScenario) -> Result<f64, QuantumError> {
    let treated = potential_outcome_marginal(s, 1)?;
    let control = potential_outcome_marginal(s, 0)?;
    Ok(treated[1] - control[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MarginalExogeneityReport {
    pub holds: bool,
    pub max_deviation: f64,
}

/// Compares `Q_xz(Y = y | Z = 1)` with `Q_xz(Y = y | Z = 0)` over all
/// `(x, z, y)`.
pub fn check_marginal_exogeneity(
    s: &QuantumInstrumentalScenario,
    tol: f64,
) -> Result<MarginalExogeneityReport, QuantumError> {
    let mut max_deviation = 0.0f64;
    for x in 0..2 {
        for z in 0..2 {
            let q = interventional_distribution(s, x, z)?;
            for y in 0..2 {
                max_deviation = max_deviation.max((q.outcome_marginal(1, y) - q.outcome_marginal(0, y)).abs());
            }
        }
    }
    Ok(MarginalExogeneityReport { holds: max_deviation <= tol, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{bell_preset, DensityOperator, Povm};
    use num_complex::Complex64;

    fn with_rho(data: &[f64]) -> QuantumInstrumentalScenario {
        let mut s = bell_preset();
        s.rho = DensityOperator::new(Matrix::from_real(4, 4, data).unwrap());
        s
    }

    fn maximally_mixed() -> QuantumInstrumentalScenario {
        let mut s = bell_preset();
        s.rho = DensityOperator::new(Matrix::identity(4).scale(0.25));
        s
    }

    #[test]
    fn bell_probabilities_to_four_decimals() {
        let p = born_distribution(&bell_preset()).unwrap();
        let expected = [[[0.4268, 0.0732], [0.0732, 0.4268]], [[0.0732, 0.4268], [0.0732, 0.4268]]];
        for z in 0..2 {
            for x in 0..2 {
                for y in 0..2 {
                    assert!((p.get(z, x, y) - expected[z][x][y]).abs() <= 5e-5, "({z},{x},{y})");
                }
            }
        }
    }

    #[test]
    fn maximally_mixed_state_gives_uniform_table() {
        let p = born_distribution(&maximally_mixed()).unwrap();
        assert!(p.max_abs_diff(&ObservedDistribution::uniform()) < 1e-15);
    }

    #[test]
    fn product_state_factorizes() {
        // |00><00|: p(x,y|z) = <0|M_x^z|0> <0|N_y^x|0>, read straight off the effects
        let mut data = [0.0; 16];
        data[0] = 1.0;
        let s = with_rho(&data);
        let p = born_distribution(&s).unwrap();
        for z in 0..2 {
            for x in 0..2 {
                for y in 0..2 {
                    let m = s.measurements_a[z].effect(x).get(0, 0).re;
                    let n = s.measurements_b[x].effect(y).get(0, 0).re;
                    assert!((p.get(z, x, y) - m * n).abs() < 1e-15);
                }
            }
        }
        assert!((p.get(0, 0, 0) - 0.853553).abs() < 1e-6);
        assert!((p.get(0, 0, 1) - 0.146447).abs() < 1e-6);
        assert_eq!(p.get(0, 1, 0), 0.0);
        assert_eq!(p.get(0, 1, 1), 0.0);
    }

    #[test]
    fn imaginary_residue_is_a_hard_error() {
        // a valid state cannot produce this, so forge one past validation
        let s = bell_preset();
        let skew = Matrix::new(
            2,
            2,
            vec![
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let err = born_trace(&s, &skew, &Matrix::identity(2), || "forged".into()).unwrap_err();
        assert!(matches!(err, QuantumError::ImaginaryResidue { .. }));
    }

    #[test]
    fn invalid_scenarios_are_rejected() {
        let mut s = bell_preset();
        s.rho.mat = s.rho.mat.scale(2.0);
        assert!(matches!(born_distribution(&s), Err(QuantumError::Invalid(_))));
        assert!(true_ace(&s).is_err());
    }

    #[test]
    fn bell_interventional_outcome_marginals_are_half() {
        let s = bell_preset();
        for x in 0..2 {
            let q = interventional_distribution(&s, x, 0).unwrap();
            for z_obs in 0..2 {
                assert!((q.outcome_marginal(z_obs, 0) - 0.5).abs() < 1e-12);
            }
            assert_eq!(
                q,
                InterventionalDistribution { intervention_z: 0, ..interventional_distribution(&s, x, 1).unwrap() }
            );
        }
    }

    #[test]
    fn interventional_table_for_mixed_state() {
        let s = maximally_mixed();
        let q = interventional_distribution(&s, 1, 0).unwrap();
        assert!(q.q.iter().flatten().flatten().all(|v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn potential_outcome_marginals() {
        let s = bell_preset();
        for x in 0..2 {
            let m = potential_outcome_marginal(&s, x).unwrap();
            assert!((m[0] - 0.5).abs() < 1e-12 && (m[1] - 0.5).abs() < 1e-12);
        }
        let mut s = bell_preset();
        s.measurements_b[1] = Povm::new(vec![Matrix::zeros(2, 2), Matrix::identity(2)]);
        let m = potential_outcome_marginal(&s, 1).unwrap();
        assert_eq!(m, [0.0, 1.0]);
    }

    #[test]
    fn true_ace_examples() {
        assert!(true_ace(&bell_preset()).unwrap().abs() <= 1e-12);

        let mut s = bell_preset();
        s.measurements_b[1] = s.measurements_b[0].clone();
        assert_eq!(true_ace(&s).unwrap(), 0.0);

        s.measurements_b[0] = Povm::new(vec![Matrix::identity(2), Matrix::zeros(2, 2)]);
        s.measurements_b[1] = Povm::new(vec![Matrix::zeros(2, 2), Matrix::identity(2)]);
        assert_eq!(true_ace(&s).unwrap(), 1.0);
    }

    #[test]
    fn marginal_exogeneity_examples() {
        let r = check_marginal_exogeneity(&bell_preset(), 1e-10).unwrap();
        assert!(r.holds && r.max_deviation <= 1e-12);
        let r = check_marginal_exogeneity(&maximally_mixed(), 1e-10).unwrap();
        assert!(r.holds);
        assert_eq!(r.max_deviation, 0.0);
    }
}
