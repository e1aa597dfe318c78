use std::f64::consts::SQRT_2;

use crate::linalg::Matrix;

use super::{DensityOperator, Povm, QuantumInstrumentalScenario};

fn real2(scale: f64, entries: [f64; 4]) -> Matrix {
    Matrix::from_real(2, 2, &entries.map(|v| v * scale)).expect("static shape")
}

/// Maximally entangled two-qubit scenario.
///
/// The state is `|Φ⁻⟩⟨Φ⁻|` with `|Φ⁻⟩ = (|00⟩ − |11⟩)/√2`. Node `X`
/// measures `σ_Z` when `z = 0` and `σ_X` when `z = 1`; node `Y` measures
/// `(σ_Z + σ_X)/√2` after `x = 0` and `(σ_Z − σ_X)/√2` after `x = 1`.
/// Outcome 0 is the `+1` eigenspace. Effects are written out entrywise.
pub fn bell_preset() -> QuantumInstrumentalScenario {
    #[rustfmt::skip]
    let rho = Matrix::from_real(4, 4, &[
         0.5, 0.0, 0.0, -0.5,
         0.0, 0.0, 0.0,  0.0,
         0.0, 0.0, 0.0,  0.0,
        -0.5, 0.0, 0.0,  0.5,
    ])
    .expect("static shape");

    let m_z0 = Povm::new(vec![real2(1.0, [1.0, 0.0, 0.0, 0.0]), real2(1.0, [0.0, 0.0, 0.0, 1.0])]);
    let m_z1 = Povm::new(vec![real2(0.5, [1.0, 1.0, 1.0, 1.0]), real2(0.5, [1.0, -1.0, -1.0, 1.0])]);

    let lo = 1.0 / (4.0 - 2.0 * SQRT_2);
    let hi = 1.0 / (4.0 + 2.0 * SQRT_2);
    let n_x0 = Povm::new(vec![
        real2(lo, [1.0, SQRT_2 - 1.0, SQRT_2 - 1.0, 3.0 - 2.0 * SQRT_2]),
        real2(hi, [1.0, -SQRT_2 - 1.0, -SQRT_2 - 1.0, 3.0 + 2.0 * SQRT_2]),
    ]);
    let n_x1 = Povm::new(vec![
        real2(lo, [1.0, 1.0 - SQRT_2, 1.0 - SQRT_2, 3.0 - 2.0 * SQRT_2]),
        real2(hi, [1.0, SQRT_2 + 1.0, SQRT_2 + 1.0, 3.0 + 2.0 * SQRT_2]),
    ]);

    QuantumInstrumentalScenario {
        dim_a: 2,
        dim_b: 2,
        rho: DensityOperator::new(rho),
        measurements_a: [m_z0, m_z1],
        measurements_b: [n_x0, n_x1],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::{sigma_x, sigma_z};

    #[test]
    fn rho_corners() {
        let s = bell_preset();
        for (i, j, v) in [(0, 0, 0.5), (0, 3, -0.5), (3, 0, -0.5), (3, 3, 0.5)] {
            assert_eq!(s.rho.mat.get(i, j).re, v);
        }
        let phi = [1.0, 0.0, 0.0, -1.0].map(|v| num_complex::Complex64::new(v / SQRT_2, 0.0));
        assert!(s.rho.mat.approx_eq(&Matrix::projector(&phi).unwrap(), 1e-15));
    }

    #[test]
    fn listed_entries() {
        let s = bell_preset();
        assert!(s.measurements_a[1].effect(0).approx_eq(&real2(1.0, [0.5; 4]), 0.0));
        let n00 = s.measurements_b[0].effect(0).get(0, 0).re;
        assert!((n00 - 0.853553).abs() < 1e-6);
        assert!((n00 - 1.0 / (4.0 - 2.0 * SQRT_2)).abs() < 1e-15);
    }

    #[test]
    fn effects_differ_by_the_named_observables() {
        let s = bell_preset();
        let diff = |p: &Povm| p.effect(0) - p.effect(1);
        assert!(diff(&s.measurements_a[0]).approx_eq(&sigma_z(), 1e-15));
        assert!(diff(&s.measurements_a[1]).approx_eq(&sigma_x(), 1e-15));
        let b0 = (&sigma_z() + &sigma_x()).scale(1.0 / SQRT_2);
        let b1 = (&sigma_z() - &sigma_x()).scale(1.0 / SQRT_2);
        assert!(diff(&s.measurements_b[0]).approx_eq(&b0, 1e-12));
        assert!(diff(&s.measurements_b[1]).approx_eq(&b1, 1e-12));
    }
}
