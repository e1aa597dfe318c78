//! Seeded random scenarios for property testing.
//!
//! States are pure, drawn from normalized complex Gaussian vectors. Binary
//! POVMs take `E₀ = G G^H / (λ_max (1 + u))` for a complex Gaussian `G` and
//! `u ~ U[0, 1]`, with `E₁ = I − E₀`, so every draw is valid by construction.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Matrix, JACOBI_TOL};

use super::{DensityOperator, Povm, QuantumInstrumentalScenario};

fn gaussian_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Pure state `|ψ⟩⟨ψ|` on `dim` levels.
pub fn random_pure_state<R: Rng>(rng: &mut R, dim: usize) -> DensityOperator {
    let v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<Complex64> = v.into_iter().map(|z| z / norm).collect();
    DensityOperator::new(Matrix::projector(&v).expect("finite gaussian draw"))
}

/// Two-outcome POVM on `dim` levels.
pub fn random_binary_povm<R: Rng>(rng: &mut R, dim: usize) -> Povm {
    let g =
        Matrix::new(dim, dim, (0..dim * dim).map(|_| gaussian_complex(rng)).collect()).expect("finite gaussian draw");
    let gg = g.mat_mul(&g.dagger()).expect("square");
    let gg = (&gg + &gg.dagger()).scale(0.5);
    let lambda_max = *gg.eig_hermitian(JACOBI_TOL).expect("hermitian").last().expect("non-empty");
    let u: f64 = rng.random();
    let e0 = gg.scale(1.0 / (lambda_max * (1.0 + u)));
    let e1 = &Matrix::identity(dim) - &e0;
    Povm::new(vec![e0, e1])
}

/// Two-qubit scenario determined entirely by `seed`.
pub fn random_scenario(seed: u64) -> QuantumInstrumentalScenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = random_pure_state(&mut rng, 4);
    let measurements_a = [random_binary_povm(&mut rng, 2), random_binary_povm(&mut rng, 2)];
    let measurements_b = [random_binary_povm(&mut rng, 2), random_binary_povm(&mut rng, 2)];
    QuantumInstrumentalScenario { dim_a: 2, dim_b: 2, rho, measurements_a, measurements_b }
}
