//! Small dense complex linear algebra.
//!
//! Everything here targets the 2×2 and 4×4 objects of a two-qubit network:
//! products, Kronecker products, adjoints, traces and Hermitian eigenvalues.
//! Storage is row-major and dense.

use std::fmt;
use std::ops::{Add, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Complex entry of a [`Matrix`].
pub type ComplexScalar = Complex64;

/// Default tolerance for entrywise matrix comparisons.
pub const DEFAULT_EQ_TOL: f64 = 1e-10;
/// Default off-diagonal tolerance for [`Matrix::eig_hermitian`].
pub const JACOBI_TOL: f64 = 1e-12;
/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max |A - A^H| = {0:e})")]
    NotHermitian(f64),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<ComplexScalar>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes,
    /// length mismatches and non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<ComplexScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Shape(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite { row: k / cols, col: k % cols });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<ComplexScalar>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Self::new(n, m, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty shape");
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Outer product `v v^H` of a column vector with itself.
    pub fn projector(v: &[ComplexScalar]) -> Result<Self> {
        let n = v.len();
        let mut data = Vec::with_capacity(n * n);
        for a in v {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Self::new(n, n, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[ComplexScalar] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> ComplexScalar {
        self.data[row * self.cols + col]
    }

    #[inline]
    fn set(&mut self, row: usize, col: usize, v: ComplexScalar) {
        self.data[row * self.cols + col] = v;
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; block `(i, j)` of the result is `self[i, j] * other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Result<ComplexScalar> {
        if !self.is_square() {
            return Err(LinalgError::Shape(format!("trace of non-square {}x{} matrix", self.rows, self.cols)));
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    /// Entrywise max-norm of `self - other`. Shapes must agree.
    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "cannot compare {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Entrywise comparison; `false` on shape mismatch.
    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tol)
    }

    /// Entrywise max-norm of `A - A^H`; infinite for non-square input.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    fn off_diagonal_mass(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    acc += self.get(i, j).norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Eigenvalues of a Hermitian matrix in ascending order, by cyclic
    /// complex Jacobi rotations.
    ///
    /// `tol` bounds both the accepted Hermiticity residual and the final
    /// off-diagonal Frobenius mass (relative to `max(1, ‖A‖_F)`).
    pub fn eig_hermitian(&self, tol: f64) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(LinalgError::Shape(format!("eigenvalues of non-square {}x{} matrix", self.rows, self.cols)));
        }
        let residual = self.hermiticity_residual();
        if residual > tol {
            return Err(LinalgError::NotHermitian(residual));
        }
        let n = self.rows;
        // symmetrize so roundoff in the input cannot leak into the rotations
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, (self.get(i, j) + self.get(j, i).conj()) * 0.5);
            }
        }
        let threshold = tol * self.frobenius().max(1.0);

        let mut sweeps = 0;
        while a.off_diagonal_mass() > threshold {
            if sweeps == JACOBI_MAX_SWEEPS {
                return Err(LinalgError::NoConvergence { sweeps, residual: a.off_diagonal_mass() });
            }
            for p in 0..n {
                for q in p + 1..n {
                    jacobi_rotate(&mut a, p, q);
                }
            }
            sweeps += 1;
        }

        let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
        eig.sort_by(f64::total_cmp);
        Ok(eig)
    }
}

/// Annihilates `a[p, q]` (and `a[q, p]`) with a unitary rotation in the
/// `(p, q)` plane, in place.
fn jacobi_rotate(a: &mut Matrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    // phase that makes the pivot real: D = diag(1, e^{-i phi}) on (p, q)
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = D * [[c, s], [-s, c]] restricted to the (p, q) plane
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.rows;
    // A <- A J  (columns p, q)
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * jpp + akq * jqp);
        a.set(k, q, akp * jpq + akq * jqq);
    }
    // A <- J^H A  (rows p, q)
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, jpp.conj() * apk + jqp.conj() * aqk);
        a.set(q, k, jpq.conj() * apk + jqq.conj() * aqk);
    }
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    let dp = a.get(p, p).re;
    let dq = a.get(q, q).re;
    a.set(p, p, Complex64::new(dp, 0.0));
    a.set(q, q, Complex64::new(dq, 0.0));
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// JSON: row-major nested arrays of [re, im] pairs.
impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| [self.get(i, j).re, self.get(i, j).im]).collect()).collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(deserializer)?;
        let rows: Vec<Vec<ComplexScalar>> =
            rows.into_iter().map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()).collect();
        Matrix::from_rows(&rows).map_err(D::Error::custom)
    }
}

/// Pauli and identity matrices used throughout.
pub mod pauli {
    use super::Matrix;

    pub fn identity() -> Matrix {
        Matrix::identity(2)
    }

    pub fn sigma_x() -> Matrix {
        Matrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("static shape")
    }

    pub fn sigma_z() -> Matrix {
        Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("static shape")
    }
}

#[cfg(test)]
mod tests {
    use super::pauli::{sigma_x, sigma_z};
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn products_of_paulis() {
        let i2 = Matrix::identity(2);
        assert_eq!(i2.mat_mul(&sigma_x()).unwrap(), sigma_x());
        assert_eq!(sigma_x().mat_mul(&sigma_x()).unwrap(), i2);
        let zx = sigma_z().mat_mul(&sigma_x()).unwrap();
        assert_eq!(zx, Matrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap());
    }

    #[test]
    fn mat_mul_rejects_mismatched_shapes() {
        let a = Matrix::zeros(2, 3);
        let b = Matrix::zeros(2, 3);
        assert!(matches!(a.mat_mul(&b), Err(LinalgError::Shape(_))));
    }

    #[test]
    fn kron_examples() {
        assert_eq!(Matrix::identity(2).kron(&Matrix::identity(2)), Matrix::identity(4));
        let zx = sigma_z().kron(&sigma_x());
        let expected = Matrix::from_real(
            4,
            4,
            &[
                0.0, 1.0, 0.0, 0.0, //
                1.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, -1.0, //
                0.0, 0.0, -1.0, 0.0,
            ],
        )
        .unwrap();
        assert_eq!(zx, expected);
    }

    #[test]
    fn dagger_examples() {
        let a = Matrix::new(2, 2, vec![c(0., 0.), c(0., 1.), c(0., 0.), c(0., 0.)]).unwrap();
        let expected = Matrix::new(2, 2, vec![c(0., 0.), c(0., 0.), c(0., -1.), c(0., 0.)]).unwrap();
        assert_eq!(a.dagger(), expected);
        assert_eq!(sigma_x().dagger(), sigma_x());
        assert_eq!(a.dagger().dagger(), a);
    }

    #[test]
    fn trace_examples() {
        assert_eq!(Matrix::identity(4).trace().unwrap(), c(4.0, 0.0));
        assert_eq!(sigma_z().trace().unwrap(), c(0.0, 0.0));
        assert!(Matrix::zeros(2, 3).trace().is_err());
    }

    #[test]
    fn new_rejects_non_finite_and_bad_lengths() {
        assert!(matches!(
            Matrix::new(1, 2, vec![c(0., 0.), c(f64::NAN, 0.)]),
            Err(LinalgError::NonFinite { row: 0, col: 1 })
        ));
        assert!(Matrix::new(2, 2, vec![c(0., 0.)]).is_err());
        assert!(Matrix::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn pauli_eigenvalues() {
        for m in [sigma_z(), sigma_x()] {
            let e = m.eig_hermitian(JACOBI_TOL).unwrap();
            assert!((e[0] + 1.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn complex_hermitian_eigenvalues() {
        // sigma_y has eigenvalues -1, +1
        let sy = Matrix::new(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap();
        let e = sy.eig_hermitian(JACOBI_TOL).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let a = Matrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(a.eig_hermitian(1e-12), Err(LinalgError::NotHermitian(_))));
    }

    #[test]
    fn diagonal_input_returns_sorted_diagonal() {
        let a = Matrix::from_real(3, 3, &[2.0, 0.0, 0.0, 0.0, -1.5, 0.0, 0.0, 0.0, 0.25]).unwrap();
        assert_eq!(a.eig_hermitian(JACOBI_TOL).unwrap(), vec![-1.5, 0.25, 2.0]);
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), rows * cols)
            .prop_map(move |v| Matrix::new(rows, cols, v.into_iter().map(|(re, im)| c(re, im)).collect()).unwrap())
    }

    fn arb_hermitian(n: usize) -> impl Strategy<Value = Matrix> {
        arb_matrix(n, n).prop_map(|m| (&m + &m.dagger()).scale(0.5))
    }

    proptest! {
        #[test]
        fn kron_dimension_law(
            (a, b) in (1usize..4, 1usize..4, 1usize..4, 1usize..4)
                .prop_flat_map(|(r1, c1, r2, c2)| (arb_matrix(r1, c1), arb_matrix(r2, c2)))
        ) {
            let (r1, c1, r2, c2) = (a.rows(), a.cols(), b.rows(), b.cols());
            let k = a.kron(&b);
            prop_assert_eq!((k.rows(), k.cols()), (r1 * r2, c1 * c2));
        }

        #[test]
        fn trace_is_multiplicative_under_kron(a in arb_matrix(3, 3), b in arb_matrix(2, 2)) {
            let lhs = a.kron(&b).trace().unwrap();
            let rhs = a.trace().unwrap() * b.trace().unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-10);
        }

        #[test]
        fn dagger_reverses_products(a in arb_matrix(3, 2), b in arb_matrix(2, 4)) {
            let lhs = a.mat_mul(&b).unwrap().dagger();
            let rhs = b.dagger().mat_mul(&a.dagger()).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12);
            prop_assert_eq!(a.dagger().dagger(), a);
        }

        #[test]
        fn eigenvalues_sum_to_trace(h in arb_hermitian(4)) {
            let e = h.eig_hermitian(JACOBI_TOL).unwrap();
            let sum: f64 = e.iter().sum();
            prop_assert!((sum - h.trace().unwrap().re).abs() <= 1e-9);
            prop_assert!(e.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn diagonal_matrices_are_fixed_points(d in prop::collection::vec(-3.0..3.0f64, 1..6)) {
            let n = d.len();
            let mut data = vec![0.0; n * n];
            for (i, v) in d.iter().enumerate() {
                data[i * n + i] = *v;
            }
            let e = Matrix::from_real(n, n, &data).unwrap().eig_hermitian(JACOBI_TOL).unwrap();
            let mut sorted = d.clone();
            sorted.sort_by(f64::total_cmp);
            prop_assert_eq!(e, sorted);
        }
    }
}
