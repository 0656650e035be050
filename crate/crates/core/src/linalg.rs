//! Dense complex matrix helpers shared by the gate, measurement and
//! entanglement modules.
//!
//! Eigen- and singular-value decompositions are delegated to `nalgebra`
//! (Householder tridiagonalisation followed by implicit QR for Hermitian
//! input, Golub–Kahan for the SVD).

use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type Matrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(dim: usize) -> Matrix {
    Matrix::identity(dim, dim)
}

/// Builds a matrix from row-major entries.
pub fn from_rows(dim: usize, entries: &[Complex64]) -> Matrix {
    assert_eq!(entries.len(), dim * dim);
    Matrix::from_row_slice(dim, dim, entries)
}

pub fn dagger(m: &Matrix) -> Matrix {
    m.adjoint()
}

/// Kronecker product `a ⊗ b`, with `a` acting on the more significant index.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermitian_deviation(m: &Matrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// `max |U†U − I|` over entries.
pub fn unitary_deviation(m: &Matrix) -> f64 {
    let product = m.adjoint() * m;
    max_abs_diff(&product, &identity(m.nrows()))
}

pub fn trace(m: &Matrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: Matrix,
}

impl HermitianEigen {
    /// The caller guarantees `m` is Hermitian; only the lower triangle is read.
    pub fn new(m: &Matrix) -> Self {
        let dim = m.nrows();
        let eig = m.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut vectors = Matrix::zeros(dim, dim);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        HermitianEigen { values, vectors }
    }

    /// Rebuilds `V f(Λ) V†` for a scalar function of the eigenvalues.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> Matrix {
        let dim = self.vectors.nrows();
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let factor = f(lambda);
            for row in 0..dim {
                scaled[(row, k)] *= factor;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

pub fn spectral_norm(m: &Matrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// `log2(dim)` when `dim` is a power of two.
pub fn qubits_for_dim(dim: usize) -> Option<usize> {
    dim.is_power_of_two().then(|| dim.trailing_zeros() as usize)
}
