//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `exp(i·angle·h)` by scaling and squaring.
pub fn expm_i(h: &CMatrix, angle: f64) -> CMatrix {
    (h * Complex64::new(0.0, angle)).exp()
}

/// Largest entry of `|A − A†|`.
pub fn hermiticity_error(a: &CMatrix) -> f64 {
    max_abs(&(a - a.adjoint()))
}

/// Largest entry of `|U†U − 1|`.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs(&(u.adjoint() * u - CMatrix::identity(n, n)))
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a - b))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in descending
/// order with matching eigenvector columns.
pub fn hermitian_eigen(a: &CMatrix, tol: f64) -> Result<(Vec<f64>, CMatrix)> {
    let err = hermiticity_error(a);
    if err > tol {
        return Err(Error::NotHermitian(err));
    }
    let sym = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Binary entropy `H(p) = −p log₂ p − (1−p) log₂(1−p)` with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    h(p) + h(1.0 - p)
}
