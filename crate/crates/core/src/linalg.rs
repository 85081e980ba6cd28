//! Dense complex/real helpers shared by every module.
//!
//! Matrices are `nalgebra` dynamic matrices over `Complex64`. The
//! realification convention interleaves components:
//! `(z_1, .., z_N) -> (Re z_1, Im z_1, .., Re z_N, Im z_N)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest absolute entry. Zero for empty matrices.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(m: &RMat) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// `max |m + m†|`; zero iff `m` is anti-Hermitian.
pub fn anti_hermitian_residual(m: &CMat) -> f64 {
    max_abs(&(m + m.adjoint()))
}

/// `max |m - m†|`; zero iff `m` is Hermitian.
pub fn hermitian_residual(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn unitarity_residual(u: &CMat) -> f64 {
    max_abs(&(u.adjoint() * u - identity(u.nrows())))
}

pub fn realify(z: &CVec) -> RVec {
    RVec::from_iterator(2 * z.len(), z.iter().flat_map(|w| [w.re, w.im]))
}

/// Inverse of [`realify`]. Panics if the length is odd.
pub fn complexify(x: &RVec) -> CVec {
    assert!(x.len().is_multiple_of(2), "realified vector must have even length");
    CVec::from_iterator(x.len() / 2, x.as_slice().chunks(2).map(|p| c(p[0], p[1])))
}

/// Eigenvalues (ascending) and matching eigenvector columns of a Hermitian
/// matrix. Only the Hermitian part of `m` is used.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Real symmetric counterpart of [`hermitian_eigen`].
pub fn symmetric_eigen(m: &RMat) -> (Vec<f64>, RMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), RMat::zeros(0, 0));
    }
    let s = (m + m.transpose()) * 0.5;
    let eig = s.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = RMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Orthonormal basis (as columns) of the real null space of `m`.
///
/// Singular values at or below `rel_cut * sigma_max` count as zero. When
/// `m` is identically zero the whole column space is returned.
pub fn real_null_space(m: &RMat, rel_cut: f64) -> RMat {
    let cols = m.ncols();
    if cols == 0 {
        return RMat::zeros(0, 0);
    }
    // Pad to at least square so the thin SVD yields a full right basis.
    let rows = m.nrows().max(cols);
    let mut padded = RMat::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = rel_cut * sigma_max;
    let null: Vec<RVec> = (0..cols)
        .filter(|&i| sigma_max == 0.0 || svd.singular_values[i] <= cut)
        .map(|i| v_t.row(i).transpose())
        .collect();
    columns_to_matrix(cols, &null)
}

/// Orthonormal basis of the column span of `m`, rank decided by `rel_cut`.
pub fn real_range(m: &RMat, rel_cut: f64) -> RMat {
    let rows = m.nrows();
    if m.ncols() == 0 || rows == 0 {
        return RMat::zeros(rows, 0);
    }
    let cols = m.ncols().max(rows);
    let mut padded = RMat::zeros(rows, cols);
    padded.view_mut((0, 0), (rows, m.ncols())).copy_from(m);
    let svd = padded.svd(true, false);
    let u = svd.u.expect("requested U");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return RMat::zeros(rows, 0);
    }
    let cut = rel_cut * sigma_max;
    let kept: Vec<RVec> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > cut)
        .map(|i| u.column(i).into_owned())
        .collect();
    columns_to_matrix(rows, &kept)
}

/// Orthonormal complement (columns) of the span of the orthonormal columns
/// of `basis` inside `R^d`.
pub fn real_complement(basis: &RMat, d: usize) -> RMat {
    let mut proj = RMat::identity(d, d);
    if basis.ncols() > 0 {
        proj -= basis * basis.transpose();
    }
    let (vals, vecs) = symmetric_eigen(&proj);
    let kept: Vec<RVec> = vals
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.5)
        .map(|(i, _)| vecs.column(i).into_owned())
        .collect();
    columns_to_matrix(d, &kept)
}

/// Complex counterpart of [`real_complement`].
pub fn complex_complement(basis: &CMat, d: usize) -> CMat {
    let mut proj = identity(d);
    if basis.ncols() > 0 {
        proj -= basis * basis.adjoint();
    }
    let (vals, vecs) = hermitian_eigen(&proj);
    let kept: Vec<CVec> = vals
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.5)
        .map(|(i, _)| vecs.column(i).into_owned())
        .collect();
    let mut out = CMat::zeros(d, kept.len());
    for (j, col) in kept.iter().enumerate() {
        out.set_column(j, col);
    }
    out
}

fn columns_to_matrix(rows: usize, cols: &[RVec]) -> RMat {
    let mut out = RMat::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        out.set_column(j, col);
    }
    out
}

/// Sort ascending and compare two multisets elementwise.
pub fn multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Elementwise relative distance `|x-y| / max(1, |y|)` after sorting.
pub fn multiset_relative_distance(actual: &[f64], expected: &[f64]) -> f64 {
    if actual.len() != expected.len() {
        return f64::INFINITY;
    }
    let mut a = actual.to_vec();
    let mut b = expected.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max)
}
