//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

#[allow(non_camel_case_types)]
pub type c64 = Complex<f64>;
pub type CMatrix = DMatrix<c64>;

/// Relative threshold below which singular values count as zero.
pub const RANK_TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> c64 {
    Complex::new(re, im)
}

pub fn real(re: f64) -> c64 {
    Complex::new(re, 0.0)
}

pub fn from_real(m: &DMatrix<f64>) -> CMatrix {
    m.map(real)
}

pub fn diag_real(d: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_iterator(d.len(), d.iter().map(|&x| real(x))))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn singular_values_and_u(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let svd = m.clone().svd(true, false);
    (
        svd.singular_values.iter().copied().collect(),
        svd.u.expect("requested"),
    )
}

fn threshold(sv: &[f64]) -> f64 {
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        f64::INFINITY
    } else {
        RANK_TOL * top.max(1e-300)
    }
}

pub fn rank(m: &CMatrix) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let sv: Vec<f64> = sv.iter().copied().collect();
    let tol = threshold(&sv);
    sv.iter().filter(|&&s| s > tol).count()
}

/// Orthonormal basis of the column span.
pub fn column_span(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    if m.ncols() == 0 {
        return CMatrix::zeros(n, 0);
    }
    let (sv, u) = singular_values_and_u(m);
    let tol = threshold(&sv);
    let keep: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > tol).collect();
    CMatrix::from_fn(n, keep.len(), |i, j| u[(i, keep[j])])
}

/// Orthonormal basis of `{x : m x = 0}`.
pub fn kernel(m: &CMatrix) -> CMatrix {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    let mut padded = CMatrix::zeros(rows.max(cols), cols);
    padded.view_mut((0, 0), (rows, cols)).copy_from(m);
    let svd = padded.svd(false, true);
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let vt = svd.v_t.expect("requested");
    let tol = if sv.iter().all(|&s| s == 0.0) {
        f64::INFINITY
    } else {
        threshold(&sv)
    };
    let keep: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] <= tol).collect();
    CMatrix::from_fn(cols, keep.len(), |i, j| vt[(keep[j], i)].conj())
}

/// Orthonormal columns spanning the same space as the (independent) columns of `m`.
pub fn orthonormalize(m: &CMatrix) -> CMatrix {
    if m.ncols() == 0 {
        return m.clone();
    }
    let qr = m.clone().qr();
    qr.q()
}

/// Extends orthonormal columns `q` to a unitary matrix.
pub fn complete_unitary(q: &CMatrix) -> CMatrix {
    let n = q.nrows();
    let rest = kernel(&q.adjoint());
    let mut out = CMatrix::zeros(n, n);
    out.view_mut((0, 0), (n, q.ncols())).copy_from(q);
    out.view_mut((0, q.ncols()), (n, rest.ncols()))
        .copy_from(&rest);
    out
}

/// Lower-triangular `L` with `h = L L^†`.
pub fn cholesky(h: &CMatrix) -> Result<CMatrix> {
    h.clone()
        .cholesky()
        .map(|ch| ch.l())
        .ok_or(Error::NotPositiveDefinite)
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    m.clone().try_inverse().ok_or(Error::Singular)
}

pub fn solve(m: &CMatrix, rhs: &CMatrix) -> Result<CMatrix> {
    m.clone().lu().solve(rhs).ok_or(Error::Singular)
}

/// Eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let sym = (h + h.adjoint()) * real(0.5);
    sym.symmetric_eigenvalues().iter().copied().collect()
}

pub fn is_hermitian(h: &CMatrix, rel_tol: f64) -> bool {
    h.is_square() && max_abs(&(h - h.adjoint())) <= rel_tol * max_abs(h).max(f64::MIN_POSITIVE)
}

/// Hermitian part, to wash out roundoff asymmetry.
pub fn hermitize(h: &CMatrix) -> CMatrix {
    (h + h.adjoint()) * real(0.5)
}

/// Multiplies column `j` by a phase so that `det m` becomes real positive.
pub fn fix_phase(m: &mut CMatrix, j: usize) {
    let det = m.determinant();
    if det.norm() == 0.0 {
        return;
    }
    let phase = (det / det.norm()).conj();
    let mut col = m.column_mut(j);
    col *= phase;
}

/// Scales `g` by a positive real and one column by a phase so that `det g = 1`.
pub fn normalize_det(g: &CMatrix) -> CMatrix {
    let n = g.nrows();
    let det = g.determinant().norm();
    let mut out = g * real(det.powf(-1.0 / n as f64));
    fix_phase(&mut out, n - 1);
    out
}
