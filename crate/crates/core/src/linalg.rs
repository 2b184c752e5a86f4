//! Dense kernels shared by the scan passes. Inverses are always applied as
//! factorized solves.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

pub fn symmetrize(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

/// Cholesky factor of a symmetric matrix, `None` unless positive definite.
pub fn cholesky(m: &Mat) -> Option<Cholesky<f64, Dyn>> {
    let chol = Cholesky::new(symmetrize(m))?;
    // nalgebra accepts tiny positive pivots; reject factors that would
    // blow up the solve.
    let l = chol.l_dirty();
    let max_diag = (0..l.nrows()).map(|i| l[(i, i)]).fold(0.0, f64::max);
    let min_diag = (0..l.nrows()).map(|i| l[(i, i)]).fold(f64::INFINITY, f64::min);
    if !(min_diag > 1e-12 * max_diag.max(1e-300)) || !min_diag.is_finite() {
        return None;
    }
    Some(chol)
}

/// Solves `a x = b` by LU with partial pivoting.
pub fn lu_solve(a: &Mat, b: &Mat) -> Option<Mat> {
    let x = a.clone().lu().solve(b)?;
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// `sum_k lambda[k] * tensor[k]`, the contraction of a per-output-component
/// Hessian stack with a co-state.
pub fn contract(tensor: &[Mat], lambda: &Vector, rows: usize, cols: usize) -> Mat {
    let mut out = Mat::zeros(rows, cols);
    for (h, &l) in tensor.iter().zip(lambda.iter()) {
        if l != 0.0 {
            out += h * l;
        }
    }
    out
}

pub fn inf_norm(v: &Vector) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn is_finite(m: &Mat) -> bool {
    m.iter().all(|v| v.is_finite())
}
