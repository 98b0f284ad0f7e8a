//! Matrix kernels used by the solvers: Khatri-Rao and Hadamard products,
//! Moore-Penrose pseudoinverse with numerical-rank truncation, and leading
//! left singular vectors.

use crate::error::{Error, Result};
use crate::tensor::{Matrix, Vector};

/// Khatri-Rao (column-wise Kronecker) product. Both operands must have the
/// same number of columns; column `k` of the result is `a_k (x) b_k` with
/// the `b` index varying fastest.
pub fn khatri_rao(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.ncols() != b.ncols() {
        return Err(Error::ShapeMismatch {
            left_rows: a.nrows(),
            left_cols: a.ncols(),
            right_rows: b.nrows(),
            right_cols: b.ncols(),
        });
    }
    let (p, q, cols) = (a.nrows(), b.nrows(), a.ncols());
    let mut out = Matrix::zeros(p * q, cols);
    for c in 0..cols {
        for i in 0..p {
            let ai = a[(i, c)];
            if ai == 0.0 {
                continue;
            }
            for j in 0..q {
                out[(i * q + j, c)] = ai * b[(j, c)];
            }
        }
    }
    Ok(out)
}

/// Hadamard (element-wise) product of two equally shaped matrices.
pub fn hadamard(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::ShapeMismatch {
            left_rows: a.nrows(),
            left_cols: a.ncols(),
            right_rows: b.nrows(),
            right_cols: b.ncols(),
        });
    }
    Ok(a.component_mul(b))
}

/// Default relative rank tolerance for `rows x cols` matrices:
/// `eps * max(rows, cols)`. Singular values at or below this fraction of the
/// largest one are treated as zero.
pub fn default_rank_tol(rows: usize, cols: usize) -> f64 {
    f64::EPSILON * rows.max(cols) as f64
}

type Svd = nalgebra::linalg::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>;

// The iteration in nalgebra's unbounded svd() can cycle on matrices with
// exactly repeated singular values, which the ALS subproblems produce, so
// every decomposition here goes through the bounded variant.
const SVD_MAX_ITER: usize = 4096;

fn try_svd_bounded(m: &Matrix) -> Option<Svd> {
    m.clone().try_svd(true, true, f64::EPSILON, SVD_MAX_ITER)
}

fn svd_or_panic(m: &Matrix) -> Svd {
    if let Some(svd) = try_svd_bounded(m) {
        return svd;
    }
    if let Some(svd) = m
        .clone()
        .try_svd(true, true, f64::EPSILON * 64.0, SVD_MAX_ITER * 256)
    {
        return svd;
    }
    panic!(
        "singular value decomposition did not converge for a {}x{} matrix",
        m.nrows(),
        m.ncols()
    );
}

/// Moore-Penrose pseudoinverse via SVD. Singular values
/// `sigma_i <= rank_tol * sigma_max` are truncated to zero; `rank_tol = 0`
/// selects [`default_rank_tol`]. The zero matrix maps to the zero matrix.
pub fn pinv(m: &Matrix, rank_tol: f64) -> Matrix {
    let (rows, cols) = (m.nrows(), m.ncols());
    let tol = if rank_tol == 0.0 {
        default_rank_tol(rows, cols)
    } else {
        rank_tol
    };
    let svd = svd_or_panic(m);
    let u = svd.u.as_ref().expect("svd requested u");
    let v_t = svd.v_t.as_ref().expect("svd requested v_t");
    let sigma_max = svd.singular_values.max();
    let cut = tol * sigma_max;
    let k = svd.singular_values.len();
    let mut inv_sigma = Matrix::zeros(k, k);
    for i in 0..k {
        let s = svd.singular_values[i];
        if s > cut && s > 0.0 {
            inv_sigma[(i, i)] = 1.0 / s;
        }
    }
    v_t.transpose() * inv_sigma * u.transpose()
}

/// Leading `r` left singular vectors of `m`, as an orthonormal `rows x r`
/// matrix ordered by nonincreasing singular value.
pub fn leading_left_singular_vectors(m: &Matrix, r: usize) -> Result<Matrix> {
    let max = m.nrows().min(m.ncols());
    if r == 0 || r > max {
        return Err(Error::RankOutOfRange { r, max });
    }
    let svd = svd_or_panic(m);
    let u = svd.u.as_ref().expect("svd requested u");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });
    let mut out = Matrix::zeros(m.nrows(), r);
    for (dst, &src) in order.iter().take(r).enumerate() {
        out.set_column(dst, &u.column(src));
    }
    Ok(out)
}

/// Minimal-norm solution of the consistent system `Q v = rhs` through a
/// single SVD of `Q`, with a numerical-rank floor. Returns `None` when the
/// numerical rank of `Q` falls below `min_rank`, which the ALS solvers treat
/// as a degenerate iterate.
pub(crate) fn pinv_solve_rank_checked(
    q: &Matrix,
    rhs: &Vector,
    min_rank: usize,
) -> Option<Vector> {
    let svd = try_svd_bounded(q)?;
    let u = svd.u.as_ref().expect("svd requested u");
    let v_t = svd.v_t.as_ref().expect("svd requested v_t");
    let sigma_max = svd.singular_values.max();
    if sigma_max.is_nan() || sigma_max <= 0.0 || !sigma_max.is_finite() {
        return None;
    }
    let cut = default_rank_tol(q.nrows(), q.ncols()) * sigma_max;
    let rank = svd.singular_values.iter().filter(|&&s| s > cut).count();
    if rank < min_rank {
        return None;
    }
    let mut coeff = u.transpose() * rhs;
    for i in 0..coeff.len() {
        let s = svd.singular_values[i];
        coeff[i] = if s > cut { coeff[i] / s } else { 0.0 };
    }
    Some(v_t.transpose() * coeff)
}
