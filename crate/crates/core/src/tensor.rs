//! Dense order-3 tensor container and the multilinear primitives built on it.
//!
//! Storage is a single flat buffer in mode-1-fiber-major order: entry
//! `(i, j, k)` of an `n1 x n2 x n3` tensor lives at `i + n1*j + n1*n2*k`.
//! Matricization follows the convention that, among the two free indices,
//! the one with the smaller mode number varies fastest. With this choice the
//! mode-1 matricization is exactly the flat buffer read column-major, and
//! the CP-ALS update formulas written with Khatri-Rao products line up with
//! the unfoldings without any permutation.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Dense column-major matrix of `f64`.
pub type Matrix = DMatrix<f64>;
/// Dense vector of `f64`.
pub type Vector = DVector<f64>;

/// One of the three modes of an order-3 tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    One,
    Two,
    Three,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::One, Mode::Two, Mode::Three];

    /// Zero-based index of the mode.
    pub fn index(self) -> usize {
        match self {
            Mode::One => 0,
            Mode::Two => 1,
            Mode::Three => 2,
        }
    }

    /// One-based number of the mode, as used in error messages.
    pub fn number(self) -> usize {
        self.index() + 1
    }
}

/// Dense real order-3 tensor with explicit dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    dims: (usize, usize, usize),
    values: Vec<f64>,
}

impl Tensor3 {
    /// Builds a tensor from its dimensions and flat values in
    /// mode-1-fiber-major order. All dimensions must be positive and the
    /// buffer length must equal `n1*n2*n3`.
    pub fn new(dims: (usize, usize, usize), values: Vec<f64>) -> Result<Self> {
        let expected = dims.0 * dims.1 * dims.2;
        if dims.0 == 0 || dims.1 == 0 || dims.2 == 0 || values.len() != expected {
            return Err(Error::InvalidShape {
                dims,
                expected,
                got: values.len(),
            });
        }
        Ok(Self { dims, values })
    }

    /// All-zero tensor of the given dimensions.
    pub fn zeros(dims: (usize, usize, usize)) -> Self {
        assert!(
            dims.0 > 0 && dims.1 > 0 && dims.2 > 0,
            "tensor dimensions must be positive"
        );
        Self {
            dims,
            values: vec![0.0; dims.0 * dims.1 * dims.2],
        }
    }

    /// Builds a tensor entry-wise from a function of the zero-based indices.
    pub fn from_fn<F: FnMut(usize, usize, usize) -> f64>(
        dims: (usize, usize, usize),
        mut f: F,
    ) -> Self {
        let mut t = Self::zeros(dims);
        for k in 0..dims.2 {
            for j in 0..dims.1 {
                for i in 0..dims.0 {
                    let v = f(i, j, k);
                    t.values[i + dims.0 * (j + dims.1 * k)] = v;
                }
            }
        }
        t
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    /// Size along one mode.
    pub fn dim(&self, mode: Mode) -> usize {
        match mode {
            Mode::One => self.dims.0,
            Mode::Two => self.dims.1,
            Mode::Three => self.dims.2,
        }
    }

    pub fn is_cubical(&self) -> bool {
        self.dims.0 == self.dims.1 && self.dims.1 == self.dims.2
    }

    /// Flat values in storage order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.dims.0 && j < self.dims.1 && k < self.dims.2);
        i + self.dims.0 * (j + self.dims.1 * k)
    }

    /// Entry `(i, j, k)`, zero-based.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.offset(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let o = self.offset(i, j, k);
        self.values[o] = v;
    }

    /// Mode-m matricization: an `n_m x (product of the other dims)` matrix
    /// whose columns are the mode-m fibers. The free index with the smaller
    /// mode number varies fastest along the columns.
    pub fn matricize(&self, mode: Mode) -> Matrix {
        let (n1, n2, n3) = self.dims;
        match mode {
            Mode::One => Matrix::from_column_slice(n1, n2 * n3, &self.values),
            Mode::Two => Matrix::from_fn(n2, n1 * n3, |j, c| {
                let i = c % n1;
                let k = c / n1;
                self.values[self.offset(i, j, k)]
            }),
            Mode::Three => Matrix::from_fn(n3, n1 * n2, |k, c| {
                let i = c % n1;
                let j = c / n1;
                self.values[self.offset(i, j, k)]
            }),
        }
    }

    /// Inverse of [`matricize`](Self::matricize): folds an unfolded matrix
    /// back into a tensor with the given dimensions.
    pub fn fold(m: &Matrix, mode: Mode, dims: (usize, usize, usize)) -> Result<Self> {
        let (n1, n2, n3) = dims;
        let (rows, cols) = match mode {
            Mode::One => (n1, n2 * n3),
            Mode::Two => (n2, n1 * n3),
            Mode::Three => (n3, n1 * n2),
        };
        if m.nrows() != rows || m.ncols() != cols {
            return Err(Error::ShapeMismatch {
                left_rows: rows,
                left_cols: cols,
                right_rows: m.nrows(),
                right_cols: m.ncols(),
            });
        }
        let t = match mode {
            Mode::One => Self::new(dims, m.as_slice().to_vec())?,
            Mode::Two => Self::from_fn(dims, |i, j, k| m[(j, i + n1 * k)]),
            Mode::Three => Self::from_fn(dims, |i, j, k| m[(k, i + n1 * j)]),
        };
        Ok(t)
    }

    /// Mode-m product with a matrix: the result `B` satisfies
    /// `B_(m) = M * A_(m)`, so the mode-m dimension becomes `m.nrows()`.
    pub fn mode_product(&self, m: &Matrix, mode: Mode) -> Result<Self> {
        let nm = self.dim(mode);
        if m.ncols() != nm {
            return Err(Error::ModeMismatch {
                mode: mode.number(),
                tensor_len: nm,
                operand_len: m.ncols(),
            });
        }
        let unfolded = m * self.matricize(mode);
        let mut dims = self.dims;
        match mode {
            Mode::One => dims.0 = m.nrows(),
            Mode::Two => dims.1 = m.nrows(),
            Mode::Three => dims.2 = m.nrows(),
        }
        Self::fold(&unfolded, mode, dims)
    }

    /// Contraction over modes 2 and 3: returns the length-`n1` vector with
    /// entries `w_i = sum_{j,k} a_{ijk} u_j v_k`.
    pub fn contract23(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        let (n1, n2, n3) = self.dims;
        check_len(u.len(), n2, 2)?;
        check_len(v.len(), n3, 3)?;
        let mut w = Vector::zeros(n1);
        for k in 0..n3 {
            let vk = v[k];
            if vk == 0.0 {
                continue;
            }
            for j in 0..n2 {
                let c = vk * u[j];
                if c == 0.0 {
                    continue;
                }
                let base = n1 * (j + n2 * k);
                for i in 0..n1 {
                    w[i] += c * self.values[base + i];
                }
            }
        }
        Ok(w)
    }

    /// Contraction over modes 1 and 3: `w_j = sum_{i,k} a_{ijk} u_i v_k`.
    pub fn contract13(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        let (n1, n2, n3) = self.dims;
        check_len(u.len(), n1, 1)?;
        check_len(v.len(), n3, 3)?;
        let mut w = Vector::zeros(n2);
        for k in 0..n3 {
            let vk = v[k];
            if vk == 0.0 {
                continue;
            }
            for j in 0..n2 {
                let base = n1 * (j + n2 * k);
                let mut acc = 0.0;
                for i in 0..n1 {
                    acc += u[i] * self.values[base + i];
                }
                w[j] += vk * acc;
            }
        }
        Ok(w)
    }

    /// Contraction over modes 1 and 2: `w_k = sum_{i,j} a_{ijk} u_i v_j`.
    pub fn contract12(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        let (n1, n2, n3) = self.dims;
        check_len(u.len(), n1, 1)?;
        check_len(v.len(), n2, 2)?;
        let mut w = Vector::zeros(n3);
        for k in 0..n3 {
            let mut acc = 0.0;
            for j in 0..n2 {
                let vj = v[j];
                if vj == 0.0 {
                    continue;
                }
                let base = n1 * (j + n2 * k);
                let mut inner = 0.0;
                for i in 0..n1 {
                    inner += u[i] * self.values[base + i];
                }
                acc += vj * inner;
            }
            w[k] = acc;
        }
        Ok(w)
    }

    /// Full contraction with three vectors: `sum_{ijk} a_{ijk} x_i y_j z_k`.
    pub fn contract_all(&self, x: &Vector, y: &Vector, z: &Vector) -> Result<f64> {
        let w = self.contract12(x, y)?;
        check_len(z.len(), self.dims.2, 3)?;
        Ok(w.dot(z))
    }

    /// Inner product with another tensor of identical dimensions.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::DimsMismatch {
                left: self.dims,
                right: other.dims,
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Frobenius-type norm, the square root of the sum of squared entries.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Entry-wise scaling in place.
    pub fn scale_mut(&mut self, s: f64) {
        for v in &mut self.values {
            *v *= s;
        }
    }
}

fn check_len(got: usize, want: usize, mode: usize) -> Result<()> {
    if got != want {
        return Err(Error::ModeMismatch {
            mode,
            tensor_len: want,
            operand_len: got,
        });
    }
    Ok(())
}

impl std::ops::Sub for &Tensor3 {
    type Output = Tensor3;
    fn sub(self, rhs: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims, rhs.dims, "tensor dimensions differ");
        let values = self
            .values
            .iter()
            .zip(&rhs.values)
            .map(|(a, b)| a - b)
            .collect();
        Tensor3 {
            dims: self.dims,
            values,
        }
    }
}

impl std::ops::Add for &Tensor3 {
    type Output = Tensor3;
    fn add(self, rhs: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims, rhs.dims, "tensor dimensions differ");
        let values = self
            .values
            .iter()
            .zip(&rhs.values)
            .map(|(a, b)| a + b)
            .collect();
        Tensor3 {
            dims: self.dims,
            values,
        }
    }
}

impl std::ops::Mul<f64> for &Tensor3 {
    type Output = Tensor3;
    fn mul(self, s: f64) -> Tensor3 {
        let mut t = self.clone();
        t.scale_mut(s);
        t
    }
}

/// Outer product of three vectors: `result(i,j,k) = x_i y_j z_k`.
pub fn outer3(x: &Vector, y: &Vector, z: &Vector) -> Tensor3 {
    Tensor3::from_fn((x.len(), y.len(), z.len()), |i, j, k| x[i] * y[j] * z[k])
}
