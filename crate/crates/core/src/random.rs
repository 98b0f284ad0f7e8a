//! Seeded random sampling helpers shared by the solvers and generators.
//!
//! All randomness in the crate flows through `ChaCha8Rng` so that a seed
//! pins results bit-for-bit across platforms.

use crate::tensor::{Matrix, Tensor3, Vector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub(crate) fn randn_vector(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

pub(crate) fn randn_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    // Column-by-column so the stream order matches stacked vector draws.
    let mut m = Matrix::zeros(rows, cols);
    for c in 0..cols {
        for r in 0..rows {
            m[(r, c)] = rng.sample(StandardNormal);
        }
    }
    m
}

pub(crate) fn uniform_tensor(rng: &mut ChaCha8Rng, dims: (usize, usize, usize)) -> Tensor3 {
    Tensor3::from_fn(dims, |_, _, _| rng.random::<f64>())
}

pub(crate) fn randn_tensor(rng: &mut ChaCha8Rng, dims: (usize, usize, usize)) -> Tensor3 {
    Tensor3::from_fn(dims, |_, _, _| rng.sample(StandardNormal))
}
