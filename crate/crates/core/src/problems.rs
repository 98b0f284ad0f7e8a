//! Deterministic generators for the benchmark example families. Each is a
//! pure function of its dimensions and seed, so reruns are bit-identical.

use crate::antisym::{antisymmetrize, antisymmetrize_partial, A6Repr, C2Repr};
use crate::error::{Error, Result};
use crate::random::{randn_tensor, randn_vector, uniform_tensor};
use crate::tensor::{Tensor3, Vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Antisymmetric `n x n x n` tensor of rank at most 6: six times the
/// three-vector format of standard normal vectors.
pub fn gen_rank6_random(n: usize, seed: u64) -> Result<Tensor3> {
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let repr = A6Repr::new(
        randn_vector(&mut rng, n),
        randn_vector(&mut rng, n),
        randn_vector(&mut rng, n),
    )?;
    Ok(&repr.materialize() * 6.0)
}

/// Antisymmetric tensor assembled from sine samples: the alternating
/// six-term sum of `sin(x_i) sin(y_j) sin(z_k)` over equidistant grids on
/// `[0,1]`, `[2,10]` and `[1,3]`. Equals six times the three-vector format
/// of the sine vectors.
pub fn gen_sine(n: usize) -> Result<Tensor3> {
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let sx = Vector::from_vec(linspace(0.0, 1.0, n).iter().map(|v| v.sin()).collect());
    let sy = Vector::from_vec(linspace(2.0, 10.0, n).iter().map(|v| v.sin()).collect());
    let sz = Vector::from_vec(linspace(1.0, 3.0, n).iter().map(|v| v.sin()).collect());
    Ok(&A6Repr::new(sx, sy, sz)?.materialize() * 6.0)
}

/// Antisymmetrized discretization of `exp(x^2 + 2 y^2 + 3 z^2)` on the unit
/// grid `xi_i = (i-1)/(n-1)`.
///
/// The exponential factors over the coordinates, so the sampled tensor is
/// rank 1 and its antisymmetrization is exactly the three-vector format of
/// the factor samples: structure-preserving solves recover it to machine
/// precision for every `n`.
pub fn gen_exp_grid(n: usize) -> Result<Tensor3> {
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let grid = linspace(0.0, 1.0, n);
    let b = Tensor3::from_fn((n, n, n), |i, j, k| {
        (grid[i] * grid[i] + 2.0 * grid[j] * grid[j] + 3.0 * grid[k] * grid[k]).exp()
    });
    antisymmetrize(&b)
}

/// Antisymmetrization of an `n x n x n` tensor with i.i.d. uniform(0,1)
/// entries.
pub fn gen_random_antisym(n: usize, seed: u64) -> Result<Tensor3> {
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    antisymmetrize(&uniform_tensor(&mut rng, (n, n, n)))
}

/// The three partially antisymmetric benchmark tensors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartialVariant {
    /// `8 x 8 x 10`, twice the exact two-vector format of normal vectors.
    A1,
    /// `5 x 5 x 7`, the exponential grid partially antisymmetrized.
    A2,
    /// `5 x 5 x 4`, standard normal entries partially antisymmetrized.
    A3,
}

/// Builds one of the partially antisymmetric example tensors. `A2` is
/// deterministic; the seed feeds the random draws of `A1` and `A3`.
pub fn gen_partial(variant: PartialVariant, seed: u64) -> Tensor3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match variant {
        PartialVariant::A1 => {
            let repr = C2Repr::new(
                randn_vector(&mut rng, 8),
                randn_vector(&mut rng, 8),
                randn_vector(&mut rng, 10),
            )
            .expect("matching lengths");
            &repr.materialize() * 2.0
        }
        PartialVariant::A2 => {
            let (n, m) = (5, 7);
            let grid_n = linspace(0.0, 1.0, n);
            let grid_m = linspace(0.0, 1.0, m);
            let b = Tensor3::from_fn((n, n, m), |i, j, k| {
                (grid_n[i] * grid_n[i] + 2.0 * grid_n[j] * grid_n[j] + 3.0 * grid_m[k] * grid_m[k])
                    .exp()
            });
            antisymmetrize_partial(&b).expect("square frontal slices")
        }
        PartialVariant::A3 => {
            let b = randn_tensor(&mut rng, (5, 5, 4));
            antisymmetrize_partial(&b).expect("square frontal slices")
        }
    }
}
