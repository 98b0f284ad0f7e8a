//! Rank-r CP approximation by alternating least squares, plus the naive
//! structure-recovering wrappers that antisymmetrize a rank-1 result.
//!
//! One sweep updates the three factor matrices in turn, each by the exact
//! least-squares solution for that block:
//!
//! ```text
//! X = A_(1) (Z . Y) (Y^T Y * Z^T Z)^+
//! Y = A_(2) (Z . X) (X^T X * Z^T Z)^+
//! Z = A_(3) (Y . X) (X^T X * Y^T Y)^+
//! ```
//!
//! where `.` is the Khatri-Rao and `*` the Hadamard product. Sweeps stop when
//! the relative error, or its change between consecutive sweeps, falls below
//! the configured tolerance.

use crate::antisym::{is_antisymmetric, is_partially_antisymmetric, A6Repr, C2Repr};
use crate::error::{Error, Result};
use crate::linalg::{hadamard, khatri_rao, leading_left_singular_vectors, pinv};
use crate::random::randn_matrix;
use crate::tensor::{Matrix, Mode, Tensor3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Factor matrices `(X, Y, Z)` of a rank-r CP representation `[[X, Y, Z]]`.
#[derive(Clone, Debug)]
pub struct CpFactors {
    pub x: Matrix,
    pub y: Matrix,
    pub z: Matrix,
}

impl CpFactors {
    pub fn new(x: Matrix, y: Matrix, z: Matrix) -> Result<Self> {
        if x.ncols() != y.ncols() || y.ncols() != z.ncols() {
            return Err(Error::ShapeMismatch {
                left_rows: x.nrows(),
                left_cols: x.ncols(),
                right_rows: if x.ncols() != y.ncols() { y.nrows() } else { z.nrows() },
                right_cols: if x.ncols() != y.ncols() { y.ncols() } else { z.ncols() },
            });
        }
        Ok(Self { x, y, z })
    }

    /// Number of rank-1 terms.
    pub fn rank(&self) -> usize {
        self.x.ncols()
    }
}

/// How solvers draw their starting point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Init {
    /// Leading left singular vectors of the unfoldings (padded with seeded
    /// random columns when the requested rank exceeds what the unfolding
    /// provides).
    Svd,
    /// I.i.d. standard normal entries from the seeded generator.
    Random,
}

/// Tolerances, iteration caps and seeding shared by all iterative solvers.
#[derive(Clone, Copy, Debug)]
pub struct SolveConfig {
    /// Stopping tolerance on the relative error and on its per-sweep change.
    pub tol: f64,
    /// Maximum number of sweeps.
    pub max_iter: usize,
    /// Seed for every random draw the solver makes.
    pub seed: u64,
    pub init: Init,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 1000,
            seed: 0,
            init: Init::Random,
        }
    }
}

impl SolveConfig {
    /// Default configuration with a specific seed.
    pub fn seeded(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig {
                reason: format!("tol must be positive, got {}", self.tol),
            });
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig {
                reason: "max_iter must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// Why a solver stopped sweeping.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// The relative error fell below the tolerance.
    TolReached,
    /// The change in relative error between two sweeps fell below the
    /// tolerance.
    Stalled,
    MaxIter,
}

/// Per-solve trace: one relative error per completed sweep, plus the raw
/// objective value after every microiteration (squared residual for CP-ALS,
/// the mode-wise quadratic objective for the structure-preserving solvers).
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub iterations: usize,
    /// Relative error after each sweep; length equals `iterations`.
    pub objective_trace: Vec<f64>,
    pub stop_reason: StopReason,
    /// Objective value after each microiteration (three per sweep).
    pub micro_trace: Vec<f64>,
    /// How many times a degenerate iterate forced a vector re-draw.
    pub reinits: usize,
}

impl ConvergenceReport {
    /// Relative error after the final sweep.
    pub fn final_error(&self) -> f64 {
        self.objective_trace.last().copied().unwrap_or(f64::NAN)
    }
}

fn svd_init(unfolding: &Matrix, r: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let avail = unfolding.nrows().min(unfolding.ncols()).min(r);
    let u = leading_left_singular_vectors(unfolding, avail)
        .expect("avail is within range by construction");
    if avail == r {
        return u;
    }
    let mut out = randn_matrix(rng, unfolding.nrows(), r);
    for c in 0..avail {
        out.set_column(c, &u.column(c));
    }
    out
}

fn residual_sq(unfolding: &Matrix, factor: &Matrix, kr: &Matrix) -> f64 {
    (unfolding - factor * kr.transpose()).norm_squared()
}

// Column norms above this trigger a joint rebalancing of the factor triple.
const OVERFLOW_GUARD: f64 = 1e100;

fn rebalance(x: &mut Matrix, y: &mut Matrix, z: &mut Matrix) {
    let worst = [&*x, &*y, &*z]
        .iter()
        .flat_map(|m| m.column_iter().map(|c| c.norm()))
        .fold(0.0_f64, f64::max);
    if worst <= OVERFLOW_GUARD {
        return;
    }
    for c in 0..x.ncols() {
        let a = x.column(c).norm();
        let b = y.column(c).norm();
        let g = z.column(c).norm();
        if a == 0.0 || b == 0.0 || g == 0.0 {
            continue;
        }
        // Scale the three columns by factors with product 1 so the
        // represented tensor is unchanged while magnitudes equalize.
        let geo = (a * b * g).cbrt();
        x.column_mut(c).scale_mut(geo / a);
        y.column_mut(c).scale_mut(geo / b);
        z.column_mut(c).scale_mut(geo / g);
    }
}

/// CP-ALS for order-3 tensors. Requires a nonzero tensor and
/// `1 <= r <= min` over the modes of the unfolding column counts.
pub fn cp_als(t: &Tensor3, r: usize, cfg: &SolveConfig) -> Result<(CpFactors, ConvergenceReport)> {
    cfg.validate()?;
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    if t.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let (n1, n2, n3) = t.dims();
    let max_r = (n2 * n3).min(n1 * n3).min(n1 * n2);
    if r == 0 || r > max_r {
        return Err(Error::RankOutOfRange { r, max: max_r });
    }

    let a1 = t.matricize(Mode::One);
    let a2 = t.matricize(Mode::Two);
    let a3 = t.matricize(Mode::Three);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut x, mut y, mut z) = match cfg.init {
        Init::Svd => (
            svd_init(&a1, r, &mut rng),
            svd_init(&a2, r, &mut rng),
            svd_init(&a3, r, &mut rng),
        ),
        Init::Random => (
            randn_matrix(&mut rng, n1, r),
            randn_matrix(&mut rng, n2, r),
            randn_matrix(&mut rng, n3, r),
        ),
    };

    let norm_t = t.norm();
    let mut objective_trace = Vec::new();
    let mut micro_trace = Vec::new();
    let mut stop_reason = StopReason::MaxIter;
    let mut err_prev = f64::INFINITY;
    let mut iterations = 0;

    for _ in 0..cfg.max_iter {
        let kr = khatri_rao(&z, &y)?;
        let gram = hadamard(&(y.transpose() * &y), &(z.transpose() * &z))?;
        x = &a1 * &kr * pinv(&gram, 0.0);
        micro_trace.push(residual_sq(&a1, &x, &kr));

        let kr = khatri_rao(&z, &x)?;
        let gram = hadamard(&(x.transpose() * &x), &(z.transpose() * &z))?;
        y = &a2 * &kr * pinv(&gram, 0.0);
        micro_trace.push(residual_sq(&a2, &y, &kr));

        let kr = khatri_rao(&y, &x)?;
        let gram = hadamard(&(x.transpose() * &x), &(y.transpose() * &y))?;
        z = &a3 * &kr * pinv(&gram, 0.0);
        let rs = residual_sq(&a3, &z, &kr);
        micro_trace.push(rs);

        iterations += 1;
        let err = rs.max(0.0).sqrt() / norm_t;
        objective_trace.push(err);
        if err < cfg.tol {
            stop_reason = StopReason::TolReached;
            break;
        }
        if (err - err_prev).abs() < cfg.tol {
            stop_reason = StopReason::Stalled;
            break;
        }
        err_prev = err;
        rebalance(&mut x, &mut y, &mut z);
    }

    Ok((
        CpFactors::new(x, y, z)?,
        ConvergenceReport {
            iterations,
            objective_trace,
            stop_reason,
            micro_trace,
            reinits: 0,
        },
    ))
}

/// Dense tensor represented by CP factors: the sum of the rank-1 terms.
pub fn cp_reconstruct(f: &CpFactors) -> Tensor3 {
    let (n1, n2, n3) = (f.x.nrows(), f.y.nrows(), f.z.nrows());
    let r = f.rank();
    Tensor3::from_fn((n1, n2, n3), |i, j, k| {
        (0..r).map(|l| f.x[(i, l)] * f.y[(j, l)] * f.z[(k, l)]).sum()
    })
}

/// Structure tolerance applied when validating solver inputs.
pub(crate) const STRUCTURE_TOL: f64 = 1e-10;

/// Rank-1 CP-ALS followed by antisymmetrization: the rank-1 factors are
/// wrapped directly as an [`A6Repr`] without materializing the intermediate
/// rank-1 tensor. Requires antisymmetric input.
pub fn cp_then_antisymmetrize(
    a: &Tensor3,
    cfg: &SolveConfig,
) -> Result<(A6Repr, ConvergenceReport)> {
    if !is_antisymmetric(a, STRUCTURE_TOL) {
        return Err(Error::NotAntisymmetric { tol: STRUCTURE_TOL });
    }
    let (f, report) = cp_als(a, 1, cfg)?;
    let repr = A6Repr::new(
        f.x.column(0).into_owned(),
        f.y.column(0).into_owned(),
        f.z.column(0).into_owned(),
    )?;
    Ok((repr, report))
}

/// Rank-1 CP-ALS followed by partial antisymmetrization. The skew projection
/// of a rank-1 tensor halves its structured part, so the wrapped result is
/// rescaled to the least-squares-optimal multiple of the `C2` format (the
/// scale is exactly 2 at any ALS fixed point). Requires input antisymmetric
/// in modes 1 and 2.
pub fn cp_then_antisymmetrize_partial(
    c: &Tensor3,
    cfg: &SolveConfig,
) -> Result<(C2Repr, ConvergenceReport)> {
    if !is_partially_antisymmetric(c, STRUCTURE_TOL) {
        return Err(Error::NotPartiallyAntisymmetric { tol: STRUCTURE_TOL });
    }
    let (f, report) = cp_als(c, 1, cfg)?;
    let x = f.x.column(0).into_owned();
    let y = f.y.column(0).into_owned();
    let z = f.z.column(0).into_owned();
    let unscaled = C2Repr::new(x.clone(), y.clone(), z.clone())?;
    let m = unscaled.materialize();
    let denom = m.norm();
    let lambda = if denom > 0.0 {
        c.inner(&m)? / (denom * denom)
    } else {
        1.0
    };
    Ok((C2Repr::new(x, y, z * lambda)?, report))
}
