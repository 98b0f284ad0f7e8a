//! Structure-preserving ALS for the rank-at-most-6 antisymmetric format.
//!
//! For a fixed pair of the three representation vectors, the scaled squared
//! misfit `6 ||A - A6(x,y,z)||^2` is an unconstrained quadratic
//! `d + c^T v + (1/2) v^T Q v` in the remaining vector. Each microiteration
//! minimizes one such quadratic exactly through the Moore-Penrose inverse:
//! `v = -Q^+ c`. `Q` annihilates the pair it is built from, so the minimal
//! norm solution comes out orthogonal to the other two vectors.

use crate::antisym::{is_antisymmetric, A6Repr};
use crate::cp::{ConvergenceReport, Init, SolveConfig, StopReason, STRUCTURE_TOL};
use crate::error::{Error, Result};
use crate::linalg::{leading_left_singular_vectors, pinv_solve_rank_checked};
use crate::random::randn_vector;
use crate::tensor::{Matrix, Mode, Tensor3, Vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Quadratic-term matrix of one mode subproblem:
///
/// ```text
/// Q = 2 ((||u||^2 ||v||^2 - <u,v>^2) I + (u v^T - v u^T)^2)
/// ```
///
/// Symmetric, positive semidefinite, with null space spanned by `u` and `v`
/// (rank `n - 2` for independent `u, v`).
pub fn build_q(u: &Vector, v: &Vector) -> Result<Matrix> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let n = u.len();
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let uu = u.norm_squared();
    let vv = v.norm_squared();
    let uv = u.dot(v);
    let gamma = uu * vv - uv * uv;
    // (u v^T - v u^T)^2 expanded, keeping Q symmetric by construction.
    let mut q = Matrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let s = uv * (u[i] * v[j] + v[i] * u[j]) - vv * u[i] * u[j] - uu * v[i] * v[j];
            q[(i, j)] = 2.0 * s;
        }
    }
    for i in 0..n {
        q[(i, i)] += 2.0 * gamma;
    }
    Ok(q)
}

/// Linear-term vector of one mode subproblem: `-12 A x_2 u^T x_3 v^T`.
/// The contraction is always over modes 2 and 3; the vector pair decides
/// which of the three subproblems it serves.
pub fn build_c(a: &Tensor3, u: &Vector, v: &Vector) -> Result<Vector> {
    let w = a.contract23(u, v)?;
    Ok(w * -12.0)
}

/// Objective of the antisymmetric approximation problem:
/// `6 ||a - A6(x,y,z)||^2`.
pub fn objective(a: &Tensor3, r: &A6Repr) -> Result<f64> {
    if a.dims() != (r.n(), r.n(), r.n()) {
        return Err(Error::DimsMismatch {
            left: a.dims(),
            right: (r.n(), r.n(), r.n()),
        });
    }
    let diff = a - &r.materialize();
    Ok(6.0 * diff.norm() * diff.norm())
}

/// Orthonormal basis of `span{x, y, z}` as an `n x 3` matrix, from the thin
/// QR decomposition with nonnegative diagonal. Errors when the vectors are
/// numerically dependent.
pub fn orthonormal_basis_of(r: &A6Repr) -> Result<Matrix> {
    let n = r.n();
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    let mut v = Matrix::zeros(n, 3);
    v.set_column(0, &r.x);
    v.set_column(1, &r.y);
    v.set_column(2, &r.z);
    let scale = v.column_iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    let qr = v.qr();
    let mut q = qr.q();
    let rr = qr.r();
    for i in 0..3 {
        if rr[(i, i)].abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::DependentVectors);
        }
        if rr[(i, i)] < 0.0 {
            q.column_mut(i).scale_mut(-1.0);
        }
    }
    Ok(q)
}

const MAX_REINITS: usize = 50;

struct BlockOutcome {
    vector: Vector,
    reinits: usize,
}

/// Solves one mode subproblem, re-drawing the second vector of the pair when
/// the quadratic term degenerates (numerical rank below `n - 2`).
fn solve_block(
    a: &Tensor3,
    first: &Vector,
    second: &mut Vector,
    rng: &mut ChaCha8Rng,
) -> Result<BlockOutcome> {
    let n = first.len();
    let mut reinits = 0;
    loop {
        let q = build_q(first, second)?;
        let c = build_c(a, first, second)?;
        if let Some(solution) = pinv_solve_rank_checked(&q, &(-c), n.saturating_sub(2).max(1)) {
            return Ok(BlockOutcome {
                vector: solution,
                reinits,
            });
        }
        reinits += 1;
        if reinits > MAX_REINITS {
            return Err(Error::Degenerate {
                reason: "quadratic term kept rank-deficient after re-randomizations".into(),
            });
        }
        *second = randn_vector(rng, n);
    }
}

/// Antisymmetry-preserving CP: cycles the three pseudoinverse solves
/// `x = -(Q1)^+ c1`, `y = -(Q2)^+ c2`, `z = -(Q3)^+ c3` until the relative
/// error, or its change between consecutive sweeps, falls below `cfg.tol`.
pub fn antisym_cp(a: &Tensor3, cfg: &SolveConfig) -> Result<(A6Repr, ConvergenceReport)> {
    cfg.validate()?;
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if !is_antisymmetric(a, STRUCTURE_TOL) {
        return Err(Error::NotAntisymmetric { tol: STRUCTURE_TOL });
    }
    if a.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let n = a.dims().0;
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut x, mut y, mut z) = match cfg.init {
        Init::Random => (
            randn_vector(&mut rng, n),
            randn_vector(&mut rng, n),
            randn_vector(&mut rng, n),
        ),
        Init::Svd => {
            let basis = leading_left_singular_vectors(&a.matricize(Mode::One), 3.min(n))?;
            (
                basis.column(0).into_owned(),
                basis.column(1 % basis.ncols()).into_owned(),
                basis.column(2 % basis.ncols()).into_owned(),
            )
        }
    };

    let norm_a = a.norm();
    let mut objective_trace = Vec::new();
    let mut micro_trace = Vec::new();
    let mut reinits = 0;
    let mut stop_reason = StopReason::MaxIter;
    let mut err_prev = f64::INFINITY;
    let mut iterations = 0;

    let current_objective = |x: &Vector, y: &Vector, z: &Vector| -> Result<f64> {
        let repr = A6Repr::new(x.clone(), y.clone(), z.clone())?;
        objective(a, &repr)
    };

    for _ in 0..cfg.max_iter {
        let out = solve_block(a, &y, &mut z, &mut rng)?;
        x = out.vector;
        reinits += out.reinits;
        micro_trace.push(current_objective(&x, &y, &z)?);

        let out = solve_block(a, &z, &mut x, &mut rng)?;
        y = out.vector;
        reinits += out.reinits;
        micro_trace.push(current_objective(&x, &y, &z)?);

        let out = solve_block(a, &x, &mut y, &mut rng)?;
        z = out.vector;
        reinits += out.reinits;
        let f = current_objective(&x, &y, &z)?;
        micro_trace.push(f);

        iterations += 1;
        let err = (f / 6.0).max(0.0).sqrt() / norm_a;
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
    }

    Ok((
        A6Repr::new(x, y, z)?,
        ConvergenceReport {
            iterations,
            objective_trace,
            stop_reason,
            micro_trace,
            reinits,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antisym::{antisymmetrize, levi_civita};
    use crate::random::uniform_tensor;
    use approx::assert_relative_eq;

    fn random_antisym(n: usize, seed: u64) -> Tensor3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        antisymmetrize(&uniform_tensor(&mut rng, (n, n, n))).unwrap()
    }

    fn random_a6(n: usize, seed: u64) -> A6Repr {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        A6Repr::new(
            randn_vector(&mut rng, n),
            randn_vector(&mut rng, n),
            randn_vector(&mut rng, n),
        )
        .unwrap()
    }

    #[test]
    fn build_q_on_basis_vectors() {
        let u = Vector::from_vec(vec![1.0, 0.0, 0.0]);
        let v = Vector::from_vec(vec![0.0, 1.0, 0.0]);
        let q = build_q(&u, &v).unwrap();
        let mut want = Matrix::zeros(3, 3);
        want[(2, 2)] = 2.0;
        assert_relative_eq!((q - want).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn build_q_dependent_pair_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = randn_vector(&mut rng, 4);
        let v = &u * -2.5;
        let q = build_q(&u, &v).unwrap();
        assert!(q.norm() <= 1e-12 * u.norm_squared() * v.norm_squared());
        assert!(build_q(&u, &randn_vector(&mut rng, 3)).is_err());
    }

    #[test]
    fn build_q_rank_and_null_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = randn_vector(&mut rng, 5);
        let v = randn_vector(&mut rng, 5);
        let q = build_q(&u, &v).unwrap();
        assert_relative_eq!((&q - q.transpose()).norm(), 0.0, epsilon = 1e-13 * q.norm());
        let qnorm = q.norm();
        assert!((&q * &u).norm() <= 1e-12 * qnorm * u.norm());
        assert!((&q * &v).norm() <= 1e-12 * qnorm * v.norm());
        let svd = q.clone().svd(false, false);
        let smax = svd.singular_values.max();
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > 1e-10 * smax)
            .count();
        assert_eq!(rank, 3); // n - 2
        // positive semidefinite: all eigenvalues of the symmetric Q >= 0
        let eig = q.symmetric_eigen();
        assert!(eig.eigenvalues.iter().all(|&l| l >= -1e-10 * smax));
    }

    #[test]
    fn build_c_on_levi_civita() {
        let e = levi_civita();
        let e2 = Vector::from_vec(vec![0.0, 1.0, 0.0]);
        let e3 = Vector::from_vec(vec![0.0, 0.0, 1.0]);
        let c = build_c(&e, &e2, &e3).unwrap();
        assert_relative_eq!(c[0], -12.0);
        assert_relative_eq!(c[1], 0.0);
        assert_relative_eq!(c[2], 0.0);
    }

    #[test]
    fn build_c_repeated_vector_vanishes() {
        let a = random_antisym(5, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = randn_vector(&mut rng, 5);
        let c = build_c(&a, &u, &u).unwrap();
        assert!(c.norm() <= 1e-12 * a.norm() * u.norm_squared());
    }

    #[test]
    fn build_c_matches_triple_loop() {
        let a = random_antisym(4, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let u = randn_vector(&mut rng, 4);
        let v = randn_vector(&mut rng, 4);
        let c = build_c(&a, &u, &v).unwrap();
        for i in 0..4 {
            let mut acc = 0.0;
            for j in 0..4 {
                for k in 0..4 {
                    acc += a.get(i, j, k) * u[j] * v[k];
                }
            }
            assert_relative_eq!(c[i], -12.0 * acc, max_relative = 1e-12, epsilon = 1e-13);
        }
    }

    #[test]
    fn objective_trivial_cases() {
        let a = random_antisym(4, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = randn_vector(&mut rng, 4);
        let z = randn_vector(&mut rng, 4);
        let degenerate = A6Repr::new(x.clone(), x.clone(), z).unwrap();
        let f = objective(&a, &degenerate).unwrap();
        assert_relative_eq!(f, 6.0 * a.norm() * a.norm(), max_relative = 1e-12);

        let repr = random_a6(4, 9);
        let exact = repr.materialize();
        assert!(objective(&exact, &repr).unwrap() <= 1e-20 * exact.norm().max(1.0));
    }

    // The central correctness check: all three quadratic-form readings of
    // the objective agree with the direct norm evaluation.
    #[test]
    fn quadratic_forms_match_direct_objective() {
        for (n, seed) in [(3, 10), (4, 11), (5, 12)] {
            let a = random_antisym(n, seed);
            let r = random_a6(n, seed + 100);
            let direct = objective(&a, &r).unwrap();
            let d = 6.0 * a.norm() * a.norm();

            let q1 = build_q(&r.y, &r.z).unwrap();
            let c1 = build_c(&a, &r.y, &r.z).unwrap();
            let via_x = d + c1.dot(&r.x) + 0.5 * (&q1 * &r.x).dot(&r.x);

            let q2 = build_q(&r.z, &r.x).unwrap();
            let c2 = build_c(&a, &r.z, &r.x).unwrap();
            let via_y = d + c2.dot(&r.y) + 0.5 * (&q2 * &r.y).dot(&r.y);

            let q3 = build_q(&r.x, &r.y).unwrap();
            let c3 = build_c(&a, &r.x, &r.y).unwrap();
            let via_z = d + c3.dot(&r.z) + 0.5 * (&q3 * &r.z).dot(&r.z);

            for via in [via_x, via_y, via_z] {
                assert_relative_eq!(via, direct, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn solver_recovers_exact_structure() {
        let repr = random_a6(10, 13);
        let a = &repr.materialize() * 6.0;
        let (out, report) = antisym_cp(&a, &SolveConfig::seeded(1)).unwrap();
        let err = (&a - &out.materialize()).norm() / a.norm();
        assert!(err <= 1e-12, "err {err}, {} sweeps", report.iterations);
        assert_eq!(report.objective_trace.len(), report.iterations);
    }

    #[test]
    fn solver_monotone_and_orthogonal() {
        let a = random_antisym(6, 14);
        let (out, report) = antisym_cp(&a, &SolveConfig::seeded(2)).unwrap();
        for w in report.micro_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-10, "objective rose {} -> {}", w[0], w[1]);
        }
        for w in report.objective_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "sweep error rose {} -> {}", w[0], w[1]);
        }
        assert_eq!(report.reinits, 0);
        // updated vectors end mutually orthogonal
        let (x, y, z) = (&out.x, &out.y, &out.z);
        assert!(x.dot(y).abs() <= 1e-10 * x.norm() * y.norm());
        assert!(y.dot(z).abs() <= 1e-10 * y.norm() * z.norm());
        assert!(x.dot(z).abs() <= 1e-10 * x.norm() * z.norm());
    }

    #[test]
    fn pseudoinverse_solves_are_consistent() {
        let a = random_antisym(5, 15);
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..5 {
            let y = randn_vector(&mut rng, 5);
            let z = randn_vector(&mut rng, 5);
            let q = build_q(&y, &z).unwrap();
            let c = build_c(&a, &y, &z).unwrap();
            let x = pinv_solve_rank_checked(&q, &(-&c), 3).unwrap();
            assert!(
                (&q * &x + &c).norm() <= 1e-9 * c.norm(),
                "residual {}",
                (&q * &x + &c).norm() / c.norm()
            );
        }
    }

    #[test]
    fn solver_rejects_bad_inputs() {
        let t = uniform_tensor(&mut ChaCha8Rng::seed_from_u64(17), (4, 4, 4));
        assert!(matches!(
            antisym_cp(&t, &SolveConfig::default()),
            Err(Error::NotAntisymmetric { .. })
        ));
        let z = Tensor3::zeros((4, 4, 4));
        assert!(matches!(
            antisym_cp(&z, &SolveConfig::default()),
            Err(Error::ZeroTensor)
        ));
    }

    #[test]
    fn orthonormal_basis_properties() {
        // already orthonormal input comes back up to sign
        let repr = A6Repr::new(
            Vector::from_vec(vec![1.0, 0.0, 0.0]),
            Vector::from_vec(vec![0.0, 1.0, 0.0]),
            Vector::from_vec(vec![0.0, 0.0, 1.0]),
        )
        .unwrap();
        let q = orthonormal_basis_of(&repr).unwrap();
        for i in 0..3 {
            assert_relative_eq!(q.column(i)[i].abs(), 1.0, epsilon = 1e-14);
        }

        // hand-computable QR
        let repr = A6Repr::new(
            Vector::from_vec(vec![1.0, 1.0, 0.0]),
            Vector::from_vec(vec![0.0, 1.0, 0.0]),
            Vector::from_vec(vec![0.0, 0.0, 2.0]),
        )
        .unwrap();
        let q = orthonormal_basis_of(&repr).unwrap();
        let s = 0.5_f64.sqrt();
        let want = Matrix::from_column_slice(3, 3, &[s, s, 0.0, -s, s, 0.0, 0.0, 0.0, 1.0]);
        assert_relative_eq!((&q - want).norm(), 0.0, epsilon = 1e-13);

        // A6 is reproduced after rescaling one basis column by det(R)
        let mut v = Matrix::zeros(3, 3);
        v.set_column(0, &repr.x);
        v.set_column(1, &repr.y);
        v.set_column(2, &repr.z);
        let r_mat = q.transpose() * &v;
        let det = r_mat[(0, 0)] * r_mat[(1, 1)] * r_mat[(2, 2)];
        let scaled = A6Repr::new(
            q.column(0).into_owned() * det,
            q.column(1).into_owned(),
            q.column(2).into_owned(),
        )
        .unwrap();
        let orig = repr.materialize();
        assert!((&scaled.materialize() - &orig).norm() <= 1e-11 * orig.norm());

        // random triple: orthonormal within 1e-13
        let repr = random_a6(6, 18);
        let q = orthonormal_basis_of(&repr).unwrap();
        let gram = q.transpose() * &q;
        assert!((gram - Matrix::identity(3, 3)).norm() <= 1e-13);

        // dependent vectors error
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let x = randn_vector(&mut rng, 4);
        let y = randn_vector(&mut rng, 4);
        let dep = A6Repr::new(x.clone(), y.clone(), &x + &y).unwrap();
        assert!(matches!(
            orthonormal_basis_of(&dep),
            Err(Error::DependentVectors)
        ));
    }
}
