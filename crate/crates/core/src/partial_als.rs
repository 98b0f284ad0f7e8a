//! Structure-preserving rank-2 ALS for tensors antisymmetric in modes 1-2.
//!
//! The mode subproblems mirror the fully antisymmetric case with simpler
//! coefficients: the scaled misfit `2 ||C - C2(x,y,z)||^2` is quadratic in
//! each vector, the `x` and `y` quadratic terms are `identity minus rank-1`
//! matrices of rank `n - 1`, and the `z` subproblem collapses to a scalar
//! division.

use crate::antisym::{is_partially_antisymmetric, C2Repr};
use crate::cp::{ConvergenceReport, Init, SolveConfig, StopReason, STRUCTURE_TOL};
use crate::error::{Error, Result};
use crate::linalg::{leading_left_singular_vectors, pinv_solve_rank_checked};
use crate::random::randn_vector;
use crate::tensor::{Matrix, Mode, Tensor3, Vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Quadratic-term matrix of the `x` and `y` subproblems:
/// `Q = 2 ||u||^2 ||z||^2 I - 2 u u^T ||z||^2`. Symmetric positive
/// semidefinite with `Q u = 0`; rank `n - 1` for nonzero `u, z`.
///
/// Panics when `u` has fewer than two entries.
pub fn build_qp(u: &Vector, z: &Vector) -> Matrix {
    assert!(u.len() >= 2, "subproblem needs vectors of length >= 2");
    let n = u.len();
    let zz = z.norm_squared();
    let uu = u.norm_squared();
    let mut q = Matrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            q[(i, j)] = -2.0 * zz * u[i] * u[j];
        }
    }
    for i in 0..n {
        q[(i, i)] += 2.0 * uu * zz;
    }
    q
}

/// Linear-term vector of the `x` subproblem: `-4 C x_2 y^T x_3 z^T`.
pub fn build_b1(c: &Tensor3, y: &Vector, z: &Vector) -> Result<Vector> {
    let w = c.contract23(y, z)?;
    Ok(w * -4.0)
}

/// Linear-term vector of the `y` subproblem: `-4 C x_1 x^T x_3 z^T`.
/// For a tensor antisymmetric in modes 1-2 this equals
/// `+4 C x_2 x^T x_3 z^T`: the remaining vectors sit in slots 1 and 3, so
/// the contraction runs over those modes.
pub fn build_b2(c: &Tensor3, x: &Vector, z: &Vector) -> Result<Vector> {
    let w = c.contract13(x, z)?;
    Ok(w * -4.0)
}

/// Linear-term vector of the `z` subproblem:
/// `-2 (C x_1 x^T x_2 y^T - C x_1 y^T x_2 x^T)`.
pub fn build_b3(c: &Tensor3, x: &Vector, y: &Vector) -> Result<Vector> {
    let first = c.contract12(x, y)?;
    let second = c.contract12(y, x)?;
    Ok((first - second) * -2.0)
}

/// Scalar quadratic term of the `z` subproblem:
/// `||x y^T - y x^T||^2 = 2 (||x||^2 ||y||^2 - <x,y>^2)`. Nonnegative, zero
/// exactly when `x` and `y` are dependent.
///
/// Panics on a length mismatch.
pub fn q3_scalar(x: &Vector, y: &Vector) -> f64 {
    assert_eq!(x.len(), y.len(), "vector lengths differ");
    let xy = x.dot(y);
    2.0 * (x.norm_squared() * y.norm_squared() - xy * xy)
}

/// Objective of the partially antisymmetric approximation problem:
/// `2 ||c - C2(x,y,z)||^2`.
pub fn objective(c: &Tensor3, r: &C2Repr) -> Result<f64> {
    if c.dims() != (r.n(), r.n(), r.m()) {
        return Err(Error::DimsMismatch {
            left: c.dims(),
            right: (r.n(), r.n(), r.m()),
        });
    }
    let diff = c - &r.materialize();
    Ok(2.0 * diff.norm() * diff.norm())
}

const MAX_REINITS: usize = 50;
const Q3_GUARD: f64 = 1e-300;

fn solve_vector_block(
    c: &Tensor3,
    u: &mut Vector,
    z: &mut Vector,
    rhs: fn(&Tensor3, &Vector, &Vector) -> Result<Vector>,
    rng: &mut ChaCha8Rng,
    reinits: &mut usize,
) -> Result<Vector> {
    let n = u.len();
    loop {
        let q = build_qp(u, z);
        let b = rhs(c, u, z)?;
        if let Some(solution) = pinv_solve_rank_checked(&q, &(-b), n - 1) {
            return Ok(solution);
        }
        *reinits += 1;
        if *reinits > MAX_REINITS {
            return Err(Error::Degenerate {
                reason: "partial subproblem stayed rank-deficient after re-randomizations".into(),
            });
        }
        if z.norm() == 0.0 {
            *z = randn_vector(rng, z.len());
        } else {
            *u = randn_vector(rng, n);
        }
    }
}

/// Partial-antisymmetry-preserving CP: cycles `x = -(Q1)^+ b1`,
/// `y = -(Q2)^+ b2`, `z = -b3 / q3` until the relative error, or its change
/// between consecutive sweeps, falls below `cfg.tol`. A vanishing `q3`
/// (dependent `x, y`) re-randomizes `y`.
pub fn pantisym_cp(c: &Tensor3, cfg: &SolveConfig) -> Result<(C2Repr, ConvergenceReport)> {
    cfg.validate()?;
    if !c.is_finite() {
        return Err(Error::NonFinite);
    }
    if !is_partially_antisymmetric(c, STRUCTURE_TOL) {
        return Err(Error::NotPartiallyAntisymmetric { tol: STRUCTURE_TOL });
    }
    if c.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let (n, _, m) = c.dims();
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut x, mut y, mut z) = match cfg.init {
        Init::Random => (
            randn_vector(&mut rng, n),
            randn_vector(&mut rng, n),
            randn_vector(&mut rng, m),
        ),
        Init::Svd => {
            let w = leading_left_singular_vectors(&c.matricize(Mode::One), 2)?;
            let zc = leading_left_singular_vectors(&c.matricize(Mode::Three), 1)?;
            (
                w.column(0).into_owned(),
                w.column(1).into_owned(),
                zc.column(0).into_owned(),
            )
        }
    };

    let norm_c = c.norm();
    let mut objective_trace = Vec::new();
    let mut micro_trace = Vec::new();
    let mut reinits = 0;
    let mut stop_reason = StopReason::MaxIter;
    let mut err_prev = f64::INFINITY;
    let mut iterations = 0;

    let current_objective = |x: &Vector, y: &Vector, z: &Vector| -> Result<f64> {
        objective(c, &C2Repr::new(x.clone(), y.clone(), z.clone())?)
    };

    for _ in 0..cfg.max_iter {
        x = solve_vector_block(c, &mut y, &mut z, build_b1, &mut rng, &mut reinits)?;
        micro_trace.push(current_objective(&x, &y, &z)?);

        y = solve_vector_block(c, &mut x, &mut z, build_b2, &mut rng, &mut reinits)?;
        micro_trace.push(current_objective(&x, &y, &z)?);

        loop {
            let q3 = q3_scalar(&x, &y);
            if q3 >= Q3_GUARD {
                let b3 = build_b3(c, &x, &y)?;
                z = b3 * (-1.0 / q3);
                break;
            }
            reinits += 1;
            if reinits > MAX_REINITS {
                return Err(Error::Degenerate {
                    reason: "q3 stayed zero after re-randomizations".into(),
                });
            }
            y = randn_vector(&mut rng, n);
        }
        let g = current_objective(&x, &y, &z)?;
        micro_trace.push(g);

        iterations += 1;
        let err = (g / 2.0).max(0.0).sqrt() / norm_c;
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
        C2Repr::new(x, y, z)?,
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
    use crate::antisym::antisymmetrize_partial;
    use crate::random::uniform_tensor;
    use approx::assert_relative_eq;

    fn tensor_g(alpha: f64, beta: f64) -> Tensor3 {
        let mut g = Tensor3::zeros((2, 2, 2));
        g.set(0, 1, 0, alpha);
        g.set(1, 0, 0, -alpha);
        g.set(0, 1, 1, beta);
        g.set(1, 0, 1, -beta);
        g
    }

    fn random_partial(n: usize, m: usize, seed: u64) -> Tensor3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        antisymmetrize_partial(&uniform_tensor(&mut rng, (n, n, m))).unwrap()
    }

    fn random_c2(n: usize, m: usize, seed: u64) -> C2Repr {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        C2Repr::new(
            randn_vector(&mut rng, n),
            randn_vector(&mut rng, n),
            randn_vector(&mut rng, m),
        )
        .unwrap()
    }

    #[test]
    fn build_qp_basis_case() {
        let u = Vector::from_vec(vec![1.0, 0.0]);
        let z = Vector::from_vec(vec![0.6, 0.8]);
        let q = build_qp(&u, &z);
        let mut want = Matrix::zeros(2, 2);
        want[(1, 1)] = 2.0;
        assert_relative_eq!((q - want).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn build_qp_zero_z_and_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = randn_vector(&mut rng, 5);
        assert!(build_qp(&u, &Vector::zeros(3)).norm() == 0.0);

        let z = randn_vector(&mut rng, 4);
        let q = build_qp(&u, &z);
        assert!((&q * &u).norm() <= 1e-12 * q.norm() * u.norm());
        let eig = q.clone().symmetric_eigen();
        let lmax = eig.eigenvalues.max();
        let zeros = eig
            .eigenvalues
            .iter()
            .filter(|&&l| l.abs() <= 1e-11 * lmax)
            .count();
        assert_eq!(zeros, 1);
        assert!(eig.eigenvalues.iter().all(|&l| l >= -1e-11 * lmax));
    }

    #[test]
    fn build_b1_on_g_block() {
        let g = tensor_g(1.0, 0.0);
        let y = Vector::from_vec(vec![0.0, 1.0]);
        let z = Vector::from_vec(vec![1.0, 0.0]);
        let b = build_b1(&g, &y, &z).unwrap();
        assert_relative_eq!(b[0], -4.0);
        assert_relative_eq!(b[1], 0.0);
        assert!(build_b1(&g, &y, &Vector::zeros(2)).unwrap().norm() == 0.0);
    }

    #[test]
    fn build_b1_matches_triple_loop() {
        let c = random_partial(4, 3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = randn_vector(&mut rng, 4);
        let v = randn_vector(&mut rng, 3);
        let b = build_b1(&c, &u, &v).unwrap();
        for i in 0..4 {
            let mut acc = 0.0;
            for j in 0..4 {
                for k in 0..3 {
                    acc += c.get(i, j, k) * u[j] * v[k];
                }
            }
            assert_relative_eq!(b[i], -4.0 * acc, max_relative = 1e-12, epsilon = 1e-13);
        }
    }

    #[test]
    fn build_b2_matches_triple_loop_and_sign() {
        let c = random_partial(4, 3, 20);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let x = randn_vector(&mut rng, 4);
        let z = randn_vector(&mut rng, 3);
        let b = build_b2(&c, &x, &z).unwrap();
        for j in 0..4 {
            let mut acc = 0.0;
            for i in 0..4 {
                for k in 0..3 {
                    acc += c.get(i, j, k) * x[i] * z[k];
                }
            }
            assert_relative_eq!(b[j], -4.0 * acc, max_relative = 1e-12, epsilon = 1e-13);
        }
        // on partially antisymmetric input the mode-1 contraction is the
        // negated mode-2 contraction
        let via_mode2 = build_b1(&c, &x, &z).unwrap();
        assert_relative_eq!((&b + &via_mode2).norm(), 0.0, epsilon = 1e-12 * b.norm());
    }

    #[test]
    fn build_b3_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = random_partial(4, 3, 5);
        let x = randn_vector(&mut rng, 4);
        assert!(build_b3(&c, &x, &x).unwrap().norm() <= 1e-13);

        let g = tensor_g(1.0, 2.0);
        let e1 = Vector::from_vec(vec![1.0, 0.0]);
        let e2 = Vector::from_vec(vec![0.0, 1.0]);
        let b3 = build_b3(&g, &e1, &e2).unwrap();
        assert_relative_eq!(b3[0], -4.0);
        assert_relative_eq!(b3[1], -8.0);

        let y = randn_vector(&mut rng, 4);
        let b3 = build_b3(&c, &x, &y).unwrap();
        for k in 0..3 {
            let mut acc = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    acc += c.get(i, j, k) * (x[i] * y[j] - y[i] * x[j]);
                }
            }
            assert_relative_eq!(b3[k], -2.0 * acc, max_relative = 1e-12, epsilon = 1e-13);
        }
    }

    #[test]
    fn q3_scalar_cases() {
        let e1 = Vector::from_vec(vec![1.0, 0.0, 0.0]);
        let e2 = Vector::from_vec(vec![0.0, 1.0, 0.0]);
        assert_relative_eq!(q3_scalar(&e1, &e2), 2.0);
        assert_relative_eq!(q3_scalar(&e1, &(&e1 * 3.0)), 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = randn_vector(&mut rng, 5);
        let y = randn_vector(&mut rng, 5);
        let mut acc = 0.0;
        for i in 0..5 {
            for j in 0..5 {
                let d = x[i] * y[j] - x[j] * y[i];
                acc += d * d;
            }
        }
        assert_relative_eq!(q3_scalar(&x, &y), acc, max_relative = 1e-12);
    }

    #[test]
    fn objective_trivial_cases() {
        let c = random_partial(3, 4, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = randn_vector(&mut rng, 3);
        let z = randn_vector(&mut rng, 4);
        let degenerate = C2Repr::new(x.clone(), x, z).unwrap();
        assert_relative_eq!(
            objective(&c, &degenerate).unwrap(),
            2.0 * c.norm() * c.norm(),
            max_relative = 1e-12
        );
        let r = random_c2(3, 4, 9);
        let exact = r.materialize();
        assert!(objective(&exact, &r).unwrap() <= 1e-18);
    }

    #[test]
    fn quadratic_forms_match_direct_objective() {
        for (n, m, seed) in [(3, 3, 10), (3, 4, 11), (4, 2, 12), (2, 5, 13)] {
            let c = random_partial(n, m, seed);
            let r = random_c2(n, m, seed + 50);
            let direct = objective(&c, &r).unwrap();
            let d = 2.0 * c.norm() * c.norm();

            let q1 = build_qp(&r.y, &r.z);
            let b1 = build_b1(&c, &r.y, &r.z).unwrap();
            let via_x = d + b1.dot(&r.x) + 0.5 * (&q1 * &r.x).dot(&r.x);

            let q2 = build_qp(&r.x, &r.z);
            let b2 = build_b2(&c, &r.x, &r.z).unwrap();
            let via_y = d + b2.dot(&r.y) + 0.5 * (&q2 * &r.y).dot(&r.y);

            let q3 = q3_scalar(&r.x, &r.y);
            let b3 = build_b3(&c, &r.x, &r.y).unwrap();
            let via_z = d + b3.dot(&r.z) + 0.5 * q3 * r.z.norm_squared();

            for via in [via_x, via_y, via_z] {
                assert_relative_eq!(via, direct, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn solver_recovers_exact_structure() {
        let c = &random_c2(8, 10, 14).materialize() * 2.0;
        let (out, report) = pantisym_cp(&c, &SolveConfig::seeded(1)).unwrap();
        let err = (&c - &out.materialize()).norm() / c.norm();
        assert!(err <= 1e-12, "err {err} after {} sweeps", report.iterations);
    }

    #[test]
    fn solver_monotone_orthogonal_consistent() {
        let c = random_partial(6, 5, 15);
        let (out, report) = pantisym_cp(&c, &SolveConfig::seeded(2)).unwrap();
        for w in report.micro_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-10, "objective rose {} -> {}", w[0], w[1]);
        }
        for w in report.objective_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "sweep error rose {} -> {}", w[0], w[1]);
        }
        assert_eq!(report.reinits, 0);
        assert!(out.x.dot(&out.y).abs() <= 1e-10 * out.x.norm() * out.y.norm());

        // consistency of the pseudoinverse solve at the final iterate
        let q = build_qp(&out.y, &out.z);
        let b = build_b1(&c, &out.y, &out.z).unwrap();
        let x = pinv_solve_rank_checked(&q, &(-&b), out.y.len() - 1).unwrap();
        assert!((&q * &x + &b).norm() <= 1e-9 * b.norm());
    }

    #[test]
    fn unit_orthonormal_c2_has_half_norm_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let v = crate::random::randn_matrix(&mut rng, 5, 2);
        let q = v.qr().q();
        let mut z = randn_vector(&mut rng, 4);
        z /= z.norm();
        let r = C2Repr::new(q.column(0).into_owned(), q.column(1).into_owned(), z).unwrap();
        let nsq = r.materialize().norm().powi(2);
        assert_relative_eq!(nsq, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn solver_rejects_bad_inputs() {
        let t = uniform_tensor(&mut ChaCha8Rng::seed_from_u64(17), (4, 4, 3));
        assert!(matches!(
            pantisym_cp(&t, &SolveConfig::default()),
            Err(Error::NotPartiallyAntisymmetric { .. })
        ));
        assert!(matches!(
            pantisym_cp(&Tensor3::zeros((3, 3, 2)), &SolveConfig::default()),
            Err(Error::ZeroTensor)
        ));
    }
}
