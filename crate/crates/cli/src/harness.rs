//! Experiment harness: runs the benchmark example families through the
//! solvers and aggregates error/iteration rows.

use askew_core::{
    antisym_cp, cp_als, cp_reconstruct, cp_then_antisymmetrize, cp_then_antisymmetrize_partial,
    gen_exp_grid, gen_partial, gen_rank6_random, gen_random_antisym, gen_sine, pantisym_cp,
    Error, Init, PartialVariant, Result, SolveConfig, Tensor3,
};
use serde::Serialize;
use std::time::Instant;

/// Benchmark example families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleId {
    Rank6Random,
    Sine,
    ExpGrid,
    RandomAntisym,
    PartialSuite,
}

impl ExampleId {
    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::Rank6Random => "rank6_random",
            ExampleId::Sine => "sine",
            ExampleId::ExpGrid => "exp_grid",
            ExampleId::RandomAntisym => "random_antisym",
            ExampleId::PartialSuite => "partial_suite",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rank6_random" => Ok(ExampleId::Rank6Random),
            "sine" => Ok(ExampleId::Sine),
            "exp_grid" => Ok(ExampleId::ExpGrid),
            "random_antisym" => Ok(ExampleId::RandomAntisym),
            "partial_suite" => Ok(ExampleId::PartialSuite),
            other => Err(Error::InvalidConfig {
                reason: format!("unknown example id: {other:?}"),
            }),
        }
    }

    /// Whether this family produces partially antisymmetric tensors.
    pub fn is_partial(self) -> bool {
        matches!(self, ExampleId::PartialSuite)
    }
}

/// Solver identifiers as they appear in result tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgorithmId {
    CpAlsR6,
    CpAnti,
    AntisymCp,
    CpAlsR2,
    CpPanti,
    PantisymCp,
}

impl AlgorithmId {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmId::CpAlsR6 => "cp_als_r6",
            AlgorithmId::CpAnti => "cp_anti",
            AlgorithmId::AntisymCp => "antisym_cp",
            AlgorithmId::CpAlsR2 => "cp_als_r2",
            AlgorithmId::CpPanti => "cp_panti",
            AlgorithmId::PantisymCp => "pantisym_cp",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cp_als_r6" => Ok(AlgorithmId::CpAlsR6),
            "cp_anti" => Ok(AlgorithmId::CpAnti),
            "antisym_cp" => Ok(AlgorithmId::AntisymCp),
            "cp_als_r2" => Ok(AlgorithmId::CpAlsR2),
            "cp_panti" => Ok(AlgorithmId::CpPanti),
            "pantisym_cp" => Ok(AlgorithmId::PantisymCp),
            other => Err(Error::InvalidConfig {
                reason: format!("unknown algorithm id: {other:?}"),
            }),
        }
    }

    /// Whether this solver consumes partially antisymmetric input.
    pub fn is_partial(self) -> bool {
        matches!(
            self,
            AlgorithmId::CpAlsR2 | AlgorithmId::CpPanti | AlgorithmId::PantisymCp
        )
    }

    /// All solvers compatible with the given example family.
    pub fn all_for(example: ExampleId) -> Vec<AlgorithmId> {
        if example.is_partial() {
            vec![
                AlgorithmId::CpAlsR2,
                AlgorithmId::CpPanti,
                AlgorithmId::PantisymCp,
            ]
        } else {
            vec![
                AlgorithmId::CpAlsR6,
                AlgorithmId::CpAnti,
                AlgorithmId::AntisymCp,
            ]
        }
    }
}

impl Serialize for AlgorithmId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// One benchmark request: an example family, its sizes, the solvers to run
/// and how often to repeat each solve with derived seeds.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub example: ExampleId,
    /// Edge sizes for the cubical families; ignored by the partial suite.
    pub dims: Vec<usize>,
    pub seed: u64,
    pub algorithms: Vec<AlgorithmId>,
    pub repeats: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl ExperimentSpec {
    pub fn new(example: ExampleId, dims: Vec<usize>) -> Self {
        Self {
            example,
            dims,
            seed: 0,
            algorithms: AlgorithmId::all_for(example),
            repeats: 1,
            tol: 1e-8,
            max_iter: 1000,
        }
    }
}

/// Aggregated result of one (example instance, algorithm) cell: medians of
/// the relative error, sweep count and wall time over the repeats. Wall
/// time is informational only.
#[derive(Clone, Debug, Serialize)]
pub struct ResultRow {
    pub example: String,
    pub n: usize,
    pub algorithm: AlgorithmId,
    pub rel_error: f64,
    pub iterations: usize,
    pub time_s: f64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Seed for one (algorithm, repeat) cell, derived deterministically from
/// the experiment seed.
fn derived_seed(base: u64, algorithm: usize, repeat: usize) -> u64 {
    splitmix64(base ^ splitmix64((algorithm as u64) << 32 | repeat as u64))
}

fn median_f64(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn median_usize(values: &mut [usize]) -> usize {
    values.sort_unstable();
    values[values.len() / 2]
}

/// Solver configuration used by the harness: every algorithm starts from
/// seeded random vectors. A singular-vector start is useless on
/// antisymmetric input (the three unfoldings share their left singular
/// spaces, which puts the factors into a configuration the alternating
/// updates annihilate), so the benchmarks do not use it.
pub fn config_for(algorithm: AlgorithmId, tol: f64, max_iter: usize, seed: u64) -> SolveConfig {
    let _ = algorithm;
    SolveConfig {
        tol,
        max_iter,
        seed,
        init: Init::Random,
    }
}

/// Runs one solver on one tensor, returning the relative error of the
/// returned representation, the sweep count and the wall time.
pub fn run_algorithm(
    algorithm: AlgorithmId,
    tensor: &Tensor3,
    cfg: &SolveConfig,
) -> Result<(f64, usize, f64)> {
    let start = Instant::now();
    let (approx, iterations) = match algorithm {
        AlgorithmId::CpAlsR6 => {
            let (f, rep) = cp_als(tensor, 6, cfg)?;
            (cp_reconstruct(&f), rep.iterations)
        }
        AlgorithmId::CpAlsR2 => {
            let (f, rep) = cp_als(tensor, 2, cfg)?;
            (cp_reconstruct(&f), rep.iterations)
        }
        AlgorithmId::CpAnti => {
            let (r, rep) = cp_then_antisymmetrize(tensor, cfg)?;
            (r.materialize(), rep.iterations)
        }
        AlgorithmId::AntisymCp => {
            let (r, rep) = antisym_cp(tensor, cfg)?;
            (r.materialize(), rep.iterations)
        }
        AlgorithmId::CpPanti => {
            let (r, rep) = cp_then_antisymmetrize_partial(tensor, cfg)?;
            (r.materialize(), rep.iterations)
        }
        AlgorithmId::PantisymCp => {
            let (r, rep) = pantisym_cp(tensor, cfg)?;
            (r.materialize(), rep.iterations)
        }
    };
    let time_s = start.elapsed().as_secs_f64();
    let rel_error = (tensor - &approx).norm() / tensor.norm();
    Ok((rel_error, iterations, time_s))
}

/// Example instances of one family: `(label, n, tensor)`.
fn instances(spec: &ExperimentSpec) -> Result<Vec<(String, usize, Tensor3)>> {
    match spec.example {
        ExampleId::PartialSuite => Ok(vec![
            (
                "partial_a1".into(),
                8,
                gen_partial(PartialVariant::A1, spec.seed),
            ),
            (
                "partial_a2".into(),
                5,
                gen_partial(PartialVariant::A2, spec.seed),
            ),
            (
                "partial_a3".into(),
                5,
                gen_partial(PartialVariant::A3, spec.seed),
            ),
        ]),
        family => {
            if spec.dims.is_empty() {
                return Err(Error::InvalidConfig {
                    reason: format!("example {:?} needs at least one size", family.as_str()),
                });
            }
            let name = family.as_str().to_string();
            spec.dims
                .iter()
                .map(|&n| {
                    let t = match family {
                        ExampleId::Rank6Random => gen_rank6_random(n, spec.seed)?,
                        ExampleId::Sine => gen_sine(n)?,
                        ExampleId::ExpGrid => gen_exp_grid(n)?,
                        ExampleId::RandomAntisym => gen_random_antisym(n, spec.seed)?,
                        ExampleId::PartialSuite => unreachable!(),
                    };
                    Ok((name.clone(), n, t))
                })
                .collect()
        }
    }
}

/// Runs every requested algorithm on every example instance, `repeats`
/// times each with derived seeds, and returns one median-aggregated row per
/// (instance, algorithm) in deterministic order.
pub fn run(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    if spec.repeats == 0 {
        return Err(Error::InvalidConfig {
            reason: "repeats must be at least 1".into(),
        });
    }
    for &algorithm in &spec.algorithms {
        if algorithm.is_partial() != spec.example.is_partial() {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "algorithm {} does not apply to example {}",
                    algorithm.as_str(),
                    spec.example.as_str()
                ),
            });
        }
    }

    let mut rows = Vec::new();
    for (label, n, tensor) in instances(spec)? {
        for (algo_idx, &algorithm) in spec.algorithms.iter().enumerate() {
            let mut errors = Vec::with_capacity(spec.repeats);
            let mut iters = Vec::with_capacity(spec.repeats);
            let mut times = Vec::with_capacity(spec.repeats);
            for rep in 0..spec.repeats {
                let seed = derived_seed(spec.seed, algo_idx, rep);
                let cfg = config_for(algorithm, spec.tol, spec.max_iter, seed);
                let (err, it, time) = run_algorithm(algorithm, &tensor, &cfg)?;
                errors.push(err);
                iters.push(it);
                times.push(time);
            }
            rows.push(ResultRow {
                example: label.clone(),
                n,
                algorithm,
                rel_error: median_f64(&mut errors),
                iterations: median_usize(&mut iters),
                time_s: median_f64(&mut times),
            });
        }
    }
    Ok(rows)
}
