use askew_cli::harness::{self, AlgorithmId, ExampleId, ExperimentSpec};
use askew_cli::output;
use askew_core::{
    antisym_cp, cp_als, cp_reconstruct, cp_then_antisymmetrize, cp_then_antisymmetrize_partial,
    equivalence_report, io, pantisym_cp, Error, EquivalenceReport, Init, PartialVariant, Result,
    SolveConfig, StopReason, Tensor3,
};
use clap::{Parser, Subcommand};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

/// Low-rank approximation of antisymmetric and partially antisymmetric
/// order-3 tensors.
#[derive(Parser)]
#[command(name = "askew", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark example tensor and write it in ATNS v1.
    Gen {
        /// Example id: rank6_random | sine | exp_grid | random_antisym |
        /// partial_a1 | partial_a2 | partial_a3
        #[arg(long)]
        example: String,
        /// Edge size for the cubical families (ignored by partial_a*).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Approximate a tensor read from an ATNS v1 file.
    Approx {
        /// Algorithm id: cp_als | cp_als_r6 | cp_als_r2 | cp_anti |
        /// antisym_cp | cp_panti | pantisym_cp
        #[arg(long)]
        algorithm: String,
        /// CP rank for cp_als (fixed to 6 or 2 by the _r6/_r2 aliases).
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long = "max-iter", default_value_t = 1000)]
        max_iter: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Initialization: svd | random (default random; the svd start is
        /// degenerate on antisymmetric input).
        #[arg(long)]
        init: Option<String>,
        /// Print the compression/equivalence diagnostic record as JSON
        /// (antisym_cp and cp_anti only).
        #[arg(long)]
        diagnostics: bool,
        /// Input tensor file.
        #[arg(short, long)]
        input: PathBuf,
        /// Optional output file for the computed representation (A6/C2
        /// vector format for the structured algorithms, reconstructed ATNS
        /// for plain cp_als).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a benchmark example family and print an error/iteration table.
    Bench {
        /// Example id: rank6_random | sine | exp_grid | random_antisym |
        /// partial_suite
        #[arg(long)]
        example: String,
        /// Comma-separated edge sizes, e.g. 10,25,50 (ignored by
        /// partial_suite).
        #[arg(long)]
        n: Option<String>,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long = "max-iter", default_value_t = 1000)]
        max_iter: usize,
        /// Comma-separated algorithm subset (default: all compatible).
        #[arg(long)]
        algorithms: Option<String>,
        /// Emit CSV instead of the human table.
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        /// Emit JSON instead of the human table.
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for validation problems, 3 for solver failures.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Degenerate { .. } => 3,
        _ => 2,
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Gen {
            example,
            n,
            seed,
            output,
        } => gen(&example, n, seed, &output),
        Command::Approx {
            algorithm,
            r,
            tol,
            max_iter,
            seed,
            init,
            diagnostics,
            input,
            output,
        } => approx(
            &algorithm,
            r,
            tol,
            max_iter,
            seed,
            init.as_deref(),
            diagnostics,
            &input,
            output.as_deref(),
        ),
        Command::Bench {
            example,
            n,
            repeats,
            seed,
            tol,
            max_iter,
            algorithms,
            csv,
            json,
        } => bench(
            &example, n.as_deref(), repeats, seed, tol, max_iter,
            algorithms.as_deref(), csv, json,
        ),
    }
}

fn gen(example: &str, n: Option<usize>, seed: u64, output: &Path) -> Result<()> {
    let tensor = match example {
        "partial_a1" => askew_core::gen_partial(PartialVariant::A1, seed),
        "partial_a2" => askew_core::gen_partial(PartialVariant::A2, seed),
        "partial_a3" => askew_core::gen_partial(PartialVariant::A3, seed),
        "partial_suite" => {
            return Err(Error::InvalidConfig {
                reason: "partial_suite contains three tensors; generate partial_a1, \
                         partial_a2 or partial_a3, or use `askew bench`"
                    .into(),
            })
        }
        family => {
            let n = n.ok_or_else(|| Error::InvalidConfig {
                reason: format!("example {family:?} requires --n"),
            })?;
            match ExampleId::parse(family)? {
                ExampleId::Rank6Random => askew_core::gen_rank6_random(n, seed)?,
                ExampleId::Sine => askew_core::gen_sine(n)?,
                ExampleId::ExpGrid => askew_core::gen_exp_grid(n)?,
                ExampleId::RandomAntisym => askew_core::gen_random_antisym(n, seed)?,
                ExampleId::PartialSuite => unreachable!(),
            }
        }
    };
    io::write_tensor_path(output, &tensor)?;
    println!(
        "wrote {} tensor {:?} to {}",
        example,
        tensor.dims(),
        output.display()
    );
    Ok(())
}

fn stop_reason_str(s: StopReason) -> &'static str {
    match s {
        StopReason::TolReached => "tol_reached",
        StopReason::Stalled => "stalled",
        StopReason::MaxIter => "max_iter",
    }
}

#[derive(Serialize)]
struct DiagnosticsRecord {
    algorithm: String,
    rel_error: f64,
    iterations: usize,
    stop_reason: &'static str,
    time_s: f64,
    equivalence: EquivalenceReport,
}

enum ApproxOutput {
    A6(askew_core::A6Repr),
    C2(askew_core::C2Repr),
    Dense(Tensor3),
}

#[allow(clippy::too_many_arguments)]
fn approx(
    algorithm: &str,
    r: Option<usize>,
    tol: f64,
    max_iter: usize,
    seed: u64,
    init: Option<&str>,
    diagnostics: bool,
    input: &Path,
    output: Option<&Path>,
) -> Result<()> {
    let tensor = io::read_tensor_path(input)?;

    let init = match init {
        None => Init::Random,
        Some("svd") => Init::Svd,
        Some("random") => Init::Random,
        Some(other) => {
            return Err(Error::InvalidConfig {
                reason: format!("unknown init {other:?}, expected svd or random"),
            })
        }
    };
    let cfg = SolveConfig {
        tol,
        max_iter,
        seed,
        init,
    };

    let cp_rank = |fixed: usize| -> Result<usize> {
        match r {
            None => Ok(fixed),
            Some(v) if v == fixed => Ok(v),
            Some(v) => Err(Error::InvalidConfig {
                reason: format!("--r {v} conflicts with {algorithm} (rank {fixed})"),
            }),
        }
    };

    let start = Instant::now();
    let (result, report) = match algorithm {
        "cp_als" => {
            let r = r.ok_or_else(|| Error::InvalidConfig {
                reason: "cp_als requires --r".into(),
            })?;
            let (f, rep) = cp_als(&tensor, r, &cfg)?;
            (ApproxOutput::Dense(cp_reconstruct(&f)), rep)
        }
        "cp_als_r6" => {
            let (f, rep) = cp_als(&tensor, cp_rank(6)?, &cfg)?;
            (ApproxOutput::Dense(cp_reconstruct(&f)), rep)
        }
        "cp_als_r2" => {
            let (f, rep) = cp_als(&tensor, cp_rank(2)?, &cfg)?;
            (ApproxOutput::Dense(cp_reconstruct(&f)), rep)
        }
        "cp_anti" => {
            let (repr, rep) = cp_then_antisymmetrize(&tensor, &cfg)?;
            (ApproxOutput::A6(repr), rep)
        }
        "antisym_cp" => {
            let (repr, rep) = antisym_cp(&tensor, &cfg)?;
            (ApproxOutput::A6(repr), rep)
        }
        "cp_panti" => {
            let (repr, rep) = cp_then_antisymmetrize_partial(&tensor, &cfg)?;
            (ApproxOutput::C2(repr), rep)
        }
        "pantisym_cp" => {
            let (repr, rep) = pantisym_cp(&tensor, &cfg)?;
            (ApproxOutput::C2(repr), rep)
        }
        other => {
            return Err(Error::InvalidConfig {
                reason: format!("unknown algorithm id: {other:?}"),
            })
        }
    };
    let time_s = start.elapsed().as_secs_f64();

    let approx_tensor = match &result {
        ApproxOutput::A6(repr) => repr.materialize(),
        ApproxOutput::C2(repr) => repr.materialize(),
        ApproxOutput::Dense(t) => t.clone(),
    };
    let rel_error = (&tensor - &approx_tensor).norm() / tensor.norm();

    if diagnostics {
        let repr = match &result {
            ApproxOutput::A6(repr) => repr,
            _ => {
                return Err(Error::InvalidConfig {
                    reason: "diagnostics are available for antisym_cp and cp_anti only".into(),
                })
            }
        };
        let record = DiagnosticsRecord {
            algorithm: algorithm.to_string(),
            rel_error,
            iterations: report.iterations,
            stop_reason: stop_reason_str(report.stop_reason),
            time_s,
            equivalence: equivalence_report(&tensor, repr)?,
        };
        println!("{}", serde_json::to_string_pretty(&record).expect("record serializes"));
    } else {
        println!(
            "algorithm={} rel_error={:e} iterations={} stop_reason={} time_s={:.6}",
            algorithm,
            rel_error,
            report.iterations,
            stop_reason_str(report.stop_reason),
            time_s
        );
    }

    if let Some(path) = output {
        let file = std::fs::File::create(path)?;
        let mut writer = std::io::BufWriter::new(file);
        match &result {
            ApproxOutput::A6(repr) => io::write_a6(&mut writer, repr)?,
            ApproxOutput::C2(repr) => io::write_c2(&mut writer, repr)?,
            ApproxOutput::Dense(t) => io::write_atns(&mut writer, t)?,
        }
    }
    Ok(())
}


fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim().parse().map_err(|_| Error::InvalidConfig {
                reason: format!("invalid size {t:?}"),
            })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn bench(
    example: &str,
    n: Option<&str>,
    repeats: usize,
    seed: u64,
    tol: f64,
    max_iter: usize,
    algorithms: Option<&str>,
    csv: bool,
    json: bool,
) -> Result<()> {
    let example = ExampleId::parse(example)?;
    let dims = match n {
        Some(list) => parse_sizes(list)?,
        None if example.is_partial() => Vec::new(),
        None => {
            return Err(Error::InvalidConfig {
                reason: format!("example {} requires --n", example.as_str()),
            })
        }
    };
    let mut spec = ExperimentSpec::new(example, dims);
    spec.seed = seed;
    spec.repeats = repeats;
    spec.tol = tol;
    spec.max_iter = max_iter;
    if let Some(list) = algorithms {
        spec.algorithms = list
            .split(',')
            .map(|t| AlgorithmId::parse(t.trim()))
            .collect::<Result<_>>()?;
    }

    let rows = harness::run(&spec)?;
    if csv {
        print!("{}", output::render_csv(&rows));
    } else if json {
        println!("{}", output::render_json(&rows));
    } else {
        print!("{}", output::render_table(&rows));
    }
    Ok(())
}
