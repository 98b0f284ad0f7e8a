//! Library side of the `askew` benchmark CLI: the experiment harness and
//! the table renderers.

pub mod harness;
pub mod output;

pub use harness::{config_for, run, run_algorithm, AlgorithmId, ExampleId, ExperimentSpec, ResultRow};
