use askew_cli::harness::{run, AlgorithmId, ExampleId, ExperimentSpec};
use askew_cli::output::{render_csv, render_json, render_table, CSV_HEADER};

#[test]
fn rank6_row_ordering_matches_expectations() {
    let mut spec = ExperimentSpec::new(ExampleId::Rank6Random, vec![10]);
    spec.seed = 42;
    let rows = run(&spec).unwrap();
    assert_eq!(rows.len(), 3);
    let err_of = |id: AlgorithmId| {
        rows.iter()
            .find(|r| r.algorithm == id)
            .map(|r| r.rel_error)
            .unwrap()
    };
    let preserving = err_of(AlgorithmId::AntisymCp);
    let generic = err_of(AlgorithmId::CpAlsR6);
    let posterior = err_of(AlgorithmId::CpAnti);
    assert!(
        preserving < generic && generic < posterior,
        "{preserving:.2e} {generic:.2e} {posterior:.4}"
    );
    assert!(rows.iter().all(|r| r.rel_error >= 0.0));
    assert!(rows.iter().all(|r| r.n == 10 && r.example == "rank6_random"));
}

#[test]
fn empty_algorithm_set_gives_empty_result() {
    let mut spec = ExperimentSpec::new(ExampleId::Sine, vec![4]);
    spec.algorithms.clear();
    assert!(run(&spec).unwrap().is_empty());
}

#[test]
fn repeat_runs_are_deterministic() {
    let mut spec = ExperimentSpec::new(ExampleId::RandomAntisym, vec![4, 5]);
    spec.seed = 7;
    spec.repeats = 3;
    spec.algorithms = vec![AlgorithmId::AntisymCp, AlgorithmId::CpAnti];
    let first = run(&spec).unwrap();
    let second = run(&spec).unwrap();
    assert_eq!(first.len(), second.len());
    for (a, b) in first.iter().zip(&second) {
        assert_eq!(a.rel_error.to_bits(), b.rel_error.to_bits());
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.example, b.example);
    }
}

#[test]
fn incompatible_pairing_is_rejected() {
    let mut spec = ExperimentSpec::new(ExampleId::Sine, vec![5]);
    spec.algorithms = vec![AlgorithmId::PantisymCp];
    assert!(run(&spec).is_err());
    let mut spec = ExperimentSpec::new(ExampleId::PartialSuite, vec![]);
    spec.algorithms = vec![AlgorithmId::AntisymCp];
    assert!(run(&spec).is_err());
    let mut spec = ExperimentSpec::new(ExampleId::Sine, vec![5]);
    spec.repeats = 0;
    assert!(run(&spec).is_err());
}

#[test]
fn partial_suite_produces_three_instances() {
    let spec = ExperimentSpec::new(ExampleId::PartialSuite, vec![]);
    let rows = run(&spec).unwrap();
    assert_eq!(rows.len(), 9);
    let labels: Vec<&str> = rows.iter().map(|r| r.example.as_str()).collect();
    assert!(labels.contains(&"partial_a1"));
    assert!(labels.contains(&"partial_a2"));
    assert!(labels.contains(&"partial_a3"));
}

#[test]
fn renderers_use_fixed_columns() {
    let mut spec = ExperimentSpec::new(ExampleId::ExpGrid, vec![3]);
    spec.algorithms = vec![AlgorithmId::AntisymCp];
    let rows = run(&spec).unwrap();

    let csv = render_csv(&rows);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER);
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(fields.len(), 6);
    assert_eq!(fields[0], "exp_grid");
    assert_eq!(fields[1], "3");
    assert_eq!(fields[2], "antisym_cp");
    assert!(fields[3].parse::<f64>().unwrap() >= 0.0);
    assert!(fields[4].parse::<usize>().is_ok());
    assert!(fields[5].parse::<f64>().unwrap() >= 0.0);

    let json: serde_json::Value = serde_json::from_str(&render_json(&rows)).unwrap();
    let row = &json.as_array().unwrap()[0];
    for key in ["example", "n", "algorithm", "rel_error", "iterations", "time_s"] {
        assert!(row.get(key).is_some(), "missing key {key}");
    }

    let table = render_table(&rows);
    assert!(table.starts_with(" ") || table.starts_with("example"));
    assert!(table.contains("antisym_cp"));
}
