use std::path::Path;

use jsonschema::JSONSchema;
use proptest::prelude::*;
use serde_json::Value;

use sparse_omt::experiment::{log_grid, run_cluster, run_sweep, write_sweep, Builtin, Dataset, ExperimentSpec, Method, SolverOverrides};
use sparse_omt::io::{read_points, read_points_from, render_scatter_svg, to_canonical_json, write_points, write_points_to};
use sparse_omt::{Error, PointCloud};

fn schema() -> JSONSchema {
    let text = include_str!("../schema/sweep-report.schema.json");
    let v: Value = serde_json::from_str(text).unwrap();
    JSONSchema::compile(&v).unwrap()
}

fn small_spec(method: Method, dir: &Path) -> ExperimentSpec {
    ExperimentSpec {
        dataset: Dataset::Builtin {
            name: Builtin::FourClusters,
            samples_per_component: 4,
        },
        method,
        lambda_grid: vec![0.5, 5.0, 50.0],
        seed: 9,
        overrides: SolverOverrides::default(),
        output_directory: Some(dir.to_path_buf()),
        jobs: 2,
    }
}

#[test]
fn sweep_reports_validate_against_the_schema() {
    let schema = schema();
    let dir = tempfile::tempdir().unwrap();
    for method in Method::ALL {
        let report = run_sweep(&small_spec(method, dir.path())).unwrap();
        let path = write_sweep(&report, dir.path()).unwrap();
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        if let Err(errors) = schema.validate(&v) {
            let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
            panic!("{method}: {msgs:?}");
        }
        let timings = path.with_extension("timings.json");
        assert!(timings.exists(), "{}", timings.display());
    }
}

#[test]
fn schema_rejects_foreign_fields() {
    let schema = schema();
    let dir = tempfile::tempdir().unwrap();
    let report = run_sweep(&small_spec(Method::Lp, dir.path())).unwrap();
    let mut v = serde_json::to_value(&report).unwrap();
    v["entries"][0]["wall_time_s"] = Value::from(1.0);
    assert!(!schema.is_valid(&v));
}

#[test]
fn sweeps_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for method in [Method::Son, Method::Lp] {
        let pa = write_sweep(&run_sweep(&small_spec(method, a.path())).unwrap(), a.path()).unwrap();
        let mut spec = small_spec(method, b.path());
        spec.jobs = 1;
        let pb = write_sweep(&run_sweep(&spec).unwrap(), b.path()).unwrap();
        assert_eq!(std::fs::read(pa).unwrap(), std::fs::read(pb).unwrap());
    }
}

#[test]
fn canonical_json_sorts_keys_and_rounds() {
    #[derive(serde::Serialize)]
    struct S {
        zeta: f64,
        alpha: Vec<f64>,
    }
    let s = to_canonical_json(&S {
        zeta: 0.1 + 0.2,
        alpha: vec![1.0, 2.5],
    })
    .unwrap();
    assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
    assert!(s.contains("0.3") && !s.contains("0.30000000000000004"));
    assert!(s.ends_with('\n'));
}

#[test]
fn csv_errors_name_the_line() {
    let text = "x0,x1\n1,2\n3\n";
    match read_points_from(text.as_bytes(), Path::new("mem.csv")) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn generated_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    write_points(&a, &Builtin::TenClusters.generate(10, 77).unwrap()).unwrap();
    write_points(&b, &Builtin::TenClusters.generate(10, 77).unwrap()).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let back = read_points(&a).unwrap();
    assert_eq!(back.len(), 100);
    assert_eq!(back.labels().unwrap().iter().max(), Some(&9));
}

#[test]
fn svg_is_deterministic() {
    let cloud = Builtin::FourClusters.generate(5, 3).unwrap();
    let clustering = sparse_omt::clustering::ClusteringResult {
        representatives: vec![0, 5, 10, 15],
        assignment: (0..20).map(|i| i / 5 * 5).collect(),
        cluster_count: 4,
        empty_rows: vec![],
    };
    let a = render_scatter_svg(&cloud, &clustering).unwrap();
    let b = render_scatter_svg(&cloud, &clustering).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.matches("class=\"representative\"").count(), 4);
}

proptest! {
    #[test]
    fn csv_round_trip_is_exact(
        pts in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 3), 1..20),
        labelled in any::<bool>(),
    ) {
        let cloud = if labelled {
            let labels = (0..pts.len()).map(|i| i % 3).collect();
            PointCloud::with_labels(pts, labels).unwrap()
        } else {
            PointCloud::new(pts).unwrap()
        };
        let mut buf = Vec::new();
        write_points_to(&mut buf, &cloud).unwrap();
        let back = read_points_from(buf.as_slice(), Path::new("mem.csv")).unwrap();
        prop_assert_eq!(back, cloud);
    }
}

fn reproduces_in_isolation(data: Builtin, samples: usize, method: Method, grid: Vec<f64>) {
    let spec = ExperimentSpec {
        dataset: Dataset::Builtin {
            name: data,
            samples_per_component: samples,
        },
        method,
        lambda_grid: grid,
        seed: 1,
        overrides: SolverOverrides::default(),
        output_directory: None,
        jobs: 1,
    };
    let report = run_sweep(&spec).unwrap();
    for e in &report.entries {
        let (_, single) = run_cluster(&spec.dataset, method, e.lambda, spec.seed, &spec.overrides).unwrap();
        assert_eq!(single.clustering.assignment, e.assignment, "{method} at lambda {}", e.lambda);
        let obj = e.objective.unwrap();
        assert!((single.report.objective - obj).abs() <= 1e-9 * obj.abs().max(1.0));
    }
}

#[test]
fn sweep_entries_reproduce_in_isolation() {
    for method in [Method::Son, Method::Lp, Method::Linf] {
        reproduces_in_isolation(Builtin::FourClusters, 5, method, vec![0.5, 2.0, 8.0, 30.0]);
    }
}

#[test]
#[ignore = "full-size datasets; run with --ignored"]
fn full_size_lp_sweeps_reproduce_in_isolation() {
    for data in [Builtin::FourClusters, Builtin::TenClusters] {
        reproduces_in_isolation(data, data.default_samples(), Method::Lp, log_grid(1.0, 2000.0, 30));
    }
}
