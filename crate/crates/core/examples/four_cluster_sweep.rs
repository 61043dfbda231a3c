//! Sweeps lambda on the four-cluster mixture with all three relaxations and
//! writes the JSON reports plus one SVG per method.
//!
//! ```bash
//! cargo run --release --example four_cluster_sweep -- out/
//! ```

use std::path::PathBuf;

use sparse_omt::clustering::ClusteringResult;
use sparse_omt::experiment::{log_grid, run_sweep, Builtin, Dataset, ExperimentSpec, Method, SolverOverrides};
use sparse_omt::io::emit_scatter_svg;

fn main() -> sparse_omt::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "four-cluster-sweep".into()));
    std::fs::create_dir_all(&out).map_err(|e| sparse_omt::Error::io(&out, e))?;
    let data = Builtin::FourClusters;
    let cloud = data.generate(data.default_samples(), 1)?;

    for method in [Method::Son, Method::Lp, Method::Linf] {
        let spec = ExperimentSpec {
            dataset: Dataset::Builtin {
                name: data,
                samples_per_component: data.default_samples(),
            },
            method,
            lambda_grid: log_grid(1.0, 2000.0, 30),
            seed: 1,
            overrides: SolverOverrides::default(),
            output_directory: Some(out.clone()),
            jobs: 0,
        };
        let report = run_sweep(&spec)?;
        println!("{method}:");
        for e in &report.entries {
            println!(
                "  lambda {:>9.3}: {:>3} clusters, ARI {:.3}",
                e.lambda,
                e.cluster_count.unwrap_or(0),
                e.ari.unwrap_or(f64::NAN)
            );
        }
        // plot the smallest lambda giving four groups, if any
        if let Some(e) = report.entries.iter().find(|e| e.cluster_count == Some(4)) {
            let clustering = ClusteringResult {
                representatives: e.representatives.clone(),
                assignment: e.assignment.clone(),
                cluster_count: 4,
                empty_rows: vec![],
            };
            let path = out.join(format!("four-clusters-{method}.svg"));
            emit_scatter_svg(&cloud, &clustering, &path)?;
            println!("  plotted lambda {:.3} to {}", e.lambda, path.display());
        }
    }
    Ok(())
}
