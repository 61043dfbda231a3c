//! Ten well-separated clusters: the group-lasso and facility-location
//! relaxations recover them on the low end of the lambda range.
//!
//! ```bash
//! cargo run --release --example ten_clusters
//! ```

use rayon::prelude::*;

use sparse_omt::clustering::{adjusted_rand_index, extract_clusters, DEFAULT_TIE_TOL};
use sparse_omt::datagen::{sample_gaussian_mixture, ten_cluster_config, TEN_CLUSTER_SAMPLES};
use sparse_omt::experiment::{log_grid, solve_method, Method, SolverOverrides};
use sparse_omt::io::render_scatter_svg;
use sparse_omt::{build_cost_matrix, ProbabilityVector};

fn main() -> sparse_omt::Result<()> {
    let cloud = sample_gaussian_mixture(&ten_cluster_config(TEN_CLUSTER_SAMPLES, 1))?;
    let truth = cloud.labels().unwrap();
    let c = build_cost_matrix(&cloud, None)?;
    let p0 = ProbabilityVector::uniform(cloud.len())?;
    let grid = log_grid(1.0, 2000.0, 12);

    for method in [Method::Son, Method::Lp] {
        let rows: Vec<_> = grid
            .par_iter()
            .map(|&lambda| {
                let o = solve_method(method, &c, &p0, lambda, &SolverOverrides::default())?;
                let cl = extract_clusters(&o.plan, DEFAULT_TIE_TOL)?;
                let ari = adjusted_rand_index(truth, &cl.assignment)?;
                Ok((lambda, cl, ari))
            })
            .collect::<sparse_omt::Result<_>>()?;
        println!("{method}:");
        for (lambda, cl, ari) in &rows {
            println!("  lambda {lambda:>9.3}: {:>3} clusters, ARI {ari:.3}", cl.cluster_count);
        }
        if let Some((lambda, cl, _)) = rows.iter().find(|r| r.1.cluster_count == 10) {
            let path = format!("ten-clusters-{method}.svg");
            std::fs::write(&path, render_scatter_svg(&cloud, cl)?).map_err(|e| sparse_omt::Error::io(&path, e))?;
            println!("  wrote {path} (lambda {lambda:.3})");
        }
    }
    Ok(())
}
