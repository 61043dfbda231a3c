use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use sparse_omt::experiment::{
    log_grid, run_cluster, run_sweep, write_sweep, Builtin, ClusterRun, Dataset, ExperimentSpec,
    Method, SolverOverrides,
};
use sparse_omt::io::{emit_scatter_svg, read_points, to_canonical_json, write_json, write_points};
use sparse_omt::omt::wasserstein2;
use sparse_omt::{Error, ProbabilityVector, Result};

#[derive(Parser)]
#[command(name = "sparse-omt", version, about = "Sparse-support transport and convex clustering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a builtin Gaussian mixture to CSV.
    Generate {
        /// four-clusters or ten-clusters
        #[arg(long, default_value = "four-clusters")]
        dataset: String,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cluster a dataset at one lambda.
    Cluster {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: f64,
        /// Directory for cluster.json (and cluster.svg with --svg).
        #[arg(long, env = "SPARSE_OMT_OUT")]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: bool,
    },
    /// Solve over a lambda grid and write a JSON report.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated lambdas; overrides the log grid.
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        lambda_min: f64,
        #[arg(long, default_value_t = 2000.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 30)]
        lambda_count: usize,
        #[arg(long, env = "SPARSE_OMT_OUT", default_value = ".")]
        out: PathBuf,
        /// Concurrent solves; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Draw a clustering (from `cluster`) as SVG.
    Plot {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        clusters: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// 2-Wasserstein distance between two uniformly weighted point files.
    Omt {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Builtin name (four-clusters, ten-clusters) or a CSV path.
    #[arg(long, default_value = "four-clusters")]
    data: String,
    /// Points per component for builtin datasets.
    #[arg(long)]
    samples: Option<usize>,
    /// son, lp, linf or exact-omt
    #[arg(long, default_value = "son")]
    method: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    eps_abs: Option<f64>,
    #[arg(long)]
    eps_rel: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    search_tol: Option<f64>,
}

impl Common {
    fn overrides(&self) -> SolverOverrides {
        SolverOverrides {
            eps_abs: self.eps_abs,
            eps_rel: self.eps_rel,
            max_iterations: self.max_iterations,
            rho: self.rho,
            search_tol: self.search_tol,
        }
    }

    fn dataset(&self) -> Dataset {
        Dataset::parse(&self.data, self.samples)
    }
}

#[derive(Serialize)]
struct Distance {
    cost: f64,
    metric: f64,
}

/// Returns whether every solve was optimal.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate {
            dataset,
            samples,
            seed,
            out,
        } => {
            let b: Builtin = dataset.parse()?;
            let cloud = b.generate(samples.unwrap_or_else(|| b.default_samples()), seed)?;
            write_points(&out, &cloud)?;
            eprintln!("wrote {} points to {}", cloud.len(), out.display());
            Ok(true)
        }
        Command::Cluster {
            common,
            lambda,
            out,
            svg,
        } => {
            let method: Method = common.method.parse()?;
            let (cloud, run) = run_cluster(&common.dataset(), method, lambda, common.seed, &common.overrides())?;
            match &out {
                Some(dir) => {
                    write_json(&dir.join("cluster.json"), &run)?;
                    if svg {
                        emit_scatter_svg(&cloud, &run.clustering, &dir.join("cluster.svg"))?;
                    }
                }
                None => print!("{}", to_canonical_json(&run)?),
            }
            eprintln!(
                "{} clusters, status {:?}",
                run.clustering.cluster_count, run.report.status
            );
            Ok(run.report.status.is_optimal())
        }
        Command::Sweep {
            common,
            lambda,
            lambda_min,
            lambda_max,
            lambda_count,
            out,
            jobs,
        } => {
            let grid = if lambda.is_empty() {
                log_grid(lambda_min, lambda_max, lambda_count)
            } else {
                lambda
            };
            let spec = ExperimentSpec {
                dataset: common.dataset(),
                method: common.method.parse()?,
                lambda_grid: grid,
                seed: common.seed,
                overrides: common.overrides(),
                output_directory: None,
                jobs,
            };
            let report = run_sweep(&spec)?;
            let path = write_sweep(&report, &out)?;
            for e in &report.entries {
                match (&e.cluster_count, &e.error) {
                    (Some(k), _) => eprintln!("lambda {:>10.4}: {k} clusters", e.lambda),
                    (None, Some(err)) => eprintln!("lambda {:>10.4}: failed: {err}", e.lambda),
                    _ => {}
                }
            }
            eprintln!("wrote {}", path.display());
            Ok(report.all_optimal())
        }
        Command::Plot {
            points,
            clusters,
            out,
        } => {
            let cloud = read_points(&points)?;
            let text = std::fs::read_to_string(&clusters).map_err(|e| Error::io(&clusters, e))?;
            let run: ClusterRun = serde_json::from_str(&text)?;
            emit_scatter_svg(&cloud, &run.clustering, &out)?;
            Ok(true)
        }
        Command::Omt {
            source,
            target,
            out,
        } => {
            let a = read_points(&source)?;
            let b = read_points(&target)?;
            let wa = ProbabilityVector::uniform(a.len())?;
            let wb = ProbabilityVector::uniform(b.len())?;
            let (cost, metric) = wasserstein2(&a, &wa, &b, &wb)?;
            let d = Distance { cost, metric };
            match out {
                Some(path) => write_json(&path, &d)?,
                None => print!("{}", to_canonical_json(&d)?),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
