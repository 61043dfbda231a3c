//! Lambda sweeps over a dataset with one of the relaxations.
//!
//! A sweep solves the chosen problem for every lambda of the grid, reads
//! clusters off each plan, and records the outcome. Reports are
//! deterministic: wall-clock times are kept apart from the main report so
//! that two identical runs write identical bytes.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{adjusted_rand_index, extract_clusters, ClusteringResult, DEFAULT_TIE_TOL};
use crate::datagen::{
    four_cluster_config, sample_gaussian_mixture, ten_cluster_config, FOUR_CLUSTER_SAMPLES,
    TEN_CLUSTER_SAMPLES,
};
use crate::domain::{build_cost_matrix, CostMatrix, PointCloud, ProbabilityVector, SolveReport, TransportPlan};
use crate::error::{Error, Result};
use crate::facility::{build_facility_lp, solve_facility_lp};
use crate::io::{read_points, write_json};
use crate::linf::{solve_linf, DEFAULT_SEARCH_TOL};
use crate::lp::SimplexConfig;
use crate::omt::solve_transport;
use crate::son::{solve_son, AdmmConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Sum-of-norms relaxation (ADMM).
    Son,
    /// Facility-location LP relaxation.
    Lp,
    /// Inverse-ℓ∞ relaxation.
    Linf,
    /// Exact transport of the dataset onto itself; lambda is unused.
    ExactOmt,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Son, Method::Lp, Method::Linf, Method::ExactOmt];

    pub fn name(self) -> &'static str {
        match self {
            Method::Son => "son",
            Method::Lp => "lp",
            Method::Linf => "linf",
            Method::ExactOmt => "exact-omt",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method {s:?}")))
    }
}

/// Built-in mixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    FourClusters,
    TenClusters,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::FourClusters => "four-clusters",
            Builtin::TenClusters => "ten-clusters",
        }
    }

    pub fn default_samples(self) -> usize {
        match self {
            Builtin::FourClusters => FOUR_CLUSTER_SAMPLES,
            Builtin::TenClusters => TEN_CLUSTER_SAMPLES,
        }
    }

    pub fn generate(self, samples_per_component: usize, seed: u64) -> Result<PointCloud> {
        let cfg = match self {
            Builtin::FourClusters => four_cluster_config(samples_per_component, seed),
            Builtin::TenClusters => ten_cluster_config(samples_per_component, seed),
        };
        sample_gaussian_mixture(&cfg)
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Builtin::FourClusters, Builtin::TenClusters]
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown builtin dataset {s:?}")))
    }
}

/// Where the points come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dataset {
    Builtin {
        name: Builtin,
        samples_per_component: usize,
    },
    File {
        path: PathBuf,
    },
}

impl Dataset {
    /// A builtin name, or otherwise a CSV path.
    pub fn parse(s: &str, samples_per_component: Option<usize>) -> Self {
        match s.parse::<Builtin>() {
            Ok(b) => Dataset::Builtin {
                name: b,
                samples_per_component: samples_per_component.unwrap_or_else(|| b.default_samples()),
            },
            Err(_) => Dataset::File { path: s.into() },
        }
    }

    pub fn load(&self, seed: u64) -> Result<PointCloud> {
        match self {
            Dataset::Builtin {
                name,
                samples_per_component,
            } => name.generate(*samples_per_component, seed),
            Dataset::File { path } => read_points(path),
        }
    }
}

/// Optional solver settings; `None` keeps the defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverOverrides {
    pub eps_abs: Option<f64>,
    pub eps_rel: Option<f64>,
    pub max_iterations: Option<usize>,
    pub rho: Option<f64>,
    pub search_tol: Option<f64>,
}

impl SolverOverrides {
    pub fn admm(&self) -> AdmmConfig {
        let d = AdmmConfig::default();
        AdmmConfig {
            rho: self.rho.unwrap_or(d.rho),
            eps_abs: self.eps_abs.unwrap_or(d.eps_abs),
            eps_rel: self.eps_rel.unwrap_or(d.eps_rel),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
            ..d
        }
    }

    pub fn simplex(&self) -> SimplexConfig {
        SimplexConfig {
            max_pivots: self.max_iterations,
            ..SimplexConfig::default()
        }
    }

    pub fn search_tol(&self) -> f64 {
        self.search_tol.unwrap_or(DEFAULT_SEARCH_TOL)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub dataset: Dataset,
    pub method: Method,
    pub lambda_grid: Vec<f64>,
    pub seed: u64,
    pub overrides: SolverOverrides,
    /// Report directory; nothing is written when `None`.
    #[serde(skip)]
    pub output_directory: Option<PathBuf>,
    /// Worker threads; 0 means the rayon default.
    #[serde(skip)]
    pub jobs: usize,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.lambda_grid.is_empty() {
            return Err(Error::EmptyInput("lambda grid"));
        }
        if let Some(l) = self.lambda_grid.iter().find(|l| !(**l >= 0.0 && l.is_finite())) {
            return Err(Error::InvalidParameter(format!("lambda must be finite and >= 0, got {l}")));
        }
        if self.method == Method::Linf && self.lambda_grid.contains(&0.0) {
            return Err(Error::InvalidParameter("the linf relaxation needs lambda > 0".into()));
        }
        Ok(())
    }
}

/// `count` log-spaced values from `lo` to `hi`, both included.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|k| {
                    if k + 1 == count {
                        hi
                    } else {
                        (a + (b - a) * k as f64 / (count - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// Plan and report from one solve.
#[derive(Debug, Clone)]
pub struct MethodOutcome {
    pub plan: TransportPlan,
    pub report: SolveReport,
}

/// Solves one problem instance with `method`.
pub fn solve_method(
    method: Method,
    c: &CostMatrix,
    p0: &ProbabilityVector,
    lambda: f64,
    overrides: &SolverOverrides,
) -> Result<MethodOutcome> {
    match method {
        Method::Son => {
            let r = solve_son(c, p0, lambda, &overrides.admm())?;
            Ok(MethodOutcome {
                plan: r.plan,
                report: r.report,
            })
        }
        Method::Lp => {
            let lp = build_facility_lp(c, p0, lambda)?;
            let r = solve_facility_lp(&lp, c, p0, None, &overrides.simplex())?;
            Ok(MethodOutcome {
                plan: r.plan,
                report: r.report,
            })
        }
        Method::Linf => {
            let r = solve_linf(c, p0, lambda, overrides.search_tol())?;
            Ok(MethodOutcome {
                plan: r.plan,
                report: r.report,
            })
        }
        Method::ExactOmt => {
            let (plan, cost) = solve_transport(p0, p0, c)?;
            let plan = TransportPlan::new(plan.into_entries(), p0.clone(), None)?;
            Ok(MethodOutcome {
                plan,
                report: SolveReport::exact(cost, 0, crate::domain::SolveStatus::Optimal),
            })
        }
    }
}

/// Result of clustering a dataset at a single lambda.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterRun {
    pub schema_version: u32,
    pub dataset: Dataset,
    pub method: Method,
    pub lambda: f64,
    pub seed: u64,
    pub clustering: ClusteringResult,
    pub ari: Option<f64>,
    pub report: SolveReport,
}

/// Loads the dataset, solves once and extracts clusters.
pub fn run_cluster(
    dataset: &Dataset,
    method: Method,
    lambda: f64,
    seed: u64,
    overrides: &SolverOverrides,
) -> Result<(PointCloud, ClusterRun)> {
    let cloud = dataset.load(seed)?;
    let c = build_cost_matrix(&cloud, None)?;
    let p0 = ProbabilityVector::uniform(cloud.len())?;
    let outcome = solve_method(method, &c, &p0, lambda, overrides)?;
    let clustering = extract_clusters(&outcome.plan, DEFAULT_TIE_TOL)?;
    let ari = cloud
        .labels()
        .map(|l| adjusted_rand_index(l, &clustering.assignment))
        .transpose()?;
    let run = ClusterRun {
        schema_version: SCHEMA_VERSION,
        dataset: dataset.clone(),
        method,
        lambda,
        seed,
        clustering,
        ari,
        report: outcome.report,
    };
    Ok((cloud, run))
}

/// One lambda of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub lambda: f64,
    pub objective: Option<f64>,
    pub cluster_count: Option<usize>,
    pub representatives: Vec<usize>,
    pub assignment: Vec<usize>,
    /// Agreement with the dataset labels, when it has any.
    pub ari: Option<f64>,
    pub report: Option<SolveReport>,
    /// Solver failure message; the sweep carries on.
    pub error: Option<String>,
    #[serde(skip)]
    pub wall_time_s: f64,
}

impl SweepEntry {
    pub fn is_optimal(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.status.is_optimal())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub config: ExperimentSpec,
    pub points: usize,
    pub entries: Vec<SweepEntry>,
}

impl SweepReport {
    pub fn all_optimal(&self) -> bool {
        self.entries.iter().all(SweepEntry::is_optimal)
    }

    pub fn cluster_counts(&self) -> Vec<Option<usize>> {
        self.entries.iter().map(|e| e.cluster_count).collect()
    }
}

#[derive(Serialize)]
struct Timing {
    lambda: f64,
    wall_time_s: f64,
}

fn entry_from(
    lambda: f64,
    outcome: Result<(MethodOutcome, ClusteringResult)>,
    labels: Option<&[usize]>,
    wall_time_s: f64,
) -> SweepEntry {
    match outcome {
        Ok((o, clusters)) => SweepEntry {
            lambda,
            objective: Some(o.report.objective),
            cluster_count: Some(clusters.cluster_count),
            ari: labels.map(|l| adjusted_rand_index(l, &clusters.assignment).expect("same length")),
            representatives: clusters.representatives,
            assignment: clusters.assignment,
            report: Some(o.report),
            error: None,
            wall_time_s,
        },
        Err(e) => SweepEntry {
            lambda,
            objective: None,
            cluster_count: None,
            representatives: vec![],
            assignment: vec![],
            ari: None,
            report: None,
            error: Some(e.to_string()),
            wall_time_s,
        },
    }
}

fn clustered(
    lambda: f64,
    outcome: Result<MethodOutcome>,
    observe: &(impl Fn(f64, &TransportPlan) + Sync),
) -> Result<(MethodOutcome, ClusteringResult)> {
    let o = outcome?;
    observe(lambda, &o.plan);
    let c = extract_clusters(&o.plan, DEFAULT_TIE_TOL)?;
    Ok((o, c))
}

/// Runs the sweep; writes the report when an output directory is set.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<SweepReport> {
    run_sweep_observed(spec, |_, _| {})
}

/// [`run_sweep`], handing every successful plan to `observe` before it is
/// reduced to a clustering. Calls may come from several threads.
pub fn run_sweep_observed(
    spec: &ExperimentSpec,
    observe: impl Fn(f64, &TransportPlan) + Sync,
) -> Result<SweepReport> {
    spec.validate()?;
    let cloud = spec.dataset.load(spec.seed)?;
    let c = build_cost_matrix(&cloud, None)?;
    let p0 = ProbabilityVector::uniform(cloud.len())?;
    let labels = cloud.labels();

    let entries = match spec.method {
        Method::ExactOmt => {
            let t = Instant::now();
            let outcome = clustered(0.0, solve_method(Method::ExactOmt, &c, &p0, 0.0, &spec.overrides), &observe);
            vec![entry_from(0.0, outcome, labels, t.elapsed().as_secs_f64())]
        }
        Method::Lp => {
            // sequential so that each solve can start from the previous basis
            let lp0 = build_facility_lp(&c, &p0, spec.lambda_grid[0])?;
            let cfg = spec.overrides.simplex();
            let mut basis: Option<Vec<usize>> = None;
            let mut out = Vec::with_capacity(spec.lambda_grid.len());
            for &lambda in &spec.lambda_grid {
                let t = Instant::now();
                let solved = lp0
                    .with_lambda(&c, lambda)
                    .and_then(|lp| solve_facility_lp(&lp, &c, &p0, basis.as_deref(), &cfg));
                let outcome = solved.map(|r| {
                    basis = Some(r.basis.clone());
                    MethodOutcome {
                        plan: r.plan,
                        report: r.report,
                    }
                });
                out.push(entry_from(lambda, clustered(lambda, outcome, &observe), labels, t.elapsed().as_secs_f64()));
            }
            out
        }
        method => {
            let solve_one = |lambda: f64| {
                let t = Instant::now();
                let outcome = clustered(lambda, solve_method(method, &c, &p0, lambda, &spec.overrides), &observe);
                entry_from(lambda, outcome, labels, t.elapsed().as_secs_f64())
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(spec.jobs)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            pool.install(|| spec.lambda_grid.par_iter().map(|&l| solve_one(l)).collect())
        }
    };

    let report = SweepReport {
        schema_version: SCHEMA_VERSION,
        config: spec.clone(),
        points: cloud.len(),
        entries,
    };
    if let Some(dir) = &spec.output_directory {
        write_sweep(&report, dir)?;
    }
    Ok(report)
}

/// Writes `sweep-<method>.json` and the matching `.timings.json`; returns
/// the report path.
pub fn write_sweep(report: &SweepReport, dir: &Path) -> Result<PathBuf> {
    let stem = format!("sweep-{}", report.config.method);
    let path = dir.join(format!("{stem}.json"));
    write_json(&path, report)?;
    let timings: Vec<Timing> = report
        .entries
        .iter()
        .map(|e| Timing {
            lambda: e.lambda,
            wall_time_s: e.wall_time_s,
        })
        .collect();
    write_json(&dir.join(format!("{stem}.timings.json")), &timings)?;
    Ok(path)
}
