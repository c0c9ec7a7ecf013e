//! Seeded repetitions of each configured algorithm, persisted run by run.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::config::{AnyProblem, ExperimentConfig};
use crate::bench::report::{aggregate, emit_report, ExperimentReport};
use crate::error::{Error, Result};
use crate::evo::{run_bbbc, run_ga, Algorithm, Individual, OptimizerRun};
use crate::grid::run_grid;
use crate::problem::Problem;

pub const RECORD_VERSION: u32 = 1;

/// Everything a run produced that is a deterministic function of the
/// configuration and seed. Wall time lives in a separate sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub format_version: u32,
    pub config_hash: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Failure cause; `result` is absent when this is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<RunResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best: Individual,
    pub best_objective: Option<f64>,
    /// Per-generation best-so-far objective (empty for grid runs).
    pub trace: Vec<Option<f64>>,
    pub evaluations: Vec<u64>,
    pub total_evaluations: u64,
    pub convergence_generation: Option<usize>,
}

impl RunResult {
    pub fn from_run(run: &OptimizerRun) -> Self {
        RunResult {
            best: run.best.clone(),
            best_objective: run.best_objective(),
            trace: run.trace.clone(),
            evaluations: run.evaluations.clone(),
            total_evaluations: run.total_evaluations(),
            convergence_generation: Some(run.convergence_generation),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTiming {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub wall_time_secs: f64,
}

pub fn runs_dir(out: &Path) -> PathBuf {
    out.join("runs")
}

pub fn record_path(out: &Path, algorithm: Algorithm, seed: u64) -> PathBuf {
    runs_dir(out).join(format!("{algorithm}_seed{seed}.json"))
}

fn timing_path(out: &Path, algorithm: Algorithm, seed: u64) -> PathBuf {
    runs_dir(out).join(format!("{algorithm}_seed{seed}.time.json"))
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v).map_err(|e| Error::Serde(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

/// Runs one (algorithm, seed) pair on `problem`. Grid runs ignore the seed.
pub fn run_single(
    config: &ExperimentConfig,
    problem: &AnyProblem,
    algorithm: Algorithm,
    seed: u64,
) -> Result<(RunResult, f64)> {
    match algorithm {
        Algorithm::Ga => {
            let p = config.ga.as_ref().ok_or_else(|| Error::Config("no [ga] block".into()))?;
            let run = run_ga(p, problem, seed)?;
            Ok((RunResult::from_run(&run), run.wall_time_secs))
        }
        Algorithm::Bbbc => {
            let p = config.bbbc.as_ref().ok_or_else(|| Error::Config("no [bbbc] block".into()))?;
            let run = run_bbbc(p, problem, seed)?;
            Ok((RunResult::from_run(&run), run.wall_time_secs))
        }
        Algorithm::Bf => {
            let p = config.bf.as_ref().ok_or_else(|| Error::Config("no [bf] block".into()))?;
            let g = run_grid(&p.spec(problem.bounds())?, problem, &p.options())?;
            let result = RunResult {
                best_objective: g.best.fitness.is_feasible().then_some(g.best.fitness.objective),
                best: g.best,
                trace: Vec::new(),
                evaluations: vec![g.visited],
                total_evaluations: g.visited,
                convergence_generation: None,
            };
            Ok((result, g.wall_time_secs))
        }
    }
}

/// The (algorithm, seed) pairs of an experiment. The grid is deterministic
/// and runs once, under the first seed.
pub fn planned_runs(config: &ExperimentConfig) -> Vec<(Algorithm, u64)> {
    let seeds = config.seed_list();
    let mut v = Vec::new();
    for a in config.algorithms() {
        match a {
            Algorithm::Bf => v.push((a, seeds[0])),
            _ => v.extend(seeds.iter().map(|&s| (a, s))),
        }
    }
    v
}

pub fn build_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))
}

/// Runs every planned pair, writing each record as it finishes, then
/// aggregates and emits the report. Invalid configurations fail before any
/// run starts; failed runs are recorded with their cause.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let problem = config.build_problem()?;
    let workers = config.effective_workers()?;
    let out = &config.output_dir;
    fs::create_dir_all(runs_dir(out)).map_err(|e| Error::io(runs_dir(out), e))?;
    let resolved = toml::to_string(config).map_err(|e| Error::Serde(e.to_string()))?;
    write_atomic(&out.join("experiment.toml"), resolved.as_bytes())?;

    let hash = config.results_hash();
    let pool = build_pool(workers)?;
    let written: Vec<Result<(RunRecord, RunTiming)>> = pool.install(|| {
        planned_runs(config)
            .into_par_iter()
            .map(|(algorithm, seed)| {
                let outcome = catch_unwind(AssertUnwindSafe(|| run_single(config, &problem, algorithm, seed)))
                    .unwrap_or_else(|p| {
                        let msg = p
                            .downcast_ref::<&str>()
                            .map(|s| s.to_string())
                            .or_else(|| p.downcast_ref::<String>().cloned())
                            .unwrap_or_else(|| "panic".into());
                        Err(Error::InvalidParameter(format!("run panicked: {msg}")))
                    });
                let (result, error, secs) = match outcome {
                    Ok((r, t)) => (Some(r), None, t),
                    Err(e) => (None, Some(e.to_string()), 0.0),
                };
                let record = RunRecord {
                    format_version: RECORD_VERSION,
                    config_hash: hash.clone(),
                    algorithm,
                    seed,
                    error,
                    result,
                };
                let timing = RunTiming {
                    algorithm,
                    seed,
                    wall_time_secs: secs,
                };
                write_atomic(&record_path(out, algorithm, seed), &to_json(&record)?)?;
                write_atomic(&timing_path(out, algorithm, seed), &to_json(&timing)?)?;
                Ok((record, timing))
            })
            .collect()
    });
    let mut records = Vec::new();
    let mut timings = Vec::new();
    for w in written {
        let (r, t) = w?;
        records.push(r);
        timings.push(t);
    }
    let report = aggregate(config, &problem, &records, &timings)?;
    emit_report(&report, &records, &timings, &config.formats, out)?;
    Ok(report)
}

/// Reads the persisted records and timings of a finished experiment.
pub fn load_runs(out: &Path) -> Result<(Vec<RunRecord>, Vec<RunTiming>)> {
    let dir = runs_dir(out);
    let mut names: Vec<PathBuf> = fs::read_dir(&dir)
        .map_err(|e| Error::io(&dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    names.sort();
    let mut records = Vec::new();
    let mut timings = Vec::new();
    for p in names {
        let text = fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
        let parse_err = |e: serde_json::Error| Error::Serde(format!("{}: {e}", p.display()));
        if p.to_string_lossy().ends_with(".time.json") {
            timings.push(serde_json::from_str(&text).map_err(parse_err)?);
        } else {
            records.push(serde_json::from_str(&text).map_err(parse_err)?);
        }
    }
    Ok((records, timings))
}

/// Rebuilds the report of an experiment directory from its raw files.
pub fn report_from_dir(out: &Path) -> Result<ExperimentReport> {
    let cfg_path = out.join("experiment.toml");
    let text = fs::read_to_string(&cfg_path).map_err(|e| Error::io(&cfg_path, e))?;
    let mut config = ExperimentConfig::from_toml_str(&text)?;
    config.output_dir = out.to_path_buf();
    let problem = config.build_problem()?;
    let (records, timings) = load_runs(out)?;
    let report = aggregate(&config, &problem, &records, &timings)?;
    emit_report(&report, &records, &timings, &config.formats, out)?;
    Ok(report)
}
