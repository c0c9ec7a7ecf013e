//! Aggregation of raw run records and report emission.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bench::config::{AnyProblem, ExperimentConfig, ReportFormat};
use crate::bench::experiment::{write_atomic, RunRecord, RunTiming};
use crate::bench::stats::{one_way_anova, summarize, two_sample_t, Anova, Summary, TTest};
use crate::error::{Error, Result};
use crate::evo::{Algorithm, Individual};
use crate::problem::Problem;

pub const REPORT_VERSION: u32 = 1;

/// Columns of `runs.csv` before the per-variable gene columns.
pub const RUNS_CSV_PREFIX: [&str; 9] = [
    "algorithm",
    "seed",
    "status",
    "objective",
    "violation",
    "run_time_s",
    "convergence_generation",
    "evaluations",
    "error",
];

pub const TRACES_CSV_HEADER: [&str; 5] = ["algorithm", "seed", "generation", "best_objective", "evaluations"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub runs: usize,
    pub failed: usize,
    /// Successful runs that ended without any feasible design.
    pub infeasible: usize,
    pub optimality: Option<Summary>,
    pub run_time: Option<Summary>,
    pub convergence: Option<Summary>,
    pub evaluations: Option<Summary>,
    pub best: Option<Individual>,
    pub best_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseTest {
    pub a: Algorithm,
    pub b: Algorithm,
    pub pooled: TTest,
    pub welch: TTest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statistics {
    /// Over the final best objectives of every algorithm with at least two
    /// feasible runs.
    pub anova: Option<Anova>,
    pub t_tests: Vec<PairwiseTest>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seeds: Vec<u64>,
    pub code_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_hash: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective_mode: Option<String>,
    pub variables: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub format_version: u32,
    pub name: String,
    pub algorithms: Vec<AlgorithmSummary>,
    pub best_overall: Option<(Algorithm, u64, Individual)>,
    pub statistics: Statistics,
    pub provenance: Provenance,
    /// Present when only one repetition was run: spreads are reported as 0.
    pub single_repetition: bool,
    pub failed_fraction: f64,
    pub warnings: Vec<String>,
}

const FAILED_FLAG: f64 = 0.1;

/// Builds the report from raw records alone (plus timing sidecars).
pub fn aggregate(
    config: &ExperimentConfig,
    problem: &AnyProblem,
    records: &[RunRecord],
    timings: &[RunTiming],
) -> Result<ExperimentReport> {
    let time_of: BTreeMap<(Algorithm, u64), f64> =
        timings.iter().map(|t| ((t.algorithm, t.seed), t.wall_time_secs)).collect();
    let hash = config.results_hash();
    let mut warnings = Vec::new();
    if let Some(r) = records.iter().find(|r| r.config_hash != hash) {
        warnings.push(format!(
            "record {}_seed{} was produced by a different configuration",
            r.algorithm, r.seed
        ));
    }

    let mut by_algo: BTreeMap<Algorithm, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        by_algo.entry(r.algorithm).or_default().push(r);
    }
    let mut summaries = Vec::new();
    let mut objectives: Vec<(Algorithm, Vec<f64>)> = Vec::new();
    let mut best_overall: Option<(Algorithm, u64, Individual)> = None;
    for (&algorithm, runs) in &mut by_algo {
        runs.sort_by_key(|r| r.seed);
        let ok: Vec<_> = runs.iter().filter_map(|r| r.result.as_ref().map(|res| (r.seed, res))).collect();
        let failed = runs.len() - ok.len();
        for r in runs.iter().filter(|r| r.error.is_some()) {
            warnings.push(format!(
                "{algorithm} seed {} failed and is excluded: {}",
                r.seed,
                r.error.as_deref().unwrap_or("")
            ));
        }
        let obj: Vec<f64> = ok.iter().filter_map(|(_, r)| r.best_objective).collect();
        let times: Vec<f64> = ok.iter().filter_map(|(s, _)| time_of.get(&(algorithm, *s)).copied()).collect();
        let conv: Vec<f64> = ok.iter().filter_map(|(_, r)| r.convergence_generation.map(|g| g as f64)).collect();
        let evals: Vec<f64> = ok.iter().map(|(_, r)| r.total_evaluations as f64).collect();
        let best = ok
            .iter()
            .min_by(|a, b| crate::evo::deb_compare(&a.1.best, &b.1.best).then(a.0.cmp(&b.0)))
            .map(|(s, r)| (*s, r.best.clone()));
        if let Some((s, ind)) = &best {
            if best_overall
                .as_ref()
                .is_none_or(|(_, _, b)| crate::evo::deb_compare(ind, b).is_lt())
            {
                best_overall = Some((algorithm, *s, ind.clone()));
            }
        }
        summaries.push(AlgorithmSummary {
            algorithm,
            runs: runs.len(),
            failed,
            infeasible: ok.len() - obj.len(),
            optimality: summarize(&obj),
            run_time: summarize(&times),
            convergence: summarize(&conv),
            evaluations: summarize(&evals),
            best_seed: best.as_ref().map(|b| b.0),
            best: best.map(|b| b.1),
        });
        objectives.push((algorithm, obj));
    }

    let groups: Vec<&(Algorithm, Vec<f64>)> = objectives.iter().filter(|(_, v)| v.len() >= 2).collect();
    let anova = if groups.len() >= 2 {
        let g: Vec<&[f64]> = groups.iter().map(|(_, v)| v.as_slice()).collect();
        Some(one_way_anova(&g)?)
    } else {
        None
    };
    let mut t_tests = Vec::new();
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            let (a, va) = groups[i];
            let (b, vb) = groups[j];
            t_tests.push(PairwiseTest {
                a: *a,
                b: *b,
                pooled: two_sample_t(va, vb, false)?,
                welch: two_sample_t(va, vb, true)?,
            });
        }
    }

    let failed_total: usize = summaries.iter().map(|s| s.failed).sum();
    let failed_fraction = if records.is_empty() { 0.0 } else { failed_total as f64 / records.len() as f64 };
    if failed_fraction > FAILED_FLAG {
        warnings.push(format!("{:.0}% of runs failed", 100.0 * failed_fraction));
    }
    let single_repetition = config.repetitions == 1;
    if single_repetition {
        warnings.push("single repetition: standard deviations are 0 by convention".into());
    }
    let exo = problem.as_exo();
    Ok(ExperimentReport {
        format_version: REPORT_VERSION,
        name: config.name.clone(),
        algorithms: summaries,
        best_overall,
        statistics: Statistics { anova, t_tests },
        provenance: Provenance {
            config_hash: hash,
            seeds: config.seed_list(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            model_hash: exo.map(|p| p.topology().source_hash().to_string()),
            objective_mode: exo.map(|p| p.config().objective.to_string()),
            variables: problem.bounds().names.clone(),
        },
        single_repetition,
        failed_fraction,
        warnings,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn csv_bytes(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let ser = |e: csv::Error| Error::Serde(e.to_string());
    w.write_record(&header).map_err(ser)?;
    for r in rows {
        w.write_record(&r).map_err(ser)?;
    }
    w.into_inner().map_err(|e| Error::Serde(e.to_string()))
}

/// Writes the requested report files into `out`. All files are rendered
/// in memory first; nothing is written if the directory is unusable.
pub fn emit_report(
    report: &ExperimentReport,
    records: &[RunRecord],
    timings: &[RunTiming],
    formats: &[ReportFormat],
    out: &Path,
) -> Result<()> {
    if formats.is_empty() {
        return Err(Error::Config("no report formats requested".into()));
    }
    let time_of: BTreeMap<(Algorithm, u64), f64> =
        timings.iter().map(|t| ((t.algorithm, t.seed), t.wall_time_secs)).collect();
    let mut sorted: Vec<&RunRecord> = records.iter().collect();
    sorted.sort_by_key(|r| (r.algorithm, r.seed));

    let mut files: Vec<(&str, Vec<u8>)> = Vec::new();
    if formats.contains(&ReportFormat::Csv) {
        let vars = &report.provenance.variables;
        let mut header: Vec<String> = RUNS_CSV_PREFIX.iter().map(|s| s.to_string()).collect();
        header.extend(vars.iter().cloned());
        let mut rows = Vec::new();
        let mut trace_rows = Vec::new();
        for r in &sorted {
            let mut row = vec![
                r.algorithm.to_string(),
                r.seed.to_string(),
                if r.error.is_some() { "failed".into() } else { "ok".into() },
            ];
            match &r.result {
                Some(res) => {
                    row.push(fmt_opt(res.best_objective));
                    row.push(res.best.fitness.violation.to_string());
                    row.push(fmt_opt(time_of.get(&(r.algorithm, r.seed)).copied()));
                    row.push(res.convergence_generation.map(|g| g.to_string()).unwrap_or_default());
                    row.push(res.total_evaluations.to_string());
                    row.push(String::new());
                    row.extend(res.best.genes.iter().map(|g| g.to_string()));
                    for (k, v) in res.trace.iter().enumerate() {
                        trace_rows.push(vec![
                            r.algorithm.to_string(),
                            r.seed.to_string(),
                            (k + 1).to_string(),
                            fmt_opt(*v),
                            res.evaluations.get(k).map(|e| e.to_string()).unwrap_or_default(),
                        ]);
                    }
                }
                None => {
                    row.extend(std::iter::repeat_n(String::new(), 5));
                    row.push(r.error.clone().unwrap_or_default());
                    row.extend(std::iter::repeat_n(String::new(), vars.len()));
                }
            }
            rows.push(row);
        }
        files.push(("runs.csv", csv_bytes(header, rows)?));
        let th = TRACES_CSV_HEADER.iter().map(|s| s.to_string()).collect();
        files.push(("traces.csv", csv_bytes(th, trace_rows)?));
    }
    if formats.contains(&ReportFormat::Json) {
        let mut s = serde_json::to_vec_pretty(report).map_err(|e| Error::Serde(e.to_string()))?;
        s.push(b'\n');
        files.push(("summary.json", s));
    }
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    for (name, bytes) in files {
        write_atomic(&out.join(name), &bytes)?;
    }
    Ok(())
}
