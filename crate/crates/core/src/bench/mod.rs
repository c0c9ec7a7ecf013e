//! Experiment harness: configuration, seeded runs, statistics and reports.

pub mod config;
pub mod experiment;
pub mod report;
pub mod stats;

pub use config::{AnyProblem, BfParams, ExperimentConfig, ReportFormat, SphereConfig, WORKERS_ENV};
pub use experiment::{load_runs, report_from_dir, run_experiment, run_single, RunRecord, RunResult, RunTiming};
pub use report::{aggregate, emit_report, ExperimentReport};
pub use stats::{one_way_anova, two_sample_t, Anova, Summary, TTest};
