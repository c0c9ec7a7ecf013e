use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;

use linkage_opt::bench::experiment::{build_pool, run_single, RunRecord, RECORD_VERSION};
use linkage_opt::bench::{report_from_dir, run_experiment, ExperimentConfig};
use linkage_opt::evo::Algorithm;
use linkage_opt::grid::run_grid;
use linkage_opt::linkage::LinkageTopology;
use linkage_opt::problem::{DesignVector, ExoProblem, ObjectiveMode, Problem, ProblemConfig};
use linkage_opt::Error;

/// Linkage design optimization: evaluate designs, run optimizers and
/// experiments, and rebuild reports.
#[derive(Parser)]
#[command(name = "linkage-opt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one design on a model file ("bundled" for the built-in model).
    Evaluate {
        model: String,
        /// Six or nine link lengths in mm: BC CD DE EF FG GH [BK CI EJ].
        #[arg(required = true, num_args = 6..=9)]
        design: Vec<f64>,
        #[arg(long, value_parser = parse_mode, default_value = "magnitude")]
        objective: ObjectiveMode,
        #[arg(long, default_value_t = 46)]
        steps: usize,
    },
    /// Run one seeded GA or BB-BC optimization from an experiment config.
    Optimize {
        #[arg(long)]
        algo: Algorithm,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
    },
    /// Run the brute-force grid of an experiment config.
    Grid {
        #[arg(long)]
        config: PathBuf,
        /// Resume from this checkpoint file.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Run even if the grid exceeds the safety cap.
        #[arg(long)]
        force: bool,
        /// Checkpoint file to write (default: <output_dir>/grid_checkpoint.json).
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Run every configured algorithm and seed and write the report.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// Rebuild the report of an experiment directory from its run records.
    Report {
        #[arg(long)]
        from: PathBuf,
    },
}

fn parse_mode(s: &str) -> Result<ObjectiveMode, String> {
    match s {
        "magnitude" => Ok(ObjectiveMode::Magnitude),
        "literal" => Ok(ObjectiveMode::Literal),
        _ => Err(format!("unknown objective mode {s:?}")),
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<(), Error> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Error::Serde(e.to_string()))?;
    println!("{s}");
    Ok(())
}

/// An unreadable config file is a configuration error, not a runtime one.
fn load_config(path: &std::path::Path) -> Result<ExperimentConfig, Error> {
    ExperimentConfig::from_path(path).map_err(|e| match e {
        Error::Io { path, source } => Error::Config(format!("cannot read {}: {source}", path.display())),
        e => e,
    })
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Evaluate {
            model,
            design,
            objective,
            steps,
        } => {
            let topo = if model == "bundled" {
                LinkageTopology::bundled()
            } else {
                LinkageTopology::from_path(&model)?
            };
            let design = DesignVector::new(design)?;
            let config = ProblemConfig {
                bounds: design.mode(),
                objective,
                sweep_steps: steps,
                ..ProblemConfig::default()
            };
            let problem = ExoProblem::new(Arc::new(topo), config)?;
            print_json(&problem.evaluate_design(&design)?)
        }
        Command::Optimize { algo, config, seed } => {
            if algo == Algorithm::Bf {
                return Err(Error::Config("use the grid subcommand for brute force".into()));
            }
            let cfg = load_config(&config)?;
            let problem = cfg.build_problem()?;
            let pool = build_pool(cfg.effective_workers()?)?;
            let (result, secs) = pool.install(|| run_single(&cfg, &problem, algo, seed))?;
            eprintln!("{algo} seed {seed}: {secs:.2} s");
            print_json(&RunRecord {
                format_version: RECORD_VERSION,
                config_hash: cfg.results_hash(),
                algorithm: algo,
                seed,
                error: None,
                result: Some(result),
            })
        }
        Command::Grid {
            config,
            resume,
            force,
            checkpoint,
        } => {
            let cfg = load_config(&config)?;
            let bf = cfg.bf.clone().unwrap_or_default();
            let problem = cfg.build_problem()?;
            let spec = bf.spec(problem.bounds())?;
            let ckpt = checkpoint.unwrap_or_else(|| cfg.output_dir.join("grid_checkpoint.json"));
            if let Some(dir) = ckpt.parent() {
                std::fs::create_dir_all(dir).map_err(|e| Error::Io {
                    path: dir.to_path_buf(),
                    source: e,
                })?;
            }
            let mut opts = bf.options();
            opts.force |= force;
            opts.resume = resume;
            opts.checkpoint = Some(ckpt);
            let pool = build_pool(cfg.effective_workers()?)?;
            let result = pool.install(|| run_grid(&spec, &problem, &opts))?;
            eprintln!("visited {} of {} points in {:.2} s", result.visited, result.cardinality, result.wall_time_secs);
            print_json(&result)
        }
        Command::Experiment { config } => {
            let cfg = load_config(&config)?;
            let report = run_experiment(&cfg)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            eprintln!("report written to {}", cfg.output_dir.display());
            print_json(&report.algorithms)
        }
        Command::Report { from } => {
            let report = report_from_dir(&from)?;
            print_json(&report)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_)
        | Error::InvalidParameter(_)
        | Error::InvalidModel(_)
        | Error::ModelMismatch(_)
        | Error::OutOfBounds { .. }
        | Error::GridTooLarge { .. } => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
