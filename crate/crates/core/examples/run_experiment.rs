//! Runs an experiment config and prints the per-algorithm summary table.
//!
//!     cargo run --release --example run_experiment -- [config.toml]
//!
//! Defaults to `configs/sphere_demo.toml`. Raw run records, `runs.csv`,
//! `traces.csv` and `summary.json` are written under the config's
//! `output_dir`.

use linkage_opt::bench::{run_experiment, ExperimentConfig};

fn main() -> linkage_opt::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/sphere_demo.toml").into());
    let cfg = ExperimentConfig::from_path(&path)?;
    let report = run_experiment(&cfg)?;

    println!("{:<6} {:>4} {:>12} {:>10} {:>12} {:>8} {:>9}", "algo", "runs", "mean", "std", "median", "conv", "time s");
    for s in &report.algorithms {
        let Some(o) = &s.optimality else {
            println!("{:<6} {:>4}  no feasible result", s.algorithm.to_string(), s.runs);
            continue;
        };
        println!(
            "{:<6} {:>4} {:>12.5} {:>10.5} {:>12.5} {:>8.1} {:>9.3}",
            s.algorithm.to_string(),
            s.runs,
            o.mean,
            o.std,
            o.median,
            s.convergence.as_ref().map_or(f64::NAN, |c| c.median),
            s.run_time.as_ref().map_or(f64::NAN, |t| t.mean),
        );
    }
    if let Some(a) = &report.statistics.anova {
        println!("ANOVA F({}, {}) = {:.4}, p = {:.4}, eta² = {:.4}", a.df_between, a.df_within, a.f, a.p, a.eta_squared);
    }
    for t in &report.statistics.t_tests {
        println!("t-test {} vs {}: t = {:.4}, p = {:.4} (Welch p = {:.4})", t.a, t.b, t.pooled.t, t.pooled.p, t.welch.p);
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    println!("written to {}", cfg.output_dir.display());
    Ok(())
}
