//! Exhaustive grid search over the 6-DV bounds with a checkpoint that can be
//! resumed after an interruption.
//!
//!     cargo run --release --example grid_search -- [levels per variable] [stop after]
//!
//! With a `stop after` count the run halts early and leaves a checkpoint in the
//! temp directory; running again with the same levels resumes from it.

use linkage_opt::grid::{grid_cardinality, run_grid, GridOptions, GridSpec};
use linkage_opt::problem::{DesignBounds, DesignVector, DvMode, ExoProblem};

fn main() -> linkage_opt::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let levels = args.first().copied().unwrap_or(5).max(2);
    let bounds = DesignBounds::six_dv();
    let steps = (0..bounds.dim())
        .map(|i| bounds.width(i) / (levels - 1) as f64)
        .collect();
    let spec = GridSpec::new(bounds, steps)?;

    let full = GridSpec::uniform_step(DesignBounds::six_dv(), 1.0)?;
    println!("step-1 grid would visit {} designs", grid_cardinality(&full));
    println!("this grid visits {} designs", grid_cardinality(&spec));

    let checkpoint = std::env::temp_dir().join(format!("linkage_grid_{levels}.json"));
    let opts = GridOptions {
        checkpoint: Some(checkpoint.clone()),
        resume: checkpoint.exists().then(|| checkpoint.clone()),
        stop_after: args.get(1).copied(),
        ..GridOptions::default()
    };
    let problem = ExoProblem::bundled(DvMode::Six);
    let result = run_grid(&spec, &problem, &opts)?;

    println!("visited {} ({:.2} s)", result.visited, result.wall_time_secs);
    if !result.complete {
        println!("interrupted; checkpoint at {}", checkpoint.display());
        return Ok(());
    }
    std::fs::remove_file(&checkpoint).ok();
    println!("best design   {}", DesignVector::new(result.best.genes)?);
    println!("fitness       {:?}", result.best.fitness);
    Ok(())
}
