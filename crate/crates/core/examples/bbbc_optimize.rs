//! Runs Big Bang-Big Crunch on the bundled problem and compares the two
//! crunch rules.
//!
//!     cargo run --release --example bbbc_optimize -- [seed] [6dv|9dv]

use linkage_opt::evo::{run_bbbc, BbbcParams, CrunchMode};
use linkage_opt::problem::{DesignVector, DvMode, ExoProblem};

fn main() -> linkage_opt::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seed = args.first().map_or(1, |s| s.parse().expect("seed"));
    let mode = match args.get(1).map(String::as_str) {
        Some("9dv") => DvMode::Nine,
        _ => DvMode::Six,
    };
    let problem = ExoProblem::bundled(mode);

    for crunch_mode in [CrunchMode::BestFit, CrunchMode::FitnessWeighted] {
        let params = BbbcParams {
            crunch_mode,
            ..BbbcParams::default()
        };
        let run = run_bbbc(&params, &problem, seed)?;
        let design = DesignVector::new(run.best.genes.clone())?;
        println!("{crunch_mode:?}");
        println!("  best objective  {:?}", run.best_objective());
        println!("  best design     {design}");
        println!("  converged at    generation {}", run.convergence_generation);
        println!("  evaluations     {}", run.total_evaluations());
    }
    Ok(())
}
