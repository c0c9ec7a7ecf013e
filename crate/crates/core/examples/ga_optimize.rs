//! Runs the real-coded GA on the bundled problem and prints the best design.
//!
//!     cargo run --release --example ga_optimize -- [seed] [population] [generations] [6dv|9dv]

use linkage_opt::evo::{run_ga, GaParams};
use linkage_opt::problem::{DesignVector, DvMode, ExoProblem};

fn main() -> linkage_opt::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seed = args.first().map_or(1, |s| s.parse().expect("seed"));
    let mut params = GaParams::default();
    if let Some(n) = args.get(1) {
        params.population_size = n.parse().expect("population");
    }
    if let Some(g) = args.get(2) {
        params.generations = g.parse().expect("generations");
    }
    let mode = match args.get(3).map(String::as_str) {
        Some("9dv") => DvMode::Nine,
        _ => DvMode::Six,
    };
    let problem = ExoProblem::bundled(mode);
    let start = std::time::Instant::now();
    let run = run_ga(&params, &problem, seed)?;
    let secs = start.elapsed().as_secs_f64();

    for (g, best) in run.trace.iter().enumerate() {
        match best {
            Some(v) => println!("gen {:>3}  best {v:.4}", g + 1),
            None => println!("gen {:>3}  no feasible design yet", g + 1),
        }
    }
    let design = DesignVector::new(run.best.genes.clone())?;
    println!("best design   {design}");
    println!("fitness       {:?}", run.best.fitness);
    println!("converged at  generation {}", run.convergence_generation);
    println!(
        "evaluations   {} in {secs:.2} s ({:.0} / s)",
        run.total_evaluations(),
        run.total_evaluations() as f64 / secs
    );
    Ok(())
}
