//! Loads the bundled model file, lengthens the proximal phalanx and moves
//! the actuator ground pin, then compares the reference design on both
//! linkages.
//!
//!     cargo run --example custom_model

use std::sync::Arc;

use linkage_opt::linkage::LinkageTopology;
use linkage_opt::problem::{DesignVector, DvMode, ExoProblem, ProblemConfig};

const MODEL: &str = include_str!("../models/uhex.toml");

fn main() -> linkage_opt::Result<()> {
    let mut text = String::new();
    for line in MODEL.lines() {
        if line.starts_with("proximal = ") {
            text.push_str("proximal = 52.0\n");
        } else if line.starts_with("O = ") {
            text.push_str("O = [-61.0, 12.0]\n");
        } else {
            text.push_str(line);
            text.push('\n');
        }
    }
    let custom = LinkageTopology::from_toml_str(&text)?;
    let design = DesignVector::new(vec![58.0, 10.0, 15.0, 51.0, 56.0, 100.0])?;

    for (name, topo) in [("bundled", LinkageTopology::bundled()), ("custom", custom)] {
        println!("{name} model {}", &topo.source_hash()[..12]);
        let config = ProblemConfig::default().with_bounds(DvMode::Six);
        let problem = ExoProblem::new(Arc::new(topo), config)?;
        let out = problem.evaluate_design(&design)?;
        println!("  objective {:?}  feasible {}  violation {:.4}", out.objective, out.feasible, out.constraints.total_violation);
        let sweep = problem.sweep(&design)?;
        let (lo, hi) = sweep
            .steps
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), s| (lo.min(s.state.c1), hi.max(s.state.c1)));
        println!("  c1 travels {lo:.2}..{hi:.2} mm over {} steps", sweep.steps.len());
    }
    Ok(())
}
