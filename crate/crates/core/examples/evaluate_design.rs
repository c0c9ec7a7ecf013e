//! Scores a design against the constraints and prints what limits it.
//!
//!     cargo run --example evaluate_design -- [BC CD DE EF FG GH [BK CI EJ]]

use linkage_opt::problem::{DesignVector, ExoProblem};

fn main() -> linkage_opt::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let designs = if args.is_empty() {
        vec![
            vec![58.0, 10.0, 15.0, 51.0, 56.0, 100.0, 35.0, 16.0, 37.0],
            vec![60.0, 10.0, 15.0, 51.0, 56.0, 91.37, 48.5, 10.98, 36.54],
        ]
    } else {
        vec![args]
    };
    for genes in designs {
        let design = DesignVector::new(genes)?;
        let problem = ExoProblem::bundled(design.mode());
        let out = problem.evaluate_design(&design)?;
        println!("{design}");
        match out.objective {
            Some(v) => println!("  objective {v:.4} ({})", out.objective_mode),
            None => println!("  objective unavailable"),
        }
        if let Some(t) = out.torques_at_closed {
            println!("  closed-pose torques  MCP {:.4}  PIP {:.4}", t.tau_mcp, t.tau_pip);
        }
        let c = &out.constraints;
        println!(
            "  feasible {}  violation {:.4}  (c1 excess {:.2} mm, c2 excess {:.2} mm, ratio excess {:.3})",
            out.feasible, c.total_violation, c.components.c1_excess, c.components.c2_excess, c.components.ratio_excess
        );
        if let Some(f) = &c.failure {
            println!("  failure: {f}");
        }
    }
    Ok(())
}
