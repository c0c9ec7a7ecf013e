//! Solves the bundled linkage over a full flexion sweep and prints the
//! state and joint torques at each step.
//!
//!     cargo run --example flexion_sweep -- [steps] [BC CD DE EF FG GH [BK CI EJ]]

use linkage_opt::linkage::{LinkageTopology, Mechanism, SolverOptions};
use linkage_opt::problem::DesignVector;

fn main() -> linkage_opt::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let steps = args.first().map_or(46, |&s| s as usize);
    let topo = LinkageTopology::bundled();
    let design = if args.len() > 1 {
        DesignVector::new(args[1..].to_vec())?
    } else {
        DesignVector::new(topo.defaults().to_vec())?
    };
    let mech = Mechanism::new(&topo, &design)?;
    let sweep = mech.flexion_sweep(steps, &SolverOptions::default())?;
    println!("design: {design}");
    println!(
        "{:>6} {:>6} {:>8} {:>8} {:>8} {:>9} {:>9} {:>7} {:>4}",
        "q_MCP", "q_PIP", "l_OA", "c1", "c2", "tau_MCP", "tau_PIP", "ratio", "it"
    );
    for s in &sweep.steps {
        println!(
            "{:>6.1} {:>6.1} {:>8.3} {:>8.3} {:>8.3} {:>9.4} {:>9.4} {:>7.3} {:>4}",
            s.pose.q_mcp,
            s.pose.q_pip,
            s.state.l_oa,
            s.state.c1,
            s.state.c2,
            s.torques.tau_mcp,
            s.torques.tau_pip,
            s.torques.ratio(),
            s.iterations
        );
    }
    if let Some(f) = &sweep.failure {
        println!("sweep stopped at step {} ({:?}): {}", f.step, f.pose, f.cause);
    }
    Ok(())
}
