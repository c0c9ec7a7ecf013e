//! Compares the implicit-function-theorem torques with central finite
//! differences of the actuator length, re-solving the linkage at each
//! perturbed pose.
//!
//!     cargo run --example torque_check

use linkage_opt::linkage::{FingerPose, LinkageTopology, Mechanism, SolverOptions};
use linkage_opt::problem::DesignVector;

fn main() -> linkage_opt::Result<()> {
    let topo = LinkageTopology::bundled();
    let design = DesignVector::new(vec![58.0, 10.0, 15.0, 51.0, 56.0, 100.0])?;
    let mech = Mechanism::new(&topo, &design)?;
    let opts = SolverOptions::default();
    let sweep = mech.flexion_sweep(46, &opts)?;
    let h = 1e-6_f64;
    let hd = h.to_degrees();

    println!("{:>6} {:>6} {:>12} {:>12} {:>10} {:>10}", "q_MCP", "q_PIP", "tau_MCP", "tau_PIP", "err MCP", "err PIP");
    for s in sweep.steps.iter().step_by(5) {
        let l_at = |m: f64, p: f64| -> linkage_opt::Result<f64> {
            let pose = FingerPose { q_mcp: m, q_pip: p };
            Ok(mech.solve(pose, &s.state, &opts)?.state.l_oa)
        };
        let (m, p) = (s.pose.q_mcp, s.pose.q_pip);
        let fd_m = (l_at(m + hd, p)? - l_at(m - hd, p)?) / (2.0 * h);
        let fd_p = (l_at(m, p + hd)? - l_at(m, p - hd)?) / (2.0 * h);
        let t = s.torques;
        println!(
            "{m:>6.1} {p:>6.1} {:>12.6} {:>12.6} {:>10.1e} {:>10.1e}",
            t.tau_mcp,
            t.tau_pip,
            (t.tau_mcp - fd_m).abs() / t.tau_mcp.abs().max(1.0),
            (t.tau_pip - fd_p).abs() / t.tau_pip.abs().max(1.0)
        );
    }
    Ok(())
}
