//! Planar closed-chain linkage model: topology, loop closure, inverse
//! kinematics and static force transmission.

pub mod residual;
pub mod solver;
pub mod state;
pub mod statics;
pub mod sweep;
pub mod topology;

pub use residual::{assemble_residuals, inf_norm, Mechanism};
pub use solver::{solve_configuration, Solution, SolverOptions};
pub use state::{FingerPose, StateVector, TorqueResult};
pub use statics::{actuation_jacobian, compute_joint_torques};
pub use sweep::{flexion_sweep, sweep_poses, SweepFailure, SweepRecord, SweepStep};
pub use topology::LinkageTopology;
