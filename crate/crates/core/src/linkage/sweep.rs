use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SolveError};
use crate::linkage::residual::Mechanism;
use crate::linkage::solver::SolverOptions;
use crate::linkage::state::{FingerPose, StateVector, TorqueResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepStep {
    pub pose: FingerPose,
    pub state: StateVector,
    pub torques: TorqueResult,
    pub iterations: usize,
    pub c1_in_range: bool,
    pub c2_in_range: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub step: usize,
    pub pose: FingerPose,
    pub cause: SolveError,
}

/// Poses from fully open to fully closed with their solved states. A sweep
/// stops at the first solver failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub steps: Vec<SweepStep>,
    pub failure: Option<SweepFailure>,
}

impl SweepRecord {
    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }

    pub fn last(&self) -> Option<&SweepStep> {
        self.steps.last()
    }
}

/// Evenly spaced poses from (0, 0) to (80, 90) degrees.
pub fn sweep_poses(steps: usize) -> Result<Vec<FingerPose>> {
    if steps < 2 {
        return Err(Error::InvalidParameter(format!("sweep needs at least 2 steps, got {steps}")));
    }
    Ok((0..steps)
        .map(|k| {
            let t = k as f64 / (steps - 1) as f64;
            if k == steps - 1 {
                FingerPose::CLOSED
            } else {
                FingerPose::lerp(FingerPose::OPEN, FingerPose::CLOSED, t)
            }
        })
        .collect())
}

impl Mechanism<'_> {
    /// Runs the flexion sweep. The first pose starts from the neutral guess
    /// (walked to this design), later poses warm-start from the previous
    /// solution.
    pub fn flexion_sweep(&self, steps: usize, opts: &SolverOptions) -> Result<SweepRecord> {
        self.flexion_sweep_from(steps, opts, None)
    }

    /// As [`Mechanism::flexion_sweep`] with an explicit starting guess for the
    /// open pose instead of the homotopy from the model defaults.
    pub fn flexion_sweep_from(
        &self,
        steps: usize,
        opts: &SolverOptions,
        open_guess: Option<StateVector>,
    ) -> Result<SweepRecord> {
        let poses = sweep_poses(steps)?;
        let topo = self.topology;
        let mut out = SweepRecord {
            steps: Vec::with_capacity(steps),
            failure: None,
        };
        let mut guess = open_guess;
        for (k, &pose) in poses.iter().enumerate() {
            let solved = match guess {
                Some(g) => self.solve(pose, &g, opts),
                None => self.solve_open_pose(opts),
            };
            let step = solved.and_then(|sol| {
                self.joint_torques(pose, &sol.state, 1.0, opts.max_condition)
                    .map(|torques| SweepStep {
                        pose,
                        state: sol.state,
                        torques,
                        iterations: sol.iterations,
                        c1_in_range: topo.slider_c1.excess(sol.state.c1) == 0.0,
                        c2_in_range: topo.slider_c2.excess(sol.state.c2) == 0.0,
                    })
            });
            match step {
                Ok(s) => {
                    guess = Some(s.state);
                    out.steps.push(s);
                }
                Err(cause) => {
                    out.failure = Some(SweepFailure { step: k, pose, cause });
                    break;
                }
            }
        }
        Ok(out)
    }
}

pub fn flexion_sweep(
    topology: &crate::linkage::topology::LinkageTopology,
    design: &crate::problem::design::DesignVector,
    steps: usize,
) -> Result<SweepRecord> {
    Mechanism::new(topology, design)?.flexion_sweep(steps, &SolverOptions::default())
}
