use crate::error::{Result, SolveError};
use crate::linkage::residual::Mechanism;
use crate::linkage::solver::{condition_estimate, SolverOptions};
use crate::linkage::state::{FingerPose, StateVector, TorqueResult};
use crate::linkage::topology::LinkageTopology;
use crate::problem::design::DesignVector;

impl Mechanism<'_> {
    /// `[∂l_OA/∂q_MCP, ∂l_OA/∂q_PIP]` (mm per radian) at a converged state,
    /// from the implicit function theorem on the loop-closure system.
    pub fn actuation_jacobian(
        &self,
        pose: FingerPose,
        state: &StateVector,
        max_condition: f64,
    ) -> Result<[f64; 2], SolveError> {
        let (_, js, jq) = self.linearize(pose, state);
        let cond = condition_estimate(&js);
        if cond > max_condition {
            return Err(SolveError::SingularJacobian { condition: cond });
        }
        let lu = js.lu();
        let ds = lu
            .solve(&(-jq))
            .ok_or(SolveError::SingularJacobian {
                condition: f64::INFINITY,
            })?;
        let out = [ds[(0, 0)], ds[(0, 1)]];
        if out.iter().all(|v| v.is_finite()) {
            Ok(out)
        } else {
            Err(SolveError::SingularJacobian {
                condition: f64::INFINITY,
            })
        }
    }

    /// Joint torques for an actuator force `force` (N) by virtual work:
    /// `F·δl = τ_MCP·δq_MCP + τ_PIP·δq_PIP`.
    pub fn joint_torques(
        &self,
        pose: FingerPose,
        state: &StateVector,
        force: f64,
        max_condition: f64,
    ) -> Result<TorqueResult, SolveError> {
        let [d_mcp, d_pip] = self.actuation_jacobian(pose, state, max_condition)?;
        Ok(TorqueResult {
            tau_mcp: force * d_mcp,
            tau_pip: force * d_pip,
        })
    }
}

pub fn actuation_jacobian(
    topology: &LinkageTopology,
    design: &DesignVector,
    pose: FingerPose,
    state: &StateVector,
) -> Result<[f64; 2]> {
    let mech = Mechanism::new(topology, design)?;
    Ok(mech.actuation_jacobian(pose, state, SolverOptions::default().max_condition)?)
}

/// Torques for a unit actuator force.
pub fn compute_joint_torques(
    topology: &LinkageTopology,
    design: &DesignVector,
    pose: FingerPose,
    state: &StateVector,
) -> Result<TorqueResult> {
    let mech = Mechanism::new(topology, design)?;
    Ok(mech.joint_torques(pose, state, 1.0, SolverOptions::default().max_condition)?)
}
