//! Vector-loop residual assembly and its analytic derivatives.

use std::collections::BTreeMap;

use nalgebra::{SMatrix, SVector};

use crate::error::Result;
use crate::linkage::state::{FingerPose, StateVector, STATE_DIM};
use crate::linkage::topology::{LengthSource, LinkageTopology, TermKind};
use crate::problem::design::DesignVector;

pub type Residual = SVector<f64, STATE_DIM>;
pub type StateJacobian = SMatrix<f64, STATE_DIM, STATE_DIM>;
pub type PoseJacobian = SMatrix<f64, STATE_DIM, 2>;

/// A topology with every length bound: decision variables resolved against
/// the model defaults. Cheap to build; all kinematic routines take one.
#[derive(Debug, Clone, Copy)]
pub struct Mechanism<'a> {
    pub topology: &'a LinkageTopology,
    pub variables: [f64; 9],
}

impl<'a> Mechanism<'a> {
    pub fn new(topology: &'a LinkageTopology, design: &DesignVector) -> Result<Self> {
        Ok(Mechanism {
            topology,
            variables: topology.resolve_design(design)?,
        })
    }

    /// The mechanism with the model's default variables.
    pub fn with_defaults(topology: &'a LinkageTopology) -> Self {
        Mechanism {
            topology,
            variables: topology.defaults,
        }
    }

    pub fn with_variables(topology: &'a LinkageTopology, variables: [f64; 9]) -> Self {
        Mechanism {
            topology,
            variables,
        }
    }

    #[inline]
    fn length(&self, src: LengthSource, state: &[f64; STATE_DIM]) -> f64 {
        match src {
            LengthSource::Fixed(v) => v,
            LengthSource::Variable(i) => self.variables[i],
            LengthSource::State(i) => state[i],
        }
    }

    /// Stacked loop-closure errors, two rows per loop.
    pub fn residual(&self, pose: FingerPose, state: &StateVector) -> Residual {
        self.evaluate(pose, state, false, false).0
    }

    /// Residual together with its Jacobians with respect to the state and to
    /// the finger angles (per radian).
    pub fn linearize(
        &self,
        pose: FingerPose,
        state: &StateVector,
    ) -> (Residual, StateJacobian, PoseJacobian) {
        self.evaluate(pose, state, true, true)
    }

    pub(crate) fn residual_and_jacobian(
        &self,
        pose: FingerPose,
        state: &StateVector,
    ) -> (Residual, StateJacobian) {
        let (r, j, _) = self.evaluate(pose, state, true, false);
        (r, j)
    }

    fn evaluate(
        &self,
        pose: FingerPose,
        state: &StateVector,
        want_state_jac: bool,
        want_pose_jac: bool,
    ) -> (Residual, StateJacobian, PoseJacobian) {
        let s = state.to_array();
        let q = pose.radians();
        let mut r = Residual::zeros();
        let mut js = StateJacobian::zeros();
        let mut jq = PoseJacobian::zeros();
        for (li, lp) in self.topology.loops.iter().enumerate() {
            let (rx, ry) = (2 * li, 2 * li + 1);
            for term in &lp.terms {
                match term.kind {
                    TermKind::Anchor(v) => {
                        r[rx] += v[0];
                        r[ry] += v[1];
                    }
                    TermKind::Polar { length, angle } => {
                        let len = self.length(length, &s);
                        let theta = angle.eval(&s, q);
                        let (sin, cos) = theta.sin_cos();
                        let scale = term.sign * len;
                        r[rx] += scale * cos;
                        r[ry] += scale * sin;
                        if want_state_jac {
                            if let LengthSource::State(i) = length {
                                js[(rx, i)] += term.sign * cos;
                                js[(ry, i)] += term.sign * sin;
                            }
                            for k in 0..5 {
                                let c = angle.state_coef[k];
                                if c != 0.0 {
                                    js[(rx, 1 + k)] -= scale * c * sin;
                                    js[(ry, 1 + k)] += scale * c * cos;
                                }
                            }
                        }
                        if want_pose_jac {
                            for j in 0..2 {
                                let c = angle.pose_coef[j];
                                if c != 0.0 {
                                    jq[(rx, j)] -= scale * c * sin;
                                    jq[(ry, j)] += scale * c * cos;
                                }
                            }
                        }
                    }
                }
            }
        }
        (r, js, jq)
    }

    /// Positions of every point reached by the loop walks. Loops are walked in
    /// declaration order; a loop starts from the first point already placed
    /// (ground anchors are placed up front).
    pub fn point_positions(&self, pose: FingerPose, state: &StateVector) -> BTreeMap<String, [f64; 2]> {
        let topo = self.topology;
        let s = state.to_array();
        let q = pose.radians();
        let mut pos: Vec<Option<[f64; 2]>> = vec![None; topo.points.len()];
        for (name, v) in &topo.ground_anchors {
            if let Some(i) = topo.point_index(name) {
                pos[i] = Some(*v);
            }
        }
        // a few passes settle loops whose start is placed by a later loop
        for _ in 0..topo.loops.len() {
            for lp in &topo.loops {
                let Some(mut cur) = pos[lp.start] else { continue };
                for term in &lp.terms {
                    let step = match term.kind {
                        TermKind::Anchor(v) => v,
                        TermKind::Polar { length, angle } => {
                            let len = term.sign * self.length(length, &s);
                            let th = angle.eval(&s, q);
                            [len * th.cos(), len * th.sin()]
                        }
                    };
                    cur = [cur[0] + step[0], cur[1] + step[1]];
                    if pos[term.to].is_none() {
                        pos[term.to] = Some(cur);
                    }
                }
            }
        }
        topo.points
            .iter()
            .zip(pos)
            .filter_map(|(n, p)| p.map(|p| (n.clone(), p)))
            .collect()
    }
}

/// ∞-norm of a residual vector.
pub fn inf_norm(r: &Residual) -> f64 {
    r.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Convenience wrapper matching the operation contract: residual vector for
/// `design` at `pose` and `state`.
pub fn assemble_residuals(
    topology: &LinkageTopology,
    design: &DesignVector,
    pose: FingerPose,
    state: &StateVector,
) -> Result<Residual> {
    Ok(Mechanism::new(topology, design)?.residual(pose, state))
}
