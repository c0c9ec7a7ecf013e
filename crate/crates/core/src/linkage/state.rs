use nalgebra::SVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of solved kinematic unknowns (and of loop-closure equations).
pub const STATE_DIM: usize = 8;

/// Names of the state entries, in storage order.
pub const STATE_NAMES: [&str; STATE_DIM] = ["l_OA", "q_O", "q_A", "q_B", "q_G", "q_D", "c1", "c2"];

pub const MAX_MCP_DEG: f64 = 80.0;
pub const MAX_PIP_DEG: f64 = 90.0;

/// Finger joint angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FingerPose {
    pub q_mcp: f64,
    pub q_pip: f64,
}

impl FingerPose {
    pub fn new(q_mcp: f64, q_pip: f64) -> Result<Self> {
        let pose = FingerPose { q_mcp, q_pip };
        pose.validate()?;
        Ok(pose)
    }

    pub const OPEN: FingerPose = FingerPose { q_mcp: 0.0, q_pip: 0.0 };
    pub const CLOSED: FingerPose = FingerPose {
        q_mcp: MAX_MCP_DEG,
        q_pip: MAX_PIP_DEG,
    };

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64, hi: f64| v.is_finite() && (0.0..=hi).contains(&v);
        if ok(self.q_mcp, MAX_MCP_DEG) && ok(self.q_pip, MAX_PIP_DEG) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "finger pose ({}, {}) outside [0, {MAX_MCP_DEG}] x [0, {MAX_PIP_DEG}] deg",
                self.q_mcp, self.q_pip
            )))
        }
    }

    /// Joint angles in radians, `[q_mcp, q_pip]`.
    pub fn radians(&self) -> [f64; 2] {
        [self.q_mcp.to_radians(), self.q_pip.to_radians()]
    }

    /// Linear interpolation between two poses.
    pub fn lerp(a: FingerPose, b: FingerPose, t: f64) -> FingerPose {
        FingerPose {
            q_mcp: a.q_mcp + (b.q_mcp - a.q_mcp) * t,
            q_pip: a.q_pip + (b.q_pip - a.q_pip) * t,
        }
    }
}

/// The eight loop-closure unknowns. Lengths in mm, angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    pub l_oa: f64,
    pub q_o: f64,
    pub q_a: f64,
    pub q_b: f64,
    pub q_g: f64,
    pub q_d: f64,
    pub c1: f64,
    pub c2: f64,
}

impl StateVector {
    pub fn from_array(v: [f64; STATE_DIM]) -> Self {
        StateVector {
            l_oa: v[0],
            q_o: v[1],
            q_a: v[2],
            q_b: v[3],
            q_g: v[4],
            q_d: v[5],
            c1: v[6],
            c2: v[7],
        }
    }

    pub fn to_array(&self) -> [f64; STATE_DIM] {
        [
            self.l_oa, self.q_o, self.q_a, self.q_b, self.q_g, self.q_d, self.c1, self.c2,
        ]
    }

    pub(crate) fn to_vector(self) -> SVector<f64, STATE_DIM> {
        SVector::from(self.to_array())
    }

    pub(crate) fn from_vector(v: &SVector<f64, STATE_DIM>) -> Self {
        let mut a = [0.0; STATE_DIM];
        a.copy_from_slice(v.as_slice());
        Self::from_array(a)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// Index of a state entry by name.
    pub fn index_of(name: &str) -> Option<usize> {
        STATE_NAMES.iter().position(|n| *n == name)
    }
}

/// Joint torques in N·mm transmitted by a unit (1 N) actuator force.
/// Positive values assist flexion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorqueResult {
    pub tau_mcp: f64,
    pub tau_pip: f64,
}

impl TorqueResult {
    pub fn scaled(&self, force: f64) -> TorqueResult {
        TorqueResult {
            tau_mcp: self.tau_mcp * force,
            tau_pip: self.tau_pip * force,
        }
    }

    /// `tau_mcp / tau_pip`; infinite when the PIP torque vanishes.
    pub fn ratio(&self) -> f64 {
        self.tau_mcp / self.tau_pip
    }

    pub fn is_finite(&self) -> bool {
        self.tau_mcp.is_finite() && self.tau_pip.is_finite()
    }
}
