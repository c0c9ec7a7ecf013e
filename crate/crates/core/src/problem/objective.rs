use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linkage::TorqueResult;

/// How the two closed-pose torques are combined into the scalar objective.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveMode {
    /// `sqrt(τ_MCP² + τ_PIP²)`.
    #[default]
    Magnitude,
    /// `sqrt(τ_MCP + τ_PIP)`, undefined for a negative sum.
    Literal,
}

impl fmt::Display for ObjectiveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObjectiveMode::Magnitude => "magnitude",
            ObjectiveMode::Literal => "literal",
        })
    }
}

pub fn objective(t: &TorqueResult, mode: ObjectiveMode) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("non-finite torques ({}, {})", t.tau_mcp, t.tau_pip)));
    }
    match mode {
        ObjectiveMode::Magnitude => Ok(t.tau_mcp.hypot(t.tau_pip)),
        ObjectiveMode::Literal => {
            let s = t.tau_mcp + t.tau_pip;
            if s < 0.0 {
                Err(Error::Domain(format!("torque sum {s} is negative")))
            } else {
                Ok(s.sqrt())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: f64, b: f64) -> TorqueResult {
        TorqueResult { tau_mcp: a, tau_pip: b }
    }

    #[test]
    fn worked_values() {
        assert_eq!(objective(&t(3.0, 4.0), ObjectiveMode::Magnitude).unwrap(), 5.0);
        assert_eq!(objective(&t(9.0, 16.0), ObjectiveMode::Literal).unwrap(), 5.0);
        for m in [ObjectiveMode::Magnitude, ObjectiveMode::Literal] {
            assert_eq!(objective(&t(0.0, 0.0), m).unwrap(), 0.0);
        }
    }

    #[test]
    fn literal_domain() {
        assert!(matches!(objective(&t(-3.0, 1.0), ObjectiveMode::Literal), Err(Error::Domain(_))));
        assert!(objective(&t(-3.0, 1.0), ObjectiveMode::Magnitude).is_ok());
        assert!(objective(&t(f64::NAN, 1.0), ObjectiveMode::Magnitude).is_err());
    }

    #[test]
    fn mode_names() {
        assert_eq!(serde_json::to_string(&ObjectiveMode::Literal).unwrap(), "\"literal\"");
        assert_eq!(ObjectiveMode::default(), ObjectiveMode::Magnitude);
    }
}
