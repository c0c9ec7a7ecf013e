//! The constrained design problem built on the linkage model, plus the
//! interface the optimizers use to evaluate candidates.

pub mod constraints;
pub mod design;
pub mod evaluate;
pub mod objective;

use serde::{Deserialize, Serialize};

pub use constraints::{constraint_violation, ConstraintReport, ViolationComponents, ViolationScales};
pub use design::{DesignBounds, DesignVector, DvMode, ALL_VARIABLES};
pub use evaluate::{EvaluationOutcome, ExoProblem, ProblemConfig};
pub use objective::{objective, ObjectiveMode};

/// What the optimizers see of an evaluation: an objective to maximize and a
/// non-negative total constraint violation (zero means feasible).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fitness {
    pub objective: f64,
    pub violation: f64,
}

impl Fitness {
    pub fn feasible(objective: f64) -> Self {
        Fitness { objective, violation: 0.0 }
    }

    pub fn penalty(ceiling: f64) -> Self {
        Fitness { objective: 0.0, violation: ceiling }
    }

    pub fn is_feasible(&self) -> bool {
        self.violation == 0.0
    }
}

/// A box-bounded maximization problem. Evaluation must be a pure function
/// of the genes so it can run on any thread in any order.
pub trait Problem: Sync {
    fn bounds(&self) -> &DesignBounds;

    fn evaluate(&self, genes: &[f64]) -> Fitness;

    /// Identifies the problem for checkpoint validation.
    fn fingerprint(&self) -> String;
}

/// Maximize `-Σ (x_i - c_i)²`; the optimum value is 0 at `center`.
#[derive(Debug, Clone)]
pub struct Sphere {
    bounds: DesignBounds,
    center: Vec<f64>,
}

impl Sphere {
    pub fn new(bounds: DesignBounds) -> Self {
        let center = vec![0.0; bounds.dim()];
        Sphere { bounds, center }
    }

    pub fn with_center(bounds: DesignBounds, center: Vec<f64>) -> crate::Result<Self> {
        bounds.check(&center)?;
        Ok(Sphere { bounds, center })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }
}

impl Problem for Sphere {
    fn bounds(&self) -> &DesignBounds {
        &self.bounds
    }

    fn evaluate(&self, genes: &[f64]) -> Fitness {
        Fitness::feasible(-genes.iter().zip(&self.center).map(|(x, c)| (x - c) * (x - c)).sum::<f64>())
    }

    fn fingerprint(&self) -> String {
        format!("sphere:{:?}:{:?}:{:?}", self.bounds.lower, self.bounds.upper, self.center)
    }
}
