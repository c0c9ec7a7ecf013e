use serde::{Deserialize, Serialize};

/// Raw constraint excesses at the worst pose of a sweep. Lengths in mm, the
/// ratio term dimensionless.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ViolationComponents {
    pub c1_excess: f64,
    pub c2_excess: f64,
    pub ratio_excess: f64,
}

/// Normalizing widths for [`ViolationComponents`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViolationScales {
    pub c1_range: f64,
    pub c2_range: f64,
    pub ratio_range: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    /// Combined slider excess in mm (c1 plus c2), 0 when both stay in range.
    pub slider_violation: f64,
    pub ratio_violation: f64,
    pub solver_failed: bool,
    pub total_violation: f64,
    pub components: ViolationComponents,
    /// Stable code of the failure that forced the penalty, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl ConstraintReport {
    pub fn feasible(&self) -> bool {
        self.total_violation == 0.0
    }

    pub fn from_components(c: ViolationComponents, scales: &ViolationScales, ceiling: f64) -> Self {
        ConstraintReport {
            slider_violation: c.c1_excess + c.c2_excess,
            ratio_violation: c.ratio_excess,
            solver_failed: false,
            total_violation: constraint_violation(&c, scales).min(ceiling),
            components: c,
            failure: None,
        }
    }

    /// Report for an evaluation that could not be completed.
    pub fn penalty(ceiling: f64, solver_failed: bool, failure: impl Into<String>) -> Self {
        ConstraintReport {
            slider_violation: 0.0,
            ratio_violation: 0.0,
            solver_failed,
            total_violation: ceiling,
            components: ViolationComponents::default(),
            failure: Some(failure.into()),
        }
    }
}

/// Sum of each excess divided by its bound width.
pub fn constraint_violation(c: &ViolationComponents, s: &ViolationScales) -> f64 {
    let v = c.c1_excess / s.c1_range + c.c2_excess / s.c2_range + c.ratio_excess / s.ratio_range;
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Distance of `ratio` outside `[lo, hi]`.
pub fn ratio_excess(ratio: f64, lo: f64, hi: f64) -> f64 {
    if ratio.is_nan() {
        f64::INFINITY
    } else if ratio < lo {
        lo - ratio
    } else if ratio > hi {
        ratio - hi
    } else {
        0.0
    }
}
