//! Damped Newton-Raphson on the loop-closure system.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolveError};
use crate::linkage::residual::{inf_norm, Mechanism, StateJacobian};
use crate::linkage::state::{FingerPose, StateVector};
use crate::linkage::topology::LinkageTopology;
use crate::problem::design::DesignVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Residual ∞-norm accepted as converged.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Condition estimate above which the Jacobian counts as singular.
    pub max_condition: f64,
    /// Number of halvings of the step length tried before giving up on an
    /// iteration.
    pub max_halvings: u32,
    /// Steps used to walk from the model defaults to a new design at the open
    /// pose before the sweep starts.
    pub homotopy_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tolerance: 1e-9,
            max_iterations: 200,
            max_condition: 1e12,
            max_halvings: 30,
            homotopy_steps: 4,
        }
    }
}

/// A converged configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub state: StateVector,
    pub iterations: usize,
    pub residual: f64,
}

/// 1-norm condition estimate `‖J‖₁·‖J⁻¹‖₁`; infinite when `J` cannot be
/// inverted.
pub fn condition_estimate(j: &StateJacobian) -> f64 {
    let norm1 = |m: &StateJacobian| {
        m.column_iter()
            .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0_f64, f64::max)
    };
    match j.lu().try_inverse() {
        Some(inv) => norm1(j) * norm1(&inv),
        None => f64::INFINITY,
    }
}

impl Mechanism<'_> {
    /// Solves the loop closure at `pose` starting from `guess`.
    pub fn solve(
        &self,
        pose: FingerPose,
        guess: &StateVector,
        opts: &SolverOptions,
    ) -> Result<Solution, SolveError> {
        let mut x = guess.to_vector();
        let mut state = *guess;
        let (mut r, mut jac) = self.residual_and_jacobian(pose, &state);
        let mut norm = inf_norm(&r);
        for iter in 0..=opts.max_iterations {
            if norm < opts.tolerance {
                return Ok(Solution {
                    state,
                    iterations: iter,
                    residual: norm,
                });
            }
            if !norm.is_finite() || iter == opts.max_iterations {
                break;
            }
            let cond = condition_estimate(&jac);
            if cond > opts.max_condition {
                return Err(SolveError::SingularJacobian { condition: cond });
            }
            let Some(step) = jac.lu().solve(&(-r)) else {
                return Err(SolveError::SingularJacobian {
                    condition: f64::INFINITY,
                });
            };
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..=opts.max_halvings {
                let trial = x + step * lambda;
                let trial_state = StateVector::from_vector(&trial);
                let (tr, tj) = self.residual_and_jacobian(pose, &trial_state);
                let tn = inf_norm(&tr);
                if tn.is_finite() && tn < norm {
                    x = trial;
                    state = trial_state;
                    r = tr;
                    jac = tj;
                    norm = tn;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !accepted {
                return Err(SolveError::NonConvergence {
                    iterations: iter + 1,
                    residual: norm,
                });
            }
        }
        Err(SolveError::NonConvergence {
            iterations: opts.max_iterations,
            residual: norm,
        })
    }

    /// Solves the open pose for this mechanism by walking the variables from
    /// the model defaults, starting at the neutral guess. Each intermediate
    /// solution seeds the next, so the assembly branch of the neutral guess is
    /// kept.
    pub fn solve_open_pose(&self, opts: &SolverOptions) -> Result<Solution, SolveError> {
        let from = self.topology.defaults;
        let to = self.variables;
        let mut guess = self.topology.neutral_guess();
        let steps = opts.homotopy_steps.max(1);
        let mut total = 0;
        let mut last = None;
        for k in 1..=steps {
            let t = k as f64 / steps as f64;
            let mut vars = [0.0; 9];
            for i in 0..9 {
                vars[i] = from[i] + (to[i] - from[i]) * t;
            }
            if k == steps {
                vars = to;
            }
            let m = Mechanism::with_variables(self.topology, vars);
            let sol = m.solve(FingerPose::OPEN, &guess, opts)?;
            total += sol.iterations;
            guess = sol.state;
            last = Some(sol);
        }
        let mut sol = last.expect("at least one homotopy step");
        sol.iterations = total;
        Ok(sol)
    }
}

/// Solves the loop closure for `design` at `pose` from `initial_guess`.
pub fn solve_configuration(
    topology: &LinkageTopology,
    design: &DesignVector,
    pose: FingerPose,
    initial_guess: &StateVector,
    opts: &SolverOptions,
) -> Result<Solution> {
    pose.validate()?;
    if !initial_guess.is_finite() {
        return Err(crate::error::Error::InvalidParameter(
            "initial guess has non-finite entries".into(),
        ));
    }
    let mech = Mechanism::new(topology, design)?;
    Ok(mech.solve(pose, initial_guess, opts)?)
}
