use std::cmp::Ordering;
use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linkage::solver::SolverOptions;
use crate::linkage::topology::SliderLimits;
use crate::linkage::{LinkageTopology, Mechanism, SweepRecord, TorqueResult};
use crate::problem::constraints::{ratio_excess, ConstraintReport, ViolationComponents, ViolationScales};
use crate::problem::design::{DesignBounds, DesignVector, DvMode};
use crate::problem::objective::{objective, ObjectiveMode};
use crate::problem::{Fitness, Problem};

pub const DEFAULT_SWEEP_STEPS: usize = 46;
pub const DEFAULT_PENALTY_CEILING: f64 = 1.0e3;

/// Problem block of an experiment config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemConfig {
    /// Model file; the bundled model when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<PathBuf>,
    pub bounds: DvMode,
    pub objective: ObjectiveMode,
    pub sweep_steps: usize,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub penalty_ceiling: f64,
    /// Overrides of the model's slider limits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slider_c1: Option<SliderLimits>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slider_c2: Option<SliderLimits>,
    pub solver: SolverOptions,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        ProblemConfig {
            model: None,
            bounds: DvMode::Six,
            objective: ObjectiveMode::Magnitude,
            sweep_steps: DEFAULT_SWEEP_STEPS,
            ratio_min: 0.05,
            ratio_max: 20.0,
            penalty_ceiling: DEFAULT_PENALTY_CEILING,
            slider_c1: None,
            slider_c2: None,
            solver: SolverOptions::default(),
        }
    }
}

impl ProblemConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.sweep_steps < 2 {
            return bad(format!("sweep_steps must be at least 2, got {}", self.sweep_steps));
        }
        if self.ratio_min.partial_cmp(&self.ratio_max) != Some(Ordering::Less) {
            return bad(format!("ratio_min {} must be below ratio_max {}", self.ratio_min, self.ratio_max));
        }
        if !(self.penalty_ceiling.is_finite() && self.penalty_ceiling > 0.0) {
            return bad(format!("penalty_ceiling must be positive, got {}", self.penalty_ceiling));
        }
        for (name, s) in [("slider_c1", &self.slider_c1), ("slider_c2", &self.slider_c2)] {
            if let Some(s) = s {
                if s.min.partial_cmp(&s.max) != Some(Ordering::Less) {
                    return bad(format!("{name}: min {} must be below max {}", s.min, s.max));
                }
            }
        }
        if !(self.solver.tolerance > 0.0 && self.solver.max_iterations > 0) {
            return bad("solver tolerance and iteration cap must be positive".into());
        }
        Ok(())
    }

    pub fn with_bounds(mut self, mode: DvMode) -> Self {
        self.bounds = mode;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationOutcome {
    pub design: DesignVector,
    /// Closed-pose torque objective; absent when it could not be computed.
    pub objective: Option<f64>,
    pub objective_mode: ObjectiveMode,
    pub constraints: ConstraintReport,
    pub feasible: bool,
    pub torques_at_closed: Option<TorqueResult>,
}

impl EvaluationOutcome {
    pub fn fitness(&self) -> Fitness {
        Fitness {
            objective: self.objective.unwrap_or(0.0),
            violation: self.constraints.total_violation,
        }
    }
}

/// The exoskeleton design problem: a linkage model plus constraint settings.
#[derive(Debug, Clone)]
pub struct ExoProblem {
    topology: Arc<LinkageTopology>,
    config: ProblemConfig,
    bounds: DesignBounds,
    c1: SliderLimits,
    c2: SliderLimits,
    scales: ViolationScales,
}

impl ExoProblem {
    pub fn new(topology: Arc<LinkageTopology>, config: ProblemConfig) -> Result<Self> {
        config.validate()?;
        let c1 = config.slider_c1.unwrap_or(topology.slider_c1);
        let c2 = config.slider_c2.unwrap_or(topology.slider_c2);
        let bounds = DesignBounds::for_mode(config.bounds);
        for name in &bounds.names {
            if topology.default_of(name).is_none() {
                return Err(Error::ModelMismatch(format!(
                    "model {} has no variable link {name}",
                    topology.name
                )));
            }
        }
        Ok(ExoProblem {
            scales: ViolationScales {
                c1_range: c1.range(),
                c2_range: c2.range(),
                ratio_range: config.ratio_max - config.ratio_min,
            },
            topology,
            config,
            bounds,
            c1,
            c2,
        })
    }

    /// Loads the model named in the config, or the bundled one.
    pub fn from_config(config: ProblemConfig) -> Result<Self> {
        let topo = match &config.model {
            Some(p) => LinkageTopology::from_path(p)?,
            None => LinkageTopology::bundled(),
        };
        Self::new(Arc::new(topo), config)
    }

    pub fn bundled(mode: DvMode) -> Self {
        Self::new(Arc::new(LinkageTopology::bundled()), ProblemConfig::default().with_bounds(mode))
            .expect("bundled model declares all nine variables")
    }

    pub fn topology(&self) -> &LinkageTopology {
        &self.topology
    }

    pub fn config(&self) -> &ProblemConfig {
        &self.config
    }

    pub fn slider_limits(&self) -> (SliderLimits, SliderLimits) {
        (self.c1, self.c2)
    }

    pub fn mechanism(&self, design: &DesignVector) -> Result<Mechanism<'_>> {
        Mechanism::new(&self.topology, design)
    }

    pub fn sweep(&self, design: &DesignVector) -> Result<SweepRecord> {
        self.mechanism(design)?
            .flexion_sweep(self.config.sweep_steps, &self.config.solver)
    }

    /// Runs the sweep and scores the design. Designs of the wrong mode or
    /// outside the bounds are rejected with an error rather than scored.
    pub fn evaluate_design(&self, design: &DesignVector) -> Result<EvaluationOutcome> {
        if design.mode() != self.config.bounds {
            return Err(Error::InvalidParameter(format!(
                "problem is {} but design has {} variables",
                self.config.bounds,
                design.len()
            )));
        }
        self.bounds.check(design.values())?;
        let sweep = self.sweep(design)?;
        Ok(self.score(design, &sweep))
    }

    /// Scores an already computed sweep.
    pub fn score(&self, design: &DesignVector, sweep: &SweepRecord) -> EvaluationOutcome {
        let cfg = &self.config;
        let outcome = |objective, constraints: ConstraintReport, torques| EvaluationOutcome {
            design: design.clone(),
            objective,
            objective_mode: cfg.objective,
            feasible: constraints.feasible(),
            constraints,
            torques_at_closed: torques,
        };
        if let Some(f) = &sweep.failure {
            return outcome(None, ConstraintReport::penalty(cfg.penalty_ceiling, true, f.cause.code()), None);
        }
        let mut worst = ViolationComponents::default();
        for s in &sweep.steps {
            worst.c1_excess = worst.c1_excess.max(self.c1.excess(s.state.c1));
            worst.c2_excess = worst.c2_excess.max(self.c2.excess(s.state.c2));
            let r = ratio_excess(s.torques.ratio(), cfg.ratio_min, cfg.ratio_max);
            worst.ratio_excess = worst.ratio_excess.max(r);
        }
        let closed = sweep.last().expect("complete sweep has steps").torques;
        match objective(&closed, cfg.objective) {
            Ok(obj) => outcome(
                Some(obj),
                ConstraintReport::from_components(worst, &self.scales, cfg.penalty_ceiling),
                Some(closed),
            ),
            Err(_) => outcome(None, ConstraintReport::penalty(cfg.penalty_ceiling, false, "objective_domain"), Some(closed)),
        }
    }
}

impl Problem for ExoProblem {
    fn bounds(&self) -> &DesignBounds {
        &self.bounds
    }

    fn evaluate(&self, genes: &[f64]) -> Fitness {
        DesignVector::new(genes.to_vec())
            .and_then(|d| self.evaluate_design(&d))
            .map(|o| o.fitness())
            .unwrap_or(Fitness::penalty(self.config.penalty_ceiling))
    }

    fn fingerprint(&self) -> String {
        let cfg = serde_json::to_string(&self.config).expect("config serializes");
        format!("exo:{}:{}", self.topology.source_hash(), cfg)
    }
}
