use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::evo::convergence::{detect_convergence, ConvergenceWindow, DEFAULT_THRESHOLD};
use crate::evo::deb::{deb_compare, Individual};
use crate::problem::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Bf,
    Ga,
    Bbbc,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Bf => "bf",
            Algorithm::Ga => "ga",
            Algorithm::Bbbc => "bbbc",
        })
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bf" => Ok(Algorithm::Bf),
            "ga" => Ok(Algorithm::Ga),
            "bbbc" => Ok(Algorithm::Bbbc),
            _ => Err(format!("unknown algorithm {s:?} (expected bf, ga or bbbc)")),
        }
    }
}

/// A finished seeded optimization. Everything here is a deterministic
/// function of (parameters, problem, seed) except `wall_time_secs`, which is
/// excluded from serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerRun {
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Best feasible objective so far after each generation; `None` until a
    /// feasible design has been seen.
    pub trace: Vec<Option<f64>>,
    /// Cumulative evaluation count after each generation.
    pub evaluations: Vec<u64>,
    pub best: Individual,
    pub convergence_generation: usize,
    #[serde(skip)]
    pub wall_time_secs: f64,
}

impl OptimizerRun {
    pub fn total_evaluations(&self) -> u64 {
        self.evaluations.last().copied().unwrap_or(0)
    }

    pub fn generations(&self) -> usize {
        self.trace.len()
    }

    pub fn best_objective(&self) -> Option<f64> {
        self.best.fitness.is_feasible().then_some(self.best.fitness.objective)
    }

    /// Convergence generation under another threshold or window.
    pub fn convergence_with(&self, threshold: f64, window: ConvergenceWindow) -> usize {
        detect_convergence(&self.trace, threshold, window)
    }
}

/// Evaluates genes on the current rayon pool, keeping input order.
pub fn evaluate_population<P: Problem + ?Sized>(problem: &P, genes: Vec<Vec<f64>>) -> Vec<Individual> {
    genes
        .into_par_iter()
        .map(|g| {
            let fitness = problem.evaluate(&g);
            Individual { genes: g, fitness }
        })
        .collect()
}

/// Accumulates the best-so-far individual and the per-generation records.
pub(crate) struct Recorder {
    best: Option<Individual>,
    trace: Vec<Option<f64>>,
    evaluations: Vec<u64>,
    count: u64,
}

impl Recorder {
    pub fn new() -> Self {
        Recorder {
            best: None,
            trace: Vec::new(),
            evaluations: Vec::new(),
            count: 0,
        }
    }

    pub fn count_evaluations(&mut self, n: usize) {
        self.count += n as u64;
    }

    pub fn offer(&mut self, pop: &[Individual]) {
        for p in pop {
            if self.best.as_ref().is_none_or(|b| deb_compare(p, b).is_lt()) {
                self.best = Some(p.clone());
            }
        }
    }

    pub fn best(&self) -> &Individual {
        self.best.as_ref().expect("offered a population first")
    }

    pub fn end_generation(&mut self) {
        let b = self.best();
        self.trace.push(b.fitness.is_feasible().then_some(b.fitness.objective));
        self.evaluations.push(self.count);
    }

    pub fn finish(self, algorithm: Algorithm, seed: u64, wall_time_secs: f64) -> OptimizerRun {
        let convergence_generation = detect_convergence(&self.trace, DEFAULT_THRESHOLD, ConvergenceWindow::Tail);
        OptimizerRun {
            algorithm,
            seed,
            trace: self.trace,
            evaluations: self.evaluations,
            best: self.best.expect("at least one generation"),
            convergence_generation,
            wall_time_secs,
        }
    }
}

pub(crate) fn random_genes<R: rand::Rng + ?Sized>(bounds: &crate::problem::DesignBounds, rng: &mut R) -> Vec<f64> {
    (0..bounds.dim())
        .map(|i| bounds.lower[i] + bounds.width(i) * rng.random::<f64>())
        .collect()
}
