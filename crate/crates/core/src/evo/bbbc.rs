use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evo::operators::{bang, crunch, CrunchMode};
use crate::evo::run::{evaluate_population, random_genes, Algorithm, OptimizerRun, Recorder};
use crate::problem::Problem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BbbcParams {
    pub population_size: usize,
    pub generations: usize,
    pub crunch_mode: CrunchMode,
    pub bang_scale: f64,
}

impl Default for BbbcParams {
    fn default() -> Self {
        BbbcParams {
            population_size: 300,
            generations: 50,
            crunch_mode: CrunchMode::BestFit,
            bang_scale: 1.0,
        }
    }
}

impl BbbcParams {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::InvalidParameter("bbbc: population_size must be at least 2".into()));
        }
        if self.generations < 1 {
            return Err(Error::InvalidParameter("bbbc: generations must be at least 1".into()));
        }
        if !(self.bang_scale > 0.0 && self.bang_scale.is_finite()) {
            return Err(Error::InvalidParameter("bbbc: bang_scale must be positive".into()));
        }
        Ok(())
    }

    pub fn evaluation_count(&self) -> u64 {
        (self.population_size * self.generations) as u64
    }
}

/// Big Bang-Big Crunch: a uniform first generation, then normal dispersion
/// around the center of mass with radius shrinking as 1/i. The best
/// individual so far is carried into every new population.
pub fn run_bbbc<P: Problem + ?Sized>(params: &BbbcParams, problem: &P, seed: u64) -> Result<OptimizerRun> {
    params.validate()?;
    let started = Instant::now();
    let bounds = problem.bounds();
    let n = params.population_size;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = Recorder::new();
    let mut cm = Vec::new();

    for i in 1..=params.generations {
        let genes = if i == 1 {
            (0..n).map(|_| random_genes(bounds, &mut rng)).collect()
        } else {
            bang(&cm, &rec.best().genes, i, params.bang_scale, n, bounds, &mut rng)
        };
        let pop = evaluate_population(problem, genes);
        rec.count_evaluations(n);
        rec.offer(&pop);
        cm = crunch(&pop, params.crunch_mode)?;
        rec.end_generation();
    }
    Ok(rec.finish(Algorithm::Bbbc, seed, started.elapsed().as_secs_f64()))
}
