use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evo::operators::{blx_crossover, polynomial_mutate, survive_mu_plus_lambda, tournament_select};
use crate::evo::run::{evaluate_population, random_genes, Algorithm, OptimizerRun, Recorder};
use crate::problem::Problem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaParams {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_probability: f64,
    pub blx_alpha: f64,
    pub mutation_probability: f64,
    pub mutation_distribution_index: f64,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            population_size: 300,
            generations: 50,
            crossover_probability: 1.0,
            blx_alpha: 0.5,
            mutation_probability: 0.2,
            mutation_distribution_index: 20.0,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(format!("ga: {m}")));
        if self.population_size < 2 || !self.population_size.is_multiple_of(2) {
            return bad("population_size must be even and at least 2");
        }
        if self.generations < 1 {
            return bad("generations must be at least 1");
        }
        for p in [self.crossover_probability, self.mutation_probability] {
            if !(0.0..=1.0).contains(&p) {
                return bad("probabilities must lie in [0, 1]");
            }
        }
        if !(self.blx_alpha >= 0.0 && self.blx_alpha.is_finite()) {
            return bad("blx_alpha must be non-negative");
        }
        if !(self.mutation_distribution_index >= 0.0 && self.mutation_distribution_index.is_finite()) {
            return bad("mutation_distribution_index must be non-negative");
        }
        Ok(())
    }

    /// Evaluations of a run: the initial population plus one offspring
    /// population per generation.
    pub fn evaluation_count(&self) -> u64 {
        (self.population_size * (self.generations + 1)) as u64
    }
}

/// Real-coded GA: binary tournament, BLX-α, polynomial mutation and μ+λ
/// survival under Deb's rules. All randomness comes from one ChaCha8 stream
/// seeded by `seed`; evaluations run on the current rayon pool.
pub fn run_ga<P: Problem + ?Sized>(params: &GaParams, problem: &P, seed: u64) -> Result<OptimizerRun> {
    params.validate()?;
    let started = Instant::now();
    let bounds = problem.bounds();
    let n = params.population_size;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = Recorder::new();

    let init: Vec<Vec<f64>> = (0..n).map(|_| random_genes(bounds, &mut rng)).collect();
    let mut pop = evaluate_population(problem, init);
    rec.count_evaluations(n);
    rec.offer(&pop);

    for _ in 0..params.generations {
        let mates = tournament_select(&pop, &mut rng);
        let mut kids = Vec::with_capacity(n);
        for pair in mates.chunks_exact(2) {
            let (mut a, mut b) = blx_crossover(
                &pop[pair[0]].genes,
                &pop[pair[1]].genes,
                params.blx_alpha,
                params.crossover_probability,
                bounds,
                &mut rng,
            );
            for c in [&mut a, &mut b] {
                polynomial_mutate(
                    c,
                    bounds,
                    params.mutation_probability,
                    params.mutation_distribution_index,
                    &mut rng,
                );
            }
            kids.push(a);
            kids.push(b);
        }
        let offspring = evaluate_population(problem, kids);
        rec.count_evaluations(n);
        rec.offer(&offspring);
        pop = survive_mu_plus_lambda(pop, offspring);
        rec.end_generation();
    }
    Ok(rec.finish(Algorithm::Ga, seed, started.elapsed().as_secs_f64()))
}
