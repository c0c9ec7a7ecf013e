use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evo::deb::{best_index, deb_compare, Individual};
use crate::problem::DesignBounds;

/// Binary tournament with replacement. Returns `pop.len()` indices of winners.
pub fn tournament_select<R: Rng + ?Sized>(pop: &[Individual], rng: &mut R) -> Vec<usize> {
    let n = pop.len();
    (0..n)
        .map(|_| {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            if deb_compare(&pop[j], &pop[i]).is_lt() {
                j
            } else {
                i
            }
        })
        .collect()
}

/// One BLX-α draw for a gene given a uniform `u` in `[0, 1)`.
pub fn blx_gene(x1: f64, x2: f64, alpha: f64, u: f64) -> f64 {
    let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    let d = hi - lo;
    let a = lo - alpha * d;
    a + (hi + alpha * d - a) * u
}

/// BLX-α crossover of one pair, applied with probability `pc`; children are
/// clamped to `bounds`.
pub fn blx_crossover<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    alpha: f64,
    pc: f64,
    bounds: &DesignBounds,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    if rng.random::<f64>() >= pc {
        return (p1.to_vec(), p2.to_vec());
    }
    let mut c1 = Vec::with_capacity(p1.len());
    let mut c2 = Vec::with_capacity(p1.len());
    for (i, (&a, &b)) in p1.iter().zip(p2).enumerate() {
        c1.push(bounds.clamp_gene(i, blx_gene(a, b, alpha, rng.random())));
        c2.push(bounds.clamp_gene(i, blx_gene(a, b, alpha, rng.random())));
    }
    (c1, c2)
}

/// Polynomial mutation perturbation for a uniform `u`, as a fraction of the
/// variable's range.
pub fn polynomial_delta(u: f64, eta: f64) -> f64 {
    let e = 1.0 / (eta + 1.0);
    if u < 0.5 {
        (2.0 * u).powf(e) - 1.0
    } else {
        1.0 - (2.0 * (1.0 - u)).powf(e)
    }
}

pub fn polynomial_mutate<R: Rng + ?Sized>(
    x: &mut [f64],
    bounds: &DesignBounds,
    pom: f64,
    eta: f64,
    rng: &mut R,
) {
    for (i, g) in x.iter_mut().enumerate() {
        if rng.random::<f64>() < pom {
            let delta = polynomial_delta(rng.random(), eta);
            *g = bounds.clamp_gene(i, *g + delta * bounds.width(i));
        }
    }
}

/// Best `pop.len()` of parents and offspring together.
pub fn survive_mu_plus_lambda(parents: Vec<Individual>, offspring: Vec<Individual>) -> Vec<Individual> {
    let n = parents.len();
    let mut all = parents;
    all.extend(offspring);
    all.sort_by(deb_compare);
    all.truncate(n);
    all
}

/// Unclamped big-bang draw around `cm` at iteration `i`.
pub fn bang_spread<R: Rng + ?Sized>(cm: &[f64], i: usize, r: f64, bounds: &DesignBounds, rng: &mut R) -> Vec<f64> {
    cm.iter()
        .enumerate()
        .map(|(j, &c)| {
            let z: f64 = rng.sample(StandardNormal);
            c + r * bounds.width(j) * z / i as f64
        })
        .collect()
}

/// A new population of `n` around `cm`: `elite` unchanged followed by
/// `n - 1` clamped draws.
pub fn bang<R: Rng + ?Sized>(
    cm: &[f64],
    elite: &[f64],
    i: usize,
    r: f64,
    n: usize,
    bounds: &DesignBounds,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(n);
    out.push(elite.to_vec());
    while out.len() < n {
        let mut g = bang_spread(cm, i, r, bounds, rng);
        bounds.clamp(&mut g);
        out.push(g);
    }
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrunchMode {
    #[default]
    BestFit,
    FitnessWeighted,
}

const WEIGHT_EPS: f64 = 1e-12;

/// Center of mass of an evaluated population.
pub fn crunch(pop: &[Individual], mode: CrunchMode) -> Result<Vec<f64>> {
    let best = best_index(pop).ok_or_else(|| Error::InvalidParameter("crunch of an empty population".into()))?;
    match mode {
        CrunchMode::BestFit => Ok(pop[best].genes.clone()),
        CrunchMode::FitnessWeighted => {
            let feasible: Vec<&Individual> = pop.iter().filter(|p| p.fitness.is_feasible()).collect();
            let weighted: Vec<(f64, &Individual)> = if feasible.is_empty() {
                let worst = pop.iter().map(|p| p.fitness.violation).fold(f64::MIN, f64::max);
                pop.iter().map(|p| (worst - p.fitness.violation + WEIGHT_EPS, p)).collect()
            } else {
                let worst = feasible.iter().map(|p| p.fitness.objective).fold(f64::MAX, f64::min);
                feasible.into_iter().map(|p| (p.fitness.objective - worst + WEIGHT_EPS, p)).collect()
            };
            let total: f64 = weighted.iter().map(|(w, _)| w).sum();
            let mut cm = vec![0.0; pop[0].genes.len()];
            for (w, p) in &weighted {
                for (c, g) in cm.iter_mut().zip(&p.genes) {
                    *c += w * g;
                }
            }
            cm.iter_mut().for_each(|c| *c /= total);
            Ok(cm)
        }
    }
}
