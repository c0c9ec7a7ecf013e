use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::problem::design::cmp_genes;
use crate::problem::Fitness;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub genes: Vec<f64>,
    pub fitness: Fitness,
}

/// Deb's feasibility rules. `Less` means `a` ranks ahead of `b`, so sorting
/// ascending puts the best first. Returns `Equal` when the rules cannot
/// separate the two.
pub fn deb_compare_fitness(a: &Fitness, b: &Fitness) -> Ordering {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => b.objective.total_cmp(&a.objective),
        (false, false) => a.violation.total_cmp(&b.violation),
    }
}

/// Total order: Deb's rules, then lexicographic genes.
pub fn deb_compare(a: &Individual, b: &Individual) -> Ordering {
    deb_compare_fitness(&a.fitness, &b.fitness).then_with(|| cmp_genes(&a.genes, &b.genes))
}

/// Index of the best individual, or `None` for an empty slice.
pub fn best_index(pop: &[Individual]) -> Option<usize> {
    (0..pop.len()).min_by(|&i, &j| deb_compare(&pop[i], &pop[j]))
}
