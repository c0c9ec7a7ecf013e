use linkage_opt::evo::operators::{bang_spread, blx_crossover, tournament_select};
use linkage_opt::evo::{deb_compare, run_bbbc, run_ga, BbbcParams, CrunchMode, GaParams, Individual};
use linkage_opt::problem::{DesignBounds, Fitness, Problem, Sphere};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sphere(dim: usize) -> Sphere {
    Sphere::new(DesignBounds::uniform(dim, -5.0, 5.0).unwrap())
}

fn pool(n: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()
}

fn non_decreasing(trace: &[Option<f64>]) -> bool {
    trace.windows(2).all(|w| match (w[0], w[1]) {
        (Some(a), Some(b)) => b >= a,
        (Some(_), None) => false,
        _ => true,
    })
}

#[test]
fn ga_solves_sphere_every_seed() {
    let p = sphere(6);
    let params = GaParams {
        population_size: 50,
        generations: 50,
        ..GaParams::default()
    };
    for seed in 0..10 {
        let run = run_ga(&params, &p, seed).unwrap();
        let best = run.best_objective().unwrap();
        assert!(best > -1e-3, "seed {seed}: {best}");
        assert!(non_decreasing(&run.trace));
        assert_eq!(run.total_evaluations(), params.evaluation_count());
        assert_eq!(run.trace.len(), 50);
    }
}

#[test]
fn bbbc_solves_sphere_every_seed() {
    let p = sphere(3);
    let params = BbbcParams::default();
    for seed in 0..10 {
        let run = run_bbbc(&params, &p, seed).unwrap();
        let best = run.best_objective().unwrap();
        assert!(best > -1e-3, "seed {seed}: {best}");
        assert!(non_decreasing(&run.trace));
        assert_eq!(run.total_evaluations(), 15_000);
    }
}

#[test]
fn bbbc_precision_in_six_dimensions() {
    // the last bang spreads by width/50, which bounds the attainable precision
    let p = sphere(6);
    for seed in 0..10 {
        let best = run_bbbc(&BbbcParams::default(), &p, seed).unwrap().best_objective().unwrap();
        assert!(best > -0.05, "seed {seed}: {best}");
    }
}

#[test]
fn fitness_weighted_crunch_also_runs() {
    let params = BbbcParams {
        population_size: 100,
        generations: 30,
        crunch_mode: CrunchMode::FitnessWeighted,
        ..BbbcParams::default()
    };
    let run = run_bbbc(&params, &sphere(3), 4).unwrap();
    assert!(non_decreasing(&run.trace));
    assert!(run.best_objective().unwrap() > -0.5);
}

#[test]
fn parameter_preconditions() {
    let p = sphere(2);
    let bad = [
        GaParams { generations: 0, ..GaParams::default() },
        GaParams { population_size: 51, ..GaParams::default() },
        GaParams { mutation_probability: 1.5, ..GaParams::default() },
    ];
    for b in bad {
        assert!(run_ga(&b, &p, 0).is_err());
    }
    assert!(run_bbbc(&BbbcParams { generations: 0, ..BbbcParams::default() }, &p, 0).is_err());
    assert!(run_bbbc(&BbbcParams { population_size: 1, ..BbbcParams::default() }, &p, 0).is_err());
}

#[test]
fn runs_are_identical_across_worker_counts() {
    let p = sphere(4);
    let ga = GaParams {
        population_size: 40,
        generations: 15,
        ..GaParams::default()
    };
    let bb = BbbcParams {
        population_size: 40,
        generations: 15,
        ..BbbcParams::default()
    };
    let a = pool(1).install(|| (run_ga(&ga, &p, 11).unwrap(), run_bbbc(&bb, &p, 11).unwrap()));
    let b = pool(4).install(|| (run_ga(&ga, &p, 11).unwrap(), run_bbbc(&bb, &p, 11).unwrap()));
    assert_eq!(serde_json::to_string(&a.0).unwrap(), serde_json::to_string(&b.0).unwrap());
    assert_eq!(serde_json::to_string(&a.1).unwrap(), serde_json::to_string(&b.1).unwrap());
    let c = run_ga(&ga, &p, 12).unwrap();
    assert_ne!(a.0.best.genes, c.best.genes);
}

/// Records every point it is asked to evaluate.
struct Watch {
    inner: Sphere,
    seen: std::sync::Mutex<Vec<Vec<f64>>>,
}

impl Problem for Watch {
    fn bounds(&self) -> &DesignBounds {
        self.inner.bounds()
    }
    fn evaluate(&self, genes: &[f64]) -> Fitness {
        self.seen.lock().unwrap().push(genes.to_vec());
        self.inner.evaluate(genes)
    }
    fn fingerprint(&self) -> String {
        self.inner.fingerprint()
    }
}

#[test]
fn every_evaluated_point_is_in_bounds() {
    // optimum sits on a corner, so operators push against the bounds
    let b = DesignBounds::uniform(3, 0.0, 1.0).unwrap();
    let w = Watch {
        inner: Sphere::with_center(b.clone(), vec![1.0, 0.0, 1.0]).unwrap(),
        seen: Default::default(),
    };
    let ga = GaParams {
        population_size: 30,
        generations: 20,
        mutation_probability: 0.9,
        ..GaParams::default()
    };
    run_ga(&ga, &w, 3).unwrap();
    let bb = BbbcParams {
        population_size: 30,
        generations: 20,
        bang_scale: 3.0,
        ..BbbcParams::default()
    };
    run_bbbc(&bb, &w, 3).unwrap();
    let seen = w.seen.lock().unwrap();
    assert_eq!(seen.len(), 30 * 21 + 30 * 20);
    assert!(seen.iter().all(|g| b.contains(g)));
}

#[test]
fn tournament_share_of_a_dominant_individual() {
    // The best of n individuals wins every tournament it enters, so its
    // expected number of copies is n·(1 − (1 − 1/n)²), which tends to 2.
    let n = 200;
    let mut pop: Vec<Individual> = (0..n)
        .map(|i| Individual {
            genes: vec![i as f64],
            fitness: Fitness::feasible(0.0),
        })
        .collect();
    pop[17].fitness = Fitness::feasible(1.0);
    let trials = 2000;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let total: usize = (0..trials)
        .map(|_| tournament_select(&pop, &mut rng).iter().filter(|&&i| i == 17).count())
        .sum();
    let expected = n as f64 * (1.0 - (1.0 - 1.0 / n as f64).powi(2));
    let mean = total as f64 / trials as f64;
    assert!((mean - expected).abs() < 0.1, "{mean} vs {expected}");

    // share of winners drawn from the better half is 1 − (1/2)² = 3/4
    for (i, p) in pop.iter_mut().enumerate() {
        p.fitness = Fitness::feasible(i as f64);
    }
    let wins: usize = (0..trials)
        .map(|_| tournament_select(&pop, &mut rng).iter().filter(|&&i| i >= n / 2).count())
        .sum();
    let share = wins as f64 / (trials * n) as f64;
    assert!((share - 0.75).abs() < 0.005, "{share}");
}

#[test]
fn blx_children_statistics() {
    let b = DesignBounds::uniform(1, -1e9, 1e9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut sum = 0.0;
    let n = 50_000;
    for _ in 0..n {
        let (c1, c2) = blx_crossover(&[10.0], &[20.0], 0.5, 1.0, &b, &mut rng);
        for c in [c1[0], c2[0]] {
            assert!((5.0..=25.0).contains(&c));
            sum += c;
        }
    }
    assert!((sum / (2 * n) as f64 - 15.0).abs() < 0.15);
}

#[test]
fn bang_spread_shrinks_with_iteration() {
    let b = DesignBounds::six_dv();
    let cm: Vec<f64> = (0..6).map(|i| 0.5 * (b.lower[i] + b.upper[i])).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let sd = |i: usize, rng: &mut ChaCha8Rng| {
        let xs: Vec<f64> = (0..20_000).map(|_| bang_spread(&cm, i, 1.0, &b, rng)[0]).collect();
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
    };
    let (s2, s4) = (sd(2, &mut rng), sd(4, &mut rng));
    assert!((s2 / s4 - 2.0).abs() < 0.1);
}

#[test]
fn deb_order_is_a_total_preorder_on_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    use rand::Rng;
    let pop: Vec<Individual> = (0..60)
        .map(|_| Individual {
            genes: vec![rng.random_range(0..3) as f64],
            fitness: Fitness {
                objective: rng.random_range(0..4) as f64,
                violation: if rng.random_bool(0.5) { 0.0 } else { rng.random_range(1..4) as f64 },
            },
        })
        .collect();
    for a in &pop {
        for b in &pop {
            assert_eq!(deb_compare(a, b), deb_compare(b, a).reverse());
            for c in &pop {
                if deb_compare(a, b).is_le() && deb_compare(b, c).is_le() {
                    assert!(deb_compare(a, c).is_le());
                }
            }
        }
    }
    // infeasible ties share violation and genes, so compare on the ranking key
    let key = |p: &Individual| {
        let obj = if p.fitness.is_feasible() { p.fitness.objective } else { 0.0 };
        (p.fitness.violation, obj, p.genes.clone())
    };
    let mut s1 = pop.clone();
    let mut s2 = pop.clone();
    s2.reverse();
    s1.sort_by(deb_compare);
    s2.sort_by(deb_compare);
    let k1: Vec<_> = s1.iter().map(key).collect();
    let k2: Vec<_> = s2.iter().map(key).collect();
    assert_eq!(k1, k2);
}
