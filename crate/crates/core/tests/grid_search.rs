use linkage_opt::grid::{run_grid, GridCheckpoint, GridOptions, GridSpec};
use linkage_opt::problem::{DesignBounds, DvMode, ExoProblem, Problem, Sphere};
use linkage_opt::Error;

fn sphere_grid() -> (Sphere, GridSpec) {
    let b = DesignBounds::uniform(3, -2.0, 2.0).unwrap();
    let p = Sphere::with_center(b.clone(), vec![0.3, -1.1, 0.7]).unwrap();
    (p, GridSpec::uniform_step(b, 0.25).unwrap())
}

#[test]
fn interrupted_and_resumed_run_matches_a_full_run() {
    let (p, spec) = sphere_grid();
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    let full = run_grid(&spec, &p, &GridOptions { batch: 100, ..GridOptions::default() }).unwrap();
    assert_eq!(full.visited, 17 * 17 * 17);
    assert_eq!(full.best.genes, vec![0.25, -1.0, 0.75]);

    let half = full.visited / 2;
    let first = run_grid(
        &spec,
        &p,
        &GridOptions {
            checkpoint: Some(ck.clone()),
            checkpoint_every: 300,
            stop_after: Some(half),
            batch: 77,
            ..GridOptions::default()
        },
    )
    .unwrap();
    assert!(!first.complete);
    assert_eq!(first.visited, half);
    assert_eq!(GridCheckpoint::load(&ck).unwrap().next_index, half);

    let resumed = run_grid(
        &spec,
        &p,
        &GridOptions {
            checkpoint: Some(ck.clone()),
            resume: Some(ck.clone()),
            batch: 500,
            ..GridOptions::default()
        },
    )
    .unwrap();
    assert!(resumed.complete);
    assert_eq!(resumed.visited, full.visited);
    assert_eq!(resumed.best, full.best);
}

#[test]
fn checkpoint_from_another_grid_is_rejected() {
    let (p, spec) = sphere_grid();
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    run_grid(
        &spec,
        &p,
        &GridOptions {
            checkpoint: Some(ck.clone()),
            stop_after: Some(50),
            ..GridOptions::default()
        },
    )
    .unwrap();
    let other = GridSpec::uniform_step(spec.bounds.clone(), 0.5).unwrap();
    let err = run_grid(&other, &p, &GridOptions { resume: Some(ck.clone()), ..GridOptions::default() }).unwrap_err();
    assert!(matches!(err, Error::CheckpointMismatch { .. }), "{err}");

    let moved = Sphere::with_center(spec.bounds.clone(), vec![0.0; 3]).unwrap();
    assert_ne!(moved.fingerprint(), p.fingerprint());
    let err = run_grid(&spec, &moved, &GridOptions { resume: Some(ck), ..GridOptions::default() }).unwrap_err();
    assert!(matches!(err, Error::CheckpointMismatch { .. }), "{err}");
}

#[test]
fn corrupt_or_missing_checkpoint_is_an_error() {
    let (p, spec) = sphere_grid();
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    std::fs::write(&ck, "{\"format_version\": 1, \"spec_hash\": ").unwrap();
    let opts = GridOptions { resume: Some(ck), ..GridOptions::default() };
    assert!(matches!(run_grid(&spec, &p, &opts).unwrap_err(), Error::Serde(_)));
    let opts = GridOptions { resume: Some(dir.path().join("absent.json")), ..GridOptions::default() };
    assert!(matches!(run_grid(&spec, &p, &opts).unwrap_err(), Error::Io { .. }));
}

#[test]
fn oversized_grid_needs_force() {
    let p = ExoProblem::bundled(DvMode::Six);
    let spec = GridSpec::uniform_step(DesignBounds::six_dv(), 1.0).unwrap();
    match run_grid(&spec, &p, &GridOptions::default()).unwrap_err() {
        Error::GridTooLarge { cardinality, cap, estimate_secs } => {
            assert_eq!(cardinality, 905_219_763);
            assert_eq!(cap, 10_000_000);
            assert!(estimate_secs > 0.0);
        }
        e => panic!("{e}"),
    }
    let err = run_grid(&spec, &Sphere::new(DesignBounds::uniform(6, 0.0, 1.0).unwrap()), &GridOptions::default())
        .unwrap_err();
    assert!(matches!(err, Error::InvalidParameter(_)));
}

#[test]
fn coarse_exo_grid_finds_a_feasible_design() {
    let p = ExoProblem::bundled(DvMode::Six);
    let b = DesignBounds::six_dv();
    let steps = (0..6).map(|i| b.width(i) / 2.0).collect();
    let spec = GridSpec::new(b, steps).unwrap();
    let r = run_grid(&spec, &p, &GridOptions::default()).unwrap();
    assert_eq!(r.visited, 729);
    assert!(r.best.fitness.is_feasible());
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let again = one.install(|| run_grid(&spec, &p, &GridOptions { batch: 5, ..GridOptions::default() })).unwrap();
    assert_eq!(again.best, r.best);
}
