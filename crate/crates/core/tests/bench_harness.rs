use std::fs;
use std::path::Path;

use linkage_opt::bench::stats::{f_sf, mean, t_two_tailed, variance};
use linkage_opt::bench::{
    aggregate, load_runs, one_way_anova, report_from_dir, run_experiment, two_sample_t, ExperimentConfig,
    RunRecord,
};
use linkage_opt::evo::Algorithm;
use linkage_opt::Error;
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

fn sphere_config(out: &Path, extra: &str) -> ExperimentConfig {
    let text = format!(
        r#"
format_version = 1
name = "sphere"
repetitions = 3
base_seed = 5
output_dir = "{}"
{extra}

[sphere]
dim = 3
lower = -4.0
upper = 4.0

[ga]
population_size = 20
generations = 8

[bbbc]
population_size = 20
generations = 8
"#,
        out.display()
    );
    ExperimentConfig::from_toml_str(&text).unwrap()
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .filter(|(n, _)| !n.ends_with(".time.json"))
        .collect();
    v.sort();
    v
}

#[test]
fn statistics_are_recomputable_from_run_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sphere_config(dir.path(), "");
    let report = run_experiment(&cfg).unwrap();

    let (records, timings) = load_runs(dir.path()).unwrap();
    assert_eq!(records.len(), 6);
    assert_eq!(timings.len(), 6);
    assert!(dir.path().join("runs/ga_seed5.json").exists());
    assert!(dir.path().join("runs/bbbc_seed7.time.json").exists());

    for s in &report.algorithms {
        let obj: Vec<f64> = records
            .iter()
            .filter(|r| r.algorithm == s.algorithm)
            .map(|r| r.result.as_ref().unwrap().best_objective.unwrap())
            .collect();
        let opt = s.optimality.as_ref().unwrap();
        assert_eq!(opt.n, 3);
        assert!((opt.mean - obj.iter().sum::<f64>() / 3.0).abs() < 1e-12);
        let m = opt.mean;
        let sd = (obj.iter().map(|x| (x - m).powi(2)).sum::<f64>() / 2.0).sqrt();
        assert!((opt.std - sd).abs() < 1e-12);
        let mut sorted = obj.clone();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(opt.median, sorted[1]);
    }
    let an = report.statistics.anova.as_ref().unwrap();
    let g: Vec<Vec<f64>> = [Algorithm::Ga, Algorithm::Bbbc]
        .iter()
        .map(|a| {
            records
                .iter()
                .filter(|r| r.algorithm == *a)
                .map(|r| r.result.as_ref().unwrap().best_objective.unwrap())
                .collect()
        })
        .collect();
    let all: Vec<f64> = g.concat();
    let gm = mean(&all);
    let ssb: f64 = g.iter().map(|x| x.len() as f64 * (mean(x) - gm).powi(2)).sum();
    let ssw: f64 = g.iter().map(|x| variance(x) * (x.len() - 1) as f64).sum();
    let f = (ssb / 1.0) / (ssw / 4.0);
    assert!((an.f - f).abs() <= 1e-12 * f.max(1.0));
    assert!((an.eta_squared - ssb / (ssb + ssw)).abs() < 1e-12);

    let rebuilt = report_from_dir(dir.path()).unwrap();
    assert_eq!(serde_json::to_value(&rebuilt).unwrap(), serde_json::to_value(&report).unwrap());
}

#[test]
fn runs_csv_matches_the_records() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_experiment(&sphere_config(dir.path(), "")).unwrap();
    let mut rdr = csv::Reader::from_path(dir.path().join("runs.csv")).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "algorithm", "seed", "status", "objective", "violation", "run_time_s",
            "convergence_generation", "evaluations", "error", "x0", "x1", "x2"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    for s in &report.algorithms {
        let obj: Vec<f64> = rows
            .iter()
            .filter(|r| r[0] == s.algorithm.to_string())
            .map(|r| r[3].parse().unwrap())
            .collect();
        let opt = s.optimality.as_ref().unwrap();
        assert!((obj.iter().sum::<f64>() / obj.len() as f64 - opt.mean).abs() < 1e-12);
        let evals: Vec<f64> = rows
            .iter()
            .filter(|r| r[0] == s.algorithm.to_string())
            .map(|r| r[7].parse().unwrap())
            .collect();
        assert_eq!(evals[0], s.evaluations.as_ref().unwrap().mean);
    }
    let traces = fs::read_to_string(dir.path().join("traces.csv")).unwrap();
    assert_eq!(traces.lines().count(), 1 + 6 * 8);
}

#[test]
fn reruns_are_byte_identical_and_worker_independent() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_experiment(&sphere_config(a.path(), "workers = 1")).unwrap();
    run_experiment(&sphere_config(b.path(), "workers = 4")).unwrap();
    assert_eq!(read_dir_bytes(&a.path().join("runs")), read_dir_bytes(&b.path().join("runs")));
    let csv_a = fs::read_to_string(a.path().join("runs.csv")).unwrap();
    let csv_b = fs::read_to_string(b.path().join("runs.csv")).unwrap();
    let strip = |s: &str| -> Vec<String> {
        s.lines().map(|l| l.split(',').enumerate().filter(|(i, _)| *i != 5).map(|(_, c)| c).collect()).collect()
    };
    assert_eq!(strip(&csv_a), strip(&csv_b));
}

#[test]
fn a_run_does_not_depend_on_its_siblings() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_experiment(&sphere_config(a.path(), "")).unwrap();
    let mut solo = sphere_config(b.path(), "");
    solo.repetitions = 1;
    solo.seeds = Some(vec![6]);
    solo.bbbc = None;
    run_experiment(&solo).unwrap();
    let read = |d: &Path| -> RunRecord {
        serde_json::from_str(&fs::read_to_string(d.join("runs/ga_seed6.json")).unwrap()).unwrap()
    };
    assert_eq!(
        serde_json::to_value(read(a.path()).result).unwrap(),
        serde_json::to_value(read(b.path()).result).unwrap()
    );
}

#[test]
fn single_repetition_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = sphere_config(dir.path(), "");
    cfg.repetitions = 1;
    let report = run_experiment(&cfg).unwrap();
    assert!(report.single_repetition);
    assert!(report.warnings.iter().any(|w| w.contains("single repetition")));
    for s in &report.algorithms {
        assert_eq!(s.optimality.as_ref().unwrap().std, 0.0);
    }
    assert!(report.statistics.anova.is_none());
}

#[test]
fn invalid_configs_abort_before_any_run() {
    let dir = tempfile::tempdir().unwrap();
    let base = sphere_config(dir.path(), "");
    let text = toml::to_string(&base).unwrap();
    for bad in [
        text.replace("format_version = 1", "format_version = 9"),
        text.replace("repetitions = 3", "repetitions = 0"),
        format!("formats = []\n{text}"),
        format!("{text}\n[bf]\nstep = -1.0\n"),
        text.replace("population_size = 20\ngenerations = 8\ncrossover", "population_size = 21\ngenerations = 8\ncrossover"),
        format!("unknown_key = 3\n{text}"),
    ] {
        let err = ExperimentConfig::from_toml_str(&bad).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");
    }
    let mut cfg = base.clone();
    cfg.ga.as_mut().unwrap().mutation_probability = 2.0;
    assert!(run_experiment(&cfg).is_err());
    assert!(!dir.path().join("runs").exists());
}

#[test]
fn unwritable_output_leaves_no_summary() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("out");
    let err = run_experiment(&sphere_config(&out, "")).unwrap_err();
    assert!(matches!(err, Error::Io { .. }), "{err}");
    assert!(!out.join("summary.json").exists());
}

#[test]
fn failed_runs_are_kept_and_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sphere_config(dir.path(), "");
    run_experiment(&cfg).unwrap();
    let (mut records, timings) = load_runs(dir.path()).unwrap();
    records[0].result = None;
    records[0].error = Some("solver exploded".into());
    let problem = cfg.build_problem().unwrap();
    let report = aggregate(&cfg, &problem, &records, &timings).unwrap();
    let failed: usize = report.algorithms.iter().map(|s| s.failed).sum();
    assert_eq!(failed, 1);
    assert!((report.failed_fraction - 1.0 / 6.0).abs() < 1e-15);
    assert!(report.warnings.iter().any(|w| w.contains("solver exploded")));
    assert!(report.warnings.iter().any(|w| w.contains("% of runs failed")));
}

#[test]
fn p_values_agree_with_statrs() {
    for (f, d1, d2) in [(3.0, 2.0, 6.0), (0.4, 3.0, 17.0), (12.5, 1.0, 38.0), (1.0, 5.0, 5.0)] {
        let want = 1.0 - FisherSnedecor::new(d1, d2).unwrap().cdf(f);
        assert!((f_sf(f, d1, d2) - want).abs() < 1e-8, "F({d1},{d2})={f}");
    }
    for (t, df) in [(-2.449489742783178f64, 4.0), (0.3, 10.0), (4.1, 38.0), (1.0, 1.0)] {
        let want = 2.0 * (1.0 - StudentsT::new(0.0, 1.0, df).unwrap().cdf(t.abs()));
        assert!((t_two_tailed(t, df) - want).abs() < 1e-8, "t({df})={t}");
    }
    let a = [3.1, 2.7, 4.4, 3.9, 3.0];
    let b = [4.2, 5.1, 3.8, 4.9];
    let w = two_sample_t(&a, &b, true).unwrap();
    let want = 2.0 * StudentsT::new(0.0, 1.0, w.df).unwrap().cdf(-w.t.abs());
    assert!((w.p - want).abs() < 1e-8);
}

#[test]
fn degenerate_statistics() {
    let g = [1.0, 2.0, 3.0];
    let an = one_way_anova(&[&g, &g, &g]).unwrap();
    assert_eq!((an.f, an.eta_squared), (0.0, 0.0));
    let t = two_sample_t(&g, &g, false).unwrap();
    assert_eq!((t.t, t.p), (0.0, 1.0));
    let an = one_way_anova(&[&[1.0, 1.0], &[2.0, 2.0]]).unwrap();
    assert_eq!(an.f, f64::INFINITY);
    let t = two_sample_t(&[2.0, 2.0], &[2.0, 2.0], true).unwrap();
    assert_eq!(t.t, 0.0);
    assert!(one_way_anova(&[&[1.0, 2.0]]).is_err());
    assert!(two_sample_t(&[1.0], &[1.0, 2.0], false).is_err());
}
