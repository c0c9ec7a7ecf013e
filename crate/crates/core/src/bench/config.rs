//! Experiment configuration files (TOML).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evo::{Algorithm, BbbcParams, GaParams};
use crate::grid::{GridOptions, GridSpec, DEFAULT_SAFETY_CAP};
use crate::problem::{DesignBounds, ExoProblem, Fitness, Problem, ProblemConfig, Sphere};

pub const CONFIG_VERSION: u32 = 1;

/// Environment variable overriding the configured worker count.
pub const WORKERS_ENV: &str = "LINKOPT_WORKERS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub format_version: u32,
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    /// Run `i` (0-based) uses seed `base_seed + i` unless `seeds` is given.
    #[serde(default = "default_base_seed")]
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    /// Thread count; 0 uses all cores.
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_formats")]
    pub formats: Vec<ReportFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemConfig>,
    /// Sphere surrogate instead of the linkage problem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sphere: Option<SphereConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bf: Option<BfParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ga: Option<GaParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bbbc: Option<BbbcParams>,
}

fn default_name() -> String {
    "experiment".into()
}
fn default_repetitions() -> usize {
    20
}
fn default_base_seed() -> u64 {
    1
}
fn default_output() -> PathBuf {
    PathBuf::from("results")
}
fn default_formats() -> Vec<ReportFormat> {
    vec![ReportFormat::Csv, ReportFormat::Json]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    /// `runs.csv` and `traces.csv`.
    Csv,
    /// `summary.json`.
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereConfig {
    pub dim: usize,
    pub lower: f64,
    pub upper: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
}

/// Brute-force grid settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BfParams {
    /// Step for every variable (mm).
    pub step: f64,
    /// Per-variable steps, overriding `step`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<f64>>,
    pub safety_cap: u64,
    pub force: bool,
    pub checkpoint_every: u64,
}

impl Default for BfParams {
    fn default() -> Self {
        BfParams {
            step: 1.0,
            steps: None,
            safety_cap: DEFAULT_SAFETY_CAP as u64,
            force: false,
            checkpoint_every: 10_000,
        }
    }
}

impl BfParams {
    pub fn spec(&self, bounds: &DesignBounds) -> Result<GridSpec> {
        match &self.steps {
            Some(s) => GridSpec::new(bounds.clone(), s.clone()),
            None => GridSpec::uniform_step(bounds.clone(), self.step),
        }
    }

    pub fn options(&self) -> GridOptions {
        GridOptions {
            safety_cap: self.safety_cap as u128,
            force: self.force,
            checkpoint_every: self.checkpoint_every,
            ..GridOptions::default()
        }
    }
}

/// Either problem an experiment can run on.
#[derive(Debug, Clone)]
pub enum AnyProblem {
    Exo(ExoProblem),
    Sphere(Sphere),
}

impl AnyProblem {
    pub fn as_exo(&self) -> Option<&ExoProblem> {
        match self {
            AnyProblem::Exo(p) => Some(p),
            AnyProblem::Sphere(_) => None,
        }
    }
}

impl Problem for AnyProblem {
    fn bounds(&self) -> &DesignBounds {
        match self {
            AnyProblem::Exo(p) => p.bounds(),
            AnyProblem::Sphere(p) => p.bounds(),
        }
    }

    fn evaluate(&self, genes: &[f64]) -> Fitness {
        match self {
            AnyProblem::Exo(p) => p.evaluate(genes),
            AnyProblem::Sphere(p) => p.evaluate(genes),
        }
    }

    fn fingerprint(&self) -> String {
        match self {
            AnyProblem::Exo(p) => p.fingerprint(),
            AnyProblem::Sphere(p) => p.fingerprint(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml_str(&text)?;
        // Relative paths inside the file are relative to the file.
        let base = path.parent().unwrap_or(Path::new(""));
        if cfg.output_dir.is_relative() {
            cfg.output_dir = base.join(&cfg.output_dir);
        }
        if let Some(p) = cfg.problem.as_mut() {
            if let Some(m) = p.model.as_mut() {
                if m.is_relative() {
                    *m = base.join(&*m);
                }
            }
        }
        Ok(cfg)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.format_version != CONFIG_VERSION {
            return bad(format!(
                "unsupported format_version {} (expected {CONFIG_VERSION})",
                self.format_version
            ));
        }
        if self.repetitions < 1 {
            return bad("repetitions must be at least 1".into());
        }
        if let Some(s) = &self.seeds {
            if s.len() != self.repetitions {
                return bad(format!("{} seeds listed for {} repetitions", s.len(), self.repetitions));
            }
        }
        if self.formats.is_empty() {
            return bad("formats must name at least one report format".into());
        }
        if self.problem.is_some() && self.sphere.is_some() {
            return bad("give either [problem] or [sphere], not both".into());
        }
        if self.algorithms().is_empty() {
            return bad("no algorithm blocks ([bf], [ga], [bbbc])".into());
        }
        let wrap = |r: Result<()>| r.map_err(|e| Error::Config(e.to_string()));
        if let Some(p) = &self.problem {
            wrap(p.validate())?;
        }
        if let Some(s) = &self.sphere {
            wrap(self.sphere_problem(s).map(|_| ()))?;
        }
        if let Some(g) = &self.ga {
            wrap(g.validate())?;
        }
        if let Some(b) = &self.bbbc {
            wrap(b.validate())?;
        }
        if let Some(bf) = &self.bf {
            let bounds = match &self.sphere {
                Some(s) => DesignBounds::uniform(s.dim, s.lower, s.upper),
                None => Ok(DesignBounds::for_mode(self.problem.clone().unwrap_or_default().bounds)),
            };
            wrap(bounds.and_then(|b| bf.spec(&b)).map(|_| ()))?;
        }
        Ok(())
    }

    pub fn algorithms(&self) -> Vec<Algorithm> {
        let mut v = Vec::new();
        if self.bf.is_some() {
            v.push(Algorithm::Bf);
        }
        if self.ga.is_some() {
            v.push(Algorithm::Ga);
        }
        if self.bbbc.is_some() {
            v.push(Algorithm::Bbbc);
        }
        v
    }

    pub fn seed_list(&self) -> Vec<u64> {
        match &self.seeds {
            Some(s) => s.clone(),
            None => (0..self.repetitions as u64).map(|i| self.base_seed + i).collect(),
        }
    }

    fn sphere_problem(&self, s: &SphereConfig) -> Result<Sphere> {
        let b = DesignBounds::uniform(s.dim, s.lower, s.upper)?;
        match &s.center {
            Some(c) => Sphere::with_center(b, c.clone()),
            None => Ok(Sphere::new(b)),
        }
    }

    pub fn build_problem(&self) -> Result<AnyProblem> {
        match &self.sphere {
            Some(s) => Ok(AnyProblem::Sphere(self.sphere_problem(s)?)),
            None => Ok(AnyProblem::Exo(ExoProblem::from_config(
                self.problem.clone().unwrap_or_default(),
            )?)),
        }
    }

    /// Worker count after the environment override; 0 means all cores.
    pub fn effective_workers(&self) -> Result<usize> {
        match std::env::var(WORKERS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{WORKERS_ENV}={v:?} is not a worker count"))),
            Err(_) => Ok(self.workers),
        }
    }

    /// Hash of everything that determines run results. Worker count, output
    /// location and report formats are excluded.
    pub fn results_hash(&self) -> String {
        let mut c = self.clone();
        c.workers = 0;
        c.output_dir = PathBuf::new();
        c.formats = Vec::new();
        c.name = String::new();
        crate::hash_hex(serde_json::to_string(&c).expect("config serializes").as_bytes())
    }
}
