//! Exhaustive enumeration of a discretized design space.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evo::deb::{deb_compare, Individual};
use crate::problem::{DesignBounds, Problem};

pub const CHECKPOINT_VERSION: u32 = 1;
pub const DEFAULT_SAFETY_CAP: u128 = 10_000_000;

/// A rectangular grid: per-variable points `lower + k·step` up to `upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub bounds: DesignBounds,
    pub steps: Vec<f64>,
}

impl GridSpec {
    pub fn new(bounds: DesignBounds, steps: Vec<f64>) -> Result<Self> {
        if steps.len() != bounds.dim() {
            return Err(Error::InvalidParameter(format!(
                "grid needs {} steps, got {}",
                bounds.dim(),
                steps.len()
            )));
        }
        if let Some(s) = steps.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(Error::InvalidParameter(format!("grid step must be positive, got {s}")));
        }
        Ok(GridSpec { bounds, steps })
    }

    pub fn uniform_step(bounds: DesignBounds, step: f64) -> Result<Self> {
        let n = bounds.dim();
        Self::new(bounds, vec![step; n])
    }

    pub fn points_per_variable(&self) -> Vec<u64> {
        (0..self.bounds.dim())
            .map(|i| {
                let q = self.bounds.width(i) / self.steps[i];
                // Absorb rounding so that e.g. 0.3 / 0.1 counts as 3 intervals.
                (q + q.abs() * 1e-12).floor() as u64 + 1
            })
            .collect()
    }

    /// Genes of the grid point with row-major linear index `index` (the first
    /// variable varies slowest).
    pub fn point(&self, mut index: u128) -> Vec<f64> {
        let counts = self.points_per_variable();
        let mut genes = vec![0.0; counts.len()];
        for i in (0..counts.len()).rev() {
            let c = counts[i] as u128;
            let k = (index % c) as f64;
            index /= c;
            genes[i] = (self.bounds.lower[i] + k * self.steps[i]).min(self.bounds.upper[i]);
        }
        genes
    }

    pub fn hash(&self, problem_fingerprint: &str) -> String {
        let spec = serde_json::to_string(self).expect("grid spec serializes");
        crate::hash_hex(format!("{spec}\n{problem_fingerprint}").as_bytes())
    }
}

/// Exact number of grid points.
pub fn grid_cardinality(spec: &GridSpec) -> u128 {
    spec.points_per_variable()
        .into_iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c as u128))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCheckpoint {
    pub format_version: u32,
    pub spec_hash: String,
    /// Number of points evaluated, i.e. the next linear index to visit.
    pub next_index: u64,
    pub best: Option<Individual>,
}

impl GridCheckpoint {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let ck: GridCheckpoint =
            serde_json::from_str(&text).map_err(|e| Error::Serde(format!("checkpoint {}: {e}", path.display())))?;
        if ck.format_version != CHECKPOINT_VERSION {
            return Err(Error::Serde(format!(
                "checkpoint {} has format_version {}, expected {CHECKPOINT_VERSION}",
                path.display(),
                ck.format_version
            )));
        }
        Ok(ck)
    }

    /// Writes through a temporary file and renames, so a crash never leaves
    /// a truncated checkpoint.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Serde(e.to_string()))?;
        fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }
}

#[derive(Debug, Clone)]
pub struct GridOptions {
    pub safety_cap: u128,
    pub force: bool,
    /// Where to write checkpoints; none are written when absent.
    pub checkpoint: Option<PathBuf>,
    /// Points between checkpoint writes.
    pub checkpoint_every: u64,
    /// Continue from this checkpoint file.
    pub resume: Option<PathBuf>,
    /// Stop once this many points in total have been visited.
    pub stop_after: Option<u64>,
    /// Points evaluated in parallel between reductions.
    pub batch: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            safety_cap: DEFAULT_SAFETY_CAP,
            force: false,
            checkpoint: None,
            checkpoint_every: 10_000,
            resume: None,
            stop_after: None,
            batch: 1024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub best: Individual,
    pub visited: u64,
    pub cardinality: u128,
    pub complete: bool,
    #[serde(skip)]
    pub wall_time_secs: f64,
}

/// Evaluates every grid point once, in linear-index order, and keeps the
/// Deb-best. The result does not depend on the batch size or thread count.
pub fn run_grid<P: Problem + ?Sized>(spec: &GridSpec, problem: &P, opts: &GridOptions) -> Result<GridResult> {
    if spec.bounds != *problem.bounds() {
        return Err(Error::InvalidParameter("grid bounds differ from the problem bounds".into()));
    }
    let started = Instant::now();
    let cardinality = grid_cardinality(spec);
    if cardinality > opts.safety_cap && !opts.force {
        let probe = cardinality.min(8) as u64;
        let t = Instant::now();
        (0..probe).for_each(|i| {
            problem.evaluate(&spec.point(i as u128));
        });
        let per_point = t.elapsed().as_secs_f64() / probe as f64;
        return Err(Error::GridTooLarge {
            cardinality,
            cap: opts.safety_cap,
            estimate_secs: per_point * cardinality as f64,
        });
    }
    let total = u64::try_from(cardinality)
        .map_err(|_| Error::InvalidParameter(format!("grid of {cardinality} points cannot be indexed")))?;
    let hash = spec.hash(&problem.fingerprint());

    let mut ck = match &opts.resume {
        Some(path) => {
            let ck = GridCheckpoint::load(path)?;
            if ck.spec_hash != hash {
                return Err(Error::CheckpointMismatch {
                    path: path.clone(),
                    expected: hash,
                    found: ck.spec_hash,
                });
            }
            if ck.next_index > total {
                return Err(Error::Serde(format!("checkpoint {} is past the end of the grid", path.display())));
            }
            ck
        }
        None => GridCheckpoint {
            format_version: CHECKPOINT_VERSION,
            spec_hash: hash,
            next_index: 0,
            best: None,
        },
    };

    let stop = opts.stop_after.map_or(total, |s| s.min(total));
    let batch = opts.batch.max(1) as u64;
    let mut since_save = 0u64;
    while ck.next_index < stop {
        let end = (ck.next_index + batch).min(stop);
        let evaluated: Vec<Individual> = (ck.next_index..end)
            .into_par_iter()
            .map(|i| {
                let genes = spec.point(i as u128);
                let fitness = problem.evaluate(&genes);
                Individual { genes, fitness }
            })
            .collect();
        for ind in evaluated {
            if ck.best.as_ref().is_none_or(|b| deb_compare(&ind, b).is_lt()) {
                ck.best = Some(ind);
            }
        }
        since_save += end - ck.next_index;
        ck.next_index = end;
        if let Some(path) = &opts.checkpoint {
            if since_save >= opts.checkpoint_every || ck.next_index == stop {
                ck.save(path)?;
                since_save = 0;
            }
        }
    }
    let best = ck
        .best
        .ok_or_else(|| Error::InvalidParameter("grid run visited no points".into()))?;
    Ok(GridResult {
        best,
        visited: ck.next_index,
        cardinality,
        complete: ck.next_index == total,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}
