use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::index;

use super::{jitter_pattern, sample_nhpp, IntensityGrid, NoiseKind, NoiseSpec};
use crate::depth::DepthKind;
use crate::error::{Error, Result};
use crate::geometry::{CartesianPoint, PointPattern};
use crate::hyptest::{run_method_with, RunOptions, TestMethod, TestResult};
use crate::seed;
use crate::special;

const TYPE1: u64 = 0x7431;
const POWER: u64 = 0x7077;
const POOL: u64 = 1;
const PAIRS: u64 = 2;
const BASE: u64 = 3;
const NOISE: u64 = 4;
const REGEN: u64 = 5;

/// Runs independent jobs `0..n` and returns their results in index order.
pub trait Executor {
    fn map_indexed<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send;
}

/// Runs jobs one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Named intensity maps, one group per design.
    pub designs: Vec<(String, IntensityGrid)>,
    /// Realizations per design in the type-I pool.
    pub pool_size: usize,
    /// Same-design pairs tested per design in the type-I experiment.
    pub pairs: usize,
    /// Tests per magnitude in the power experiment.
    pub replications: usize,
    pub alpha: f64,
    pub seed: u64,
    pub methods: Vec<TestMethod>,
    pub origin: CartesianPoint,
    pub depth: DepthKind,
    /// Confidence level of the rejection-rate intervals.
    pub ci_level: f64,
}

impl ExperimentConfig {
    /// Desk-scale defaults: 100 realizations, 200 pairs, 100 power tests.
    pub fn new(designs: Vec<(String, IntensityGrid)>, seed: u64) -> Self {
        Self {
            designs,
            pool_size: 100,
            pairs: 200,
            replications: 100,
            alpha: 0.05,
            seed,
            methods: TestMethod::COMPARISON.to_vec(),
            origin: CartesianPoint::ORIGIN,
            depth: DepthKind::Tukey,
            ci_level: 0.95,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.designs.is_empty() {
            return Err(Error::InvalidParameter("at least one design is required"));
        }
        if self.replications == 0 || self.pairs == 0 {
            return Err(Error::InvalidParameter("replications must be at least 1"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter("alpha must lie in (0, 1)"));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(Error::InvalidParameter("confidence level must lie in (0, 1)"));
        }
        if self.methods.is_empty() || self.methods.iter().any(|m| !m.is_two_sample()) {
            return Err(Error::InvalidParameter("methods must be a non-empty subset of M1..M6"));
        }
        Ok(())
    }

    fn options(&self) -> RunOptions {
        RunOptions { origin: self.origin, depth: self.depth }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    tests: usize,
    rejections: usize,
    failures: usize,
    p_sum: f64,
}

impl Tally {
    fn add(&mut self, r: &Result<TestResult>) {
        match r {
            Ok(r) => {
                self.tests += 1;
                self.p_sum += r.p_value;
                if r.reject {
                    self.rejections += 1;
                }
            }
            Err(_) => self.failures += 1,
        }
    }

    fn mean_p(&self) -> f64 {
        if self.tests == 0 {
            f64::NAN
        } else {
            self.p_sum / self.tests as f64
        }
    }

    fn interval(&self, level: f64) -> (f64, f64) {
        if self.tests == 0 {
            (0.0, 1.0)
        } else {
            special::clopper_pearson(self.rejections as u64, self.tests as u64, level)
        }
    }
}

/// Rejections for one (design, method) cell of the type-I experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Type1Row {
    pub design: String,
    pub method: TestMethod,
    pub tests: usize,
    pub rejections: usize,
    /// Tests that could not be computed (e.g. undersized realizations).
    pub failures: usize,
    pub mean_p: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Type1Row {
    pub fn rate(&self) -> f64 {
        self.rejections as f64 / self.tests as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Type1Table {
    pub alpha: f64,
    pub ci_level: f64,
    pub rows: Vec<Type1Row>,
}

impl Type1Table {
    pub fn row(&self, design: &str, method: TestMethod) -> Option<&Type1Row> {
        self.rows.iter().find(|r| r.design == design && r.method == method)
    }

    /// Rejections and tests summed over designs for `method`.
    pub fn total(&self, method: TestMethod) -> (usize, usize) {
        self.rows.iter().filter(|r| r.method == method).fold((0, 0), |(k, n), r| (k + r.rejections, n + r.tests))
    }
}

// Decodes entry `k` of the lexicographic list of pairs i < j < n.
fn unrank_pair(mut k: usize, n: usize) -> (usize, usize) {
    let mut i = 0;
    loop {
        let row = n - 1 - i;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
        i += 1;
    }
}

/// Type-I error study: for every design draw a pool of realizations, test
/// randomly chosen distinct pairs from the same pool with every method and
/// count rejections.
pub fn run_type1_experiment<E: Executor + Sync>(cfg: &ExperimentConfig, exec: &E) -> Result<Type1Table> {
    cfg.validate()?;
    if cfg.pool_size < 2 {
        return Err(Error::InsufficientPool("need at least two realizations per design"));
    }
    let available = cfg.pool_size * (cfg.pool_size - 1) / 2;
    if cfg.pairs > available {
        return Err(Error::InsufficientPool("more pairs requested than distinct pairs in the pool"));
    }
    let opts = cfg.options();
    let mut rows = Vec::new();
    for (d, (name, grid)) in cfg.designs.iter().enumerate() {
        let d = d as u64;
        let pool: Vec<PointPattern> = exec
            .map_indexed(cfg.pool_size, |i| {
                sample_nhpp(grid, &mut seed::rng_for(cfg.seed, &[TYPE1, d, POOL, i as u64]))
            })
            .into_iter()
            .collect::<Result<_>>()?;
        let mut rng = seed::rng_for(cfg.seed, &[TYPE1, d, PAIRS]);
        let picks: Vec<(usize, usize)> =
            index::sample(&mut rng, available, cfg.pairs).into_iter().map(|k| unrank_pair(k, cfg.pool_size)).collect();
        let results: Vec<Vec<Result<TestResult>>> = exec.map_indexed(picks.len(), |t| {
            let (i, j) = picks[t];
            cfg.methods.iter().map(|&m| run_method_with(m, &pool[i], &pool[j], cfg.alpha, &opts)).collect()
        });
        for (k, &method) in cfg.methods.iter().enumerate() {
            let mut tally = Tally::default();
            for r in &results {
                tally.add(&r[k]);
            }
            let (lo, hi) = tally.interval(cfg.ci_level);
            rows.push(Type1Row {
                design: name.clone(),
                method,
                tests: tally.tests,
                rejections: tally.rejections,
                failures: tally.failures,
                mean_p: tally.mean_p(),
                ci_low: lo,
                ci_high: hi,
            });
        }
    }
    Ok(Type1Table { alpha: cfg.alpha, ci_level: cfg.ci_level, rows })
}

/// Rejections and mean p-value at one noise magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerRow {
    pub design: String,
    pub kind: NoiseKind,
    pub magnitude: f64,
    pub method: TestMethod,
    pub tests: usize,
    pub rejections: usize,
    pub failures: usize,
    pub mean_p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerTable {
    pub alpha: f64,
    pub rows: Vec<PowerRow>,
}

impl PowerTable {
    pub fn row(&self, design: &str, magnitude: f64, method: TestMethod) -> Option<&PowerRow> {
        self.rows.iter().find(|r| r.design == design && r.magnitude == magnitude && r.method == method)
    }

    /// `(magnitude, rejections, mean p)` for one design and method, in
    /// magnitude order.
    pub fn series(&self, design: &str, method: TestMethod) -> Vec<(f64, usize, f64)> {
        self.rows
            .iter()
            .filter(|r| r.design == design && r.method == method)
            .map(|r| (r.magnitude, r.rejections, r.mean_p))
            .collect()
    }
}

/// Power study. Baseline realizations `S_i` are drawn from each design.
///
/// - Location jitter tests `S_i` against a jittered copy of itself.
/// - Grid noise perturbs the design once per magnitude, draws a fresh
///   realization from the perturbed grid and tests it against `S_i`.
///
/// Noise draws depend on the design and replication but not on the
/// magnitude, so neighbouring magnitudes share their random numbers.
pub fn run_power_experiment<E: Executor + Sync>(
    cfg: &ExperimentConfig,
    kind: NoiseKind,
    magnitudes: &[f64],
    exec: &E,
) -> Result<PowerTable> {
    cfg.validate()?;
    let specs: Vec<NoiseSpec> = magnitudes.iter().map(|&m| NoiseSpec::new(kind, m)).collect::<Result<_>>()?;
    let opts = cfg.options();
    let n = cfg.replications;
    let mut rows = Vec::new();
    for (d, (name, grid)) in cfg.designs.iter().enumerate() {
        let d = d as u64;
        let base: Vec<PointPattern> = exec
            .map_indexed(n, |i| sample_nhpp(grid, &mut seed::rng_for(cfg.seed, &[POWER, d, BASE, i as u64])))
            .into_iter()
            .collect::<Result<_>>()?;
        for spec in &specs {
            let perturbed = if kind.acts_on_grid() {
                let mut rng = seed::rng_for(cfg.seed, &[POWER, d, NOISE, kind.stream_id()]);
                Some(spec.apply_to_grid(grid, &mut rng)?)
            } else {
                None
            };
            let results: Vec<Vec<Result<TestResult>>> = exec.map_indexed(n, |i| {
                let other = match &perturbed {
                    None => jitter_pattern(
                        &base[i],
                        spec.magnitude,
                        &mut seed::rng_for(cfg.seed, &[POWER, d, NOISE, kind.stream_id(), i as u64]),
                    ),
                    Some(g) => sample_nhpp(g, &mut seed::rng_for(cfg.seed, &[POWER, d, REGEN, i as u64])),
                };
                cfg.methods
                    .iter()
                    .map(|&m| {
                        let other = other.as_ref().map_err(Clone::clone)?;
                        run_method_with(m, &base[i], other, cfg.alpha, &opts)
                    })
                    .collect()
            });
            for (k, &method) in cfg.methods.iter().enumerate() {
                let mut tally = Tally::default();
                for r in &results {
                    tally.add(&r[k]);
                }
                rows.push(PowerRow {
                    design: name.clone(),
                    kind,
                    magnitude: spec.magnitude,
                    method,
                    tests: tally.tests,
                    rejections: tally.rejections,
                    failures: tally.failures,
                    mean_p: tally.mean_p(),
                });
            }
        }
    }
    Ok(PowerTable { alpha: cfg.alpha, rows })
}
