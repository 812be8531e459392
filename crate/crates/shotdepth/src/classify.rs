//! Benchmark-relative grouping of players.
//!
//! Every other player is tested against the benchmark twice, once on made
//! shots and once on missed shots. A player joins the benchmark's group
//! when both p-values exceed the (optionally Bonferroni-adjusted)
//! threshold. Groups are not symmetric: A in B's group does not imply B in
//! A's.

use shotdepth_core::hyptest::{run_method_with, RunOptions};
use shotdepth_core::ppsim::Executor;
use shotdepth_core::TestMethod;

use crate::shotdata::PlayerShotChart;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Correction {
    /// Two tests per player, so the level is halved.
    #[default]
    Bonferroni,
    None,
}

impl Correction {
    pub fn adjusted(self, alpha: f64) -> f64 {
        match self {
            Correction::Bonferroni => alpha / 2.0,
            Correction::None => alpha,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Correction::Bonferroni => "bonferroni",
            Correction::None => "none",
        }
    }
}

impl std::str::FromStr for Correction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bonferroni" => Ok(Correction::Bonferroni),
            "none" => Ok(Correction::None),
            _ => Err(format!("correction must be `bonferroni` or `none`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseResult {
    pub benchmark: String,
    pub other: String,
    pub other_name: String,
    /// `None` when the pair could not be tested.
    pub p_made: Option<f64>,
    pub p_missed: Option<f64>,
    pub in_group: bool,
    /// Why the pair was not tested.
    pub untestable: Option<String>,
}

impl PairwiseResult {
    /// Strictly above the threshold on both patterns.
    pub fn passes(&self, alpha_adj: f64) -> bool {
        matches!((self.p_made, self.p_missed), (Some(a), Some(b)) if a > alpha_adj && b > alpha_adj)
    }
}

/// Made and missed p-values of every chart in `others` against
/// `benchmark`, in the order of `others`. `in_group` is left false.
pub fn pairwise_pvalues<E: Executor + Sync>(
    benchmark: &PlayerShotChart,
    others: &[PlayerShotChart],
    method: TestMethod,
    opts: &RunOptions,
    exec: &E,
) -> Vec<PairwiseResult> {
    let min = method.min_sample_size();
    exec.map_indexed(others.len(), |i| {
        let o = &others[i];
        let mut r = PairwiseResult {
            benchmark: benchmark.player_id.clone(),
            other: o.player_id.clone(),
            other_name: o.player_name.clone(),
            p_made: None,
            p_missed: None,
            in_group: false,
            untestable: None,
        };
        let sizes = [
            ("benchmark made", benchmark.made.len()),
            ("benchmark missed", benchmark.missed.len()),
            ("made", o.made.len()),
            ("missed", o.missed.len()),
        ];
        if let Some((what, n)) = sizes.iter().find(|(_, n)| *n < min) {
            r.untestable = Some(format!("{what} pattern has {n} shots, {method} needs {min}"));
            return r;
        }
        let made = run_method_with(method, &benchmark.made, &o.made, 0.05, opts);
        let missed = run_method_with(method, &benchmark.missed, &o.missed, 0.05, opts);
        match (made, missed) {
            (Ok(a), Ok(b)) => {
                r.p_made = Some(a.p_value);
                r.p_missed = Some(b.p_value);
            }
            (Err(e), _) | (_, Err(e)) => r.untestable = Some(e.to_string()),
        }
        r
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupListing {
    pub benchmark: String,
    pub method: TestMethod,
    pub alpha: f64,
    pub alpha_adj: f64,
    pub correction: Correction,
    pub results: Vec<PairwiseResult>,
}

impl GroupListing {
    pub fn members(&self) -> impl Iterator<Item = &PairwiseResult> {
        self.results.iter().filter(|r| r.in_group)
    }
}

/// Marks group membership at `alpha_adj = correction.adjusted(alpha)`.
pub fn assign_groups(results: &mut [PairwiseResult], alpha_adj: f64) {
    for r in results {
        r.in_group = r.passes(alpha_adj);
    }
}

pub fn group_by_benchmark<E: Executor + Sync>(
    benchmark: &PlayerShotChart,
    others: &[PlayerShotChart],
    method: TestMethod,
    alpha: f64,
    correction: Correction,
    opts: &RunOptions,
    exec: &E,
) -> GroupListing {
    let alpha_adj = correction.adjusted(alpha);
    let mut results = pairwise_pvalues(benchmark, others, method, opts, exec);
    assign_groups(&mut results, alpha_adj);
    GroupListing { benchmark: benchmark.player_id.clone(), method, alpha, alpha_adj, correction, results }
}
