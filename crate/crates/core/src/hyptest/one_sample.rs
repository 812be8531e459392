use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use super::{qks, TestMethod, TestResult, Warnings};
use crate::depth::DepthKind;
use crate::error::{Error, Result};
use crate::geometry::PointPattern;
use crate::math;
use crate::seed;
use crate::special;

/// Monte Carlo resamples for the CM* p-value.
pub const CM_STAR_RESAMPLES: usize = 10_000;

const CHI_SQUARE_MIN_EXPECTED: f64 = 5.0;
const CHI_SQUARE_MIN_N: usize = 50;

fn sorted_reference_depths(reference: &PointPattern, kind: DepthKind) -> Result<Vec<f64>> {
    if reference.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut d = kind.depths(reference.points(), reference.points())?;
    d.sort_unstable_by(f64::total_cmp);
    Ok(d)
}

/// `T_i = #{x in ref : D(x; ref) >= D(s_i; ref)} / |ref|` for every point of
/// `sample`. Under the null these are approximately uniform on [0, 1].
pub fn outlyingness_transform(sample: &PointPattern, reference: &PointPattern, kind: DepthKind) -> Result<Vec<f64>> {
    let ref_depths = sorted_reference_depths(reference, kind)?;
    let m = ref_depths.len() as f64;
    Ok(kind
        .depths(sample.points(), reference.points())?
        .into_iter()
        .map(|d| {
            let lt = ref_depths.partition_point(|&v| v < d);
            (ref_depths.len() - lt) as f64 / m
        })
        .collect())
}

fn cell_of(d: f64, breaks: &[f64]) -> usize {
    // cells are [a0, a1], (a1, a2], ..., (a_{r-1}, a_r]
    let k = breaks[1..].partition_point(|&b| b < d);
    k.min(breaks.len() - 2)
}

/// Pearson chi-square on depth cells.
///
/// `breaks` must satisfy `0 = a_0 < a_1 < ... < a_r = 1`. Cell probabilities
/// come from `reference_depths`; observed counts from `sample_depths`.
/// Cells empty in both are dropped from the sum and from the degrees of
/// freedom.
pub fn chi_square_from_depths(sample_depths: &[f64], reference_depths: &[f64], breaks: &[f64]) -> Result<TestResult> {
    if breaks.len() < 2
        || breaks[0] != 0.0
        || *breaks.last().unwrap() != 1.0
        || breaks.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(core::cmp::Ordering::Less))
    {
        return Err(Error::InvalidBreaks);
    }
    if reference_depths.is_empty() || sample_depths.is_empty() {
        return Err(Error::EmptySample);
    }
    let cells = breaks.len() - 1;
    let mut expected = vec![0usize; cells];
    let mut observed = vec![0usize; cells];
    for &d in reference_depths {
        expected[cell_of(d, breaks)] += 1;
    }
    for &d in sample_depths {
        observed[cell_of(d, breaks)] += 1;
    }
    let n = sample_depths.len() as f64;
    let m = reference_depths.len() as f64;
    let mut chi2 = 0.0;
    let mut used = 0usize;
    let mut warnings = Warnings::empty();
    for (cell, (&e, &o)) in expected.iter().zip(&observed).enumerate() {
        if e == 0 {
            if o > 0 {
                return Err(Error::EmptyReferenceCell { cell, observed: o });
            }
            continue;
        }
        used += 1;
        let np = n * e as f64 / m;
        if np < CHI_SQUARE_MIN_EXPECTED {
            warnings |= Warnings::SMALL_EXPECTED_COUNT;
        }
        let diff = o as f64 - np;
        chi2 += diff * diff / np;
    }
    if sample_depths.len() < CHI_SQUARE_MIN_N {
        warnings |= Warnings::SMALL_SAMPLE;
    }
    let df = used.saturating_sub(1);
    let p = if df == 0 { 1.0 } else { special::chi_square_sf(chi2, df as f64) };
    let mut result = TestResult::new(TestMethod::ChiSquare, chi2, p, sample_depths.len(), reference_depths.len());
    result.warnings = warnings;
    Ok(result)
}

/// Depth-based chi-square test of `sample` against `reference`.
pub fn depth_chi_square_test(
    sample: &PointPattern,
    reference: &PointPattern,
    breaks: &[f64],
    kind: DepthKind,
) -> Result<TestResult> {
    let ref_depths = sorted_reference_depths(reference, kind)?;
    let sample_depths = kind.depths(sample.points(), reference.points())?;
    chi_square_from_depths(&sample_depths, &ref_depths, breaks)
}

/// One-sample KS distance of `t` from U[0, 1]:
/// `max_i max(i/n - T_(i), T_(i) - (i-1)/n)`.
pub fn ks_star_statistic(t: &[f64]) -> f64 {
    let mut s = t.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &v)| {
            let i = i as f64;
            ((i + 1.0) / n - v).max(v - i / n)
        })
        .fold(0.0, f64::max)
}

/// `n CM* = 1/(12 n) + sum_i (T_(i) - (2i - 1)/(2n))^2`.
pub fn cm_star_statistic(t: &[f64]) -> f64 {
    let mut s = t.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    let n = s.len() as f64;
    let sum: f64 = s
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let d = v - (2.0 * i as f64 + 1.0) / (2.0 * n);
            d * d
        })
        .sum();
    1.0 / (12.0 * n) + sum
}

pub fn depth_ks_star(sample: &PointPattern, reference: &PointPattern, kind: DepthKind) -> Result<TestResult> {
    let t = outlyingness_transform(sample, reference, kind)?;
    if t.is_empty() {
        return Err(Error::EmptySample);
    }
    let ks = ks_star_statistic(&t);
    let p = qks(math::sqrt(t.len() as f64) * ks)?;
    Ok(TestResult::new(TestMethod::KsStar, ks, p, t.len(), reference.len()))
}

/// CM* test; the p-value is `(1 + #{W_b >= W}) / (B + 1)` over
/// [`CM_STAR_RESAMPLES`] uniform samples of the same size drawn from `seed`.
pub fn depth_cm_star(
    sample: &PointPattern,
    reference: &PointPattern,
    kind: DepthKind,
    seed: u64,
) -> Result<TestResult> {
    let t = outlyingness_transform(sample, reference, kind)?;
    if t.is_empty() {
        return Err(Error::EmptySample);
    }
    let w = cm_star_statistic(&t);
    let mut rng = seed::rng_for(seed, &[0xC3]);
    let mut buf = vec![0.0; t.len()];
    let mut exceed = 0usize;
    for _ in 0..CM_STAR_RESAMPLES {
        for v in buf.iter_mut() {
            *v = rng.random::<f64>();
        }
        if cm_star_statistic(&buf) >= w {
            exceed += 1;
        }
    }
    let p = (1 + exceed) as f64 / (CM_STAR_RESAMPLES + 1) as f64;
    Ok(TestResult::new(TestMethod::CmStar, w, p, t.len(), reference.len()))
}
