use alloc::vec::Vec;

use super::{Coords, Planar, TestMethod, TestResult, Warnings};
use crate::depth::DepthReference;
use crate::error::{Error, Result};
use crate::geometry::{self, CartesianPoint, PointPattern};
use crate::math;

type Xy = (f64, f64);

const QKS_TERM_EPS: f64 = 1e-12;
const QKS_MAX_TERMS: usize = 100;
// Below this argument the alternating series is replaced by its complement.
const QKS_SWITCH: f64 = 1.18;

/// Kolmogorov tail `Q_KS(x) = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 x^2)`.
///
/// The alternating series stops once a term drops below `1e-12` (at most 100
/// terms). For `x < 1.18` the equivalent form
/// `1 - sqrt(2 pi)/x sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2))` is used, which
/// converges fast there and keeps the function monotone near 1.
/// `Q_KS(0) = 1`.
pub fn qks(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::NonFinite);
    }
    if x < 0.0 {
        return Err(Error::NegativeArgument(x));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let q = if x < QKS_SWITCH { 1.0 - kolmogorov_cdf_small(x) } else { alternating_tail(x) };
    Ok(q.clamp(0.0, 1.0))
}

fn alternating_tail(x: f64) -> f64 {
    let a = -2.0 * x * x;
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=QKS_MAX_TERMS {
        let jf = j as f64;
        let term = sign * 2.0 * math::exp(a * jf * jf);
        sum += term;
        if math::abs(term) < QKS_TERM_EPS {
            return sum;
        }
        sign = -sign;
    }
    // no convergence: the tail is indistinguishable from 1
    1.0
}

fn kolmogorov_cdf_small(x: f64) -> f64 {
    use core::f64::consts::PI;
    let c = -PI * PI / (8.0 * x * x);
    let mut sum = 0.0;
    for k in 1..=QKS_MAX_TERMS {
        let m = (2 * k - 1) as f64;
        let term = math::exp(c * m * m);
        sum += term;
        if term < QKS_TERM_EPS * sum || term == 0.0 {
            break;
        }
    }
    math::sqrt(2.0 * PI) / x * sum
}

/// P-value of the two-dimensional KS statistic with its warning flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsPValue {
    pub p: f64,
    pub warnings: Warnings,
}

/// Tail approximation for the two-dimensional KS statistic:
/// `Q_KS(sqrt(N) T / (1 + sqrt(1 - r^2) (0.25 - 0.75 / sqrt(N))))`.
///
/// Flags [`Warnings::APPROXIMATION_RANGE`] when `N <= 20` or `p > 0.20`.
pub fn ks2d_pvalue(t_ks: f64, n_eff: f64, corr: f64) -> Result<KsPValue> {
    if !t_ks.is_finite() || !n_eff.is_finite() || !corr.is_finite() {
        return Err(Error::NonFinite);
    }
    if !(-1.0..=1.0).contains(&corr) {
        return Err(Error::CorrelationOutOfRange(corr));
    }
    if n_eff <= 0.0 {
        return Err(Error::InvalidParameter("effective sample size must be positive"));
    }
    if !(0.0..=1.0 + 1e-12).contains(&t_ks) {
        return Err(Error::InvalidParameter("KS statistic must lie in [0, 1]"));
    }
    let sqrt_n = math::sqrt(n_eff);
    let rr = math::sqrt((1.0 - corr * corr).max(0.0));
    let arg = sqrt_n * t_ks / (1.0 + rr * (0.25 - 0.75 / sqrt_n));
    let p = qks(arg.max(0.0))?;
    let mut warnings = Warnings::empty();
    if n_eff <= 20.0 || p > 0.20 {
        warnings |= Warnings::APPROXIMATION_RANGE;
    }
    Ok(KsPValue { p, warnings })
}

/// Point counts in the four quadrants around an anchor.
///
/// Quadrant 1 is strict in both axes; ties with the anchor go to the lower
/// or left side so that every point lands in exactly one quadrant:
/// `c1: (>, >)`, `c2: (<=, >)`, `c3: (<=, <=)`, `c4: (>, <=)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QuadrantCounts {
    pub c1: usize,
    pub c2: usize,
    pub c3: usize,
    pub c4: usize,
}

impl QuadrantCounts {
    pub fn total(&self) -> usize {
        self.c1 + self.c2 + self.c3 + self.c4
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.c1, self.c2, self.c3, self.c4]
    }
}

#[inline]
fn count_quadrants(anchor: (f64, f64), pts: &[(f64, f64)]) -> QuadrantCounts {
    let mut q = QuadrantCounts::default();
    for &(x, y) in pts {
        match (x > anchor.0, y > anchor.1) {
            (true, true) => q.c1 += 1,
            (false, true) => q.c2 += 1,
            (false, false) => q.c3 += 1,
            (true, false) => q.c4 += 1,
        }
    }
    q
}

pub fn quadrant_counts<P: Planar>(anchor: (f64, f64), pts: &[P]) -> QuadrantCounts {
    let xy: Vec<(f64, f64)> = pts.iter().map(Planar::xy).collect();
    count_quadrants(anchor, &xy)
}

/// Pearson correlation of the two coordinates; `None` when either has zero
/// variance.
pub fn pearson<P: Planar>(pts: &[P]) -> Option<f64> {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(sx, sy), p| {
        let (x, y) = p.xy();
        (sx + x, sy + y)
    });
    let (mx, my) = (sx / n, sy / n);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in pts {
        let (x, y) = p.xy();
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / math::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

fn max_discrepancy(anchors: &[(f64, f64)], a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut best = 0.0f64;
    for &anchor in anchors {
        let ca = count_quadrants(anchor, a).as_array();
        let cb = count_quadrants(anchor, b).as_array();
        for k in 0..4 {
            let d = math::abs(ca[k] as f64 / na - cb[k] as f64 / nb);
            best = best.max(d);
        }
    }
    best
}

/// Two-sample two-dimensional KS test.
///
/// The statistic is the mean of the maximal quadrant discrepancy with
/// anchors ranging over `a` and over `b`. The correlation fed to the tail
/// approximation is `sqrt((r_a^2 + r_b^2) / 2)`; a sample with a constant
/// coordinate contributes 0 and flags [`Warnings::DEGENERATE_MARGINAL`].
pub fn ks2d_two_sample<P: Planar>(a: &[P], b: &[P]) -> Result<TestResult> {
    for s in [a, b] {
        if s.len() < 2 {
            return Err(Error::SampleTooSmall { needed: 2, got: s.len() });
        }
    }
    let xa: Vec<(f64, f64)> = a.iter().map(Planar::xy).collect();
    let xb: Vec<(f64, f64)> = b.iter().map(Planar::xy).collect();
    if xa.iter().chain(xb.iter()).any(|&(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::NonFinite);
    }
    let t1 = max_discrepancy(&xa, &xa, &xb);
    let t2 = max_discrepancy(&xb, &xa, &xb);
    let statistic = 0.5 * (t1 + t2);

    let mut warnings = Warnings::empty();
    let ra = pearson(a).unwrap_or_else(|| {
        warnings |= Warnings::DEGENERATE_MARGINAL;
        0.0
    });
    let rb = pearson(b).unwrap_or_else(|| {
        warnings |= Warnings::DEGENERATE_MARGINAL;
        0.0
    });
    let corr = math::sqrt(0.5 * (ra * ra + rb * rb)).min(1.0);
    let (n1, n2) = (a.len(), b.len());
    let n_eff = (n1 * n2) as f64 / (n1 + n2) as f64;
    let pv = ks2d_pvalue(statistic.min(1.0), n_eff, corr)?;

    let mut result = TestResult::new(TestMethod::M3, statistic, pv.p, n1, n2);
    result.n_eff = Some(n_eff);
    result.corr = Some(corr);
    result.warnings = warnings | pv.warnings;
    Ok(result)
}

/// Pooled-depth two-dimensional KS test (M5 in the Cartesian frame, M6 in
/// the polar frame around `origin`).
///
/// Both patterns are optionally moved to `(r, theta)`, pooled, and every
/// point is replaced by its pair of one-dimensional halfspace depths with
/// respect to the pooled marginals. The two sets of depth pairs are then
/// compared with [`ks2d_two_sample`].
pub fn depth_ks2d_test(
    a: &PointPattern,
    b: &PointPattern,
    coords: Coords,
    origin: CartesianPoint,
) -> Result<TestResult> {
    for s in [a, b] {
        if s.len() < 2 {
            return Err(Error::SampleTooSmall { needed: 2, got: s.len() });
        }
    }
    let mut origin_hit = false;
    let (ca, cb): (Vec<Xy>, Vec<Xy>) = match coords {
        Coords::Cartesian => (a.points().iter().map(Planar::xy).collect(), b.points().iter().map(Planar::xy).collect()),
        Coords::Polar => {
            let pa = geometry::to_polar_pattern(a, origin);
            let pb = geometry::to_polar_pattern(b, origin);
            origin_hit = pa.iter().chain(pb.iter()).any(|p| p.is_degenerate());
            (pa.iter().map(Planar::xy).collect(), pb.iter().map(Planar::xy).collect())
        }
    };
    let reference = DepthReference::new(ca.iter().chain(cb.iter()).copied())?;
    let da: Vec<_> = ca.iter().map(|&(u, v)| reference.pair(u, v)).collect();
    let db: Vec<_> = cb.iter().map(|&(u, v)| reference.pair(u, v)).collect();
    let method = match coords {
        Coords::Cartesian => TestMethod::M5,
        Coords::Polar => TestMethod::M6,
    };
    let mut result = ks2d_two_sample(&da, &db)?.with_method(method);
    if origin_hit {
        result.warnings |= Warnings::ORIGIN_POINT;
    }
    Ok(result)
}
