//! Statistical depth functions.
//!
//! The depth-pair KS schemes (M5, M6) only need the one-dimensional halfspace depth, applied
//! to each coordinate of the pooled sample ([`DepthReference`]).
//! The planar Tukey and Mahalanobis depths back the Liu-Singh and one-sample
//! depth tests.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::CartesianPoint;

/// Halfspace depth of `x` with respect to a one-dimensional sample:
/// `min(#{v <= x}, #{v >= x}) / n`.
///
/// Values equal to `x` count on both sides, so duplicated values can have
/// depth above one half.
pub fn halfspace_depth_1d(x: f64, sample: &[f64]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let le = sample.iter().filter(|&&v| v <= x).count();
    let ge = sample.iter().filter(|&&v| v >= x).count();
    Ok(le.min(ge) as f64 / sample.len() as f64)
}

/// Same count as [`halfspace_depth_1d`] against an ascending sample, in
/// `O(log n)`.
fn sorted_depth(x: f64, sorted: &[f64]) -> f64 {
    let n = sorted.len();
    let le = sorted.partition_point(|&v| v <= x);
    let lt = sorted.partition_point(|&v| v < x);
    let ge = n - lt;
    le.min(ge) as f64 / n as f64
}

/// Pooled depth of a point: the 1D halfspace depths of its two coordinates
/// against the two pooled marginals.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DepthPair {
    /// Depth of the first coordinate (radius in the polar frame).
    pub d_r: f64,
    /// Depth of the second coordinate (angle in the polar frame).
    pub d_theta: f64,
}

/// Sorted marginals of a pooled two-sample set, used to map every point of
/// either sample to its [`DepthPair`].
#[derive(Debug, Clone)]
pub struct DepthReference {
    first: Vec<f64>,
    second: Vec<f64>,
}

impl DepthReference {
    /// Pools the coordinates. Each item is `(first, second)`, i.e. `(r, theta)`
    /// or `(x, y)`.
    pub fn new<I>(coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let (mut first, mut second): (Vec<f64>, Vec<f64>) = coords.into_iter().unzip();
        if first.is_empty() {
            return Err(Error::EmptySample);
        }
        if first.iter().chain(second.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        first.sort_unstable_by(f64::total_cmp);
        second.sort_unstable_by(f64::total_cmp);
        Ok(Self { first, second })
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    pub fn first_sorted(&self) -> &[f64] {
        &self.first
    }

    pub fn second_sorted(&self) -> &[f64] {
        &self.second
    }

    pub fn pair(&self, first: f64, second: f64) -> DepthPair {
        DepthPair { d_r: sorted_depth(first, &self.first), d_theta: sorted_depth(second, &self.second) }
    }
}

/// Componentwise depth of a polar point against the pooled marginals.
pub fn pooled_depth_pair(p: crate::geometry::PolarPoint, reference: &DepthReference) -> DepthPair {
    reference.pair(p.r, p.theta)
}

/// Choice of planar depth for the rank-based tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DepthKind {
    #[default]
    Tukey,
    Mahalanobis,
}

impl core::str::FromStr for DepthKind {
    type Err = &'static str;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tukey" | "halfspace" => Ok(DepthKind::Tukey),
            "mahalanobis" => Ok(DepthKind::Mahalanobis),
            _ => Err("depth must be `tukey` or `mahalanobis`"),
        }
    }
}

impl DepthKind {
    pub fn name(self) -> &'static str {
        match self {
            DepthKind::Tukey => "tukey",
            DepthKind::Mahalanobis => "mahalanobis",
        }
    }

    pub fn depth(self, z: CartesianPoint, sample: &[CartesianPoint]) -> Result<f64> {
        match self {
            DepthKind::Tukey => tukey_depth_2d(z, sample),
            DepthKind::Mahalanobis => mahalanobis_depth(z, sample),
        }
    }

    /// Depth of every query point with respect to `sample`. Mahalanobis
    /// moments are computed once.
    pub fn depths(self, queries: &[CartesianPoint], sample: &[CartesianPoint]) -> Result<Vec<f64>> {
        match self {
            DepthKind::Tukey => queries.iter().map(|&z| tukey_depth_2d(z, sample)).collect(),
            DepthKind::Mahalanobis => {
                let m = Moments::of(sample)?;
                Ok(queries.iter().map(|&z| m.depth(z)).collect())
            }
        }
    }
}

#[inline]
fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

#[inline]
fn dot(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

// 0 for directions in [0, pi), 1 for [pi, 2pi).
#[inline]
fn half(v: (f64, f64)) -> u8 {
    if v.1 > 0.0 || (v.1 == 0.0 && v.0 > 0.0) {
        0
    } else {
        1
    }
}

fn angular_cmp(a: (f64, f64), b: (f64, f64)) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| {
        let c = cross(a, b);
        if c > 0.0 {
            Ordering::Less
        } else if c < 0.0 {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Tukey (halfspace) depth of `z` with respect to a planar sample: the
/// smallest fraction of sample points in a closed halfplane containing `z`.
///
/// Angular sweep around `z`: directions to the sample points are sorted by
/// angle (exact cross-product comparisons, equal directions grouped), then a
/// two-pointer pass counts for every direction the points lying in the
/// half-open arc `(a, a + pi]`. The minimum of those counts, plus the points
/// coinciding with `z`, is the depth. `O(n log n)`.
pub fn tukey_depth_2d(z: CartesianPoint, sample: &[CartesianPoint]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = sample.len();
    let mut at_z = 0usize;
    let mut dirs: Vec<(f64, f64)> = Vec::with_capacity(n);
    for p in sample {
        let v = (p.x - z.x, p.y - z.y);
        if v.0 == 0.0 && v.1 == 0.0 {
            at_z += 1;
        } else {
            dirs.push(v);
        }
    }
    if dirs.is_empty() {
        return Ok(at_z as f64 / n as f64);
    }
    dirs.sort_unstable_by(|&a, &b| angular_cmp(a, b));

    // group identical directions
    let mut groups: Vec<((f64, f64), usize)> = Vec::with_capacity(dirs.len());
    for v in dirs {
        match groups.last_mut() {
            Some((rep, count)) if angular_cmp(*rep, v) == Ordering::Equal => *count += 1,
            _ => groups.push((v, 1)),
        }
    }
    let m = groups.len();
    let mut prefix = Vec::with_capacity(2 * m + 1);
    prefix.push(0usize);
    for k in 0..2 * m {
        let last = prefix[k];
        prefix.push(last + groups[k % m].1);
    }

    // direction j lies in (a_i, a_i + pi]
    let in_arc = |i: usize, j: usize| {
        let a = groups[i].0;
        let b = groups[j % m].0;
        let c = cross(a, b);
        c > 0.0 || (c == 0.0 && dot(a, b) < 0.0)
    };

    let mut best = usize::MAX;
    let mut end = 1usize;
    for i in 0..m {
        if end < i + 1 {
            end = i + 1;
        }
        while end < i + m && in_arc(i, end) {
            end += 1;
        }
        let count = prefix[end] - prefix[i + 1];
        best = best.min(count);
    }
    Ok((best + at_z) as f64 / n as f64)
}

struct Moments {
    mean: (f64, f64),
    // inverse covariance entries
    inv: (f64, f64, f64),
}

impl Moments {
    fn of(sample: &[CartesianPoint]) -> Result<Self> {
        let n = sample.len();
        if n < 3 {
            return Err(Error::SampleTooSmall { needed: 3, got: n });
        }
        let nf = n as f64;
        let mx = sample.iter().map(|p| p.x).sum::<f64>() / nf;
        let my = sample.iter().map(|p| p.y).sum::<f64>() / nf;
        let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
        for p in sample {
            let dx = p.x - mx;
            let dy = p.y - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
        let d = nf - 1.0;
        let (sxx, syy, sxy) = (sxx / d, syy / d, sxy / d);
        let det = sxx * syy - sxy * sxy;
        if det.is_nan() || det <= 1e-12 * sxx * syy || sxx <= 0.0 || syy <= 0.0 {
            return Err(Error::DegenerateCovariance);
        }
        Ok(Self { mean: (mx, my), inv: (syy / det, -sxy / det, sxx / det) })
    }

    fn depth(&self, z: CartesianPoint) -> f64 {
        let dx = z.x - self.mean.0;
        let dy = z.y - self.mean.1;
        let (a, b, c) = self.inv;
        let d2 = a * dx * dx + 2.0 * b * dx * dy + c * dy * dy;
        1.0 / (1.0 + d2)
    }
}

/// Mahalanobis depth `1 / (1 + (z - mu)' S^-1 (z - mu))` with the sample
/// mean and unbiased sample covariance.
pub fn mahalanobis_depth(z: CartesianPoint, sample: &[CartesianPoint]) -> Result<f64> {
    Ok(Moments::of(sample)?.depth(z))
}

/// Fraction of `sorted_depths` that are `<= d`.
pub fn rank_fraction(d: f64, sorted_depths: &[f64]) -> f64 {
    sorted_depths.partition_point(|&v| v <= d) as f64 / sorted_depths.len() as f64
}

/// Liu-Singh outlyingness `R(y; H) = P_H(D(X; H) <= D(y; H))`, evaluated on
/// the empirical reference sample.
pub fn liu_singh_r(y: CartesianPoint, reference: &[CartesianPoint], kind: DepthKind) -> Result<f64> {
    if reference.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut ref_depths = kind.depths(reference, reference)?;
    ref_depths.sort_unstable_by(f64::total_cmp);
    let dy = kind.depth(y, reference)?;
    Ok(rank_fraction(dy, &ref_depths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(raw: &[(f64, f64)]) -> Vec<CartesianPoint> {
        raw.iter().map(|&(x, y)| CartesianPoint::new(x, y)).collect()
    }

    #[test]
    fn one_d_examples() {
        let s = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(halfspace_depth_1d(3.0, &s).unwrap(), 0.6);
        assert_eq!(halfspace_depth_1d(1.0, &s).unwrap(), 0.2);
        assert_eq!(halfspace_depth_1d(10.0, &s).unwrap(), 0.0);
        assert_eq!(halfspace_depth_1d(1.0, &[]), Err(Error::EmptySample));
    }

    #[test]
    fn ties_count_on_both_sides() {
        let s = [2.0, 2.0, 2.0, 5.0];
        // <= 2: 3, >= 2: 4
        assert_eq!(halfspace_depth_1d(2.0, &s).unwrap(), 0.75);
        let mut sorted = s.to_vec();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(sorted_depth(2.0, &sorted), 0.75);
    }

    #[test]
    fn pooled_pair_at_median() {
        // pooled size 7, distinct values, median is the 4th
        let coords: Vec<(f64, f64)> = (0..7).map(|i| (i as f64, 10.0 - i as f64)).collect();
        let reference = DepthReference::new(coords).unwrap();
        let p = crate::geometry::PolarPoint { r: 3.0, theta: 7.0 };
        let d = pooled_depth_pair(p, &reference);
        assert_eq!(d.d_r, 4.0 / 7.0);
        assert_eq!(d.d_theta, 4.0 / 7.0);

        let below = crate::geometry::PolarPoint { r: -1.0, theta: 7.0 };
        assert_eq!(pooled_depth_pair(below, &reference).d_r, 0.0);
    }

    #[test]
    fn pooled_pair_identical_samples() {
        // two identical samples of size 4 give each value twice in a pool of 8
        let s = [(1.0, 1.0), (2.0, 2.0), (3.0, 3.0), (4.0, 4.0)];
        let reference = DepthReference::new(s.iter().chain(s.iter()).copied()).unwrap();
        let d = reference.pair(1.0, 1.0);
        assert_eq!(d.d_r, 0.25);
        assert_eq!(d.d_theta, 0.25);
    }

    #[test]
    fn tukey_square_centroid() {
        let s = pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
        assert_eq!(tukey_depth_2d(CartesianPoint::new(0.5, 0.5), &s).unwrap(), 0.5);
    }

    #[test]
    fn tukey_outside_hull_is_zero() {
        let s = pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
        assert_eq!(tukey_depth_2d(CartesianPoint::new(3.0, -2.0), &s).unwrap(), 0.0);
    }

    #[test]
    fn tukey_single_point() {
        let s = pts(&[(2.0, 3.0)]);
        assert_eq!(tukey_depth_2d(CartesianPoint::new(2.0, 3.0), &s).unwrap(), 1.0);
        assert_eq!(tukey_depth_2d(CartesianPoint::new(2.0, 3.0), &[]), Err(Error::EmptySample));
    }

    #[test]
    fn tukey_collinear_and_duplicates() {
        // points on a line through z, both sides
        let s = pts(&[(-2.0, 0.0), (-1.0, 0.0), (1.0, 0.0), (3.0, 0.0), (4.0, 0.0)]);
        assert_eq!(tukey_depth_2d(CartesianPoint::new(0.0, 0.0), &s).unwrap(), 0.4);
        let dup = pts(&[(1.0, 1.0), (1.0, 1.0), (1.0, 1.0), (0.0, 0.0)]);
        assert_eq!(tukey_depth_2d(CartesianPoint::new(1.0, 1.0), &dup).unwrap(), 0.75);
        assert_eq!(tukey_depth_2d(CartesianPoint::new(0.5, 0.5), &dup).unwrap(), 0.25);
    }

    #[test]
    fn mahalanobis_examples() {
        let s = pts(&[(0.0, 0.0), (2.0, 0.0), (0.0, 2.0), (2.0, 2.0)]);
        // mean (1,1); unbiased cov = diag(4/3, 4/3)
        assert!((mahalanobis_depth(CartesianPoint::new(1.0, 1.0), &s).unwrap() - 1.0).abs() < 1e-15);
        let at_one = CartesianPoint::new(1.0 + (4.0f64 / 3.0).sqrt(), 1.0);
        assert!((mahalanobis_depth(at_one, &s).unwrap() - 0.5).abs() < 1e-12);

        let line = pts(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
        assert_eq!(mahalanobis_depth(CartesianPoint::new(0.0, 1.0), &line), Err(Error::DegenerateCovariance));
        assert!(matches!(mahalanobis_depth(CartesianPoint::ORIGIN, &line[..2]), Err(Error::SampleTooSmall { .. })));
    }

    #[test]
    fn rank_fraction_examples() {
        let depths = [1.0 / 3.0, 1.0 / 3.0, 1.0];
        assert_eq!(rank_fraction(1.0 / 3.0, &depths), 2.0 / 3.0);
        assert_eq!(rank_fraction(1.0, &depths), 1.0);
        assert_eq!(rank_fraction(0.0, &depths), 0.0);
    }

    #[test]
    fn liu_singh_r_extremes() {
        let reference = pts(&[(0.0, 0.0), (4.0, 0.0), (0.0, 4.0), (4.0, 4.0), (2.0, 2.0)]);
        // the centre is the deepest point of the reference
        assert_eq!(liu_singh_r(CartesianPoint::new(2.0, 2.0), &reference, DepthKind::Tukey).unwrap(), 1.0);
        // far outside: depth 0, every reference point has depth >= 1/5
        assert_eq!(liu_singh_r(CartesianPoint::new(50.0, 50.0), &reference, DepthKind::Tukey).unwrap(), 0.0);
    }

    proptest! {
        #[test]
        fn one_d_depth_enumeration(mut values in proptest::collection::hash_set(-1_000_000i64..1_000_000, 1..99)) {
            let sample: Vec<f64> = values.drain().map(|v| v as f64).collect();
            let n = sample.len();
            let mut got: Vec<f64> = sample.iter().map(|&x| halfspace_depth_1d(x, &sample).unwrap()).collect();
            got.sort_by(f64::total_cmp);
            let mut want: Vec<f64> = (1..=n).map(|i| i.min(n - i + 1) as f64 / n as f64).collect();
            want.sort_by(f64::total_cmp);
            prop_assert_eq!(got, want);
        }

        #[test]
        fn one_d_monotone_away_from_median(mut sample in proptest::collection::vec(-100.0..100.0f64, 1..40), steps in proptest::collection::vec(0.0..10.0f64, 1..20)) {
            sample.sort_by(f64::total_cmp);
            let median = sample[sample.len() / 2];
            let mut x = median;
            let mut prev = halfspace_depth_1d(x, &sample).unwrap();
            for s in &steps {
                x += s;
                let d = halfspace_depth_1d(x, &sample).unwrap();
                prop_assert!(d <= prev);
                prev = d;
            }
        }

        #[test]
        fn mahalanobis_affine_invariant(
            raw in proptest::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 5..30),
            z in (-10.0..10.0f64, -10.0..10.0f64),
            m in (0.5..3.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.5..3.0f64),
            t in (-50.0..50.0f64, -50.0..50.0f64),
        ) {
            let det = m.0 * m.3 - m.1 * m.2;
            prop_assume!(det.abs() > 0.1);
            let map = |p: (f64, f64)| CartesianPoint::new(m.0 * p.0 + m.1 * p.1 + t.0, m.2 * p.0 + m.3 * p.1 + t.1);
            let sample: Vec<CartesianPoint> = raw.iter().map(|&(x, y)| CartesianPoint::new(x, y)).collect();
            let Ok(before) = mahalanobis_depth(CartesianPoint::new(z.0, z.1), &sample) else { return Ok(()); };
            let mapped: Vec<CartesianPoint> = raw.iter().map(|&p| map(p)).collect();
            let after = mahalanobis_depth(map(z), &mapped).unwrap();
            prop_assert!((before - after).abs() < 1e-9);
        }

        #[test]
        fn tukey_rigid_motion_invariant(
            raw in proptest::collection::vec((-20i32..20, -20i32..20), 1..30),
            z in (-20i32..20, -20i32..20),
            quarter_turns in 0u8..4,
            t in (-100i32..100, -100i32..100),
        ) {
            // integer coordinates keep rotations by quarter turns exact
            let rot = |(x, y): (i32, i32)| -> (i32, i32) {
                match quarter_turns { 0 => (x, y), 1 => (-y, x), 2 => (-x, -y), _ => (y, -x) }
            };
            let mv = |p: (i32, i32)| { let (x, y) = rot(p); CartesianPoint::new((x + t.0) as f64, (y + t.1) as f64) };
            let sample: Vec<CartesianPoint> = raw.iter().map(|&(x, y)| CartesianPoint::new(x as f64, y as f64)).collect();
            let moved: Vec<CartesianPoint> = raw.iter().map(|&p| mv(p)).collect();
            let before = tukey_depth_2d(CartesianPoint::new(z.0 as f64, z.1 as f64), &sample).unwrap();
            let after = tukey_depth_2d(mv(z), &moved).unwrap();
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn depth_kind_batch_matches_single() {
        let s = pts(&[(0.0, 0.0), (3.0, 1.0), (1.0, 4.0), (5.0, 5.0), (2.0, 2.0)]);
        let q = pts(&[(1.0, 1.0), (2.5, 2.5), (9.0, 9.0)]);
        for kind in [DepthKind::Tukey, DepthKind::Mahalanobis] {
            let batch = kind.depths(&q, &s).unwrap();
            for (z, d) in q.iter().zip(batch) {
                assert_eq!(kind.depth(*z, &s).unwrap(), d);
            }
        }
    }
}
