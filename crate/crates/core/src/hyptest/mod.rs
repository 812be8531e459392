//! Two-sample and one-sample depth-based tests.
//!
//! The six comparison schemes are:
//!
//! | method | test | frame |
//! |--------|------|-------|
//! | M1 | Liu-Singh rank sum, planar Tukey depth | Cartesian |
//! | M2 | Liu-Singh rank sum, planar Tukey depth | polar `(r, theta)` |
//! | M3 | two-dimensional KS | Cartesian |
//! | M4 | two-dimensional KS | polar |
//! | M5 | two-dimensional KS on pooled depth pairs | Cartesian |
//! | M6 | two-dimensional KS on pooled depth pairs | polar |
//!
//! M6 is the default scheme. The one-sample depth tests (chi-square,
//! KS*, CM*) compare a sample against a reference sample through the
//! depth-induced outlyingness transform.

use core::fmt;
use core::str::FromStr;

use bitflags::bitflags;

use crate::depth::{DepthKind, DepthPair};
use crate::error::Result;
use crate::geometry::{self, CartesianPoint, PointPattern, PolarPoint};

mod ks2d;
mod liu_singh;
mod one_sample;

pub use ks2d::{
    depth_ks2d_test, ks2d_pvalue, ks2d_two_sample, pearson, qks, quadrant_counts, KsPValue, QuadrantCounts,
};
pub use liu_singh::{liu_singh_from_r, liu_singh_test};
pub use one_sample::{
    chi_square_from_depths, cm_star_statistic, depth_chi_square_test, depth_cm_star, depth_ks_star, ks_star_statistic,
    outlyingness_transform, CM_STAR_RESAMPLES,
};

/// Significance level used when a caller does not pick one.
pub const DEFAULT_ALPHA: f64 = 0.05;

bitflags! {
    /// Conditions under which a result is computed but should be read with
    /// care.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
    pub struct Warnings: u8 {
        /// Below the sample sizes where the asymptotic distribution is used
        /// with confidence.
        const SMALL_SAMPLE = 1;
        /// Two-dimensional KS p-value outside the region where the tail
        /// approximation is accurate (`N <= 20` or `p > 0.20`).
        const APPROXIMATION_RANGE = 1 << 1;
        /// A coordinate had zero variance; its correlation was taken as 0.
        const DEGENERATE_MARGINAL = 1 << 2;
        /// Some expected chi-square cell count is below 5.
        const SMALL_EXPECTED_COUNT = 1 << 3;
        /// A point coincided with the polar origin.
        const ORIGIN_POINT = 1 << 4;
    }
}

impl fmt::Display for Warnings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        let names = [
            (Warnings::SMALL_SAMPLE, "small_sample"),
            (Warnings::APPROXIMATION_RANGE, "approximation_range"),
            (Warnings::DEGENERATE_MARGINAL, "degenerate_marginal"),
            (Warnings::SMALL_EXPECTED_COUNT, "small_expected_count"),
            (Warnings::ORIGIN_POINT, "origin_point"),
        ];
        let mut first = true;
        for (flag, name) in names {
            if self.contains(flag) {
                if !first {
                    f.write_str(",")?;
                }
                f.write_str(name)?;
                first = false;
            }
        }
        Ok(())
    }
}

/// Identifier of a test scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestMethod {
    M1,
    M2,
    M3,
    M4,
    M5,
    M6,
    ChiSquare,
    KsStar,
    CmStar,
}

impl TestMethod {
    pub const COMPARISON: [TestMethod; 6] =
        [TestMethod::M1, TestMethod::M2, TestMethod::M3, TestMethod::M4, TestMethod::M5, TestMethod::M6];

    pub fn name(self) -> &'static str {
        match self {
            TestMethod::M1 => "M1",
            TestMethod::M2 => "M2",
            TestMethod::M3 => "M3",
            TestMethod::M4 => "M4",
            TestMethod::M5 => "M5",
            TestMethod::M6 => "M6",
            TestMethod::ChiSquare => "chi2",
            TestMethod::KsStar => "ks_star",
            TestMethod::CmStar => "cm_star",
        }
    }

    /// True for the two-sample M1..M6 schemes.
    pub fn is_two_sample(self) -> bool {
        TestMethod::COMPARISON.contains(&self)
    }

    /// True for M3..M6, whose result carries `n_eff` and `corr`.
    pub fn is_ks2d_family(self) -> bool {
        matches!(self, TestMethod::M3 | TestMethod::M4 | TestMethod::M5 | TestMethod::M6)
    }

    /// Coordinate frame a two-sample scheme works in.
    pub fn coords(self) -> Option<Coords> {
        match self {
            TestMethod::M1 | TestMethod::M3 | TestMethod::M5 => Some(Coords::Cartesian),
            TestMethod::M2 | TestMethod::M4 | TestMethod::M6 => Some(Coords::Polar),
            _ => None,
        }
    }

    /// Minimum size of each pattern.
    pub fn min_sample_size(self) -> usize {
        match self {
            TestMethod::M1 | TestMethod::M2 => 1,
            TestMethod::M3 | TestMethod::M4 | TestMethod::M5 | TestMethod::M6 => 2,
            TestMethod::ChiSquare | TestMethod::KsStar | TestMethod::CmStar => 1,
        }
    }
}

impl fmt::Display for TestMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownMethod;

impl fmt::Display for UnknownMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown test method (expected M1..M6, chi2, ks_star or cm_star)")
    }
}

impl core::error::Error for UnknownMethod {}

impl FromStr for TestMethod {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "m1" | "1" => TestMethod::M1,
            "m2" | "2" => TestMethod::M2,
            "m3" | "3" => TestMethod::M3,
            "m4" | "4" => TestMethod::M4,
            "m5" | "5" => TestMethod::M5,
            "m6" | "6" => TestMethod::M6,
            "chi2" | "chi_square" | "chisq" => TestMethod::ChiSquare,
            "ks_star" | "ks*" | "ksstar" => TestMethod::KsStar,
            "cm_star" | "cm*" | "cmstar" => TestMethod::CmStar,
            _ => return Err(UnknownMethod),
        })
    }
}

/// Coordinate frame a test runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coords {
    Cartesian,
    #[default]
    Polar,
}

impl Coords {
    pub fn name(self) -> &'static str {
        match self {
            Coords::Cartesian => "cartesian",
            Coords::Polar => "polar",
        }
    }
}

impl FromStr for Coords {
    type Err = &'static str;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cartesian" | "cart" | "xy" => Ok(Coords::Cartesian),
            "polar" => Ok(Coords::Polar),
            _ => Err("coordinates must be `cartesian` or `polar`"),
        }
    }
}

/// Anything with two real coordinates the two-dimensional KS test can rank.
pub trait Planar {
    fn xy(&self) -> (f64, f64);
}

impl Planar for CartesianPoint {
    fn xy(&self) -> (f64, f64) {
        (self.x, self.y)
    }
}

impl Planar for PolarPoint {
    fn xy(&self) -> (f64, f64) {
        (self.r, self.theta)
    }
}

impl Planar for DepthPair {
    fn xy(&self) -> (f64, f64) {
        (self.d_r, self.d_theta)
    }
}

impl Planar for (f64, f64) {
    fn xy(&self) -> (f64, f64) {
        *self
    }
}

/// Outcome of one test.
///
/// For the two-sample schemes `n1` is the size of the first pattern and
/// `n2` the size of the second. Liu-Singh treats the first pattern as the
/// reference distribution and integrates the outlyingness over the second.
/// One-sample tests report the sample in `n1` and the reference in `n2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub method: TestMethod,
    pub statistic: f64,
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
    /// `n1 n2 / (n1 + n2)` for the KS family.
    pub n_eff: Option<f64>,
    /// Correlation fed to the KS tail approximation.
    pub corr: Option<f64>,
    pub alpha: f64,
    pub reject: bool,
    pub warnings: Warnings,
}

impl TestResult {
    pub(crate) fn new(method: TestMethod, statistic: f64, p_value: f64, n1: usize, n2: usize) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        Self {
            method,
            statistic,
            p_value,
            n1,
            n2,
            n_eff: None,
            corr: None,
            alpha: DEFAULT_ALPHA,
            reject: p_value < DEFAULT_ALPHA,
            warnings: Warnings::empty(),
        }
    }

    /// Re-decides the result at another significance level.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self.reject = self.p_value < alpha;
        self
    }

    pub(crate) fn with_method(mut self, method: TestMethod) -> Self {
        self.method = method;
        self
    }
}

/// Knobs shared by the two-sample schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Polar origin (the rim).
    pub origin: CartesianPoint,
    /// Planar depth for the Liu-Singh schemes.
    pub depth: DepthKind,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { origin: CartesianPoint::ORIGIN, depth: DepthKind::Tukey }
    }
}

fn polar_plane(p: &PointPattern, origin: CartesianPoint) -> (alloc::vec::Vec<CartesianPoint>, bool) {
    let polar = geometry::to_polar_pattern(p, origin);
    let degenerate = polar.iter().any(PolarPoint::is_degenerate);
    (geometry::polar_as_plane(&polar), degenerate)
}

/// Runs one of the M1..M6 schemes with the rim at the origin.
pub fn run_method(method: TestMethod, a: &PointPattern, b: &PointPattern, alpha: f64) -> Result<TestResult> {
    run_method_with(method, a, b, alpha, &RunOptions::default())
}

pub fn run_method_with(
    method: TestMethod,
    a: &PointPattern,
    b: &PointPattern,
    alpha: f64,
    opts: &RunOptions,
) -> Result<TestResult> {
    let result = match method {
        TestMethod::M1 => liu_singh_test(a.points(), b.points(), opts.depth)?,
        TestMethod::M2 => {
            let (pa, da) = polar_plane(a, opts.origin);
            let (pb, db) = polar_plane(b, opts.origin);
            let mut r = liu_singh_test(&pa, &pb, opts.depth)?.with_method(TestMethod::M2);
            if da || db {
                r.warnings |= Warnings::ORIGIN_POINT;
            }
            r
        }
        TestMethod::M3 => ks2d_two_sample(a.points(), b.points())?,
        TestMethod::M4 => {
            let (pa, da) = polar_plane(a, opts.origin);
            let (pb, db) = polar_plane(b, opts.origin);
            let mut r = ks2d_two_sample(&pa, &pb)?.with_method(TestMethod::M4);
            if da || db {
                r.warnings |= Warnings::ORIGIN_POINT;
            }
            r
        }
        TestMethod::M5 => depth_ks2d_test(a, b, Coords::Cartesian, opts.origin)?,
        TestMethod::M6 => depth_ks2d_test(a, b, Coords::Polar, opts.origin)?,
        TestMethod::ChiSquare | TestMethod::KsStar | TestMethod::CmStar => {
            return Err(crate::Error::InvalidParameter("one-sample depth tests are run through their own entry points"))
        }
    };
    Ok(result.with_alpha(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CartesianPoint as P;
    use alloc::string::ToString;
    use alloc::vec::Vec;

    fn pattern(raw: &[(f64, f64)]) -> PointPattern {
        PointPattern::from_points(raw.iter().map(|&(x, y)| P::new(x, y)).collect()).unwrap()
    }

    fn grid_pattern(offset: f64) -> PointPattern {
        let pts: Vec<(f64, f64)> = (0..30)
            .map(|i| {
                let t = i as f64;
                (offset + 10.0 * libm::sin(t * 1.7) + t * 0.1, 40.0 + 15.0 * libm::cos(t * 2.3))
            })
            .collect();
        pattern(&pts)
    }

    #[test]
    fn method_parsing() {
        assert_eq!("m6".parse::<TestMethod>(), Ok(TestMethod::M6));
        assert_eq!("M1".parse::<TestMethod>(), Ok(TestMethod::M1));
        assert_eq!("cm*".parse::<TestMethod>(), Ok(TestMethod::CmStar));
        assert!("M7".parse::<TestMethod>().is_err());
        assert_eq!("Polar".parse::<Coords>(), Ok(Coords::Polar));
    }

    #[test]
    fn identical_patterns_do_not_reject() {
        let a = grid_pattern(0.0);
        for m in [TestMethod::M3, TestMethod::M4, TestMethod::M5, TestMethod::M6] {
            let r = run_method(m, &a, &a, 0.05).unwrap();
            assert_eq!(r.method, m);
            assert_eq!(r.statistic, 0.0);
            assert_eq!(r.p_value, 1.0);
            assert!(!r.reject);
        }
    }

    #[test]
    fn dispatch_tags_and_frames() {
        let a = grid_pattern(0.0);
        let b = grid_pattern(3.0);
        for m in TestMethod::COMPARISON {
            let r = run_method(m, &a, &b, 0.05).unwrap();
            assert_eq!(r.method, m);
            assert!((0.0..=1.0).contains(&r.p_value));
            assert_eq!(r.reject, r.p_value < 0.05);
            assert_eq!(r.n_eff.is_some(), m.is_ks2d_family());
        }
    }

    #[test]
    fn swapping_samples_keeps_ks_family_result() {
        let a = grid_pattern(0.0);
        let b = grid_pattern(4.0);
        for m in [TestMethod::M3, TestMethod::M4, TestMethod::M5, TestMethod::M6] {
            let ab = run_method(m, &a, &b, 0.05).unwrap();
            let ba = run_method(m, &b, &a, 0.05).unwrap();
            assert!((ab.statistic - ba.statistic).abs() < 1e-15);
            assert!((ab.p_value - ba.p_value).abs() < 1e-12);
        }
    }

    #[test]
    fn origin_points_are_flagged() {
        let a = pattern(&[(0.0, 0.0), (1.0, 2.0), (3.0, 1.0), (-2.0, 4.0)]);
        let b = pattern(&[(1.0, 1.0), (2.0, 2.0), (-1.0, 3.0)]);
        let r = run_method(TestMethod::M4, &a, &b, 0.05).unwrap();
        assert!(r.warnings.contains(Warnings::ORIGIN_POINT));
    }

    #[test]
    fn warnings_display() {
        assert_eq!(Warnings::empty().to_string(), "-");
        let w = Warnings::SMALL_SAMPLE | Warnings::APPROXIMATION_RANGE;
        assert_eq!(w.to_string(), "small_sample,approximation_range");
    }
}
