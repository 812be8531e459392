use alloc::vec::Vec;

use super::{TestMethod, TestResult, Warnings};
use crate::depth::{rank_fraction, DepthKind};
use crate::error::{Error, Result};
use crate::geometry::CartesianPoint;
use crate::math;
use crate::special;

const ASYMPTOTIC_MIN: usize = 20;

/// Standardizes `Q = mean(r)` for a reference of size `m`.
///
/// Returns `Q` together with the result, whose `statistic` is
/// `z = (Q - 1/2) / sqrt(1/(12 m) + 1/(12 n))` and whose p-value is two-sided.
pub fn liu_singh_from_r(r: &[f64], m: usize) -> Result<(f64, TestResult)> {
    let n = r.len();
    if n == 0 || m == 0 {
        return Err(Error::EmptySample);
    }
    let q = r.iter().sum::<f64>() / n as f64;
    let sd = math::sqrt(1.0 / (12.0 * m as f64) + 1.0 / (12.0 * n as f64));
    let z = (q - 0.5) / sd;
    let mut result = TestResult::new(TestMethod::M1, z, special::normal_two_sided(z), m, n);
    if m < ASYMPTOTIC_MIN || n < ASYMPTOTIC_MIN {
        result.warnings |= Warnings::SMALL_SAMPLE;
    }
    Ok((q, result))
}

/// Two-sample Liu-Singh rank-sum test with `a` as the reference
/// distribution and `b` integrated against it.
///
/// Every `y` in `b` gets `R(y) = #{x in a : D(x; a) <= D(y; a)} / m`; the
/// statistic is the standardized mean of these values (see
/// [`liu_singh_from_r`]). Tagged M1; the polar variant relabels it.
pub fn liu_singh_test(a: &[CartesianPoint], b: &[CartesianPoint], kind: DepthKind) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut ref_depths = kind.depths(a, a)?;
    ref_depths.sort_unstable_by(f64::total_cmp);
    let r: Vec<f64> = kind.depths(b, a)?.into_iter().map(|d| rank_fraction(d, &ref_depths)).collect();
    Ok(liu_singh_from_r(&r, a.len())?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::{liu_singh_r, tukey_depth_2d};
    use alloc::vec;

    fn pts(raw: &[(f64, f64)]) -> Vec<CartesianPoint> {
        raw.iter().map(|&(x, y)| CartesianPoint::new(x, y)).collect()
    }

    #[test]
    fn three_point_hand_instance() {
        // a: triangle; every vertex has Tukey depth 1/3 in a.
        let a = pts(&[(0.0, 0.0), (4.0, 0.0), (0.0, 4.0)]);
        // b: centroid-ish interior point (depth 1/3 w.r.t. a: every closed
        // halfplane through it holds at least one vertex), and two far points
        // (depth 0).
        let b = pts(&[(1.0, 1.0), (10.0, 10.0), (-5.0, 1.0)]);
        for (y, want) in [((1.0, 1.0), 1.0 / 3.0), ((10.0, 10.0), 0.0), ((-5.0, 1.0), 0.0)] {
            assert_eq!(tukey_depth_2d(CartesianPoint::new(y.0, y.1), &a).unwrap(), want);
        }
        // R = 1 for the interior point (all reference depths <= 1/3), 0 otherwise.
        let r: Vec<f64> = b.iter().map(|&y| liu_singh_r(y, &a, DepthKind::Tukey).unwrap()).collect();
        assert_eq!(r, vec![1.0, 0.0, 0.0]);
        let (q, res) = liu_singh_from_r(&r, 3).unwrap();
        assert!((q - 1.0 / 3.0).abs() < 1e-15);
        let direct = liu_singh_test(&a, &b, DepthKind::Tukey).unwrap();
        assert_eq!(direct.statistic, res.statistic);
        let want_z = (1.0 / 3.0 - 0.5) / (1.0f64 / 36.0 + 1.0 / 36.0).sqrt();
        assert!((direct.statistic - want_z).abs() < 1e-12);
        assert!(direct.warnings.contains(Warnings::SMALL_SAMPLE));
    }

    #[test]
    fn shallow_sample_gives_small_p() {
        let a: Vec<CartesianPoint> = (0..40)
            .map(|i| {
                let t = i as f64 * 0.7;
                CartesianPoint::new(libm::cos(t) * (1.0 + (i % 5) as f64), libm::sin(t) * (1.0 + (i % 7) as f64))
            })
            .collect();
        let b: Vec<CartesianPoint> = (0..40).map(|i| CartesianPoint::new(100.0 + i as f64, -50.0)).collect();
        let r = liu_singh_test(&a, &b, DepthKind::Tukey).unwrap();
        assert!(r.statistic < -5.0);
        assert!(r.p_value < 1e-6);
        assert!(r.reject);
    }

    #[test]
    fn same_sample_centered() {
        let a: Vec<CartesianPoint> = (0..60)
            .map(|i| {
                let t = i as f64;
                CartesianPoint::new(libm::sin(t * 1.3) * 10.0, libm::cos(t * 0.7) * 8.0 + t * 0.01)
            })
            .collect();
        // b = a: Q is the mean of the in-sample rank fractions, which is >= 1/2
        let r = liu_singh_test(&a, &a, DepthKind::Mahalanobis).unwrap();
        assert!(r.statistic.abs() < 3.0);
    }

    #[test]
    fn empty_inputs_error() {
        assert!(liu_singh_from_r(&[], 5).is_err());
        assert!(liu_singh_test(&[], &pts(&[(0.0, 0.0)]), DepthKind::Tukey).is_err());
    }
}
