//! Distribution tails and binomial intervals used by the tests and the
//! experiment summaries.

use crate::math;

/// Upper tail of the standard normal, `P(Z > z)`.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * math::erfc(z / core::f64::consts::SQRT_2)
}

/// Two-sided normal p-value `P(|Z| > |z|)`.
pub fn normal_two_sided(z: f64) -> f64 {
    math::erfc(math::abs(z) / core::f64::consts::SQRT_2).min(1.0)
}

/// Regularized upper incomplete gamma `Q(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_continued_fraction(a, x)
    }
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut sum = 1.0 / a;
    let mut del = sum;
    for _ in 0..10_000 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if math::abs(del) < math::abs(sum) * 1e-16 {
            break;
        }
    }
    sum * math::exp(-x + a * math::ln(x) - math::lgamma(a))
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
fn gamma_q_continued_fraction(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if math::abs(d) < TINY {
            d = TINY;
        }
        c = b + an / c;
        if math::abs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if math::abs(del - 1.0) < 1e-16 {
            break;
        }
    }
    math::exp(-x + a * math::ln(x) - math::lgamma(a)) * h
}

/// Survival function of the chi-square distribution with `df` degrees of
/// freedom.
pub fn chi_square_sf(x: f64, df: f64) -> f64 {
    gamma_q(0.5 * df, 0.5 * x).clamp(0.0, 1.0)
}

fn ln_choose(n: u64, k: u64) -> f64 {
    math::lgamma(n as f64 + 1.0) - math::lgamma(k as f64 + 1.0) - math::lgamma((n - k) as f64 + 1.0)
}

/// Binomial probability mass `P(X = k)` for `X ~ Bin(n, p)`.
pub fn binomial_pmf(k: u64, n: u64, p: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    math::exp(ln_choose(n, k) + k as f64 * math::ln(p) + (n - k) as f64 * math::ln(1.0 - p))
}

/// `P(X <= k)` for `X ~ Bin(n, p)`.
pub fn binomial_cdf(k: u64, n: u64, p: f64) -> f64 {
    if k >= n {
        return 1.0;
    }
    (0..=k).map(|i| binomial_pmf(i, n, p)).sum::<f64>().min(1.0)
}

/// `P(X >= k)` for `X ~ Bin(n, p)`.
pub fn binomial_sf_inclusive(k: u64, n: u64, p: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    (k..=n).map(|i| binomial_pmf(i, n, p)).sum::<f64>().min(1.0)
}

/// Exact (Clopper-Pearson) confidence interval for a binomial proportion
/// with `k` successes out of `n`, so each tail holds `(1 - level) / 2`.
pub fn clopper_pearson(k: u64, n: u64, level: f64) -> (f64, f64) {
    assert!(n > 0 && k <= n);
    let tail = 0.5 * (1.0 - level);
    let lower = if k == 0 {
        0.0
    } else {
        // P(X >= k; p) increases in p
        bisect(|p| binomial_sf_inclusive(k, n, p) - tail)
    };
    let upper = if k == n {
        1.0
    } else {
        // P(X <= k; p) decreases in p
        bisect(|p| tail - binomial_cdf(k, n, p))
    };
    (lower, upper)
}

// Root of an increasing function on [0, 1].
fn bisect(f: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Central acceptance region `[lo, hi]` for counts of `Bin(n, p)`: the
/// largest `lo` with `P(X < lo) <= (1 - level) / 2` and the smallest `hi`
/// with `P(X > hi) <= (1 - level) / 2`.
pub fn binomial_acceptance_band(n: u64, p: f64, level: f64) -> (u64, u64) {
    let tail = 0.5 * (1.0 - level);
    let mut lo = 0;
    while lo < n && binomial_cdf(lo, n, p) <= tail {
        lo += 1;
    }
    let mut hi = n;
    while hi > 0 && 1.0 - binomial_cdf(hi - 1, n, p) <= tail {
        hi -= 1;
    }
    (lo, hi)
}
