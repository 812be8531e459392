//! Brute-force reference implementations shared by the integration tests
//! and the acceptance harness. Everything here is deliberately naive.

#![allow(dead_code)]

use rand::Rng;

/// Integer lattice instance: points with coordinates in `-range..=range`.
pub fn lattice_points<R: Rng>(rng: &mut R, n: usize, range: i64) -> Vec<(i64, i64)> {
    (0..n).map(|_| (rng.random_range(-range..=range), rng.random_range(-range..=range))).collect()
}

/// Halfplane depth count of `z` by enumerating every boundary line through
/// `z` and a sample point, on both sides, each nudged infinitesimally in
/// both rotational directions. The count is piecewise constant in the
/// normal direction and minimal on open arcs, whose endpoints are exactly
/// these lines, so the enumeration is exact. O(n^2) per query.
pub fn tukey_count(z: (i64, i64), sample: &[(i64, i64)]) -> usize {
    let at_z = sample.iter().filter(|&&p| p == z).count();
    let mut best = sample.len();
    let mut any_line = false;
    for &x in sample {
        let d = (x.0 - z.0, x.1 - z.1);
        if d == (0, 0) {
            continue;
        }
        any_line = true;
        for side in [1i64, -1] {
            // normal u = side * perp(d); perp(d) = (-d.y, d.x)
            let u = (-d.1 * side, d.0 * side);
            for turn in [1i64, -1] {
                let mut count = 0;
                for &y in sample {
                    let v = (y.0 - z.0, y.1 - z.1);
                    let s = v.0 * u.0 + v.1 * u.1;
                    if s > 0 || v == (0, 0) {
                        count += 1;
                    } else if s == 0 {
                        // on the boundary line: kept iff the nudge tilts it inside
                        let along = v.0 * d.0 + v.1 * d.1;
                        if along * turn < 0 {
                            count += 1;
                        }
                    }
                }
                best = best.min(count);
            }
        }
    }
    if !any_line {
        // every sample point coincides with z (or the sample is empty)
        return at_z;
    }
    best
}

pub fn tukey_depth_oracle(z: (i64, i64), sample: &[(i64, i64)]) -> f64 {
    tukey_count(z, sample) as f64 / sample.len() as f64
}

/// Quadrant counts `(>,>), (<=,>), (<=,<=), (>,<=)` relative to `anchor`,
/// one comparison per point.
pub fn quadrants(anchor: (f64, f64), pts: &[(f64, f64)]) -> [usize; 4] {
    let mut c = [0usize; 4];
    for &(x, y) in pts {
        let right = x > anchor.0;
        let up = y > anchor.1;
        let q = match (right, up) {
            (true, true) => 0,
            (false, true) => 1,
            (false, false) => 2,
            (true, false) => 3,
        };
        c[q] += 1;
    }
    c
}

/// Two-dimensional KS statistic by exhaustive enumeration of anchors and
/// quadrants.
pub fn ks2d_oracle(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let side = |anchors: &[(f64, f64)]| -> f64 {
        let mut best = 0.0f64;
        for &p in anchors {
            let ca = quadrants(p, a);
            let cb = quadrants(p, b);
            for k in 0..4 {
                let d = (ca[k] as f64 / a.len() as f64 - cb[k] as f64 / b.len() as f64).abs();
                if d > best {
                    best = d;
                }
            }
        }
        best
    };
    (side(a) + side(b)) / 2.0
}

/// Kolmogorov tail `2 sum (-1)^(j-1) exp(-2 j^2 x^2)` summed to 10,000
/// terms; only meaningful for x away from 0.
pub fn kolmogorov_tail(x: f64) -> f64 {
    let mut s = 0.0;
    for j in 1..=10_000i64 {
        let t = (-2.0 * (j * j) as f64 * x * x).exp();
        s += if j % 2 == 1 { t } else { -t };
        if t == 0.0 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Upper `alpha` quantile of chi-square with `df` degrees of freedom by the
/// Wilson-Hilferty cube approximation; `z` is the matching normal quantile.
pub fn chi_square_critical(df: f64, z: f64) -> f64 {
    let a = 2.0 / (9.0 * df);
    df * (1.0 - a + z * a.sqrt()).powi(3)
}

/// Exact two-sided binomial acceptance band: the smallest interval
/// `[lo, hi]` of counts with `P(X < lo) <= (1-level)/2` and
/// `P(X > hi) <= (1-level)/2` under Binomial(n, p).
pub fn binomial_band(n: u64, p: f64, level: f64) -> (u64, u64) {
    let tail = (1.0 - level) / 2.0;
    // pmf by log-space recurrence
    let mut pmf = Vec::with_capacity(n as usize + 1);
    let mut log_c = 0.0f64;
    for k in 0..=n {
        if k > 0 {
            log_c += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        pmf.push((log_c + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp());
    }
    let mut lo = 0;
    let mut acc = 0.0;
    while lo <= n && acc + pmf[lo as usize] <= tail {
        acc += pmf[lo as usize];
        lo += 1;
    }
    let mut hi = n;
    let mut acc = 0.0;
    while hi > 0 && acc + pmf[hi as usize] <= tail {
        acc += pmf[hi as usize];
        hi -= 1;
    }
    (lo, hi)
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&i, &j| v[i].partial_cmp(&v[j]).unwrap());
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for k in i..=j {
                r[idx[k]] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
