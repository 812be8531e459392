mod oracles;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shotdepth_core::hyptest::{ks2d_two_sample, qks};

#[test]
fn qks_at_classical_critical_values() {
    assert!((qks(1.3581).unwrap() - 0.05).abs() <= 0.001);
    assert!((qks(1.6276).unwrap() - 0.01).abs() <= 0.001);
    // long alternating sum as an independent check away from 0
    for k in 1..=60 {
        let x = 0.1 * k as f64;
        let want = oracles::kolmogorov_tail(x);
        if x >= 0.5 {
            assert!((qks(x).unwrap() - want).abs() < 1e-9, "x = {x}");
        }
    }
}

#[test]
fn qks_monotone_on_grid() {
    let values: Vec<f64> = (1..=1000).map(|k| qks(0.005 * k as f64).unwrap()).collect();
    for w in values.windows(2) {
        assert!(w[1] <= w[0]);
        if w[0] < 1.0 {
            assert!(w[1] < w[0]);
        }
    }
    assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
}

fn random_sample<R: Rng>(rng: &mut R, n: usize, ties: bool) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| {
            if ties {
                (rng.random_range(0..5) as f64, rng.random_range(0..5) as f64)
            } else {
                (rng.random::<f64>(), rng.random::<f64>())
            }
        })
        .collect()
}

#[test]
fn ks2d_matches_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x25);
    for instance in 0..500 {
        let n1 = rng.random_range(2..=25);
        let n2 = rng.random_range(2..=25);
        let ties = instance % 2 == 0;
        let a = random_sample(&mut rng, n1, ties);
        let b = random_sample(&mut rng, n2, ties);
        let got = ks2d_two_sample(&a, &b).unwrap().statistic;
        assert_eq!(got, oracles::ks2d_oracle(&a, &b), "instance {instance}");
    }
}
