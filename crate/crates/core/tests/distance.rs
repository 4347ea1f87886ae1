mod common;

use proptest::prelude::*;
use qnc::angles::DataVector;
use qnc::distance::{estimate_distance, sample_distance, CompiledVector, Shots};
use qnc::sim::NoiseSpec;
use qnc::stats::{wilson_interval, Z_95};
use qnc::Error;

use common::*;

fn exact(x: &[f64], y: &[f64]) -> f64 {
    let a = DataVector::new(x.to_vec()).unwrap();
    let b = DataVector::new(y.to_vec()).unwrap();
    estimate_distance(&a, &b, Shots::Exact, &NoiseSpec::noiseless(0), false)
        .unwrap()
        .l_hat
}

fn euclid(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn exact_mode_recovers_euclidean_distance() {
    let mut r = rng(100);
    for d in [2usize, 4, 8, 16] {
        for _ in 0..1000 {
            let x = random_vector(&mut r, d, true);
            let y = random_vector(&mut r, d, true);
            let scale = norm(&x).max(norm(&y));
            let err = (exact(&x, &y) - euclid(&x, &y)).abs();
            // c = sqrt(p) loses accuracy only as c approaches 1, where the
            // distance itself is tiny; compare squared distances there.
            let sq_err = (exact(&x, &y).powi(2) - euclid(&x, &y).powi(2)).abs();
            assert!(err < 1e-9 * scale || sq_err < 1e-12 * scale * scale, "d={d}: {err}");
        }
    }
}

proptest! {
    #[test]
    fn exact_distance_is_symmetric(d in prop::sample::select(vec![2usize, 4, 8, 16]), seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random_vector(&mut r, d, true);
        let y = random_vector(&mut r, d, true);
        prop_assert!((exact(&x, &y) - exact(&y, &x)).abs() < 1e-12 * norm(&x).max(norm(&y)));
    }

    #[test]
    fn distance_to_self_is_zero(d in prop::sample::select(vec![2usize, 4, 8, 16, 32]), seed in any::<u64>()) {
        let x = random_vector(&mut rng(seed), d, false);
        prop_assert!(exact(&x, &x) < 1e-6 * norm(&x));
    }
}

#[test]
fn sampled_distance_for_worked_example() {
    let x = CompiledVector::compile(&DataVector::new(vec![0.6, 0.8, 0.0, 0.0]).unwrap()).unwrap();
    let y = CompiledVector::compile(&DataVector::new(vec![0.8, 0.6, 0.0, 0.0]).unwrap()).unwrap();
    let shots = 100_000u64;
    let (e, rec, _) = sample_distance(&x, &y, shots, &NoiseSpec::noiseless(17), false, &[]).unwrap();
    assert_eq!(rec.total(), shots);
    // Map p ± 3σ through l(p) = sqrt(2 − 2 sqrt(p)), which is decreasing.
    let p = 0.9216f64;
    let sigma = (p * (1.0 - p) / shots as f64).sqrt();
    let l = |p: f64| (2.0 - 2.0 * p.sqrt()).max(0.0).sqrt();
    assert!((l(p) - 0.282_842_712).abs() < 1e-8);
    assert!(
        e.l_hat >= l(p + 3.0 * sigma) && e.l_hat <= l(p - 3.0 * sigma),
        "{}",
        e.l_hat
    );
}

#[test]
fn wilson_interval_coverage() {
    let x = CompiledVector::compile(&DataVector::new(vec![0.6, 0.8, 0.0, 0.0]).unwrap()).unwrap();
    let y = CompiledVector::compile(&DataVector::new(vec![0.8, 0.6, 0.0, 0.0]).unwrap()).unwrap();
    let trials = 10_000u64;
    let mut covered = 0;
    for t in 0..trials {
        let (_, _, est) = sample_distance(&x, &y, 1000, &NoiseSpec::noiseless(t), false, &[]).unwrap();
        let hits = (est.p_raw * 1000.0).round() as u64;
        let (lo, hi) = wilson_interval(hits, 1000, Z_95).unwrap();
        if (lo..=hi).contains(&0.9216) {
            covered += 1;
        }
    }
    let rate = covered as f64 / trials as f64;
    assert!((0.94..=0.96).contains(&rate), "coverage {rate}");
}

#[test]
fn mismatched_and_zero_inputs() {
    let a = DataVector::new(vec![1.0, 2.0]).unwrap();
    let b = DataVector::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    assert!(matches!(
        estimate_distance(&a, &b, Shots::Exact, &NoiseSpec::noiseless(0), false),
        Err(Error::DimensionMismatch { .. })
    ));
    let z = DataVector::new(vec![0.0, 0.0]).unwrap();
    assert!(matches!(
        estimate_distance(&a, &z, Shots::Exact, &NoiseSpec::noiseless(0), false),
        Err(Error::ZeroVector)
    ));
    assert!(estimate_distance(&a, &a, Shots::Sampled(0), &NoiseSpec::noiseless(0), false).is_err());
}

#[test]
fn mitigation_helps_under_depolarizing_noise() {
    let xv = DataVector::new(vec![0.3, 0.1, 0.5, 0.2, 0.4, 0.1, 0.3, 0.6]).unwrap();
    let yv = DataVector::new(vec![0.2, 0.4, 0.1, 0.3, 0.5, 0.2, 0.1, 0.4]).unwrap();
    let truth = euclid(xv.entries(), yv.entries());
    let (x, y) = (
        CompiledVector::compile(&xv).unwrap(),
        CompiledVector::compile(&yv).unwrap(),
    );
    let noise = NoiseSpec::new(0.0, 0.96, 2).unwrap();
    let raw = sample_distance(&x, &y, 50_000, &noise, false, &[]).unwrap().0.l_hat;
    let mit = sample_distance(&x, &y, 50_000, &noise, true, &[]).unwrap().0.l_hat;
    assert!(
        (mit - truth).abs() < (raw - truth).abs(),
        "raw {raw}, mitigated {mit}, truth {truth}"
    );
}
