mod common;

use proptest::prelude::*;
use qnc::angles::{compile_angles, DataVector};
use qnc::circuit::{build_parallel_loader, Circuit, Gate};
use qnc::distance::build_distance_circuit;
use qnc::noise_analysis::predict_postselected_overlap;
use qnc::sim::{
    estimate_overlap, run_full, run_unary, run_unary_noisy, sample_mixture, sample_shots, CoherentMode, NoiseSpec,
    UnaryState,
};
use rand::Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use common::*;

fn unary_vs_full(c: &Circuit) -> f64 {
    let u = run_unary(c).unwrap();
    let f = run_full(c).unwrap();
    let amps = f.unary_amplitudes();
    let unary_weight: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    assert!((unary_weight - 1.0).abs() < 1e-10);
    u.amplitudes()
        .iter()
        .zip(&amps)
        .map(|(a, b)| (a - b.re).abs().max(b.im.abs()))
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn unary_and_full_agree(d in prop::sample::select(vec![2usize, 4, 8]), seed in any::<u64>()) {
        let mut r = rng(seed);
        let tx = compile_angles(&DataVector::new(random_vector(&mut r, d, false)).unwrap()).unwrap();
        let ty = compile_angles(&DataVector::new(random_vector(&mut r, d, false)).unwrap()).unwrap();
        prop_assert!(unary_vs_full(&build_parallel_loader(&tx)) < 1e-10);
        prop_assert!(unary_vs_full(&build_distance_circuit(&tx, &ty).unwrap()) < 1e-10);
    }

    #[test]
    fn noisy_runs_conserve_norm(d in prop::sample::select(vec![2usize, 4, 8, 16, 32]), seed in any::<u64>(), gamma in 0.0f64..0.5) {
        let mut r = rng(seed);
        let t = compile_angles(&DataVector::new(random_vector(&mut r, d, false)).unwrap()).unwrap();
        let s = run_unary_noisy(&build_parallel_loader(&t), gamma, &mut r).unwrap();
        prop_assert!((norm(s.amplitudes()) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn zero_gamma_is_the_noiseless_path() {
    let t = compile_angles(&DataVector::new(vec![0.3, -0.2, 0.9, 0.1, 0.4, 0.0, 0.2, 0.7]).unwrap()).unwrap();
    let c = build_parallel_loader(&t);
    let a = run_unary(&c).unwrap();
    let b = run_unary_noisy(&c, 0.0, &mut rng(1)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn basis_loader_stays_on_first_qubit() {
    let t = compile_angles(&DataVector::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap()).unwrap();
    let s = run_unary(&build_parallel_loader(&t)).unwrap();
    assert_eq!(s.amplitudes(), &[1.0, 0.0, 0.0, 0.0]);
}

#[test]
fn non_unary_gates_are_rejected() {
    let c = Circuit::from_layers(
        2,
        vec![vec![Gate::X { qubit: 0 }], vec![Gate::Cnot { control: 0, target: 1 }]],
    )
    .unwrap();
    assert!(run_unary(&c).is_err());
}

#[test]
fn noiseless_shots_all_land_on_e1() {
    let t = compile_angles(&DataVector::new(vec![0.5, 0.5, 0.5, 0.5]).unwrap()).unwrap();
    let c = build_distance_circuit(&t, &t).unwrap();
    let rec = sample_shots(&c, &NoiseSpec::noiseless(2), 777, &[]).unwrap();
    assert_eq!(rec.count(0b1000), 777);
    assert_eq!(rec.total(), 777);
}

fn eight_qubit_circuit() -> Circuit {
    let mut r = rng(3);
    let tx = compile_angles(&DataVector::new(random_vector(&mut r, 8, true)).unwrap()).unwrap();
    let ty = compile_angles(&DataVector::new(random_vector(&mut r, 8, true)).unwrap()).unwrap();
    build_distance_circuit(&tx, &ty).unwrap()
}

#[test]
fn non_unary_fraction_matches_mixture() {
    let c = eight_qubit_circuit();
    assert_eq!(c.stats().native_tqg_count, 30);
    let shots = 100_000u64;
    let rec = sample_shots(&c, &NoiseSpec::new(0.0, 0.96, 4).unwrap(), shots, &[9]).unwrap();
    let p = 0.96f64.powi(30);
    let expected = (1.0 - p) * (256.0 - 8.0) / 256.0;
    let est = estimate_overlap(&rec).unwrap();
    let observed = 1.0 - est.valid_fraction.unwrap();
    let sigma = (expected * (1.0 - expected) / shots as f64).sqrt();
    assert!((observed - expected).abs() < 3.0 * sigma, "{observed} vs {expected}");
}

#[test]
fn postselected_estimate_matches_model() {
    let c = eight_qubit_circuit();
    let a1 = run_unary(&c).unwrap().amplitudes()[0].powi(2);
    let shots = 100_000u64;
    let rec = sample_shots(&c, &NoiseSpec::new(0.0, 0.96, 5).unwrap(), shots, &[1]).unwrap();
    let est = estimate_overlap(&rec).unwrap();
    let predicted = predict_postselected_overlap(a1, 8, 0.96f64.powi(30)).unwrap();
    let kept = (est.valid_fraction.unwrap() * shots as f64).round();
    let sigma = (predicted * (1.0 - predicted) / kept).sqrt();
    assert!((est.p_mitigated.unwrap() - predicted).abs() < 3.0 * sigma);
}

#[test]
fn mixture_passes_chi_square() {
    let amps = normalized(&[0.6, 0.3, 0.5, 0.2]);
    let state = UnaryState::from_amplitudes(amps.clone()).unwrap();
    let keep = 0.7;
    let shots = 100_000u64;
    let rec = sample_mixture(&state, keep, shots, &mut rng(8)).unwrap();
    let mut stat = 0.0;
    for outcome in 0u64..16 {
        let mut prob = (1.0 - keep) / 16.0;
        if outcome.count_ones() == 1 {
            let q = 3 - outcome.trailing_zeros() as usize;
            prob += keep * amps[q] * amps[q];
        }
        let e = prob * shots as f64;
        let o = rec.count(outcome) as f64;
        stat += (o - e).powi(2) / e;
    }
    let p_value = 1.0 - ChiSquared::new(15.0).unwrap().cdf(stat);
    assert!(p_value > 0.01, "chi-square {stat}, p = {p_value}");
}

#[test]
fn pure_depolarizing_spreads_over_unary_strings() {
    let c = eight_qubit_circuit();
    let rec = sample_shots(&c, &NoiseSpec::new(0.0, 1e-6, 6).unwrap(), 200_000, &[]).unwrap();
    let m = estimate_overlap(&rec).unwrap().p_mitigated.unwrap();
    let kept = 200_000.0f64 * 8.0 / 256.0;
    assert!((m - 0.125).abs() < 3.0 * (0.125 * 0.875 / kept).sqrt());
}

#[test]
fn shot_records_are_reproducible_per_key() {
    let c = eight_qubit_circuit();
    for mode in [CoherentMode::PerShot, CoherentMode::PerBatch, CoherentMode::Systematic] {
        let noise = NoiseSpec::new(0.05, 0.97, 10)
            .unwrap()
            .with_mode(mode)
            .with_batch_size(100);
        let a = sample_shots(&c, &noise, 1000, &[1, 2]).unwrap();
        assert_eq!(a, sample_shots(&c, &noise, 1000, &[1, 2]).unwrap());
        assert_ne!(a, sample_shots(&c, &noise, 1000, &[2, 1]).unwrap());
    }
}

#[test]
fn shot_record_json() {
    let c = eight_qubit_circuit();
    let rec = sample_shots(&c, &NoiseSpec::new(0.0, 0.9, 1).unwrap(), 50, &[]).unwrap();
    let v: serde_json::Value = serde_json::to_value(&rec).unwrap();
    assert_eq!(v["mode"], "full-readout");
    assert_eq!(v["total"], 50);
    let sum: u64 = v["counts"]
        .as_object()
        .unwrap()
        .values()
        .map(|x| x.as_u64().unwrap())
        .sum();
    assert_eq!(sum, 50);
    let back: qnc::sim::ShotRecord = serde_json::from_value(v).unwrap();
    assert_eq!(back, rec);
}

/// Every draw obeys `‖e‖ ≤ Γ max_g |θ_g r_g|` after a single noisy layer, and
/// the RMS error per layer stays at the `√2 Γ` scale whatever the number of
/// gates in the layer.
#[test]
fn per_layer_error_bound() {
    let mut r = rng(21);
    for gamma in [0.01, 0.05] {
        let mut sq = [0.0f64; 4];
        for _ in 0..1000 {
            let t = compile_angles(&DataVector::new(random_vector(&mut r, 16, true)).unwrap()).unwrap();
            let c = build_parallel_loader(&t);
            for layer in 1..=4 {
                let angles = t.layer_angles(layer - 1);
                let draws: Vec<f64> = angles.iter().map(|_| r.sample(StandardNormal)).collect();
                let e = single_layer_error(&c, layer, gamma, &draws);
                let bound = gamma
                    * angles
                        .iter()
                        .zip(&draws)
                        .map(|(a, d)| (a * d).abs())
                        .fold(0.0, f64::max);
                assert!(norm(&e) <= bound * (1.0 + 1e-9) + 1e-15);
                sq[layer - 1] += norm(&e).powi(2);
            }
        }
        let rms: Vec<f64> = sq.iter().map(|s| (s / 1000.0).sqrt()).collect();
        for &v in &rms {
            assert!(v <= 2f64.sqrt() * gamma, "{rms:?}");
        }
        let (lo, hi) = rms.iter().fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(hi / lo < 1.5, "per-layer RMS varies with gate count: {rms:?}");
    }
}

#[test]
fn end_to_end_error_grows_like_square_root_of_depth() {
    let gamma = 0.02;
    let points: Vec<(f64, f64)> = (1..=10)
        .map(|depth| {
            let d = 1usize << depth;
            let t = compile_angles(&DataVector::new(vec![1.0; d]).unwrap()).unwrap();
            (
                depth as f64,
                end_to_end_rms(&build_parallel_loader(&t), gamma, 4000, depth as u64),
            )
        })
        .collect();
    let slope = log_log_slope(&points);
    assert!((slope - 0.5).abs() <= 0.1, "exponent {slope}");
}
