//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use qnc::circuit::Circuit;
use qnc::sim::{run_unary, run_unary_with_offsets};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian entries, or their absolute values when `nonnegative`.
pub fn random_vector(rng: &mut ChaCha8Rng, d: usize, nonnegative: bool) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d)
            .map(|_| {
                let x: f64 = rng.sample(StandardNormal);
                if nonnegative {
                    x.abs()
                } else {
                    x
                }
            })
            .collect();
        if v.iter().any(|&x| x != 0.0) {
            return v;
        }
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn normalized(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|x| x / n).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Returns
/// eigenvalues in decreasing order and the matching unit eigenvectors.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in m.iter_mut() {
                    let (mkp, mkq) = (row[p], row[q]);
                    row[p] = c * mkp - s * mkq;
                    row[q] = s * mkp + c * mkq;
                }
                let (rp, rq) = (m[p].clone(), m[q].clone());
                m[p] = rp.iter().zip(&rq).map(|(a, b)| c * a - s * b).collect();
                m[q] = rp.iter().zip(&rq).map(|(a, b)| s * a + c * b).collect();
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j][j].total_cmp(&m[i][i]));
    let values = order.iter().map(|&i| m[i][i]).collect();
    let vectors = order.iter().map(|&i| v.iter().map(|row| row[i]).collect()).collect();
    (values, vectors)
}

/// Sample covariance with divisor `n - 1`.
pub fn covariance(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = points.len() as f64;
    let d = points[0].len();
    let mean: Vec<f64> = (0..d).map(|j| points.iter().map(|p| p[j]).sum::<f64>() / n).collect();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| points.iter().map(|p| (p[i] - mean[i]) * (p[j] - mean[j])).sum::<f64>() / (n - 1.0))
                .collect()
        })
        .collect()
}

/// Builds `rho = p |psi><psi| + (1 - p) I / 2^n` as an explicit matrix for
/// the unary state with real amplitudes `amps` (qubit 0 is the leading bit),
/// then post-selects on unary strings and returns the `|e_1>` weight.
pub fn density_matrix_postselected(amps: &[f64], p: f64) -> f64 {
    let n = amps.len();
    let dim = 1usize << n;
    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    for (q, &a) in amps.iter().enumerate() {
        psi[1 << (n - 1 - q)] = Complex64::new(a, 0.0);
    }
    let mut rho = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            rho[i][j] = psi[i] * psi[j].conj() * p;
        }
        rho[i][i] += Complex64::new((1.0 - p) / dim as f64, 0.0);
    }
    let unary: Vec<usize> = (0..n).map(|q| 1 << (n - 1 - q)).collect();
    let projected: f64 = unary.iter().map(|&k| rho[k][k].re).sum();
    rho[unary[0]][unary[0]].re / projected
}

/// Circuit made of the first `count` layers of `c`.
pub fn prefix(c: &Circuit, count: usize) -> Circuit {
    Circuit::from_layers(c.num_qubits(), c.layers()[..count].to_vec()).unwrap()
}

fn rotations_in(c: &Circuit, layers: std::ops::Range<usize>) -> usize {
    c.layers()[layers]
        .iter()
        .flatten()
        .filter(|g| g.angle().is_some())
        .count()
}

/// Error vector after applying layer `layer` of `c` with noise draws `draws`
/// (one per rotation in that layer) while every earlier layer is exact.
pub fn single_layer_error(c: &Circuit, layer: usize, gamma: f64, draws: &[f64]) -> Vec<f64> {
    let upto = prefix(c, layer + 1);
    let before = rotations_in(c, 0..layer);
    let mut offsets = vec![0.0; before];
    offsets.extend_from_slice(draws);
    let noisy = run_unary_with_offsets(&upto, gamma, &offsets).unwrap();
    let ideal = run_unary(&upto).unwrap();
    noisy
        .amplitudes()
        .iter()
        .zip(ideal.amplitudes())
        .map(|(a, b)| a - b)
        .collect()
}

/// Root-mean-square end-to-end error of `c` under i.i.d. angle noise.
pub fn end_to_end_rms(c: &Circuit, gamma: f64, trials: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let ideal = run_unary(c).unwrap();
    let gates = c.stats().rbs_count;
    let mut acc = 0.0;
    for _ in 0..trials {
        let draws: Vec<f64> = (0..gates).map(|_| r.sample(StandardNormal)).collect();
        let noisy = run_unary_with_offsets(c, gamma, &draws).unwrap();
        acc += noisy
            .amplitudes()
            .iter()
            .zip(ideal.amplitudes())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>();
    }
    (acc / trials as f64).sqrt()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    qnc::stats::linear_fit(&logs).unwrap().slope
}
