//! Exact evolution restricted to the unary subspace: `d` real amplitudes
//! plus the all-zeros amplitude needed before the initial X gate.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Amplitudes on the unary basis states `e_1 .. e_d` (stored 0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct UnaryState {
    amps: Vec<f64>,
}

impl UnaryState {
    pub fn from_amplitudes(amps: Vec<f64>) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|a| a * a).sum();
        if (norm_sq - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "unary amplitudes have squared norm {norm_sq}"
            )));
        }
        Ok(Self { amps })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    pub fn dimension(&self) -> usize {
        self.amps.len()
    }

    /// Probability of each unary outcome.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a * a).collect()
    }
}

/// Runs `c` from `|0...0>` with every rotation angle passed through
/// `angle_of(rotation_index, angle)`.
pub(crate) fn evolve(c: &Circuit, mut angle_of: impl FnMut(usize, f64) -> f64) -> Result<UnaryState> {
    let n = c.num_qubits();
    let mut vacuum = 1.0f64;
    let mut amps = vec![0.0f64; n];
    let mut rotation = 0usize;
    for (layer_index, layer) in c.layers().iter().enumerate() {
        for gate in layer {
            match *gate {
                Gate::X { qubit } => {
                    if amps.iter().enumerate().any(|(j, &a)| j != qubit && a != 0.0) {
                        return Err(Error::LeftUnarySubspace(format!(
                            "X on qubit {qubit} in layer {layer_index}"
                        )));
                    }
                    std::mem::swap(&mut vacuum, &mut amps[qubit]);
                }
                Gate::Rbs { qubits: [i, j], angle } => {
                    let theta = angle_of(rotation, angle);
                    rotation += 1;
                    let (s, co) = theta.sin_cos();
                    let (ai, aj) = (amps[i], amps[j]);
                    amps[i] = co * ai - s * aj;
                    amps[j] = s * ai + co * aj;
                }
                other => {
                    return Err(Error::UnsupportedGate(format!(
                        "{} in the unary simulator",
                        other.kind()
                    )))
                }
            }
        }
    }
    if vacuum != 0.0 {
        return Err(Error::LeftUnarySubspace("final state keeps weight on |0...0>".into()));
    }
    Ok(UnaryState { amps })
}

/// Noiseless unary simulation. Only X and RBS gates are accepted.
pub fn run_unary(c: &Circuit) -> Result<UnaryState> {
    evolve(c, |_, theta| theta)
}

/// Unary simulation with coherent angle noise: every RBS(θ) is applied as
/// RBS(θ(1 + γ r)) with a fresh standard-normal `r` per gate.
pub fn run_unary_noisy<R: Rng + ?Sized>(c: &Circuit, gamma: f64, rng: &mut R) -> Result<UnaryState> {
    evolve(c, |_, theta| {
        let r: f64 = rng.sample(StandardNormal);
        theta * (1.0 + gamma * r)
    })
}

/// Unary simulation with a fixed draw `offsets[k]` for the `k`-th rotation.
pub fn run_unary_with_offsets(c: &Circuit, gamma: f64, offsets: &[f64]) -> Result<UnaryState> {
    let needed = c.stats().rbs_count;
    if offsets.len() < needed {
        return Err(Error::InvalidArgument(format!(
            "{needed} rotations but {} noise offsets",
            offsets.len()
        )));
    }
    evolve(c, |k, theta| theta * (1.0 + gamma * offsets[k]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{AngleTree, DataVector};
    use crate::circuit::build_parallel_loader;
    use rand::SeedableRng;

    fn loader(values: Vec<f64>) -> Circuit {
        build_parallel_loader(&AngleTree::compile(&DataVector::new(values).unwrap()).unwrap())
    }

    #[test]
    fn basis_loader_stays_on_first_qubit() {
        let s = run_unary(&loader(vec![1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(s.amplitudes(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn mixed_signs_reproduced() {
        let x = vec![0.5, -0.1, -0.3, 0.2, 0.0, 0.7, -0.25, 0.05];
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let s = run_unary(&loader(x.clone())).unwrap();
        for (a, v) in s.amplitudes().iter().zip(&x) {
            assert!((a - v / norm).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_gamma_matches_noiseless_bitwise() {
        let c = loader(vec![0.3, 0.1, 0.4, 0.1, 0.5, 0.9, 0.2, 0.6]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        assert_eq!(run_unary_noisy(&c, 0.0, &mut rng).unwrap(), run_unary(&c).unwrap());
        let offsets = vec![1.5; 7];
        assert_eq!(
            run_unary_with_offsets(&c, 0.0, &offsets).unwrap(),
            run_unary(&c).unwrap()
        );
    }

    #[test]
    fn rejects_non_unary_gates() {
        let c = Circuit::from_layers(
            2,
            vec![vec![Gate::X { qubit: 0 }], vec![Gate::Cnot { control: 0, target: 1 }]],
        )
        .unwrap();
        assert!(matches!(run_unary(&c), Err(Error::UnsupportedGate(_))));
        let c = Circuit::from_layers(
            2,
            vec![
                vec![Gate::X { qubit: 0 }],
                vec![Gate::rbs(0, 1, 0.3)],
                vec![Gate::X { qubit: 1 }],
            ],
        )
        .unwrap();
        assert!(matches!(run_unary(&c), Err(Error::LeftUnarySubspace(_))));
        assert!(run_unary(&Circuit::new(2)).is_err());
    }
}
