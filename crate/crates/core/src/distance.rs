//! Distance estimation between two vectors from the overlap of their loaded
//! states.
//!
//! Loading `x` and then un-loading `y` leaves the register in `|e_1>` with
//! probability `<x̂, ŷ>²`. The inner product `c` and the classically tracked
//! norms then give `l² = ‖x‖² + ‖y‖² − 2‖x‖‖y‖c`.

use serde::{Deserialize, Serialize};

use crate::angles::{AngleTree, DataVector};
use crate::circuit::{build_parallel_loader, Circuit};
use crate::error::{Error, Result};
use crate::sim::{estimate_overlap, run_unary, sample_shots, NoiseSpec, OverlapEstimate, ShotRecord};

/// A vector compiled once for repeated use: its angle tree and norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompiledVector {
    pub tree: AngleTree,
    pub norm: f64,
}

impl CompiledVector {
    pub fn compile(x: &DataVector) -> Result<Self> {
        Ok(Self {
            tree: AngleTree::compile(x)?,
            norm: x.norm(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.tree.dimension()
    }
}

/// How the `|e_1>` probability is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shots {
    /// The ideal probability from a noiseless unary run.
    Exact,
    /// A finite number of sampled shots.
    Sampled(u64),
}

/// One distance estimate and the probabilities it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    /// Estimated inner product of the normalized vectors.
    pub c_hat: f64,
    /// Estimated Euclidean distance.
    pub l_hat: f64,
    /// Estimated probability of `|e_1>`.
    pub p_hat: f64,
    /// `None` for exact probabilities.
    pub shots_used: Option<u64>,
    pub mitigated: bool,
}

impl DistanceEstimate {
    /// Builds the estimate from a probability, clamping it and the distance
    /// radicand at zero.
    pub fn from_probability(p: f64, norm_x: f64, norm_y: f64, shots_used: Option<u64>, mitigated: bool) -> Self {
        let p_hat = p.clamp(0.0, 1.0);
        let c_hat = p_hat.sqrt();
        Self {
            c_hat,
            l_hat: distance_from_overlap(norm_x, norm_y, c_hat),
            p_hat,
            shots_used,
            mitigated,
        }
    }
}

/// `sqrt(‖x‖² + ‖y‖² − 2‖x‖‖y‖c)` with the radicand clamped at zero.
pub fn distance_from_overlap(norm_x: f64, norm_y: f64, c: f64) -> f64 {
    (norm_x * norm_x + norm_y * norm_y - 2.0 * norm_x * norm_y * c)
        .max(0.0)
        .sqrt()
}

/// Loader of `tx` followed by the inverse loader of `ty` (without its X),
/// with the two middle layers fused into one.
pub fn build_distance_circuit(tx: &AngleTree, ty: &AngleTree) -> Result<Circuit> {
    if tx.dimension() != ty.dimension() {
        return Err(Error::DimensionMismatch {
            expected: tx.dimension(),
            actual: ty.dimension(),
        });
    }
    let mut circuit = build_parallel_loader(tx);
    let middle = circuit.layers().len() - 1;
    let unload = build_parallel_loader(ty).adjoint();
    let without_x = Circuit::from_layers(
        unload.num_qubits(),
        unload.layers()[..unload.layers().len() - 1].to_vec(),
    )?;
    circuit.extend(&without_x)?;
    circuit.merge_rotation_layers(middle)?;
    Ok(circuit)
}

/// The distance circuit without the middle-layer fusion.
pub fn build_unmerged_distance_circuit(tx: &AngleTree, ty: &AngleTree) -> Result<Circuit> {
    if tx.dimension() != ty.dimension() {
        return Err(Error::DimensionMismatch {
            expected: tx.dimension(),
            actual: ty.dimension(),
        });
    }
    let mut circuit = build_parallel_loader(tx);
    let unload = build_parallel_loader(ty).adjoint();
    let without_x = Circuit::from_layers(
        unload.num_qubits(),
        unload.layers()[..unload.layers().len() - 1].to_vec(),
    )?;
    circuit.extend(&without_x)?;
    Ok(circuit)
}

/// Noiseless probability of measuring `|e_1>` after the distance circuit.
pub fn ideal_overlap_probability(tx: &AngleTree, ty: &AngleTree) -> Result<f64> {
    let state = run_unary(&build_distance_circuit(tx, ty)?)?;
    Ok(state.amplitudes()[0].powi(2))
}

/// Samples the distance circuit and returns the shot record together with
/// the estimate. `key` selects the random stream under `noise.seed`.
pub fn sample_distance(
    x: &CompiledVector,
    y: &CompiledVector,
    shots: u64,
    noise: &NoiseSpec,
    mitigated: bool,
    key: &[u64],
) -> Result<(DistanceEstimate, ShotRecord, OverlapEstimate)> {
    let circuit = build_distance_circuit(&x.tree, &y.tree)?;
    let record = sample_shots(&circuit, noise, shots, key)?;
    let overlap = estimate_overlap(&record)?;
    let p = overlap.probability(mitigated)?;
    let estimate = DistanceEstimate::from_probability(p, x.norm, y.norm, Some(shots), mitigated);
    Ok((estimate, record, overlap))
}

/// Estimates the distance between compiled vectors.
///
/// In [`Shots::Exact`] mode the noise specification must be noiseless.
pub fn estimate_compiled(
    x: &CompiledVector,
    y: &CompiledVector,
    shots: Shots,
    noise: &NoiseSpec,
    mitigated: bool,
    key: &[u64],
) -> Result<DistanceEstimate> {
    match shots {
        Shots::Exact => {
            if !noise.is_noiseless() {
                return Err(Error::InvalidArgument(
                    "exact probabilities are only available without noise".into(),
                ));
            }
            let p = ideal_overlap_probability(&x.tree, &y.tree)?;
            Ok(DistanceEstimate::from_probability(p, x.norm, y.norm, None, mitigated))
        }
        Shots::Sampled(0) => Err(Error::InvalidArgument("at least one shot is required".into())),
        Shots::Sampled(n) => sample_distance(x, y, n, noise, mitigated, key).map(|(e, _, _)| e),
    }
}

/// Estimates `‖x − y‖` on the simulated backend.
pub fn estimate_distance(
    x: &DataVector,
    y: &DataVector,
    shots: Shots,
    noise: &NoiseSpec,
    mitigated: bool,
) -> Result<DistanceEstimate> {
    if x.dimension() != y.dimension() {
        return Err(Error::DimensionMismatch {
            expected: x.dimension(),
            actual: y.dimension(),
        });
    }
    estimate_compiled(
        &CompiledVector::compile(x)?,
        &CompiledVector::compile(y)?,
        shots,
        noise,
        mitigated,
        &[],
    )
}
