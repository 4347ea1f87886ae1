//! Circuit execution: the exact unary-subspace path, the dense statevector
//! reference, and shot sampling under coherent and depolarizing noise.

mod full;
mod noise;
mod shots;
mod unary;

pub use full::{
    circuit_unitary, equal_up_to_phase, irbs_matrix, rbs_matrix, run_full, run_full_with_cap, ry_matrix, rz_matrix,
    FullState, DEFAULT_QUBIT_CAP,
};
pub use noise::{CoherentMode, NoiseSpec, DEFAULT_BATCH_SIZE};
pub use shots::{
    estimate_overlap, sample_mixture, sample_shots, OverlapEstimate, ReadoutMode, ShotRecord, MAX_SAMPLED_QUBITS,
};
pub use unary::{run_unary, run_unary_noisy, run_unary_with_offsets, UnaryState};
