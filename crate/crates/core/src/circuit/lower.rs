//! Lowering of beam-splitter rotations onto CNOT + RZ/RY.
//!
//! The iRBS(θ) template is the three-CNOT circuit
//!
//! ```text
//! a: ────────── X ── RZ(-π/2) ── ● ─────────── X ── RZ(-π/2)
//! b: ─ RZ(π/2) ─ ● ─ RY(θ-π/2) ─ X ─ RY(π/2-θ) ─ ● ──────────
//! ```
//!
//! with RZ(φ) = exp(-iφZ/2) and RY(φ) = exp(-iφY/2); it equals iRBS(θ) up to
//! a global phase. A real RBS(θ) is the same template conjugated by
//! RZ(±π/2) on qubit `a`, which folds into the first and last columns.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

use super::{Circuit, Gate};

/// CNOTs spent on each RBS or iRBS.
pub const NATIVE_TQG_PER_ROTATION: usize = 3;

fn rotation_template(a: usize, b: usize, angle: f64, real: bool) -> [Vec<Gate>; 7] {
    let mut first = vec![Gate::Rz {
        qubit: b,
        angle: FRAC_PI_2,
    }];
    if real {
        first.insert(
            0,
            Gate::Rz {
                qubit: a,
                angle: FRAC_PI_2,
            },
        );
    }
    let last_phase = if real { -PI } else { -FRAC_PI_2 };
    [
        first,
        vec![Gate::Cnot { control: b, target: a }],
        vec![
            Gate::Rz {
                qubit: a,
                angle: -FRAC_PI_2,
            },
            Gate::Ry {
                qubit: b,
                angle: angle - FRAC_PI_2,
            },
        ],
        vec![Gate::Cnot { control: a, target: b }],
        vec![Gate::Ry {
            qubit: b,
            angle: FRAC_PI_2 - angle,
        }],
        vec![Gate::Cnot { control: b, target: a }],
        vec![Gate::Rz {
            qubit: a,
            angle: last_phase,
        }],
    ]
}

/// Replaces every RBS/iRBS by its three-CNOT template. Gates already in the
/// native set pass through. Each source layer expands into as many layers as
/// its deepest gate needs.
pub fn lower_to_native(c: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(c.num_qubits());
    for layer in c.layers() {
        let mut expanded: Vec<Vec<Gate>> = Vec::new();
        for gate in layer {
            let steps: Vec<Vec<Gate>> = match *gate {
                Gate::Rbs { qubits, angle } => rotation_template(qubits[0], qubits[1], angle, true).into(),
                Gate::IRbs { qubits, angle } => rotation_template(qubits[0], qubits[1], angle, false).into(),
                Gate::ControlledRbs { .. } => {
                    return Err(Error::UnsupportedGate("ControlledRBS has no native lowering".into()))
                }
                other => vec![vec![other]],
            };
            if expanded.len() < steps.len() {
                expanded.resize_with(steps.len(), Vec::new);
            }
            for (slot, gates) in expanded.iter_mut().zip(steps) {
                slot.extend(gates);
            }
        }
        for sub in expanded {
            out.push_layer(sub)?;
        }
    }
    Ok(out)
}

/// Swaps each real RBS for the iRBS with the same angle, as run on hardware.
pub fn to_irbs(c: &Circuit) -> Circuit {
    let layers = c
        .layers()
        .iter()
        .map(|layer| {
            layer
                .iter()
                .map(|g| match *g {
                    Gate::Rbs { qubits, angle } => Gate::IRbs { qubits, angle },
                    other => other,
                })
                .collect()
        })
        .collect();
    Circuit::from_layers(c.num_qubits(), layers).expect("same layout as the source")
}
