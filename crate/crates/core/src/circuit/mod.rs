//! Layered circuits built from beam-splitter rotations, their adjoints and
//! their lowering to CNOT plus single-qubit rotations.

mod gate;
mod loader;
mod lower;

pub use gate::{Gate, GateKind, GateRecord};
pub use loader::{build_optimized_loader, build_parallel_loader};
pub use lower::{lower_to_native, to_irbs, NATIVE_TQG_PER_ROTATION};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gate counts and depth recomputed from the layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    /// RBS and iRBS gates.
    pub rbs_count: usize,
    pub controlled_rbs_count: usize,
    /// Native two-qubit gates after lowering: CNOTs already present plus
    /// three per RBS/iRBS. Controlled rotations have no lowering and are
    /// not counted.
    pub native_tqg_count: usize,
    /// Number of layers, including layers holding only X gates.
    pub depth: usize,
    /// Layers that contain at least one parametrized multi-qubit gate.
    pub rotation_depth: usize,
}

/// A circuit as a sequence of layers; gates inside a layer act on disjoint
/// qubits and may run in parallel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircuitRecord", into = "CircuitRecord")]
pub struct Circuit {
    num_qubits: usize,
    layers: Vec<Vec<Gate>>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            layers: Vec::new(),
        }
    }

    pub fn from_layers(num_qubits: usize, layers: Vec<Vec<Gate>>) -> Result<Self> {
        let mut c = Self::new(num_qubits);
        for layer in layers {
            c.push_layer(layer)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flatten()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// Appends a layer after checking qubit range and disjointness. Empty
    /// layers are dropped.
    pub fn push_layer(&mut self, layer: Vec<Gate>) -> Result<()> {
        if layer.is_empty() {
            return Ok(());
        }
        let mut used = vec![false; self.num_qubits];
        for gate in &layer {
            gate.validate()?;
            for q in gate.qubits() {
                if q >= self.num_qubits {
                    return Err(Error::InvalidCircuit(format!(
                        "qubit {q} out of range for {} qubits",
                        self.num_qubits
                    )));
                }
                if used[q] {
                    return Err(Error::InvalidCircuit(format!(
                        "qubit {q} used twice in layer {}",
                        self.layers.len()
                    )));
                }
                used[q] = true;
            }
        }
        self.layers.push(layer);
        Ok(())
    }

    /// Places `gate` in the earliest layer after every layer that touches
    /// one of its qubits.
    pub fn push_asap(&mut self, gate: Gate) -> Result<()> {
        gate.validate()?;
        let qubits = gate.qubits();
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.num_qubits) {
            return Err(Error::InvalidCircuit(format!(
                "qubit {q} out of range for {} qubits",
                self.num_qubits
            )));
        }
        let blocking = self
            .layers
            .iter()
            .rposition(|layer| layer.iter().any(|g| g.qubits().iter().any(|q| qubits.contains(q))));
        let slot = blocking.map_or(0, |i| i + 1);
        if slot == self.layers.len() {
            self.layers.push(vec![gate]);
        } else {
            self.layers[slot].push(gate);
        }
        Ok(())
    }

    pub fn stats(&self) -> CircuitStats {
        let mut s = CircuitStats {
            rbs_count: 0,
            controlled_rbs_count: 0,
            native_tqg_count: 0,
            depth: self.layers.len(),
            rotation_depth: 0,
        };
        for layer in &self.layers {
            let mut has_rotation = false;
            for g in layer {
                match g {
                    Gate::Rbs { .. } | Gate::IRbs { .. } => {
                        s.rbs_count += 1;
                        s.native_tqg_count += NATIVE_TQG_PER_ROTATION;
                        has_rotation = true;
                    }
                    Gate::ControlledRbs { .. } => {
                        s.controlled_rbs_count += 1;
                        has_rotation = true;
                    }
                    Gate::Cnot { .. } => s.native_tqg_count += 1,
                    _ => {}
                }
            }
            if has_rotation {
                s.rotation_depth += 1;
            }
        }
        s
    }

    /// Reversed layers with every angle negated.
    pub fn adjoint(&self) -> Self {
        Self {
            num_qubits: self.num_qubits,
            layers: self
                .layers
                .iter()
                .rev()
                .map(|layer| layer.iter().map(Gate::inverse).collect())
                .collect(),
        }
    }

    /// Appends all layers of `other` after this circuit's layers.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: other.num_qubits,
            });
        }
        self.layers.extend(other.layers.iter().cloned());
        Ok(())
    }

    /// Replaces every angle through `f`, keeping the layout.
    pub fn map_angles(&self, mut f: impl FnMut(&Gate) -> f64) -> Self {
        Self {
            num_qubits: self.num_qubits,
            layers: self
                .layers
                .iter()
                .map(|layer| {
                    layer
                        .iter()
                        .map(|g| match g.angle() {
                            Some(_) => g.with_angle(f(g)),
                            None => *g,
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// Fuses layer `index` with layer `index + 1` when both hold rotations
    /// of the same kind on exactly the same ordered qubit pairs. Rotations
    /// in a common plane compose by adding angles.
    pub(crate) fn merge_rotation_layers(&mut self, index: usize) -> Result<()> {
        if index + 1 >= self.layers.len() {
            return Err(Error::InvalidCircuit(format!("no layer after {index}")));
        }
        let next = &self.layers[index + 1];
        let first = &self.layers[index];
        if first.len() != next.len() {
            return Err(Error::InvalidCircuit(
                "adjacent layers have different gate counts".into(),
            ));
        }
        let mut merged = Vec::with_capacity(first.len());
        for g in first {
            let partner = next
                .iter()
                .find(|h| h.kind() == g.kind() && g.is_two_qubit_rotation() && h.qubits() == g.qubits());
            match (partner, g.angle(), partner.and_then(Gate::angle)) {
                (Some(_), Some(a), Some(b)) => merged.push(g.with_angle(a + b)),
                _ => {
                    return Err(Error::InvalidCircuit(format!(
                        "{} on {:?} has no matching rotation in the next layer",
                        g.kind(),
                        g.qubits()
                    )))
                }
            }
        }
        self.layers[index] = merged;
        self.layers.remove(index + 1);
        Ok(())
    }
}

/// Wire form of a circuit. `metadata` is written on output and, when present
/// on input, must match the recomputed counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct CircuitRecord {
    qubits: usize,
    layers: Vec<Vec<Gate>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<CircuitStats>,
}

impl From<Circuit> for CircuitRecord {
    fn from(c: Circuit) -> Self {
        let metadata = Some(c.stats());
        CircuitRecord {
            qubits: c.num_qubits,
            layers: c.layers,
            metadata,
        }
    }
}

impl TryFrom<CircuitRecord> for Circuit {
    type Error = Error;

    fn try_from(rec: CircuitRecord) -> Result<Self> {
        if rec.qubits == 0 {
            return Err(Error::InvalidCircuit("circuit needs at least one qubit".into()));
        }
        let c = Circuit::from_layers(rec.qubits, rec.layers)?;
        if let Some(meta) = rec.metadata {
            if meta != c.stats() {
                return Err(Error::InvalidCircuit("metadata does not match the gate list".into()));
            }
        }
        Ok(c)
    }
}
