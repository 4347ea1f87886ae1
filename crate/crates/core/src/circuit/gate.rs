use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    X,
    #[serde(rename = "RBS")]
    Rbs,
    #[serde(rename = "iRBS")]
    IRbs,
    #[serde(rename = "ControlledRBS")]
    ControlledRbs,
    #[serde(rename = "CNOT")]
    Cnot,
    #[serde(rename = "RZ")]
    Rz,
    #[serde(rename = "RY")]
    Ry,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::X | GateKind::Rz | GateKind::Ry => 1,
            GateKind::Rbs | GateKind::IRbs | GateKind::Cnot => 2,
            GateKind::ControlledRbs => 3,
        }
    }

    pub fn has_angle(self) -> bool {
        !matches!(self, GateKind::X | GateKind::Cnot)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GateKind::X => "X",
            GateKind::Rbs => "RBS",
            GateKind::IRbs => "iRBS",
            GateKind::ControlledRbs => "ControlledRBS",
            GateKind::Cnot => "CNOT",
            GateKind::Rz => "RZ",
            GateKind::Ry => "RY",
        };
        f.write_str(name)
    }
}

/// A gate on 0-based qubit indices.
///
/// For the two-qubit rotations the first listed qubit is the more
/// significant tensor factor: `|10>` means `qubits[0]` holds the excitation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GateRecord", into = "GateRecord")]
pub enum Gate {
    X {
        qubit: usize,
    },
    Rz {
        qubit: usize,
        angle: f64,
    },
    Ry {
        qubit: usize,
        angle: f64,
    },
    Rbs {
        qubits: [usize; 2],
        angle: f64,
    },
    IRbs {
        qubits: [usize; 2],
        angle: f64,
    },
    ControlledRbs {
        control: usize,
        qubits: [usize; 2],
        angle: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn rbs(a: usize, b: usize, angle: f64) -> Self {
        Gate::Rbs { qubits: [a, b], angle }
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::X { .. } => GateKind::X,
            Gate::Rz { .. } => GateKind::Rz,
            Gate::Ry { .. } => GateKind::Ry,
            Gate::Rbs { .. } => GateKind::Rbs,
            Gate::IRbs { .. } => GateKind::IRbs,
            Gate::ControlledRbs { .. } => GateKind::ControlledRbs,
            Gate::Cnot { .. } => GateKind::Cnot,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X { qubit } | Gate::Rz { qubit, .. } | Gate::Ry { qubit, .. } => vec![qubit],
            Gate::Rbs { qubits, .. } | Gate::IRbs { qubits, .. } => qubits.to_vec(),
            Gate::ControlledRbs { control, qubits, .. } => vec![control, qubits[0], qubits[1]],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::X { .. } | Gate::Cnot { .. } => None,
            Gate::Rz { angle, .. }
            | Gate::Ry { angle, .. }
            | Gate::Rbs { angle, .. }
            | Gate::IRbs { angle, .. }
            | Gate::ControlledRbs { angle, .. } => Some(angle),
        }
    }

    /// Same gate with its angle replaced; gates without an angle are returned
    /// unchanged.
    pub fn with_angle(&self, new_angle: f64) -> Self {
        let mut g = *self;
        match &mut g {
            Gate::X { .. } | Gate::Cnot { .. } => {}
            Gate::Rz { angle, .. }
            | Gate::Ry { angle, .. }
            | Gate::Rbs { angle, .. }
            | Gate::IRbs { angle, .. }
            | Gate::ControlledRbs { angle, .. } => *angle = new_angle,
        }
        g
    }

    pub fn inverse(&self) -> Self {
        match self.angle() {
            Some(a) => self.with_angle(-a),
            None => *self,
        }
    }

    pub fn is_two_qubit_rotation(&self) -> bool {
        matches!(self, Gate::Rbs { .. } | Gate::IRbs { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let qubits = self.qubits();
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::InvalidGate(format!("{} repeats qubit {q}", self.kind())));
            }
        }
        if let Some(a) = self.angle() {
            if !a.is_finite() {
                return Err(Error::InvalidGate(format!("{} has non-finite angle", self.kind())));
            }
        }
        Ok(())
    }
}

/// Wire form: `{"kind": "...", "qubits": [...], "angle": ...}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateRecord {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

impl From<Gate> for GateRecord {
    fn from(g: Gate) -> Self {
        GateRecord {
            kind: g.kind(),
            qubits: g.qubits(),
            angle: g.angle(),
        }
    }
}

impl TryFrom<GateRecord> for Gate {
    type Error = Error;

    fn try_from(rec: GateRecord) -> Result<Self> {
        let kind = rec.kind;
        if rec.qubits.len() != kind.arity() {
            return Err(Error::InvalidGate(format!(
                "{kind} expects {} qubits, got {}",
                kind.arity(),
                rec.qubits.len()
            )));
        }
        let angle = match (kind.has_angle(), rec.angle) {
            (true, Some(a)) => a,
            (true, None) => return Err(Error::InvalidGate(format!("{kind} needs an angle"))),
            (false, Some(_)) => return Err(Error::InvalidGate(format!("{kind} takes no angle"))),
            (false, None) => 0.0,
        };
        let q = &rec.qubits;
        let gate = match kind {
            GateKind::X => Gate::X { qubit: q[0] },
            GateKind::Rz => Gate::Rz { qubit: q[0], angle },
            GateKind::Ry => Gate::Ry { qubit: q[0], angle },
            GateKind::Rbs => Gate::Rbs {
                qubits: [q[0], q[1]],
                angle,
            },
            GateKind::IRbs => Gate::IRbs {
                qubits: [q[0], q[1]],
                angle,
            },
            GateKind::ControlledRbs => Gate::ControlledRbs {
                control: q[0],
                qubits: [q[1], q[2]],
                angle,
            },
            GateKind::Cnot => Gate::Cnot {
                control: q[0],
                target: q[1],
            },
        };
        gate.validate()?;
        Ok(gate)
    }
}
