//! Dense `2^n` statevector simulation, used as the reference for the unary
//! path, for lowered circuits and for the controlled-rotation loader.
//!
//! Qubit `q` of an `n`-qubit register is bit `n - 1 - q` of the basis index,
//! so printing an index MSB-first lists qubit 0 first.

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

pub const DEFAULT_QUBIT_CAP: usize = 14;

type Matrix2 = [[Complex64; 2]; 2];
type Matrix4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl FullState {
    pub fn zero(num_qubits: usize) -> Self {
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[0] = ONE;
        Self { num_qubits, amps }
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[index] = ONE;
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Basis index of the unary state with qubit `q` excited.
    pub fn unary_index(num_qubits: usize, q: usize) -> usize {
        1 << (num_qubits - 1 - q)
    }

    /// Amplitudes on `e_1 .. e_n`.
    pub fn unary_amplitudes(&self) -> Vec<Complex64> {
        (0..self.num_qubits)
            .map(|q| self.amps[Self::unary_index(self.num_qubits, q)])
            .collect()
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.num_qubits - 1 - q)
    }

    fn apply_single(&mut self, q: usize, m: &Matrix2) {
        let mq = self.mask(q);
        for i in 0..self.amps.len() {
            if i & mq == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | mq]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | mq] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// `m` is ordered |00>,|01>,|10>,|11> with `a` as the leading factor;
    /// only indices with every bit of `condition` set are touched.
    fn apply_pair(&mut self, a: usize, b: usize, m: &Matrix4, condition: usize) {
        let (ma, mb) = (self.mask(a), self.mask(b));
        for i in 0..self.amps.len() {
            if i & (ma | mb) != 0 || i & condition != condition {
                continue;
            }
            let idx = [i, i | mb, i | ma, i | ma | mb];
            let v = idx.map(|k| self.amps[k]);
            for (row, &k) in idx.iter().enumerate() {
                self.amps[k] = (0..4).map(|col| m[row][col] * v[col]).sum();
            }
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let (mc, mt) = (self.mask(control), self.mask(target));
        for i in 0..self.amps.len() {
            if i & mc != 0 && i & mt == 0 {
                self.amps.swap(i, i | mt);
            }
        }
    }

    pub fn apply(&mut self, gate: &Gate) {
        match *gate {
            Gate::X { qubit } => self.apply_single(qubit, &[[ZERO, ONE], [ONE, ZERO]]),
            Gate::Rz { qubit, angle } => self.apply_single(qubit, &rz_matrix(angle)),
            Gate::Ry { qubit, angle } => self.apply_single(qubit, &ry_matrix(angle)),
            Gate::Rbs { qubits: [a, b], angle } => self.apply_pair(a, b, &rbs_matrix(angle), 0),
            Gate::IRbs { qubits: [a, b], angle } => self.apply_pair(a, b, &irbs_matrix(angle), 0),
            Gate::ControlledRbs {
                control,
                qubits: [a, b],
                angle,
            } => {
                let cond = self.mask(control);
                self.apply_pair(a, b, &rbs_matrix(angle), cond)
            }
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
        }
    }
}

pub fn rz_matrix(angle: f64) -> Matrix2 {
    let h = angle / 2.0;
    [
        [Complex64::from_polar(1.0, -h), ZERO],
        [ZERO, Complex64::from_polar(1.0, h)],
    ]
}

pub fn ry_matrix(angle: f64) -> Matrix2 {
    let (s, c) = (angle / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

/// Real beam-splitter rotation on span{|01>, |10>}.
pub fn rbs_matrix(angle: f64) -> Matrix4 {
    let (s, c) = angle.sin_cos();
    let (s, c) = (Complex64::new(s, 0.0), Complex64::new(c, 0.0));
    [
        [ONE, ZERO, ZERO, ZERO],
        [ZERO, c, s, ZERO],
        [ZERO, -s, c, ZERO],
        [ZERO, ZERO, ZERO, ONE],
    ]
}

/// Beam-splitter rotation with imaginary off-diagonal entries.
pub fn irbs_matrix(angle: f64) -> Matrix4 {
    let (s, c) = angle.sin_cos();
    let (is, c) = (Complex64::new(0.0, -s), Complex64::new(c, 0.0));
    [
        [ONE, ZERO, ZERO, ZERO],
        [ZERO, c, is, ZERO],
        [ZERO, is, c, ZERO],
        [ZERO, ZERO, ZERO, ONE],
    ]
}

pub fn run_full(c: &Circuit) -> Result<FullState> {
    run_full_with_cap(c, DEFAULT_QUBIT_CAP)
}

pub fn run_full_with_cap(c: &Circuit, cap: usize) -> Result<FullState> {
    run_full_from(c, FullState::zero(c.num_qubits()), cap)
}

pub(crate) fn run_full_from(c: &Circuit, mut state: FullState, cap: usize) -> Result<FullState> {
    if c.num_qubits() > cap {
        return Err(Error::TooManyQubits {
            qubits: c.num_qubits(),
            cap,
        });
    }
    if state.num_qubits != c.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: c.num_qubits(),
            actual: state.num_qubits,
        });
    }
    for gate in c.gates() {
        state.apply(gate);
    }
    Ok(state)
}

/// Dense unitary of `c`; column `j` is the image of basis state `j`.
pub fn circuit_unitary(c: &Circuit) -> Result<Vec<Vec<Complex64>>> {
    let n = c.num_qubits();
    (0..1usize << n)
        .map(|j| run_full_from(c, FullState::basis(n, j), DEFAULT_QUBIT_CAP).map(|s| s.amps))
        .collect()
}

/// Whether `a = e^{iφ} b` for some global phase `φ`, entrywise within `tol`.
pub fn equal_up_to_phase(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some(k) = (0..b.len()).max_by(|&i, &j| b[i].norm().total_cmp(&b[j].norm())) else {
        return true;
    };
    if b[k].norm() == 0.0 {
        return a.iter().all(|z| z.norm() <= tol);
    }
    let phase = a[k] / b[k];
    let phase = phase / phase.norm();
    a.iter().zip(b).all(|(x, y)| (x - phase * y).norm() <= tol)
}
