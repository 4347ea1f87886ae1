//! Shot sampling under the depolarizing mixture and the two readout
//! estimators (first-qubit marginal and unary post-selection).

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::rng;

use super::noise::{CoherentMode, NoiseSpec};
use super::unary::{run_unary, run_unary_noisy, run_unary_with_offsets, UnaryState};

/// Largest register whose outcomes fit a `u64` key.
pub const MAX_SAMPLED_QUBITS: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReadoutMode {
    /// Only the first qubit was measured; keys are 0 and 1.
    FirstQubit,
    /// Every qubit was measured; keys are basis indices.
    FullReadout,
}

/// Outcome histogram of repeated circuit executions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ShotRecordJson", into = "ShotRecordJson")]
pub struct ShotRecord {
    mode: ReadoutMode,
    num_qubits: usize,
    total: u64,
    counts: BTreeMap<u64, u64>,
}

impl ShotRecord {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            mode: ReadoutMode::FullReadout,
            num_qubits,
            total: 0,
            counts: BTreeMap::new(),
        }
    }

    /// Builds a full-readout record from bitstrings such as `"100"`.
    pub fn from_bitstrings<'a>(num_qubits: usize, counts: impl IntoIterator<Item = (&'a str, u64)>) -> Result<Self> {
        let mut rec = Self::new(num_qubits);
        for (bits, count) in counts {
            rec.add(parse_bitstring(bits, num_qubits)?, count);
        }
        Ok(rec)
    }

    pub fn add(&mut self, outcome: u64, count: u64) {
        if count > 0 {
            *self.counts.entry(outcome).or_insert(0) += count;
            self.total += count;
        }
    }

    pub fn merge(&mut self, other: &ShotRecord) -> Result<()> {
        if other.num_qubits != self.num_qubits || other.mode != self.mode {
            return Err(Error::InvalidArgument("cannot merge unlike shot records".into()));
        }
        for (&k, &v) in &other.counts {
            self.add(k, v);
        }
        Ok(())
    }

    pub fn mode(&self) -> ReadoutMode {
        self.mode
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn count(&self, outcome: u64) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    /// The record a first-qubit-only measurement would have produced.
    pub fn first_qubit_marginal(&self) -> ShotRecord {
        if self.mode == ReadoutMode::FirstQubit {
            return self.clone();
        }
        let first = self.first_bit();
        let mut out = ShotRecord {
            mode: ReadoutMode::FirstQubit,
            num_qubits: self.num_qubits,
            total: 0,
            counts: BTreeMap::new(),
        };
        for (&k, &v) in &self.counts {
            out.add(u64::from(k & first != 0), v);
        }
        out
    }

    fn first_bit(&self) -> u64 {
        1u64 << (self.num_qubits - 1)
    }

    fn key_string(&self, outcome: u64) -> String {
        match self.mode {
            ReadoutMode::FirstQubit => outcome.to_string(),
            ReadoutMode::FullReadout => format!("{:0width$b}", outcome, width = self.num_qubits),
        }
    }
}

fn parse_bitstring(bits: &str, num_qubits: usize) -> Result<u64> {
    if bits.len() != num_qubits || num_qubits > MAX_SAMPLED_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "bitstring {bits:?} does not have {num_qubits} bits"
        )));
    }
    u64::from_str_radix(bits, 2).map_err(|_| Error::InvalidArgument(format!("bitstring {bits:?} is not binary")))
}

#[derive(Serialize, Deserialize)]
struct ShotRecordJson {
    mode: ReadoutMode,
    qubits: usize,
    total: u64,
    counts: BTreeMap<String, u64>,
}

impl From<ShotRecord> for ShotRecordJson {
    fn from(rec: ShotRecord) -> Self {
        let counts = rec.counts.iter().map(|(&k, &v)| (rec.key_string(k), v)).collect();
        ShotRecordJson {
            mode: rec.mode,
            qubits: rec.num_qubits,
            total: rec.total,
            counts,
        }
    }
}

impl TryFrom<ShotRecordJson> for ShotRecord {
    type Error = Error;

    fn try_from(j: ShotRecordJson) -> Result<Self> {
        let mut rec = ShotRecord {
            mode: j.mode,
            num_qubits: j.qubits,
            total: 0,
            counts: BTreeMap::new(),
        };
        for (key, v) in j.counts {
            let k = match j.mode {
                ReadoutMode::FullReadout => parse_bitstring(&key, j.qubits)?,
                ReadoutMode::FirstQubit => match key.as_str() {
                    "0" => 0,
                    "1" => 1,
                    _ => return Err(Error::InvalidArgument(format!("bad first-qubit key {key:?}"))),
                },
            };
            rec.add(k, v);
        }
        if rec.total != j.total {
            return Err(Error::InvalidArgument(format!(
                "counts sum to {} but total is {}",
                rec.total, j.total
            )));
        }
        Ok(rec)
    }
}

fn draw_outcome<R: Rng + ?Sized>(probs: &[f64], keep: f64, rng: &mut R) -> u64 {
    let n = probs.len();
    if keep >= 1.0 || rng.random::<f64>() < keep {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = n - 1;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                chosen = i;
                break;
            }
        }
        1u64 << (n - 1 - chosen)
    } else {
        rng.random::<u64>() & ((1u64 << n) - 1)
    }
}

/// Samples `shots` outcomes from `keep * P_state + (1 - keep) * Uniform(2^n)`,
/// where `P_state` puts `|a_i|^2` on the unary string `e_i`.
pub fn sample_mixture<R: Rng + ?Sized>(state: &UnaryState, keep: f64, shots: u64, rng: &mut R) -> Result<ShotRecord> {
    let n = state.dimension();
    if n == 0 || n > MAX_SAMPLED_QUBITS {
        return Err(Error::InvalidArgument(format!("cannot sample {n} qubits")));
    }
    let probs = state.probabilities();
    let mut rec = ShotRecord::new(n);
    for _ in 0..shots {
        rec.add(draw_outcome(&probs, keep, rng), 1);
    }
    Ok(rec)
}

/// Executes `circuit` `shots` times under `noise`.
///
/// The depolarizing weight is `p = f^m` with `m` the circuit's native
/// two-qubit gate count. Shot batches draw from the stream
/// `key ++ [batch]`, so a record is reproducible from the seed and key.
pub fn sample_shots(circuit: &Circuit, noise: &NoiseSpec, shots: u64, key: &[u64]) -> Result<ShotRecord> {
    noise.validate()?;
    if shots == 0 {
        return Err(Error::InvalidArgument("at least one shot is required".into()));
    }
    let n = circuit.num_qubits();
    if n > MAX_SAMPLED_QUBITS {
        return Err(Error::InvalidArgument(format!("cannot sample {n} qubits")));
    }
    let keep = noise.survival_probability(circuit.stats().native_tqg_count);
    let fixed = if noise.gamma == 0.0 {
        Some(run_unary(circuit)?)
    } else if noise.coherent == CoherentMode::Systematic {
        let mut rng = rng::stream(noise.seed, &[key, &[u64::MAX]].concat());
        let offsets: Vec<f64> = (0..circuit.stats().rbs_count)
            .map(|_| rng.sample(StandardNormal))
            .collect();
        Some(run_unary_with_offsets(circuit, noise.gamma, &offsets)?)
    } else {
        None
    };

    let batch = noise.batch_size as u64;
    let mut rec = ShotRecord::new(n);
    let mut path = key.to_vec();
    path.push(0);
    let mut done = 0u64;
    for b in 0.. {
        if done >= shots {
            break;
        }
        let size = batch.min(shots - done);
        *path.last_mut().expect("non-empty") = b;
        let mut rng = rng::stream(noise.seed, &path);
        match (&fixed, noise.coherent) {
            (Some(state), _) => rec.merge(&sample_mixture(state, keep, size, &mut rng)?)?,
            (None, CoherentMode::PerBatch) => {
                let state = run_unary_noisy(circuit, noise.gamma, &mut rng)?;
                rec.merge(&sample_mixture(&state, keep, size, &mut rng)?)?;
            }
            (None, _) => {
                for _ in 0..size {
                    let state = run_unary_noisy(circuit, noise.gamma, &mut rng)?;
                    rec.add(draw_outcome(&state.probabilities(), keep, &mut rng), 1);
                }
            }
        }
        done += size;
    }
    Ok(rec)
}

/// Probability estimates read off a shot record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapEstimate {
    /// Fraction of shots with the first qubit in `|1>`.
    pub p_raw: f64,
    /// Fraction of all shots that gave exactly `|10...0>`; needs full readout.
    pub p_e1: Option<f64>,
    /// `|10...0>` count over the count of all unary outcomes.
    pub p_mitigated: Option<f64>,
    /// Fraction of shots that landed in the unary subspace.
    pub valid_fraction: Option<f64>,
    pub total: u64,
}

impl OverlapEstimate {
    /// The estimate for the requested mode; mitigation fails when nothing
    /// survived post-selection.
    pub fn probability(&self, mitigated: bool) -> Result<f64> {
        if mitigated {
            self.p_mitigated.ok_or(Error::MitigationStarved { total: self.total })
        } else {
            Ok(self.p_raw)
        }
    }
}

pub fn estimate_overlap(rec: &ShotRecord) -> Result<OverlapEstimate> {
    if rec.total() == 0 {
        return Err(Error::InvalidArgument("shot record is empty".into()));
    }
    let total = rec.total() as f64;
    match rec.mode() {
        ReadoutMode::FirstQubit => Ok(OverlapEstimate {
            p_raw: rec.count(1) as f64 / total,
            p_e1: None,
            p_mitigated: None,
            valid_fraction: None,
            total: rec.total(),
        }),
        ReadoutMode::FullReadout => {
            let first = rec.first_bit();
            let mut first_set = 0u64;
            let mut unary = 0u64;
            for (&k, &v) in rec.counts() {
                if k & first != 0 {
                    first_set += v;
                }
                if k.count_ones() == 1 {
                    unary += v;
                }
            }
            let e1 = rec.count(first);
            Ok(OverlapEstimate {
                p_raw: first_set as f64 / total,
                p_e1: Some(e1 as f64 / total),
                p_mitigated: (unary > 0).then(|| e1 as f64 / unary as f64),
                valid_fraction: Some(unary as f64 / total),
                total: rec.total(),
            })
        }
    }
}
