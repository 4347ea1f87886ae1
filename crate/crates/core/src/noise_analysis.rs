//! Inverting the depolarizing readout model: predicted post-selected
//! overlaps, fidelity estimates from measured-vs-ideal overlaps, and
//! corrected overlaps.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angles::{AngleTree, DataVector};
use crate::distance::{build_distance_circuit, ideal_overlap_probability};
use crate::error::{Error, Result};
use crate::rng;
use crate::sim::{estimate_overlap, sample_shots, NoiseSpec};
use crate::stats::{linear_fit, LinearFit};

/// An ideal overlap probability paired with its measured counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapPair {
    pub c_sim: f64,
    pub c_exp: f64,
    /// Qubits of the distance circuit.
    pub n: usize,
    /// Native two-qubit gate count of the distance circuit.
    pub m: usize,
    pub mitigated: bool,
}

impl OverlapPair {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c_sim", self.c_sim), ("c_exp", self.c_exp)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Native two-qubit gates of the merged `n`-qubit distance circuit, `4.5n − 6`.
pub fn distance_tqg_count(n: usize) -> usize {
    (9 * n).saturating_sub(12) / 2
}

/// Probability of `|e_1>` among unary outcomes when the ideal unary
/// distribution, with `|a_1|² = a1_sq`, survives with weight `p` and the rest
/// is uniform over all `2^n` strings.
pub fn predict_postselected_overlap(a1_sq: f64, n: usize, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "survival probability {p} must lie in (0, 1]"
        )));
    }
    if !(0.0..=1.0).contains(&a1_sq) {
        return Err(Error::InvalidArgument(format!("a1_sq = {a1_sq} is outside [0, 1]")));
    }
    let leak = (1.0 - p) / (2f64.powi(n as i32) * p);
    Ok((a1_sq + leak) / (1.0 + n as f64 * leak))
}

/// Result of regressing measured on ideal overlaps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityFit {
    pub slope: f64,
    pub intercept: f64,
    /// `slope^(1/m)`.
    pub fidelity: f64,
    pub m: usize,
    pub pairs: usize,
}

/// Least-squares line through unmitigated `(c_sim, c_exp)` pairs sharing one
/// gate count `m`; the slope estimates `f^m`.
pub fn estimate_fidelity(pairs: &[OverlapPair]) -> Result<FidelityFit> {
    let Some(first) = pairs.first() else {
        return Err(Error::DegenerateFit("no pairs".into()));
    };
    let m = first.m;
    for pair in pairs {
        pair.validate()?;
        if pair.m != m {
            return Err(Error::InvalidArgument(format!(
                "pairs mix gate counts {m} and {}",
                pair.m
            )));
        }
        if pair.mitigated {
            return Err(Error::InvalidArgument(
                "fidelity is estimated from unmitigated overlaps".into(),
            ));
        }
    }
    if m == 0 {
        return Err(Error::InvalidArgument("gate count must be positive".into()));
    }
    let points: Vec<(f64, f64)> = pairs.iter().map(|p| (p.c_sim, p.c_exp)).collect();
    let LinearFit { slope, intercept } = linear_fit(&points)?;
    if slope <= 0.0 {
        return Err(Error::DegenerateFit(format!("non-positive slope {slope}")));
    }
    Ok(FidelityFit {
        slope,
        intercept,
        fidelity: slope.powf(1.0 / m as f64),
        m,
        pairs: pairs.len(),
    })
}

/// `2^(−1/4.5)`: for fidelities above this value, `2^n f^(4.5n − 6)` grows
/// with `n`, so post-selection suppresses depolarizing error on larger
/// registers.
pub fn mitigation_threshold() -> f64 {
    2f64.powf(-1.0 / 4.5)
}

/// Rescales a raw overlap by the survival weight `f^m`, clamped to `[0, 1]`.
pub fn correct_overlap(c_exp_raw: f64, m: usize, f: f64) -> Result<f64> {
    if !(f > 0.0 && f <= 1.0) {
        return Err(Error::InvalidArgument(format!("fidelity {f} must lie in (0, 1]")));
    }
    Ok((c_exp_raw / f.powi(m as i32)).clamp(0.0, 1.0))
}

/// Measured and predicted overlaps for one simulated vector pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapSample {
    pub c_sim: f64,
    /// Fraction of all shots that gave `|e_1>`.
    pub c_exp: f64,
    /// `|e_1>` among unary outcomes; `None` when nothing survived.
    pub c_exp_mitigated: Option<f64>,
    /// Model value of `c_exp`: `p c_sim + (1 − p) / 2^n`.
    pub predicted: f64,
    /// Model value of `c_exp_mitigated`.
    pub predicted_mitigated: f64,
    pub valid_fraction: f64,
    pub n: usize,
    pub m: usize,
}

impl OverlapSample {
    pub fn pair(&self, mitigated: bool) -> Option<OverlapPair> {
        let c_exp = if mitigated { self.c_exp_mitigated? } else { self.c_exp };
        Some(OverlapPair {
            c_sim: self.c_sim,
            c_exp,
            n: self.n,
            m: self.m,
            mitigated,
        })
    }
}

/// A unit vector `y` in dimension `n` with `<x̂, y>² = target`, built from a
/// random unit `x` and a random direction orthogonal to it.
fn pair_with_overlap<R: Rng + ?Sized>(n: usize, target: f64, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let unit = |v: Vec<f64>| {
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.into_iter().map(|a| a / norm).collect::<Vec<f64>>()
    };
    let x = unit((0..n).map(|_| rng.sample(StandardNormal)).collect());
    let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let dot: f64 = g.iter().zip(&x).map(|(a, b)| a * b).sum();
    let u = unit(g.iter().zip(&x).map(|(a, b)| a - dot * b).collect());
    let (c, s) = (target.sqrt(), (1.0 - target).sqrt());
    let y = x.iter().zip(&u).map(|(a, b)| c * a + s * b).collect();
    (x, y)
}

/// Simulates `count` distance circuits on `n` qubits whose ideal overlaps
/// are spread evenly over `[0, 1]`, sampling each with `shots` shots under
/// `noise`. Pair `i` draws its vectors and shots from streams keyed by `i`.
pub fn simulate_overlaps(n: usize, count: usize, shots: u64, noise: &NoiseSpec) -> Result<Vec<OverlapSample>> {
    noise.validate()?;
    if !n.is_power_of_two() || n < 2 {
        return Err(Error::NotPowerOfTwo(n));
    }
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(noise.seed, &[u64::from_be_bytes(*b"overlaps"), i as u64]);
            let target = (i as f64 + 0.5) / count as f64;
            let (x, y) = pair_with_overlap(n, target, &mut rng);
            let tx = AngleTree::compile(&DataVector::new(x)?)?;
            let ty = AngleTree::compile(&DataVector::new(y)?)?;
            let circuit = build_distance_circuit(&tx, &ty)?;
            let m = circuit.stats().native_tqg_count;
            let c_sim = ideal_overlap_probability(&tx, &ty)?;
            let record = sample_shots(&circuit, noise, shots, &[i as u64])?;
            let est = estimate_overlap(&record)?;
            let p = noise.survival_probability(m);
            Ok(OverlapSample {
                c_sim,
                c_exp: est.p_e1.unwrap_or(est.p_raw),
                c_exp_mitigated: est.p_mitigated,
                predicted: p * c_sim + (1.0 - p) / 2f64.powi(n as i32),
                predicted_mitigated: predict_postselected_overlap(c_sim.clamp(0.0, 1.0), n, p)?,
                valid_fraction: est.valid_fraction.unwrap_or(1.0),
                n,
                m,
            })
        })
        .collect()
}

/// Writes samples as CSV with columns `c_sim, c_exp, c_exp_mitigated,
/// predicted, predicted_mitigated, valid_fraction, n, m`, after a `#` comment
/// line holding `header`.
pub fn write_samples_csv(samples: &[OverlapSample], header: &str, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    writeln!(file, "# {header}").map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let io = |e: csv::Error| Error::malformed(path, e.to_string());
    w.write_record([
        "c_sim",
        "c_exp",
        "c_exp_mitigated",
        "predicted",
        "predicted_mitigated",
        "valid_fraction",
        "n",
        "m",
    ])
    .map_err(io)?;
    for s in samples {
        w.write_record([
            format!("{:?}", s.c_sim),
            format!("{:?}", s.c_exp),
            s.c_exp_mitigated.map_or(String::new(), |v| format!("{v:?}")),
            format!("{:?}", s.predicted),
            format!("{:?}", s.predicted_mitigated),
            format!("{:?}", s.valid_fraction),
            s.n.to_string(),
            s.m.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads `(c_sim, c_exp)` columns by name from a CSV file; other columns are
/// ignored and `#` lines skipped.
pub fn read_overlap_csv(path: impl AsRef<Path>) -> Result<Vec<(f64, f64)>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(file);
    let headers = r.headers().map_err(|e| Error::malformed(path, e.to_string()))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::malformed(path, format!("no column named {name:?}")))
    };
    let (xs, ys) = (column("c_sim")?, column("c_exp")?);
    let mut out = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::malformed(path, format!("row {}: {e}", row + 1)))?;
        let parse = |col: usize| -> Result<f64> {
            let field = rec.get(col).unwrap_or("");
            field.trim().parse().map_err(|_| {
                Error::malformed(
                    path,
                    format!(
                        "row {}, column {} ({}): {field:?} is not a number",
                        row + 1,
                        col + 1,
                        &headers[col]
                    ),
                )
            })
        };
        out.push((parse(xs)?, parse(ys)?));
    }
    Ok(out)
}
