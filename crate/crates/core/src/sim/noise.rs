use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How coherent angle-noise draws are shared between shots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoherentMode {
    /// Fresh draws for every gate of every shot.
    #[default]
    PerShot,
    /// One noisy state per shot batch.
    PerBatch,
    /// One draw per gate reused by all shots of a circuit, like a fixed
    /// miscalibration.
    Systematic,
}

pub const DEFAULT_BATCH_SIZE: usize = 256;

fn default_batch_size() -> usize {
    DEFAULT_BATCH_SIZE
}

/// Coherent angle noise of relative magnitude `gamma` plus a global
/// depolarizing mixture driven by the two-qubit gate `fidelity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub gamma: f64,
    pub fidelity: f64,
    pub seed: u64,
    #[serde(default)]
    pub coherent: CoherentMode,
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
}

impl NoiseSpec {
    pub fn new(gamma: f64, fidelity: f64, seed: u64) -> Result<Self> {
        let spec = Self {
            gamma,
            fidelity,
            seed,
            coherent: CoherentMode::default(),
            batch_size: DEFAULT_BATCH_SIZE,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn noiseless(seed: u64) -> Self {
        Self {
            gamma: 0.0,
            fidelity: 1.0,
            seed,
            coherent: CoherentMode::default(),
            batch_size: DEFAULT_BATCH_SIZE,
        }
    }

    pub fn with_mode(mut self, coherent: CoherentMode) -> Self {
        self.coherent = coherent;
        self
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> Self {
        self.batch_size = batch_size;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::InvalidNoise(format!("gamma {} must be >= 0", self.gamma)));
        }
        if !(self.fidelity > 0.0 && self.fidelity <= 1.0) {
            return Err(Error::InvalidNoise(format!(
                "fidelity {} must lie in (0, 1]",
                self.fidelity
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidNoise("batch size must be positive".into()));
        }
        Ok(())
    }

    /// Weight `p = f^m` of the ideal outcome distribution for a circuit with
    /// `m` native two-qubit gates.
    pub fn survival_probability(&self, native_tqg: usize) -> f64 {
        self.fidelity.powi(native_tqg as i32)
    }

    pub fn is_noiseless(&self) -> bool {
        self.gamma == 0.0 && self.fidelity == 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(NoiseSpec::new(0.03, 0.96, 1).is_ok());
        assert!(NoiseSpec::new(-0.1, 0.96, 1).is_err());
        assert!(NoiseSpec::new(0.0, 0.0, 1).is_err());
        assert!(NoiseSpec::new(0.0, 1.01, 1).is_err());
        assert!(NoiseSpec::noiseless(0).with_batch_size(0).validate().is_err());
    }

    #[test]
    fn survival_for_eight_qubit_distance_circuit() {
        let n = NoiseSpec::new(0.0, 0.96, 0).unwrap();
        assert!((n.survival_probability(30) - 0.293_857_6).abs() < 1e-6);
    }

    #[test]
    fn json_defaults() {
        let n: NoiseSpec = serde_json::from_str(r#"{"gamma":0.1,"fidelity":0.9,"seed":4}"#).unwrap();
        assert_eq!(n.coherent, CoherentMode::PerShot);
        assert_eq!(n.batch_size, DEFAULT_BATCH_SIZE);
    }
}
