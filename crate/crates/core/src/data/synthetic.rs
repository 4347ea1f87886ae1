use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{Dataset, Provenance};
use crate::error::{Error, Result};
use crate::rng::{self, StreamRng};

/// How the `variance` field of a [`SyntheticSpec`] is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseScale {
    /// Per-coordinate variance `σ²`.
    #[default]
    Variance,
    /// Per-coordinate standard deviation `σ`.
    StdDev,
}

/// Which draws must land inside the ball of radius `radius`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BallConstraint {
    /// Centroids and points; out-of-ball points have their noise redrawn.
    #[default]
    Points,
    /// Only centroids.
    CentroidsOnly,
}

/// Gaussian clusters around well-separated random centroids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub k: usize,
    pub d: usize,
    #[serde(default = "default_n_per")]
    pub n_per: usize,
    #[serde(default = "default_min_sep")]
    pub min_sep: f64,
    #[serde(default = "default_variance")]
    pub variance: f64,
    #[serde(default = "default_radius")]
    pub radius: f64,
    pub seed: u64,
    #[serde(default)]
    pub noise_scale: NoiseScale,
    #[serde(default)]
    pub ball: BallConstraint,
    /// Draws allowed per centroid and per point before giving up.
    #[serde(default = "default_attempts")]
    pub max_attempts: usize,
}

fn default_n_per() -> usize {
    10
}
fn default_min_sep() -> f64 {
    0.3
}
fn default_variance() -> f64 {
    0.05
}
fn default_radius() -> f64 {
    1.0
}
fn default_attempts() -> usize {
    100_000
}

impl SyntheticSpec {
    pub fn new(k: usize, d: usize, seed: u64) -> Self {
        Self {
            k,
            d,
            n_per: default_n_per(),
            min_sep: default_min_sep(),
            variance: default_variance(),
            radius: default_radius(),
            seed,
            noise_scale: NoiseScale::default(),
            ball: BallConstraint::default(),
            max_attempts: default_attempts(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.d == 0 || self.n_per == 0 {
            return Err(Error::InfeasibleSpec("k, d and n_per must be positive".into()));
        }
        if !(self.min_sep >= 0.0 && self.variance > 0.0 && self.radius > 0.0) {
            return Err(Error::InfeasibleSpec(
                "min_sep must be >= 0, variance and radius > 0".into(),
            ));
        }
        if self.min_sep > 2.0 * self.radius && self.k > 1 {
            return Err(Error::InfeasibleSpec(format!(
                "separation {} exceeds the ball diameter",
                self.min_sep
            )));
        }
        Ok(())
    }

    fn sigma(&self) -> f64 {
        match self.noise_scale {
            NoiseScale::Variance => self.variance.sqrt(),
            NoiseScale::StdDev => self.variance,
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Uniform point in the ball of radius `radius`.
fn uniform_in_ball(rng: &mut StreamRng, d: usize, radius: f64) -> Vec<f64> {
    loop {
        let dir: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&dir);
        if n == 0.0 {
            continue;
        }
        let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
        return dir.into_iter().map(|v| v * r / n).collect();
    }
}

/// Draws `k` centroids and `n_per` points around each. Labels follow the
/// centroid order; points of one cluster are contiguous.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = rng::stream(spec.seed, &[u64::from_be_bytes(*b"synthetc")]);
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(spec.k);
    while centroids.len() < spec.k {
        let mut attempts = 0;
        loop {
            attempts += 1;
            if attempts > spec.max_attempts {
                return Err(Error::InfeasibleSpec(format!(
                    "could not place centroid {} at separation {} after {} draws",
                    centroids.len() + 1,
                    spec.min_sep,
                    spec.max_attempts
                )));
            }
            let c = uniform_in_ball(&mut rng, spec.d, spec.radius);
            let separated = centroids.iter().all(|o| {
                let diff: Vec<f64> = o.iter().zip(&c).map(|(a, b)| a - b).collect();
                norm(&diff) >= spec.min_sep
            });
            if separated {
                centroids.push(c);
                break;
            }
        }
    }

    let sigma = spec.sigma();
    let mut points = Vec::with_capacity(spec.k * spec.n_per);
    let mut labels = Vec::with_capacity(spec.k * spec.n_per);
    for (label, c) in centroids.iter().enumerate() {
        for _ in 0..spec.n_per {
            let mut attempts = 0;
            let point = loop {
                attempts += 1;
                if attempts > spec.max_attempts {
                    return Err(Error::InfeasibleSpec(format!(
                        "no point of cluster {label} fell inside the ball after {} draws",
                        spec.max_attempts
                    )));
                }
                let p: Vec<f64> = c
                    .iter()
                    .map(|&v| v + sigma * rng.sample::<f64, _>(StandardNormal))
                    .collect();
                if spec.ball == BallConstraint::CentroidsOnly || norm(&p) <= spec.radius {
                    break p;
                }
            };
            points.push(point);
            labels.push(label);
        }
    }
    let names = (0..spec.k).map(|i| i.to_string()).collect();
    let mut ds = Dataset::new(points, labels, names)?;
    ds.provenance.push(Provenance::Synthetic { spec: *spec, centroids });
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let spec = SyntheticSpec::new(4, 8, 7);
        assert_eq!(generate_synthetic(&spec).unwrap(), generate_synthetic(&spec).unwrap());
        let other = SyntheticSpec::new(4, 8, 8);
        assert_ne!(
            generate_synthetic(&spec).unwrap().points,
            generate_synthetic(&other).unwrap().points
        );
    }

    #[test]
    fn inside_ball_and_separated() {
        let ds = generate_synthetic(&SyntheticSpec::new(4, 4, 3)).unwrap();
        assert_eq!(ds.len(), 40);
        assert!(ds.points.iter().all(|p| norm(p) <= 1.0));
        let Provenance::Synthetic { centroids, .. } = &ds.provenance[0] else {
            panic!("missing provenance")
        };
        for i in 0..4 {
            for j in 0..i {
                let diff: Vec<f64> = centroids[i].iter().zip(&centroids[j]).map(|(a, b)| a - b).collect();
                assert!(norm(&diff) >= 0.3);
            }
        }
    }

    #[test]
    fn single_cluster() {
        let ds = generate_synthetic(&SyntheticSpec::new(1, 2, 0)).unwrap();
        assert_eq!(ds.class_counts(), vec![10]);
    }

    #[test]
    fn infeasible_packing() {
        let mut spec = SyntheticSpec::new(50, 1, 0);
        spec.max_attempts = 1000;
        assert!(matches!(generate_synthetic(&spec), Err(Error::InfeasibleSpec(_))));
        let mut spec = SyntheticSpec::new(2, 2, 0);
        spec.min_sep = 2.5;
        assert!(matches!(generate_synthetic(&spec), Err(Error::InfeasibleSpec(_))));
    }
}
