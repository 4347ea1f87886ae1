//! Nearest-centroid classification with exact distances and with distances
//! estimated on the simulated backend.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angles::{euclidean_norm, DataVector};
use crate::distance::{estimate_compiled, CompiledVector, DistanceEstimate, Shots};
use crate::error::{Error, Result};
use crate::sim::NoiseSpec;

/// Class means and their compiled loaders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentroidModel {
    pub centroids: Vec<Vec<f64>>,
    pub class_names: Vec<String>,
    /// One entry per centroid; `None` when the dimension is not a power of
    /// two or the centroid is the zero vector.
    pub compiled: Vec<Option<CompiledVector>>,
}

impl CentroidModel {
    /// Class means of `points` grouped by `labels`, which index
    /// `class_names`. Every class needs at least one point.
    pub fn fit(points: &[Vec<f64>], labels: &[usize], class_names: &[String]) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} points but {} labels",
                points.len(),
                labels.len()
            )));
        }
        let dim = points.first().map_or(0, Vec::len);
        let k = class_names.len();
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in points.iter().zip(labels) {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: p.len(),
                });
            }
            let sum = sums
                .get_mut(l)
                .ok_or_else(|| Error::InvalidArgument(format!("label {l} has no class name ({k} classes)")))?;
            sum.iter_mut().zip(p).for_each(|(s, v)| *s += v);
            counts[l] += 1;
        }
        if let Some(empty) = counts.iter().position(|&c| c == 0) {
            return Err(Error::EmptyClass(empty));
        }
        let centroids: Vec<Vec<f64>> = sums
            .into_iter()
            .zip(&counts)
            .map(|(s, &c)| s.into_iter().map(|v| v / c as f64).collect())
            .collect();
        let compiled = centroids.iter().map(|c| compile_if_loadable(c)).collect();
        Ok(Self {
            centroids,
            class_names: class_names.to_vec(),
            compiled,
        })
    }

    pub fn num_classes(&self) -> usize {
        self.centroids.len()
    }

    pub fn dimension(&self) -> usize {
        self.centroids.first().map_or(0, Vec::len)
    }
}

fn compile_if_loadable(v: &[f64]) -> Option<CompiledVector> {
    DataVector::new(v.to_vec())
        .ok()
        .and_then(|x| CompiledVector::compile(&x).ok())
}

/// Index of the smallest value; the lowest index wins ties.
fn argmin(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|b| v < values[b]) {
            best = Some(i);
        }
    }
    best
}

fn check_dimension(model: &CentroidModel, points: &[Vec<f64>]) -> Result<()> {
    match points.iter().find(|p| p.len() != model.dimension()) {
        Some(bad) => Err(Error::DimensionMismatch {
            expected: model.dimension(),
            actual: bad.len(),
        }),
        None => Ok(()),
    }
}

/// Assigned labels and the distances behind them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    /// Class per point; `None` marks an unclassified point.
    pub labels: Vec<Option<usize>>,
    /// Per point, the distance to every centroid (estimated or exact). Empty
    /// for unclassified points.
    pub distances: Vec<Vec<f64>>,
    /// Per point and centroid, the estimate record when distances were
    /// estimated; `None` for exact distances.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub estimates: Option<Vec<Vec<Option<DistanceEstimate>>>>,
    /// Why each unclassified point failed.
    pub failures: Vec<(usize, String)>,
}

/// Accuracy of a prediction against reference labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub correct: usize,
    /// Classified points that entered the accuracy.
    pub evaluated: usize,
    pub unclassified: usize,
    /// `correct / evaluated`; zero when nothing was evaluated.
    pub accuracy: f64,
    /// `confusion[true][predicted]` over classified points.
    pub confusion: Vec<Vec<usize>>,
    /// Unclassified points per reference class, so that each confusion row
    /// plus this entry equals the class size.
    pub unclassified_per_class: Vec<usize>,
}

impl PredictionReport {
    pub fn unclassified(&self) -> usize {
        self.labels.iter().filter(|l| l.is_none()).count()
    }

    /// Scores against `reference`; unclassified points are left out of the
    /// accuracy and counted separately.
    pub fn score(&self, reference: &[usize], k: usize) -> Result<Score> {
        if reference.len() != self.labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} reference labels for {} predictions",
                reference.len(),
                self.labels.len()
            )));
        }
        let mut confusion = vec![vec![0; k]; k];
        let mut unclassified_per_class = vec![0; k];
        let mut correct = 0;
        for (&truth, predicted) in reference.iter().zip(&self.labels) {
            if truth >= k || predicted.is_some_and(|p| p >= k) {
                return Err(Error::InvalidArgument(format!("label outside {k} classes")));
            }
            match predicted {
                Some(p) => {
                    confusion[truth][*p] += 1;
                    if *p == truth {
                        correct += 1;
                    }
                }
                None => unclassified_per_class[truth] += 1,
            }
        }
        let unclassified: usize = unclassified_per_class.iter().sum();
        let evaluated = reference.len() - unclassified;
        Ok(Score {
            correct,
            evaluated,
            unclassified,
            accuracy: if evaluated == 0 {
                0.0
            } else {
                correct as f64 / evaluated as f64
            },
            confusion,
            unclassified_per_class,
        })
    }

    /// Fraction of classified points whose label equals `other`'s label.
    pub fn agreement(&self, other: &[usize]) -> f64 {
        let (mut same, mut seen) = (0usize, 0usize);
        for (mine, theirs) in self.labels.iter().zip(other) {
            if let Some(m) = mine {
                seen += 1;
                if m == theirs {
                    same += 1;
                }
            }
        }
        if seen == 0 {
            0.0
        } else {
            same as f64 / seen as f64
        }
    }
}

/// Exact Euclidean nearest centroid for every point.
pub fn predict_classical(model: &CentroidModel, points: &[Vec<f64>]) -> Result<PredictionReport> {
    check_dimension(model, points)?;
    let distances: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            model
                .centroids
                .iter()
                .map(|c| {
                    let diff: Vec<f64> = p.iter().zip(c).map(|(a, b)| a - b).collect();
                    euclidean_norm(&diff)
                })
                .collect()
        })
        .collect();
    Ok(PredictionReport {
        labels: distances.iter().map(|d| argmin(d)).collect(),
        distances,
        estimates: None,
        failures: Vec::new(),
    })
}

/// Nearest centroid with every point-centroid distance estimated on the
/// simulated backend.
///
/// The pair (point `i`, centroid `j`) samples from the random stream keyed by
/// `[i, j]` under `noise.seed`, so results are independent of thread count.
/// A zero point or zero centroid has no loader; its distance is the other
/// vector's norm. A point whose estimate fails is left unclassified.
pub fn predict_quantum(
    model: &CentroidModel,
    points: &[Vec<f64>],
    shots: Shots,
    noise: &NoiseSpec,
    mitigated: bool,
) -> Result<PredictionReport> {
    check_dimension(model, points)?;
    noise.validate()?;
    let dim = model.dimension();
    if !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    let per_point: Vec<std::result::Result<Vec<Option<DistanceEstimate>>, String>> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let point = compile_if_loadable(p);
            model
                .compiled
                .iter()
                .enumerate()
                .map(|(j, centroid)| match (&point, centroid) {
                    (Some(x), Some(c)) => estimate_compiled(x, c, shots, noise, mitigated, &[i as u64, j as u64])
                        .map(Some)
                        .map_err(|e| format!("centroid {j}: {e}")),
                    _ => Ok(None),
                })
                .collect()
        })
        .collect();

    let mut labels = Vec::with_capacity(points.len());
    let mut distances = Vec::with_capacity(points.len());
    let mut estimates = Vec::with_capacity(points.len());
    let mut failures = Vec::new();
    for (i, result) in per_point.into_iter().enumerate() {
        match result {
            Ok(row) => {
                let d: Vec<f64> = row
                    .iter()
                    .zip(&model.centroids)
                    .map(|(e, c)| match e {
                        Some(e) => e.l_hat,
                        None => euclidean_norm(&points[i]).max(euclidean_norm(c)),
                    })
                    .collect();
                labels.push(argmin(&d));
                distances.push(d);
                estimates.push(row);
            }
            Err(msg) => {
                labels.push(None);
                distances.push(Vec::new());
                estimates.push(Vec::new());
                failures.push((i, msg));
            }
        }
    }
    Ok(PredictionReport {
        labels,
        distances,
        estimates: Some(estimates),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| i.to_string()).collect()
    }

    #[test]
    fn one_point_per_class() {
        let pts = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let m = CentroidModel::fit(&pts, &[0, 1], &names(2)).unwrap();
        assert_eq!(m.centroids, pts);
        let r = predict_classical(&m, &pts).unwrap();
        assert_eq!(r.labels, vec![Some(0), Some(1)]);
    }

    #[test]
    fn empty_class() {
        assert!(matches!(
            CentroidModel::fit(&[vec![1.0]], &[0], &names(2)),
            Err(Error::EmptyClass(1))
        ));
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let m = CentroidModel::fit(&[vec![1.0, 0.0], vec![-1.0, 0.0]], &[0, 1], &names(2)).unwrap();
        let r = predict_classical(&m, &[vec![0.0, 3.0]]).unwrap();
        assert_eq!(r.labels, vec![Some(0)]);
    }

    #[test]
    fn exact_quantum_matches_classical() {
        let pts = vec![
            vec![0.9, 0.1, 0.0, 0.2],
            vec![0.8, 0.2, 0.1, 0.1],
            vec![0.1, 0.9, 0.3, 0.0],
            vec![0.0, 0.7, 0.4, 0.1],
        ];
        let m = CentroidModel::fit(&pts, &[0, 0, 1, 1], &names(2)).unwrap();
        let c = predict_classical(&m, &pts).unwrap();
        let q = predict_quantum(&m, &pts, Shots::Exact, &NoiseSpec::noiseless(0), false).unwrap();
        assert_eq!(c.labels, q.labels);
        for (a, b) in c.distances.iter().flatten().zip(q.distances.iter().flatten()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn score_and_confusion() {
        let r = PredictionReport {
            labels: vec![Some(0), Some(1), None, Some(1)],
            distances: vec![],
            estimates: None,
            failures: vec![(2, "starved".into())],
        };
        let s = r.score(&[0, 0, 1, 1], 2).unwrap();
        assert_eq!(s.correct, 2);
        assert_eq!(s.evaluated, 3);
        assert_eq!(s.confusion, vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(s.unclassified_per_class, vec![0, 1]);
        assert!((r.agreement(&[0, 1, 1, 0]) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_power_of_two_for_quantum() {
        let pts = vec![vec![1.0, 2.0, 3.0]];
        let m = CentroidModel::fit(&pts, &[0], &names(1)).unwrap();
        assert!(matches!(
            predict_quantum(&m, &pts, Shots::Exact, &NoiseSpec::noiseless(0), false),
            Err(Error::NotPowerOfTwo(3))
        ));
    }
}
