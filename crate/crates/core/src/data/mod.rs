//! Labelled datasets: synthetic clusters, CSV and IDX ingestion, PCA, and the
//! transforms applied before classification.

mod io;
mod pca;
mod synthetic;

pub use io::{load_csv, load_idx, read_dataset_csv, write_dataset_csv, LabelColumn};
pub use pca::{apply_pca, fit_pca, PcaModel};
pub use synthetic::{generate_synthetic, BallConstraint, NoiseScale, SyntheticSpec};

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// One step in the history of a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum Provenance {
    Synthetic {
        spec: SyntheticSpec,
        centroids: Vec<Vec<f64>>,
    },
    Csv {
        path: PathBuf,
        label_column: String,
    },
    Idx {
        images: PathBuf,
        labels: PathBuf,
    },
    BalancedSample {
        per_class: usize,
        seed: u64,
    },
    Pca {
        components: usize,
        fitted_on: usize,
        explained_variance: Vec<f64>,
    },
    NonnegativityShift {
        offsets: Vec<f64>,
    },
    Pad {
        from: usize,
        to: usize,
    },
}

/// Points with integer class ids indexing `class_names`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
    pub provenance: Vec<Provenance>,
}

impl Dataset {
    /// Checks that points share one dimension and labels index the class
    /// names.
    pub fn new(points: Vec<Vec<f64>>, labels: Vec<usize>, class_names: Vec<String>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} points but {} labels",
                points.len(),
                labels.len()
            )));
        }
        if let Some(first) = points.first() {
            if let Some(bad) = points.iter().find(|p| p.len() != first.len()) {
                return Err(Error::DimensionMismatch {
                    expected: first.len(),
                    actual: bad.len(),
                });
            }
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::InvalidArgument(format!(
                "label {bad} has no class name ({} classes)",
                class_names.len()
            )));
        }
        Ok(Self {
            points,
            labels,
            class_names,
            provenance: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class_names.len()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    fn with_step(mut self, step: Provenance) -> Self {
        self.provenance.push(step);
        self
    }

    /// Re-expresses the labels of `self` with the class list of `reference`,
    /// matching by name.
    pub fn align_classes(mut self, reference: &[String]) -> Result<Self> {
        let index: BTreeMap<&str, usize> = reference.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mapping = self
            .class_names
            .iter()
            .map(|name| {
                index
                    .get(name.as_str())
                    .copied()
                    .ok_or_else(|| Error::InvalidArgument(format!("class {name:?} is not in the reference set")))
            })
            .collect::<Result<Vec<_>>>()?;
        for l in &mut self.labels {
            *l = mapping[*l];
        }
        self.class_names = reference.to_vec();
        Ok(self)
    }

    /// `per_class` points drawn without replacement from every class, kept
    /// in their original order.
    pub fn balanced_sample(&self, per_class: usize, seed: u64) -> Result<Self> {
        let mut rng = rng::stream(seed, &[u64::from_be_bytes(*b"balanced")]);
        let mut chosen = Vec::new();
        for class in 0..self.num_classes() {
            let mut members: Vec<usize> = (0..self.len()).filter(|&i| self.labels[i] == class).collect();
            if members.len() < per_class {
                return Err(Error::InvalidArgument(format!(
                    "class {} has {} points, {per_class} requested",
                    self.class_names[class],
                    members.len()
                )));
            }
            members.shuffle(&mut rng);
            chosen.extend_from_slice(&members[..per_class]);
        }
        chosen.sort_unstable();
        let mut out = self.clone();
        out.points = chosen.iter().map(|&i| self.points[i].clone()).collect();
        out.labels = chosen.iter().map(|&i| self.labels[i]).collect();
        Ok(out.with_step(Provenance::BalancedSample { per_class, seed }))
    }

    /// Projects onto `model`'s axes.
    pub fn project(&self, model: &PcaModel, fitted_on: usize) -> Result<Self> {
        let mut out = self.clone();
        out.points = apply_pca(model, &self.points)?;
        Ok(out.with_step(Provenance::Pca {
            components: model.axes.len(),
            fitted_on,
            explained_variance: model.variances.clone(),
        }))
    }

    /// Fits PCA on this dataset and projects it onto the top `q` axes.
    pub fn pca(&self, q: usize) -> Result<(Self, PcaModel)> {
        let model = fit_pca(&self.points, q)?;
        Ok((self.project(&model, self.len())?, model))
    }

    /// Subtracts the per-coordinate minimum wherever it is negative, so every
    /// coordinate becomes nonnegative. Nonnegative coordinates are untouched.
    pub fn nonnegativity_shift(&self) -> Self {
        let offsets = nonnegativity_offsets(&self.points);
        self.shifted(&offsets)
    }

    /// Adds `offsets` to every point.
    pub fn shifted(&self, offsets: &[f64]) -> Self {
        let mut out = self.clone();
        for p in &mut out.points {
            for (v, o) in p.iter_mut().zip(offsets) {
                *v += o;
            }
        }
        out.with_step(Provenance::NonnegativityShift {
            offsets: offsets.to_vec(),
        })
    }

    /// Zero-pads every point to the next power-of-two dimension.
    pub fn pad_to_power_of_two(&self) -> Self {
        let from = self.dimension();
        let to = from.max(1).next_power_of_two();
        if to == from {
            return self.clone();
        }
        let mut out = self.clone();
        for p in &mut out.points {
            p.resize(to, 0.0);
        }
        out.with_step(Provenance::Pad { from, to })
    }
}

/// Per-coordinate offsets `max(0, −min)` that make every coordinate
/// nonnegative.
pub fn nonnegativity_offsets(points: &[Vec<f64>]) -> Vec<f64> {
    let d = points.first().map_or(0, Vec::len);
    (0..d)
        .map(|j| {
            let min = points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min);
            if min < 0.0 {
                -min
            } else {
                0.0
            }
        })
        .collect()
}
