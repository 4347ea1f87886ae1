use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean, orthonormal principal axes and the sample variance along each axis,
/// largest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    pub axes: Vec<Vec<f64>>,
    pub variances: Vec<f64>,
}

/// Top-`q` principal axes of the sample covariance, from the SVD of the
/// centred data. Each axis is signed so that its largest-magnitude entry is
/// positive. Directions without variance are kept with variance zero.
pub fn fit_pca(points: &[Vec<f64>], q: usize) -> Result<PcaModel> {
    let n = points.len();
    let dim = points.first().map_or(0, Vec::len);
    if q == 0 || q > dim {
        return Err(Error::InvalidArgument(format!(
            "{q} components requested from dimension {dim}"
        )));
    }
    if n < q + 1 {
        return Err(Error::InvalidArgument(format!(
            "{q} components need at least {} points, got {n}",
            q + 1
        )));
    }
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: bad.len(),
        });
    }
    let mean: Vec<f64> = (0..dim)
        .map(|j| points.iter().map(|p| p[j]).sum::<f64>() / n as f64)
        .collect();
    let centred = DMatrix::from_fn(n, dim, |i, j| points[i][j] - mean[j]);
    let svd = centred.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::InvalidArgument("singular value decomposition failed".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let mut axes = Vec::with_capacity(q);
    let mut variances = Vec::with_capacity(q);
    for &k in order.iter().take(q) {
        let mut axis: Vec<f64> = v_t.row(k).iter().copied().collect();
        let pivot = axis
            .iter()
            .copied()
            .reduce(|a, b| if b.abs() > a.abs() { b } else { a })
            .unwrap_or(0.0);
        if pivot < 0.0 {
            axis.iter_mut().for_each(|v| *v = -*v);
        }
        axes.push(axis);
        variances.push(svd.singular_values[k].powi(2) / (n - 1) as f64);
    }
    Ok(PcaModel { mean, axes, variances })
}

/// Coordinates of each point along the model's axes after removing the mean.
pub fn apply_pca(model: &PcaModel, points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    points
        .iter()
        .map(|p| {
            if p.len() != model.mean.len() {
                return Err(Error::DimensionMismatch {
                    expected: model.mean.len(),
                    actual: p.len(),
                });
            }
            Ok(model
                .axes
                .iter()
                .map(|a| a.iter().zip(p).zip(&model.mean).map(|((w, x), m)| w * (x - m)).sum())
                .collect())
        })
        .collect()
}
