//! Classical preprocessing of a vector into the binary tree of subtree norms
//! and rotation angles that parametrize a unary loader circuit.
//!
//! Nodes are stored in heap order: node `k` (1-based) has children `2k` and
//! `2k + 1`, and the node at `d/2 + j` (0-based `j`) sits directly above the
//! coordinate pair `(x[2j], x[2j + 1])`. The `r` and `theta` vectors hold node
//! `k` at position `k - 1`, so layer `l` of the loader reads
//! `theta[2^l - 1 .. 2^(l+1) - 1]`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A classical data point whose length is a power of two.
#[derive(Debug, Clone, PartialEq)]
pub struct DataVector {
    entries: Vec<f64>,
    norm: f64,
}

impl DataVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() || !entries.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(entries.len()));
        }
        let norm = euclidean_norm(&entries);
        Ok(Self { entries, norm })
    }

    /// Pads with trailing zeros up to the next power of two.
    pub fn padded(mut entries: Vec<f64>) -> Result<Self> {
        let target = entries.len().max(1).next_power_of_two();
        entries.resize(target, 0.0);
        Self::new(entries)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    /// Copy of this vector with coordinate `index` (0-based) replaced.
    pub fn with_entry(&self, index: usize, value: f64) -> Result<Self> {
        if index >= self.entries.len() {
            return Err(Error::IndexOutOfRange {
                index,
                dimension: self.entries.len(),
            });
        }
        let mut entries = self.entries.clone();
        entries[index] = value;
        Self::new(entries)
    }

    pub fn normalized(&self) -> Result<Vec<f64>> {
        if self.norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self.entries.iter().map(|v| v / self.norm).collect())
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.entries
    }
}

pub(crate) fn euclidean_norm(values: &[f64]) -> f64 {
    values.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Subtree norms and loader angles compiled from one vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleTree {
    dimension: usize,
    r: Vec<f64>,
    theta: Vec<f64>,
}

impl AngleTree {
    /// Compiles the tree for `x` in a single bottom-up pass.
    pub fn compile(x: &DataVector) -> Result<Self> {
        let tree = Self::compile_lenient(x.entries())?;
        if tree.root_norm() == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(tree)
    }

    /// Like [`AngleTree::compile`] but accepts the zero vector, producing an
    /// all-zero tree. Used for rows of a matrix view that may be empty.
    pub(crate) fn compile_lenient(x: &[f64]) -> Result<Self> {
        let d = x.len();
        if d < 2 || !d.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(d));
        }
        let mut tree = Self {
            dimension: d,
            r: vec![0.0; d - 1],
            theta: vec![0.0; d - 1],
        };
        let half = d / 2;
        for j in 0..half {
            tree.refresh_leaf_node(j, x[2 * j], x[2 * j + 1]);
        }
        for node in (1..half).rev() {
            tree.refresh_internal_node(node);
        }
        Ok(tree)
    }

    /// Recompiles after setting `x[index] = value`, touching only the
    /// `log2(d)` nodes on the leaf-to-root path.
    pub fn update_path(&self, x: &DataVector, index: usize, value: f64) -> Result<Self> {
        let d = self.dimension;
        if x.dimension() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: x.dimension(),
            });
        }
        if index >= d {
            return Err(Error::IndexOutOfRange { index, dimension: d });
        }
        let j = index / 2;
        let (mut odd, mut even) = (x.entries()[2 * j], x.entries()[2 * j + 1]);
        if index.is_multiple_of(2) {
            odd = value;
        } else {
            even = value;
        }
        let mut tree = self.clone();
        tree.refresh_leaf_node(j, odd, even);
        let mut node = (d / 2 + j) / 2;
        while node >= 1 {
            tree.refresh_internal_node(node);
            node /= 2;
        }
        if tree.root_norm() == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(tree)
    }

    fn refresh_leaf_node(&mut self, j: usize, first: f64, second: f64) {
        let node = self.dimension / 2 + j;
        let r = (first * first + second * second).sqrt();
        let theta = if r == 0.0 {
            0.0
        } else {
            let base = (first / r).clamp(-1.0, 1.0).acos();
            if second >= 0.0 {
                base
            } else {
                let wrapped = TAU - base;
                if wrapped >= TAU {
                    wrapped - TAU
                } else {
                    wrapped
                }
            }
        };
        self.r[node - 1] = r;
        self.theta[node - 1] = theta;
    }

    fn refresh_internal_node(&mut self, node: usize) {
        let left = self.r[2 * node - 1];
        let right = self.r[2 * node];
        let r = (left * left + right * right).sqrt();
        self.r[node - 1] = r;
        self.theta[node - 1] = if r == 0.0 {
            0.0
        } else {
            (left / r).clamp(0.0, 1.0).acos()
        };
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Node norms in heap order (`r()[k - 1]` is node `k`).
    pub fn r(&self) -> &[f64] {
        &self.r
    }

    /// Gate angles in heap order (`theta()[k - 1]` is node `k`).
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn root_norm(&self) -> f64 {
        self.r[0]
    }

    pub fn depth(&self) -> usize {
        self.dimension.trailing_zeros() as usize
    }

    /// Angles used by loader layer `layer` (0 = root).
    pub fn layer_angles(&self, layer: usize) -> &[f64] {
        let start = (1usize << layer) - 1;
        let end = (1usize << (layer + 1)) - 1;
        &self.theta[start..end]
    }

    /// Rebuilds a tree from serialized parts, checking lengths only.
    pub fn from_parts(dimension: usize, r: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        if dimension < 2 || !dimension.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dimension));
        }
        for len in [r.len(), theta.len()] {
            if len != dimension - 1 {
                return Err(Error::DimensionMismatch {
                    expected: dimension - 1,
                    actual: len,
                });
            }
        }
        Ok(Self { dimension, r, theta })
    }
}

/// Convenience wrapper matching the free-function form used throughout.
pub fn compile_angles(x: &DataVector) -> Result<AngleTree> {
    AngleTree::compile(x)
}

pub fn update_angle_path(tree: &AngleTree, x: &DataVector, index: usize, value: f64) -> Result<AngleTree> {
    tree.update_path(x, index, value)
}

/// A vector of dimension `d = s * s` viewed as an `s x s` matrix: one tree
/// for the row norms and one per row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixAngles {
    side: usize,
    row_norms: AngleTree,
    rows: Vec<AngleTree>,
}

impl MatrixAngles {
    pub fn compile(x: &DataVector) -> Result<Self> {
        let d = x.dimension();
        let side = (d as f64).sqrt().round() as usize;
        if d < 4 || side * side != d || !side.is_power_of_two() {
            return Err(Error::NotPowerOfFour(d));
        }
        let rows = x
            .entries()
            .chunks(side)
            .map(AngleTree::compile_lenient)
            .collect::<Result<Vec<_>>>()?;
        let norms: Vec<f64> = x.entries().chunks(side).map(euclidean_norm).collect();
        let row_norms = AngleTree::compile(&DataVector::new(norms)?)?;
        Ok(Self { side, row_norms, rows })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn row_norms(&self) -> &AngleTree {
        &self.row_norms
    }

    pub fn rows(&self) -> &[AngleTree] {
        &self.rows
    }
}
