use crate::angles::{AngleTree, MatrixAngles};
use crate::error::Result;

use super::{Circuit, Gate};

/// RBS gates of one loader layer for a tree of dimension `d`, offset onto
/// qubits starting at `base`. Layer `l` splits the excitation of qubit
/// `p * d / 2^l` onto qubit `p * d / 2^l + d / 2^(l+1)`.
fn layer_gates(tree: &AngleTree, layer: usize, base: usize) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
    let d = tree.dimension();
    let block = d >> layer;
    tree.layer_angles(layer).iter().enumerate().map(move |(p, &angle)| {
        let source = base + p * block;
        (source, source + block / 2, angle)
    })
}

/// The `d`-qubit, depth-`log2 d` unary loader: an X on qubit 0 followed by
/// one layer of RBS gates per tree level.
pub fn build_parallel_loader(tree: &AngleTree) -> Circuit {
    let d = tree.dimension();
    let mut layers = Vec::with_capacity(tree.depth() + 1);
    layers.push(vec![Gate::X { qubit: 0 }]);
    for layer in 0..tree.depth() {
        layers.push(
            layer_gates(tree, layer, 0)
                .map(|(a, b, angle)| Gate::rbs(a, b, angle))
                .collect(),
        );
    }
    Circuit::from_layers(d, layers).expect("loader layers are disjoint by construction")
}

/// The `2 sqrt(d)`-qubit loader for a vector viewed as a `sqrt(d) x sqrt(d)`
/// matrix. Qubits `0..s` hold the row index, `s..2s` the column index.
///
/// A parallel loader prepares the row-norm state, then for every row a loader
/// controlled on that row's qubit fills the column register. After the row
/// loader exactly one row qubit is excited, so controlled gates of different
/// rows commute and are list-scheduled together, lower layers first. Within a
/// row, a gate waits for the earlier gates of that row sharing a column
/// qubit.
pub fn build_optimized_loader(matrix: &MatrixAngles) -> Result<Circuit> {
    let side = matrix.side();
    let mut layers = vec![vec![Gate::X { qubit: 0 }, Gate::X { qubit: side }]];
    let rows = matrix.row_norms();
    for layer in 0..rows.depth() {
        layers.push(
            layer_gates(rows, layer, 0)
                .map(|(a, b, angle)| Gate::rbs(a, b, angle))
                .collect(),
        );
    }

    struct Pending {
        gate: Gate,
        deps: Vec<usize>,
    }
    // priority order: tree layer, then row, then position in the layer
    let depth = rows.depth();
    let mut pending: Vec<Pending> = Vec::new();
    for layer in 0..depth {
        for (row, tree) in matrix.rows().iter().enumerate() {
            for (a, b, angle) in layer_gates(tree, layer, side) {
                let deps = pending
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| {
                        matches!(p.gate, Gate::ControlledRbs { control, qubits, .. }
                            if control == row && (qubits.contains(&a) || qubits.contains(&b)))
                    })
                    .map(|(i, _)| i)
                    .collect();
                pending.push(Pending {
                    gate: Gate::ControlledRbs {
                        control: row,
                        qubits: [a, b],
                        angle,
                    },
                    deps,
                });
            }
        }
    }

    let mut finished = vec![false; pending.len()];
    let mut remaining = pending.len();
    while remaining > 0 {
        let mut busy = vec![false; 2 * side];
        let mut step = Vec::new();
        let mut placed = Vec::new();
        for (i, p) in pending.iter().enumerate() {
            if finished[i] || !p.deps.iter().all(|&d| finished[d]) {
                continue;
            }
            let qubits = p.gate.qubits();
            if qubits.iter().any(|&q| busy[q]) {
                continue;
            }
            for q in qubits {
                busy[q] = true;
            }
            step.push(p.gate);
            placed.push(i);
        }
        for i in placed {
            finished[i] = true;
            remaining -= 1;
        }
        layers.push(step);
    }
    Circuit::from_layers(2 * side, layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::DataVector;

    fn tree(values: Vec<f64>) -> AngleTree {
        AngleTree::compile(&DataVector::new(values).unwrap()).unwrap()
    }

    #[test]
    fn two_dimensional_loader() {
        let c = build_parallel_loader(&tree(vec![0.6, 0.8]));
        assert_eq!(c.layers().len(), 2);
        assert_eq!(c.layers()[0], vec![Gate::X { qubit: 0 }]);
        assert!(matches!(c.layers()[1][0], Gate::Rbs { qubits: [0, 1], .. }));
        assert_eq!(c.stats().rbs_count, 1);
        assert_eq!(c.stats().depth, 2);
    }

    #[test]
    fn eight_dimensional_loader_pairs() {
        let t = tree((1..=8).map(f64::from).collect());
        let c = build_parallel_loader(&t);
        let pairs: Vec<Vec<(usize, usize)>> = c.layers()[1..]
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|g| {
                        let q = g.qubits();
                        (q[0] + 1, q[1] + 1)
                    })
                    .collect()
            })
            .collect();
        assert_eq!(
            pairs,
            vec![vec![(1, 5)], vec![(1, 3), (5, 7)], vec![(1, 2), (3, 4), (5, 6), (7, 8)],]
        );
        let angles: Vec<f64> = c.gates().filter_map(Gate::angle).collect();
        assert_eq!(angles, t.theta());
    }

    #[test]
    fn sixteen_dimensional_counts() {
        let c = build_parallel_loader(&tree(vec![1.0; 16]));
        let s = c.stats();
        assert_eq!(s.rbs_count, 15);
        assert_eq!(s.rotation_depth, 4);
        assert_eq!(s.depth, 5);
    }

    #[test]
    fn optimized_loader_smallest_instance() {
        let m = MatrixAngles::compile(&DataVector::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap()).unwrap();
        let c = build_optimized_loader(&m).unwrap();
        let s = c.stats();
        assert_eq!(c.num_qubits(), 4);
        assert_eq!(s.rbs_count + s.controlled_rbs_count, 3);
        assert_eq!(s.controlled_rbs_count, 2);
    }

    #[test]
    fn optimized_loader_sixteen() {
        let values: Vec<f64> = (1..=16).map(f64::from).collect();
        let m = MatrixAngles::compile(&DataVector::new(values).unwrap()).unwrap();
        let c = build_optimized_loader(&m).unwrap();
        let s = c.stats();
        assert_eq!(c.num_qubits(), 8);
        assert_eq!(s.rbs_count + s.controlled_rbs_count, 15);
        assert!(s.rotation_depth <= 4 * 2 + 2, "depth {}", s.rotation_depth);
    }

    #[test]
    fn optimized_loader_depth_bound_scales() {
        for side in [2usize, 4, 8, 16] {
            let d = side * side;
            let values: Vec<f64> = (0..d).map(|i| 1.0 + (i % 7) as f64).collect();
            let m = MatrixAngles::compile(&DataVector::new(values).unwrap()).unwrap();
            let c = build_optimized_loader(&m).unwrap();
            let s = c.stats();
            let log_side = side.trailing_zeros() as usize;
            assert_eq!(s.rbs_count + s.controlled_rbs_count, d - 1);
            assert!(
                s.rotation_depth <= side * log_side + log_side,
                "d={d}: {}",
                s.rotation_depth
            );
        }
    }
}
