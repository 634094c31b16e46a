//! Matrix representations of a system and the structural facts they expose.
//!
//! Rows are rules (in rule order), columns are neurons. All entries are exact
//! integers.

use petgraph::algo::is_cyclic_directed;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::MatrixFormError;
use crate::linalg::row_rank;
use crate::system::SnpSystem;
use crate::IntMatrix;

/// `M_Π`: `-c` in the owner column, `+p` in every synapse target column.
/// Forgetting rules only contribute their `-c`.
pub fn spiking_matrix(sys: &SnpSystem) -> IntMatrix {
    let (n, m) = (sys.rule_count(), sys.neuron_count());
    let mut out = IntMatrix::zeros(n, m);
    for (i, r) in sys.rules().iter().enumerate() {
        out.set(i, r.owner, -(r.consume as i64));
        for t in sys.targets_of(r.owner) {
            if t != r.owner {
                out.set(i, t, r.produce as i64);
            }
        }
    }
    out
}

/// `M_Π` with one extra environment column: `p` for spiking rules of the
/// output neuron, `0` for everything else (including its forgetting rules).
pub fn augmented_matrix(sys: &SnpSystem) -> Result<IntMatrix, MatrixFormError> {
    let out_neuron = sys.output().ok_or(MatrixFormError::MissingOutNeuron)?;
    let base = spiking_matrix(sys);
    let (n, m) = (base.rows(), base.cols());
    let mut out = IntMatrix::zeros(n, m + 1);
    for i in 0..n {
        for j in 0..m {
            out.set(i, j, *base.get(i, j));
        }
        let r = sys.rule(i);
        if r.owner == out_neuron {
            out.set(i, m, r.produce as i64);
        }
    }
    Ok(out)
}

/// `PM`: the nonnegative production part of `M_Π`.
pub fn production_matrix(sys: &SnpSystem) -> IntMatrix {
    let mut out = IntMatrix::zeros(sys.rule_count(), sys.neuron_count());
    for (i, r) in sys.rules().iter().enumerate() {
        for t in sys.targets_of(r.owner) {
            if t != r.owner {
                out.set(i, t, r.produce as i64);
            }
        }
    }
    out
}

/// `CM`: spikes consumed by each rule from its owner.
pub fn consumption_matrix(sys: &SnpSystem) -> IntMatrix {
    let mut out = IntMatrix::zeros(sys.rule_count(), sys.neuron_count());
    for (i, r) in sys.rules().iter().enumerate() {
        out.set(i, r.owner, r.consume as i64);
    }
    out
}

/// `Struc-M`: `-1` on the whole diagonal, `1` for each synapse.
pub fn struc_matrix(sys: &SnpSystem) -> IntMatrix {
    let m = sys.neuron_count();
    let mut out = IntMatrix::zeros(m, m);
    for j in 0..m {
        out.set(j, j, -1);
    }
    for &(a, b) in sys.synapses() {
        if a != b {
            out.set(a, b, 1);
        }
    }
    out
}

/// Facts readable from the rows and columns of `M_Π` alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixObservations {
    pub row_negative_counts: Vec<usize>,
    pub column_negative_counts: Vec<usize>,
    /// Every row has exactly one negative entry.
    pub rows_have_unique_negative: bool,
    /// Neurons whose column holds a negative-only row. Forgetting rules look
    /// the same in `M_Π`, so this is evidence, not proof, of emission.
    pub inferred_output_neurons: Vec<usize>,
    /// Distinct positive columns reached from the rows a neuron owns.
    pub out_degree: Vec<usize>,
    pub is_square: bool,
}

pub fn matrix_observations(mat: &IntMatrix) -> MatrixObservations {
    let (n, m) = (mat.rows(), mat.cols());
    let mut row_neg = vec![0; n];
    let mut col_neg = vec![0; m];
    let mut inferred = Vec::new();
    let mut reach = vec![vec![false; m]; m];
    for (i, row_count) in row_neg.iter_mut().enumerate() {
        let row = mat.row(i);
        let negatives: Vec<usize> = (0..m).filter(|&j| row[j] < 0).collect();
        *row_count = negatives.len();
        for &j in &negatives {
            col_neg[j] += 1;
        }
        if let [owner] = negatives[..] {
            if row.iter().filter(|x| **x != 0).count() == 1 && !inferred.contains(&owner) {
                inferred.push(owner);
            }
            for (t, &x) in row.iter().enumerate() {
                if x > 0 && t != owner {
                    reach[owner][t] = true;
                }
            }
        }
    }
    inferred.sort_unstable();
    MatrixObservations {
        rows_have_unique_negative: row_neg.iter().all(|&c| c == 1),
        row_negative_counts: row_neg,
        column_negative_counts: col_neg,
        inferred_output_neurons: inferred,
        out_degree: reach.iter().map(|r| r.iter().filter(|&&x| x).count()).collect(),
        is_square: n == m,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    #[serde(flatten)]
    pub observations: MatrixObservations,
    /// Each neuron that owns rules has at least one negative entry in its column.
    pub rule_columns_have_negative: bool,
    pub struc_rank: usize,
    /// `rank(Struc-M) < m`.
    pub rank_cycle_hint: bool,
    /// Directed cycle in the synapse graph, found by depth-first search.
    pub dfs_has_cycle: bool,
}

pub fn structural_report(sys: &SnpSystem) -> StructuralReport {
    let observations = matrix_observations(&spiking_matrix(sys));
    let m = sys.neuron_count();
    let rule_columns_have_negative =
        (0..m).all(|j| sys.rules_of(j).next().is_none() || observations.column_negative_counts[j] > 0);
    let struc_rank = row_rank(&struc_matrix(sys));
    StructuralReport {
        observations,
        rule_columns_have_negative,
        struc_rank,
        rank_cycle_hint: struc_rank < m,
        dfs_has_cycle: synapse_graph_has_cycle(sys),
    }
}

pub fn synapse_graph_has_cycle(sys: &SnpSystem) -> bool {
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..sys.neuron_count()).map(|_| g.add_node(())).collect();
    for &(a, b) in sys.synapses() {
        g.add_edge(nodes[a], nodes[b], ());
    }
    is_cyclic_directed(&g)
}
