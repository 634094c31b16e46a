mod common;

use common::{example1, example3};
use snp_core::forms::*;
use snp_core::linalg::row_rank;
use snp_core::system::Neuron;
use snp_core::{validate, IntMatrix, SnpSystem};

#[test]
fn example1_matrices() {
    let sys = example1();
    assert_eq!(sys.initial_configuration(), vec![2, 1, 1]);
    assert!(validate(&sys).is_valid());
    assert_eq!(
        spiking_matrix(&sys).to_rows(),
        vec![vec![-1, 1, 1], vec![-2, 1, 1], vec![1, -1, 1], vec![0, 0, -1], vec![0, 0, -2]]
    );
    let aug = augmented_matrix(&sys).unwrap();
    assert_eq!(aug.column(3), vec![0, 0, 0, 1, 0]);
    assert_eq!(aug.leading_columns(3), spiking_matrix(&sys));
    let struc = struc_matrix(&sys);
    assert_eq!(struc.to_rows(), vec![vec![-1, 1, 1], vec![1, -1, 1], vec![0, 0, -1]]);
    assert_eq!(row_rank(&struc), 2);
}

#[test]
fn example1_structural_report() {
    let report = structural_report(&example1());
    assert_eq!(report.observations.inferred_output_neurons, vec![2]);
    assert!(report.observations.rows_have_unique_negative);
    assert!(report.dfs_has_cycle);
    assert!(report.rank_cycle_hint);
    assert_eq!(report.struc_rank, 2);
    assert!(report.rule_columns_have_negative);
}

#[test]
fn example3_matrices() {
    let sys = example3();
    assert_eq!((sys.neuron_count(), sys.rule_count()), (3, 4));
    assert_eq!(sys.delays(), vec![0, 0, 0, 2]);
    assert_eq!(
        spiking_matrix(&sys).to_rows(),
        vec![vec![-1, 1, 0], vec![1, -1, 1], vec![0, -2, 0], vec![0, 1, -1]]
    );
    assert_eq!(
        production_matrix(&sys).to_rows(),
        vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 0, 0], vec![0, 1, 0]]
    );
    assert_eq!(
        consumption_matrix(&sys).to_rows(),
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 2, 0], vec![0, 0, 1]]
    );
    assert!(structural_report(&sys).observations.rows_have_unique_negative);
}

fn digraph(m: usize, mask: u32) -> SnpSystem {
    let neurons = (0..m).map(|j| Neuron { name: format!("n{j}"), spikes: 0 }).collect();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (0..m).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let syn = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
    SnpSystem::new(neurons, vec![], syn, None, None)
}

/// Over every digraph on up to four neurons: a rank drop always comes with
/// a cycle. The converse fails, and the smallest failure is printed.
#[test]
fn rank_drop_implies_cycle_on_small_digraphs() {
    let mut converse_failures = Vec::new();
    for m in 1..=4usize {
        let edges = m * (m - 1);
        for mask in 0u32..(1 << edges) {
            let sys = digraph(m, mask);
            let rank = row_rank(&struc_matrix(&sys));
            let cyclic = synapse_graph_has_cycle(&sys);
            if rank < m {
                assert!(cyclic, "rank {rank} < {m} without a cycle: {:?}", sys.synapses());
            } else if cyclic {
                converse_failures.push(sys.synapses().to_vec());
            }
        }
    }
    println!(
        "cyclic digraphs with full-rank Struc-M: {}; first: {:?}",
        converse_failures.len(),
        converse_failures.first()
    );
    assert!(!converse_failures.is_empty());
}

#[test]
fn bigint_rank_matches_i64_rank() {
    let sys = example1();
    let m = spiking_matrix(&sys);
    let big: snp_core::BigIntMatrix =
        snp_core::Matrix::from_rows(3, m.to_rows().into_iter().map(|r| r.into_iter().map(Into::into).collect()).collect())
            .unwrap();
    assert_eq!(row_rank(&big), row_rank::<i64>(&m));
    let _: &IntMatrix = &m;
}
