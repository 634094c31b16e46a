mod common;

use common::{bits, example1, example3};
use snp_core::engine::{next_configuration, run_trace, Computation, DelayMode, Policy};
use snp_core::forms::spiking_matrix;
use snp_core::reachability::*;
use snp_core::ReachabilityError;

fn family_212(r: i64, s: i64) -> Vec<i64> {
    vec![r, 0, r, 2 * (r - s) - 1, s]
}

fn family_202(r: i64, s: i64) -> Vec<i64> {
    vec![r, 1, r + 2, 2 * (r - s + 1), s]
}

/// Nonnegative instances of a two-parameter family within a sum bound.
fn instances(f: fn(i64, i64) -> Vec<i64>, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for r in -bound..=bound {
        for s in -bound..=bound {
            let v = f(r, s);
            if v.iter().all(|&x| x >= 0) && v.iter().sum::<i64>() <= bound {
                out.push(v);
            }
        }
    }
    out.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum()).then_with(|| a.cmp(b)));
    out.dedup();
    out
}

#[test]
fn solutions_for_212_match_the_printed_family() {
    let sys = example1();
    let m = spiking_matrix(&sys);
    let got = sum_vector_solutions(&m, &[2, 1, 1], &[2, 1, 2], 4).unwrap();
    assert_eq!(got, instances(family_212, 12));
    assert_eq!(got[0], vec![1, 0, 1, 1, 0]);
    assert!(got.contains(&vec![2, 0, 2, 1, 1]));
}

#[test]
fn solutions_for_202_match_the_printed_family() {
    let sys = example1();
    let m = spiking_matrix(&sys);
    let got = sum_vector_solutions(&m, &[2, 1, 1], &[2, 0, 2], 6).unwrap();
    assert_eq!(got, instances(family_202, 18));
    assert!(got.contains(&vec![1, 1, 3, 4, 0]));
}

#[test]
fn zero_displacement_includes_zero_vector() {
    let sys = example1();
    let m = spiking_matrix(&sys);
    let got = sum_vector_solutions(&m, &[2, 1, 1], &[2, 1, 1], 2).unwrap();
    assert_eq!(got[0], vec![0; 5]);
}

#[test]
fn decomposition_of_20211() {
    let sys = example1();
    let cert = decompose_sum_vector(&sys, &[2, 1, 1], &[2, 0, 2, 1, 1], None);
    assert!(cert.is_reachable());
    assert_eq!(cert.spiking_vectors, vec![bits(&[1, 0, 1, 1, 0]), bits(&[1, 0, 1, 0, 1])]);
    let cs: Vec<Vec<i64>> = cert.configurations.iter().map(|c| c.0.clone()).collect();
    assert_eq!(cs, vec![vec![2, 1, 1], vec![2, 1, 2], vec![2, 1, 2]]);
}

#[test]
fn decomposition_of_20230_fails_with_negative_residual() {
    let sys = example1();
    let cert = decompose_sum_vector(&sys, &[2, 1, 1], &[2, 0, 2, 3, 0], None);
    assert_eq!(cert.verdict, Verdict::NotReachableWithinBounds);
    let failures = &cert.candidates[0].failures;
    let negative: Vec<_> = failures.iter().filter(|f| f.reason == FailureReason::NegativeResidual).collect();
    let table = negative
        .iter()
        .find(|f| f.rows.len() == 3)
        .expect("two-step branch with a negative residual");
    assert_eq!(table.rows[0].residual, vec![2, 0, 2, 3, 0]);
    assert_eq!(table.rows[1].residual, vec![1, 0, 1, 2, 0]);
    assert_eq!(table.rows[1].sp, Some(bits(&[1, 0, 1, 0, 1])));
    assert_eq!(table.rows[2].residual, vec![0, 0, 0, 2, -1]);
}

#[test]
fn zero_sum_vector_is_zero_steps() {
    let sys = example1();
    let cert = decompose_sum_vector(&sys, &[2, 1, 1], &[0; 5], None);
    assert_eq!(cert.k, Some(0));
    assert_eq!(cert.target.0, vec![2, 1, 1]);
}

#[test]
fn printed_reachability_verdicts() {
    let sys = example1();
    let a = is_reachable(&sys, &[1, 1, 2], 4).unwrap();
    assert_eq!(a.k, Some(1));
    assert_eq!(a.spiking_vectors, vec![bits(&[0, 1, 1, 1, 0])]);
    let b = is_reachable(&sys, &[2, 1, 2], 4).unwrap();
    assert_eq!(b.k, Some(1));
    assert_eq!(b.spiking_vectors, vec![bits(&[1, 0, 1, 1, 0])]);
    let c = is_reachable(&sys, &[2, 0, 2], 6).unwrap();
    assert_eq!(c.verdict, Verdict::NotReachableWithinBounds);
    assert!(!c.candidates.is_empty());
}

#[test]
fn invalid_spiking_residual_is_reported() {
    let sys = example1();
    let cert = decompose_sum_vector(&sys, &[2, 1, 1], &[1, 1, 3, 2, 1], None);
    assert!(!cert.is_reachable());
    let any_invalid = cert.candidates[0]
        .failures
        .iter()
        .any(|f| f.reason == FailureReason::InvalidSpikingVector);
    assert!(any_invalid);
}

#[test]
fn oracle_agrees_on_examples() {
    let sys = example1();
    assert_eq!(bfs_oracle(&sys, &[2, 1, 2], 4).unwrap().k, Some(1));
    assert!(!bfs_oracle(&sys, &[2, 0, 2], 8).unwrap().reachable);
    assert_eq!(bfs_oracle(&sys, &[2, 1, 1], 3).unwrap().k, Some(0));
}

#[test]
fn reach_between_configurations() {
    let sys = example1();
    let a = reach_between(&sys, &[2, 1, 2], &[1, 1, 2], 2).unwrap();
    assert_eq!(a.k, Some(1));
    assert_eq!(a.spiking_vectors, vec![bits(&[0, 1, 1, 0, 1])]);
    let same = reach_between(&sys, &[2, 1, 2], &[2, 1, 2], 2).unwrap();
    assert_eq!(same.k, Some(0));
    let none = reach_between(&sys, &[2, 1, 1], &[2, 0, 2], 6).unwrap();
    assert!(!none.is_reachable());
    assert!(!bfs_oracle_from(&sys, &[2, 1, 1], &[2, 0, 2], 6).unwrap().reachable);
}

#[test]
fn certificates_replay() {
    let sys = example1();
    for target in [[1, 1, 2], [2, 1, 2], [1, 0, 1], [0, 1, 1]] {
        let cert = is_reachable(&sys, &target, 5).unwrap();
        let oracle = bfs_oracle(&sys, &target, 5).unwrap();
        assert_eq!(cert.k, oracle.k, "target {target:?}");
        if cert.is_reachable() {
            let mut c = sys.initial_configuration();
            for sp in &cert.spiking_vectors {
                c = next_configuration(&sys, &c, sp).unwrap().0;
            }
            assert_eq!(c, target.to_vec());
        }
    }
}

#[test]
fn bad_targets_and_delays() {
    let sys = example1();
    assert_eq!(is_reachable(&sys, &[1, 1], 2).unwrap().verdict, Verdict::InvalidTarget);
    assert_eq!(is_reachable(&sys, &[1, -1, 0], 2).unwrap().verdict, Verdict::InvalidTarget);
    let delayed = example3();
    assert!(matches!(
        is_reachable(&delayed, &[0, 1, 0], 2),
        Err(ReachabilityError::DelaysUnsupported { rule: 3, delay: 2 })
    ));
}

#[test]
fn closed_form_first_prefix_on_example3() {
    let sys = example3();
    let Computation::Linear(trace) = run_trace(&sys, 5, Policy::First, DelayMode::PaperTrace).unwrap() else {
        unreachable!()
    };
    let report = verify_delay_closed_form(&sys, &trace).unwrap();
    assert_eq!(report.prefixes[0].closed_form.0, vec![0, 1, 0]);
    assert_eq!(report.prefixes.len(), 5);
}

#[test]
fn closed_form_on_delay_free_trace_is_telescoping() {
    let sys = example1();
    let Computation::Linear(trace) = run_trace(&sys, 8, Policy::SeededRandom(3), DelayMode::Standard).unwrap() else {
        unreachable!()
    };
    let report = verify_delay_closed_form(&sys, &trace).unwrap();
    assert!(report.first_failure.is_none());
    assert!(report.prefixes.iter().all(|p| p.unrolled_matches));
}
