mod common;

use common::random_systems;
use proptest::prelude::*;
use snp_core::engine::*;
use snp_core::forms::{consumption_matrix, production_matrix, spiking_matrix};
use snp_core::generate::GeneratorConfig;
use snp_core::{parse_system, serialize_system, validate, SnpSystem};

fn small() -> GeneratorConfig {
    GeneratorConfig { max_neurons: 4, max_rules: 6, max_spikes: 5, max_delay: 0, max_consume: 3 }
}

fn delayed() -> GeneratorConfig {
    GeneratorConfig { max_delay: 3, ..small() }
}

/// Every configuration with entries up to `cap`.
fn configurations(m: usize, cap: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|c: Vec<i64>| {
                (0..=cap).map(move |x| {
                    let mut c = c.clone();
                    c.push(x);
                    c
                })
            })
            .collect();
    }
    out
}

#[test]
fn generated_systems_are_valid() {
    for sys in random_systems(1, 300, &delayed()) {
        let report = validate(&sys);
        assert!(report.is_valid(), "{:?}\n{}", report, serialize_system(&sys));
    }
}

#[test]
fn production_minus_consumption_is_spiking_matrix() {
    for sys in random_systems(2, 300, &delayed()) {
        let diff = production_matrix(&sys).checked_sub(&consumption_matrix(&sys)).unwrap();
        assert_eq!(diff, spiking_matrix(&sys));
    }
}

#[test]
fn serialization_round_trips() {
    for sys in random_systems(3, 300, &delayed()) {
        let text = serialize_system(&sys);
        assert_eq!(parse_system(&text).unwrap(), sys, "{text}");
    }
}

#[test]
fn enumeration_matches_validity_check() {
    for sys in random_systems(4, 150, &small()) {
        let st = BitVector::ones(sys.neuron_count());
        for c in configurations(sys.neuron_count(), 3) {
            let listed = enumerate_spiking_vectors(&sys, &c, &st);
            let n = sys.rule_count();
            for bits in 0u32..(1 << n) {
                let sp: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
                assert_eq!(
                    listed.contains(&BitVector(sp.clone())),
                    is_valid_spiking_vector(&sys, &c, &st, &sp),
                    "C={c:?} Sp={sp:?}"
                );
            }
        }
    }
}

/// Matrix step and operational step agree on every valid vector of every
/// configuration with up to 5 spikes per neuron.
#[test]
fn no_delay_step_matches_operational_semantics() {
    let systems = random_systems(5, 1000, &small());
    let mut checked = 0usize;
    for sys in &systems {
        let m = spiking_matrix(sys);
        let cap = if sys.neuron_count() <= 3 { 5 } else { 3 };
        for c in configurations(sys.neuron_count(), cap) {
            let state = SimState::at(sys, Configuration(c.clone()));
            for sp in enumerate_spiking_vectors(sys, &c, &state.st) {
                let by_matrix = step_no_delay(&c, &sp, &m).unwrap();
                let by_rules = operational_step(sys, &state, &sp, DelayMode::Standard).unwrap();
                assert_eq!(by_matrix, by_rules.config);
                assert!(by_matrix.is_nonnegative());
                checked += 1;
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn forgetting_rules_fire_only_on_exact_count() {
    for sys in random_systems(6, 300, &small()) {
        let st = BitVector::ones(sys.neuron_count());
        for c in configurations(sys.neuron_count(), 4) {
            for sp in enumerate_spiking_vectors(&sys, &c, &st) {
                for i in sp.ones_iter() {
                    let r = sys.rule(i);
                    if r.is_forgetting() {
                        assert_eq!(c[r.owner], r.consume as i64);
                    }
                }
            }
        }
    }
}

fn traces(sys: &SnpSystem, seed: u64, mode: DelayMode) -> Trace {
    match run_trace(sys, 12, Policy::SeededRandom(seed), mode).unwrap() {
        Computation::Linear(t) => t,
        Computation::Tree(_) => unreachable!(),
    }
}

#[test]
fn telescoping_along_traces() {
    for (seed, sys) in random_systems(7, 300, &small()).iter().enumerate() {
        let m = spiking_matrix(sys);
        let t = traces(sys, seed as u64, DelayMode::Standard);
        let c0 = &t.records[0].config;
        let mut sum = vec![0i64; sys.rule_count()];
        for r in &t.records {
            let gain = m.left_mul(&sum).unwrap();
            let closed: Vec<i64> = c0.iter().zip(gain).map(|(a, b)| a + b).collect();
            assert_eq!(closed, r.config.0);
            assert!(r.config.is_nonnegative());
            if let Some(sp) = &r.sp {
                for (s, &b) in sum.iter_mut().zip(sp.iter()) {
                    *s += b as i64;
                }
            }
        }
    }
}

#[test]
fn delay_free_forms_coincide() {
    for sys in random_systems(8, 200, &small()) {
        let mats = Matrices::of(&sys);
        let st = BitVector::ones(sys.neuron_count());
        for c in configurations(sys.neuron_count(), 3) {
            for sp in enumerate_spiking_vectors(&sys, &c, &st) {
                let plain = step_no_delay(&c, &sp, &mats.spiking).unwrap();
                let v1 = step_with_delay_v1(&c, &sp, &sp, &st, &mats.production, &mats.consumption).unwrap();
                let v2 = step_with_delay_v2(&c, &sp, &st, &mats.spiking).unwrap();
                assert_eq!(v1.next, plain);
                assert_eq!(v2, plain);
            }
        }
    }
}

#[test]
fn delayed_matrix_trace_matches_operational_semantics() {
    for (seed, sys) in random_systems(9, 400, &delayed()).iter().enumerate() {
        for mode in [DelayMode::Standard, DelayMode::PaperTrace] {
            let t = traces(sys, seed as u64, mode);
            let mut state = SimState::initial(sys);
            for r in &t.records {
                assert_eq!(state.config, r.config, "{}", serialize_system(sys));
                assert_eq!(state.st, r.st);
                assert_eq!(state.dst, r.dst);
                assert!(r.config.is_nonnegative());
                let Some(sp) = &r.sp else { break };
                state = operational_step(sys, &state, sp, mode).unwrap();
            }
        }
    }
}

#[test]
fn rule_status_identity_holds_when_all_open() {
    for sys in random_systems(10, 200, &small()) {
        let st = vec![1u8; sys.neuron_count()];
        let n = sys.rule_count();
        for bits in 0u32..(1 << n) {
            let iv: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
            assert!(rule_status_identity(&sys, &st, &iv).unwrap().holds);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exhaustive_leaves_are_valid_computations(seed in 0u64..10_000) {
        let sys = &random_systems(seed, 1, &delayed())[0];
        let tree = run_trace(sys, 4, Policy::Exhaustive { node_limit: 50_000 }, DelayMode::Standard).unwrap();
        for t in tree.traces() {
            let mut state = SimState::initial(sys);
            for r in &t.records {
                prop_assert_eq!(&state.config, &r.config);
                let Some(sp) = &r.sp else { break };
                state = operational_step(sys, &state, sp, DelayMode::Standard).unwrap();
            }
        }
    }
}
