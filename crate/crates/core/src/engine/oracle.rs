//! Step semantics written directly from the rules, without any matrix.
//! Used to cross-check the matrix formulas.

use super::{BitVector, Configuration, DelayMode, PendingFire, SimState};
use crate::error::EngineError;
use crate::system::SnpSystem;

/// Applies `sp` at `state` by walking neurons and synapses.
///
/// Open/closed status is derived from the pending firings, not from
/// `state.st`, so a disagreement between the two shows up as a test failure.
pub fn operational_step(
    sys: &SnpSystem,
    state: &SimState,
    sp: &[u8],
    mode: DelayMode,
) -> Result<SimState, EngineError> {
    let m = sys.neuron_count();
    let mut open = vec![true; m];
    for (i, p) in state.pending.iter().enumerate() {
        if p.is_some() {
            open[sys.rule(i).owner] = false;
        }
    }
    let open_bits = BitVector(open.iter().map(|&o| o as u8).collect());
    if !super::admissible(sys, &state.config, &open_bits, sp) {
        return Err(EngineError::InvalidSpikingVector {
            config: state.config.0.clone(),
            spiking: sp.to_vec(),
        });
    }

    let mut next = state.config.0.clone();
    let deliver = |from: usize, spikes: u32, next: &mut Vec<i64>| {
        for &(a, b) in sys.synapses() {
            if a == from && b != from && open[b] {
                next[b] += spikes as i64;
            }
        }
    };

    let mut pending = vec![None; sys.rule_count()];
    for (i, rule) in sys.rules().iter().enumerate() {
        if let Some(p) = state.pending[i] {
            if p.remaining == 1 {
                deliver(rule.owner, p.spikes, &mut next);
            } else {
                pending[i] = Some(PendingFire { remaining: p.remaining - 1, ..p });
            }
        }
        if sp[i] == 1 {
            next[rule.owner] -= rule.consume as i64;
            if rule.delay == 0 {
                deliver(rule.owner, rule.produce, &mut next);
            } else {
                let spikes = match mode {
                    DelayMode::Standard => rule.produce,
                    DelayMode::PaperTrace => 0,
                };
                pending[i] = Some(PendingFire { remaining: rule.delay, spikes });
            }
        }
    }
    if next.iter().any(|&x| x < 0) {
        return Err(EngineError::SemanticsViolation {
            k: state.k,
            context: format!("negative spike count {next:?}"),
        });
    }

    let mut st = vec![1u8; m];
    for (i, p) in pending.iter().enumerate() {
        if p.is_some() {
            st[sys.rule(i).owner] = 0;
        }
    }
    Ok(SimState {
        k: state.k + 1,
        config: Configuration(next),
        dst: pending.iter().map(|p| p.map_or(0, |p| p.remaining)).collect(),
        st: BitVector(st),
        pending,
    })
}
