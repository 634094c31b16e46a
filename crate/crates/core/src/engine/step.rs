use serde::Serialize;

use super::{admissible, BitVector, Configuration, DelayMode, IndicatorVector, PendingFire, SimState, SpikingVector, StatusVector};
use crate::error::EngineError;
use crate::forms::{augmented_matrix, consumption_matrix, production_matrix, spiking_matrix};
use crate::system::SnpSystem;
use crate::IntMatrix;

/// The matrices a simulation reads, built once per system.
#[derive(Clone, Debug)]
pub struct Matrices {
    pub spiking: IntMatrix,
    pub production: IntMatrix,
    pub consumption: IntMatrix,
    /// Environment column of the augmented matrix, if there is an output neuron.
    pub environment: Option<Vec<i64>>,
}

impl Matrices {
    pub fn of(sys: &SnpSystem) -> Self {
        let environment = augmented_matrix(sys)
            .ok()
            .map(|aug| aug.column(sys.neuron_count()));
        Matrices {
            spiking: spiking_matrix(sys),
            production: production_matrix(sys),
            consumption: consumption_matrix(sys),
            environment,
        }
    }

    /// Spikes sent to the environment for the given indicator vector.
    pub fn emitted(&self, iv: &[u8]) -> Option<i64> {
        self.environment
            .as_ref()
            .map(|e| e.iter().zip(iv).map(|(x, &b)| x * b as i64).sum())
    }
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<(), EngineError> {
    if expected == found {
        Ok(())
    } else {
        Err(EngineError::Dimension { what, expected, found })
    }
}

/// `Sp · M`.
pub fn net_gain(sp: &[u8], m: &IntMatrix) -> Result<Vec<i64>, EngineError> {
    check_len("Sp", m.rows(), sp.len())?;
    Ok(m.left_mul(&as_i64(sp))?)
}

/// `C + Sp · M`. No validity check; see [`next_configuration`].
pub fn step_no_delay(c: &[i64], sp: &[u8], m: &IntMatrix) -> Result<Configuration, EngineError> {
    check_len("C", m.cols(), c.len())?;
    let ng = net_gain(sp, m)?;
    Ok(Configuration(c.iter().zip(ng).map(|(a, b)| a + b).collect()))
}

/// `C + Sp · M` after checking that `sp` is valid for `c`.
pub fn next_configuration(sys: &SnpSystem, c: &[i64], sp: &[u8]) -> Result<Configuration, EngineError> {
    let st = BitVector::ones(sys.neuron_count());
    if c.len() != sys.neuron_count() || !admissible(sys, c, &st, sp) {
        return Err(EngineError::InvalidSpikingVector {
            config: c.to_vec(),
            spiking: sp.to_vec(),
        });
    }
    let next = step_no_delay(c, sp, &spiking_matrix(sys))?;
    debug_assert!(next.is_nonnegative());
    Ok(next)
}

/// One step under the production/consumption split, with the gain and
/// loss vectors kept for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelayStep {
    pub next: Configuration,
    /// `Gv = St ⊙ (Iv · PM)`.
    pub gain: Vec<i64>,
    /// `Lv = Sp · CM`.
    pub loss: Vec<i64>,
    /// `NG = Gv - Lv`.
    pub net: Vec<i64>,
}

/// `C' = C + St ⊙ (Iv · PM) - Sp · CM`.
pub fn step_with_delay_v1(
    c: &[i64],
    sp: &[u8],
    iv: &[u8],
    st: &[u8],
    pm: &IntMatrix,
    cm: &IntMatrix,
) -> Result<DelayStep, EngineError> {
    check_len("C", pm.cols(), c.len())?;
    check_len("St", pm.cols(), st.len())?;
    check_len("Iv", pm.rows(), iv.len())?;
    check_len("Sp", cm.rows(), sp.len())?;
    let produced = pm.left_mul(&as_i64(iv))?;
    let gain: Vec<i64> = produced.iter().zip(st).map(|(x, &s)| x * s as i64).collect();
    let loss = cm.left_mul(&as_i64(sp))?;
    let net: Vec<i64> = gain.iter().zip(&loss).map(|(g, l)| g - l).collect();
    let next = Configuration(c.iter().zip(&net).map(|(a, b)| a + b).collect());
    Ok(DelayStep { next, gain, loss, net })
}

/// `C' = St' ⊙ (C + Iv · M)`, where `St'` is the status at the next step.
pub fn step_with_delay_v2(
    c: &[i64],
    iv: &[u8],
    st_next: &[u8],
    m: &IntMatrix,
) -> Result<Configuration, EngineError> {
    check_len("St", m.cols(), st_next.len())?;
    let inner = step_no_delay(c, iv, m)?;
    Ok(Configuration(inner.iter().zip(st_next).map(|(x, &s)| x * s as i64).collect()))
}

/// `Iv^(k)`: rules whose spikes are sent at step `k`. Undelayed rules are
/// sent when fired. In standard mode a delayed rule is sent on the step its
/// remaining delay reaches 1; in paper-trace mode never.
pub fn indicator_vector(sys: &SnpSystem, dst: &[u32], sp: &[u8], mode: DelayMode) -> IndicatorVector {
    BitVector(
        sys.rules()
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if r.delay == 0 {
                    sp[i]
                } else {
                    (mode == DelayMode::Standard && dst[i] == 1) as u8
                }
            })
            .collect(),
    )
}

/// `RSt`: each rule inherits the status of its owner.
pub fn rule_status_vector(sys: &SnpSystem, st: &[u8]) -> StatusVector {
    BitVector(sys.rules().iter().map(|r| st[r.owner]).collect())
}

/// Advances `DSt`, `St` and the pending firings to step `k+1`. A rule
/// fired with delay `d` gets `DSt = d`; everything else counts down. A
/// neuron is closed while any of its rules has `DSt > 0`. The
/// configuration is left unchanged.
pub fn update_delay_state(sys: &SnpSystem, state: &SimState, sp: &SpikingVector, mode: DelayMode) -> SimState {
    let mut dst = Vec::with_capacity(sys.rule_count());
    let mut pending = Vec::with_capacity(sys.rule_count());
    for (i, r) in sys.rules().iter().enumerate() {
        if sp.is_set(i) && r.delay > 0 {
            dst.push(r.delay);
            let spikes = if mode == DelayMode::Standard { r.produce } else { 0 };
            pending.push(Some(PendingFire { remaining: r.delay, spikes }));
        } else {
            dst.push(state.dst[i].saturating_sub(1));
            pending.push(state.pending[i].and_then(|p| {
                (p.remaining > 1).then_some(PendingFire { remaining: p.remaining - 1, ..p })
            }));
        }
    }
    let mut st = BitVector::ones(sys.neuron_count());
    for (i, r) in sys.rules().iter().enumerate() {
        if dst[i] > 0 {
            st.0[r.owner] = 0;
        }
    }
    SimState {
        k: state.k + 1,
        config: state.config.clone(),
        dst,
        st,
        pending,
    }
}

pub(crate) fn as_i64(v: &[u8]) -> Vec<i64> {
    v.iter().map(|&b| b as i64).collect()
}
