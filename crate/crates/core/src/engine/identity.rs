//! Side-by-side evaluation of the different next-configuration formulas for
//! delayed systems, and of the rule-status rewriting.

use serde::Serialize;

use super::oracle::operational_step;
use super::step::{as_i64, indicator_vector, rule_status_vector, step_with_delay_v1, step_with_delay_v2, update_delay_state, Matrices};
use super::{BitVector, Configuration, DelayMode, IndicatorVector, SimState, SpikingVector, StatusVector};
use crate::error::EngineError;
use crate::system::SnpSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleStatusCheck {
    /// `St ⊙ (Iv · M)`.
    pub lhs: Vec<i64>,
    /// `(RSt ⊙ Iv) · M`.
    pub rhs: Vec<i64>,
    pub holds: bool,
}

/// Evaluates both sides of `St ⊙ (Iv · M) = (RSt ⊙ Iv) · M`. They differ
/// whenever an open rule sends spikes into a closed neuron, or a closed
/// neuron's rule is indicated.
pub fn rule_status_identity(sys: &SnpSystem, st: &[u8], iv: &[u8]) -> Result<RuleStatusCheck, EngineError> {
    let m = crate::forms::spiking_matrix(sys);
    let prod = m.left_mul(&as_i64(iv))?;
    let lhs: Vec<i64> = prod.iter().zip(st).map(|(x, &s)| x * s as i64).collect();
    let rst = rule_status_vector(sys, st);
    let rhs = m.left_mul(&as_i64(&rst.hadamard(&BitVector(iv.to_vec()))))?;
    Ok(RuleStatusCheck { holds: lhs == rhs, lhs, rhs })
}

/// Status and remaining delays at a step, counting the delayed rules that
/// fire at that very step as already closing their neuron.
pub fn immediate_status(sys: &SnpSystem, state: &SimState, sp: &[u8]) -> (StatusVector, Vec<u32>) {
    let mut st = state.st.clone();
    let mut dst = state.dst.clone();
    for (i, r) in sys.rules().iter().enumerate() {
        if sp[i] == 1 && r.delay > 0 {
            st.0[r.owner] = 0;
            dst[i] = r.delay;
        }
    }
    (st, dst)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub k: usize,
    #[serde(rename = "Sp")]
    pub sp: SpikingVector,
    #[serde(rename = "Iv")]
    pub iv: IndicatorVector,
    #[serde(rename = "St")]
    pub st: StatusVector,
    #[serde(rename = "RSt")]
    pub rst: StatusVector,
    pub rule_status: RuleStatusCheck,
    /// `C + St ⊙ (Iv · PM) - Sp · CM`.
    pub v1: Configuration,
    /// `St(k+1) ⊙ (C + Iv · M)` with `St(k+1)` from the delay bookkeeping.
    pub v2_deferred: Configuration,
    /// Same, with `St(k+1)` also closing neurons that fire a delayed rule
    /// at `k+1`. Needs the next spiking vector.
    pub v2_immediate: Option<Configuration>,
    /// Direct rule-by-rule semantics.
    pub oracle: Configuration,
    pub v1_matches_oracle: bool,
    pub v2_deferred_matches_v1: bool,
    pub v2_immediate_matches_v1: Option<bool>,
}

/// Evaluates every formula for the step `state --sp-->`.
pub fn check_step_identities(
    sys: &SnpSystem,
    state: &SimState,
    sp: &SpikingVector,
    mode: DelayMode,
    next_sp: Option<&SpikingVector>,
) -> Result<IdentityReport, EngineError> {
    let mats = Matrices::of(sys);
    let iv = indicator_vector(sys, &state.dst, sp, mode);
    let v1 = step_with_delay_v1(&state.config, sp, &iv, &state.st, &mats.production, &mats.consumption)?.next;
    let after = update_delay_state(sys, state, sp, mode);
    let v2_deferred = step_with_delay_v2(&state.config, &iv, &after.st, &mats.spiking)?;
    let v2_immediate = match next_sp {
        Some(next) => {
            let (st_imm, _) = immediate_status(sys, &after, next);
            Some(step_with_delay_v2(&state.config, &iv, &st_imm, &mats.spiking)?)
        }
        None => None,
    };
    let oracle = operational_step(sys, state, sp, mode)?.config;
    Ok(IdentityReport {
        k: state.k,
        rule_status: rule_status_identity(sys, &state.st, &iv)?,
        rst: rule_status_vector(sys, &state.st),
        sp: sp.clone(),
        st: state.st.clone(),
        v1_matches_oracle: v1 == oracle,
        v2_deferred_matches_v1: v2_deferred == v1,
        v2_immediate_matches_v1: v2_immediate.as_ref().map(|c| *c == v1),
        iv,
        v1,
        v2_deferred,
        v2_immediate,
        oracle,
    })
}

/// Replays a sequence of spiking vectors from the initial configuration and
/// reports every step.
pub fn trace_identity_reports(
    sys: &SnpSystem,
    spiking: &[SpikingVector],
    mode: DelayMode,
) -> Result<Vec<IdentityReport>, EngineError> {
    let mut state = SimState::initial(sys);
    let mut out = Vec::with_capacity(spiking.len());
    for (k, sp) in spiking.iter().enumerate() {
        out.push(check_step_identities(sys, &state, sp, mode, spiking.get(k + 1))?);
        state = operational_step(sys, &state, sp, mode)?;
    }
    Ok(out)
}
