//! Computations of a system: valid spiking vectors, the next-configuration
//! formulas, delay bookkeeping and trace recording.
//!
//! Two delay semantics are available (see [`DelayMode`]). They agree on
//! every delay-free system.

mod identity;
mod oracle;
mod step;
mod trace;

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::Serialize;

use crate::system::SnpSystem;

pub use identity::{
    check_step_identities, immediate_status, rule_status_identity, trace_identity_reports,
    IdentityReport,
};
pub use oracle::operational_step;
pub use step::{
    indicator_vector, net_gain, next_configuration, rule_status_vector, step_no_delay,
    step_with_delay_v1, step_with_delay_v2, update_delay_state, DelayStep, Matrices,
};
pub use trace::{
    run_trace, Computation, ComputationTree, Policy, Trace, TraceRecord, TreeNode,
    DEFAULT_NODE_LIMIT,
};

/// Spikes per neuron, `C^(k)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Configuration(pub Vec<i64>);

impl Configuration {
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }
}

impl Deref for Configuration {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for Configuration {
    fn from(v: Vec<i64>) -> Self {
        Configuration(v)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tuple(f, self.0.iter())
    }
}

/// A 0/1 vector. Rule-indexed (spiking, indicator, rule status) or
/// neuron-indexed (status), depending on use.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct BitVector(pub Vec<u8>);

pub type SpikingVector = BitVector;
pub type IndicatorVector = BitVector;
pub type StatusVector = BitVector;
pub type RuleStatusVector = BitVector;

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector(vec![0; len])
    }

    pub fn ones(len: usize) -> Self {
        BitVector(vec![1; len])
    }

    pub fn from_indices(len: usize, on: impl IntoIterator<Item = usize>) -> Self {
        let mut v = vec![0; len];
        for i in on {
            v[i] = 1;
        }
        BitVector(v)
    }

    pub fn is_set(&self, i: usize) -> bool {
        self.0[i] != 0
    }

    pub fn all_set(&self) -> bool {
        self.0.iter().all(|&b| b != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, b)| **b != 0).map(|(i, _)| i)
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&b| b as i64).collect()
    }

    /// Elementwise product.
    pub fn hadamard(&self, other: &BitVector) -> BitVector {
        BitVector(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
}

impl Deref for BitVector {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl From<Vec<u8>> for BitVector {
    fn from(v: Vec<u8>) -> Self {
        BitVector(v)
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tuple(f, self.0.iter())
    }
}

pub(crate) fn fmt_tuple<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: impl Iterator<Item = T>,
) -> fmt::Result {
    let parts: Vec<String> = items.map(|x| x.to_string()).collect();
    write!(f, "({})", parts.join(","))
}

/// How rules with a delay behave.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DelayMode {
    /// A rule fired at `t` with delay `d` consumes at `t`, its neuron is
    /// closed for `t+1..=t+d`, and its spikes are sent at `t+d` to the
    /// targets open at that step.
    #[default]
    Standard,
    /// Reproduces the published worked trace: the neuron closes as in
    /// `Standard`, but the delayed rule never enters the indicator vector,
    /// so its production is never delivered.
    PaperTrace,
}

impl FromStr for DelayMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(DelayMode::Standard),
            "paper-trace" => Ok(DelayMode::PaperTrace),
            other => Err(format!("unknown delay mode `{other}`")),
        }
    }
}

impl fmt::Display for DelayMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DelayMode::Standard => "standard",
            DelayMode::PaperTrace => "paper-trace",
        })
    }
}

/// A delayed firing waiting to expire. `spikes` is what will be sent at
/// expiry (always 0 in paper-trace mode).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PendingFire {
    pub remaining: u32,
    pub spikes: u32,
}

/// Everything needed to take the next step.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimState {
    pub k: usize,
    pub config: Configuration,
    /// `DSt^(k)`: remaining delay per rule.
    pub dst: Vec<u32>,
    /// `St^(k)`: 1 for open neurons.
    pub st: StatusVector,
    /// Per-rule delayed firings; read only by the operational oracle.
    pub pending: Vec<Option<PendingFire>>,
}

impl SimState {
    pub fn initial(sys: &SnpSystem) -> Self {
        Self::at(sys, Configuration(sys.initial_configuration()))
    }

    /// Time 0 with every neuron open and no pending delays.
    pub fn at(sys: &SnpSystem, config: Configuration) -> Self {
        SimState {
            k: 0,
            config,
            dst: vec![0; sys.rule_count()],
            st: BitVector::ones(sys.neuron_count()),
            pending: vec![None; sys.rule_count()],
        }
    }

    pub fn all_open(&self) -> bool {
        self.st.all_set()
    }
}

/// Rules of neuron `j` whose guard accepts its current spike count.
pub fn applicable_rules<'a>(
    sys: &'a SnpSystem,
    config: &'a [i64],
    j: usize,
) -> impl Iterator<Item = usize> + 'a {
    let spikes = config[j].max(0) as u64;
    sys.rules_of(j).filter(move |&i| sys.rule(i).applicable(spikes))
}

/// All valid spiking vectors, restricted to open neurons. Every open neuron
/// with an applicable rule picks exactly one. Vectors are ordered by their
/// chosen rule indices, lowest first, with neuron 1 most significant.
pub fn enumerate_spiking_vectors(sys: &SnpSystem, config: &[i64], st: &[u8]) -> Vec<SpikingVector> {
    let n = sys.rule_count();
    let choices: Vec<Vec<usize>> = (0..sys.neuron_count())
        .filter(|&j| st[j] != 0)
        .map(|j| applicable_rules(sys, config, j).collect::<Vec<_>>())
        .filter(|c| !c.is_empty())
        .collect();
    if choices.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        out.push(BitVector::from_indices(n, idx.iter().zip(&choices).map(|(&k, c)| c[k])));
        // odometer, last neuron fastest
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Same answer as membership in [`enumerate_spiking_vectors`], without
/// building the list.
pub fn is_valid_spiking_vector(sys: &SnpSystem, config: &[i64], st: &[u8], sp: &[u8]) -> bool {
    if sp.len() != sys.rule_count() || config.len() != sys.neuron_count() || st.len() != config.len()
    {
        return false;
    }
    if sp.iter().any(|&b| b > 1) {
        return false;
    }
    let mut any_choice = false;
    for j in 0..sys.neuron_count() {
        let chosen: Vec<usize> = sys.rules_of(j).filter(|&i| sp[i] == 1).collect();
        let open = st[j] != 0;
        let has_applicable = open && applicable_rules(sys, config, j).next().is_some();
        any_choice |= has_applicable;
        match chosen[..] {
            [] if has_applicable => return false,
            [] => {}
            [i] => {
                if !open || !sys.rule(i).applicable(config[j].max(0) as u64) {
                    return false;
                }
            }
            _ => return false,
        }
    }
    any_choice
}

/// A step with no rule firing is allowed only when no open neuron can fire.
pub(crate) fn admissible(sys: &SnpSystem, config: &[i64], st: &[u8], sp: &[u8]) -> bool {
    if sp.iter().all(|&b| b == 0) && sp.len() == sys.rule_count() {
        return enumerate_spiking_vectors(sys, config, st).is_empty();
    }
    is_valid_spiking_vector(sys, config, st, sp)
}
