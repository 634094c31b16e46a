use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::step::{indicator_vector, net_gain, step_no_delay, step_with_delay_v1, update_delay_state, Matrices};
use super::{admissible, enumerate_spiking_vectors, BitVector, Configuration, DelayMode, IndicatorVector, SimState, SpikingVector, StatusVector};
use crate::error::EngineError;
use crate::system::SnpSystem;

/// Node budget for exhaustive exploration.
pub const DEFAULT_NODE_LIMIT: usize = 1_000_000;

/// How to pick among several valid spiking vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    /// The first vector in enumeration order.
    First,
    /// Uniform choice from a ChaCha8 stream seeded with the given value.
    SeededRandom(u64),
    /// Every choice, as a tree with at most `node_limit` nodes.
    Exhaustive { node_limit: usize },
}

/// One time step. The last record of a trace has no `Sp`, `Iv`, `NG` or
/// `emitted`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub k: usize,
    #[serde(rename = "C")]
    pub config: Configuration,
    #[serde(rename = "Sp")]
    pub sp: Option<SpikingVector>,
    #[serde(rename = "Iv")]
    pub iv: Option<IndicatorVector>,
    #[serde(rename = "St")]
    pub st: StatusVector,
    #[serde(rename = "DSt")]
    pub dst: Vec<u32>,
    #[serde(rename = "NG")]
    pub ng: Option<Vec<i64>>,
    /// Spikes sent to the environment at this step; absent without an
    /// output neuron.
    pub emitted: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub mode: DelayMode,
    pub records: Vec<TraceRecord>,
    /// The last configuration has no valid spiking vector and every neuron is open.
    pub halted: bool,
    /// `1` for each step that emitted, `0` otherwise.
    pub spike_train: String,
    /// Steps between the first two emissions.
    pub first_interval: Option<usize>,
}

impl Trace {
    fn finish(mode: DelayMode, records: Vec<TraceRecord>, halted: bool) -> Self {
        let emitted: Vec<Option<i64>> = records.iter().filter(|r| r.sp.is_some()).map(|r| r.emitted).collect();
        let spike_train: String = emitted
            .iter()
            .flatten()
            .map(|&e| if e > 0 { '1' } else { '0' })
            .collect();
        let fired: Vec<usize> = spike_train
            .char_indices()
            .filter(|(_, c)| *c == '1')
            .map(|(i, _)| i)
            .take(2)
            .collect();
        Trace {
            mode,
            records,
            halted,
            spike_train,
            first_interval: (fired.len() == 2).then(|| fired[1] - fired[0]),
        }
    }

    pub fn configurations(&self) -> Vec<Configuration> {
        self.records.iter().map(|r| r.config.clone()).collect()
    }

    pub fn spiking_vectors(&self) -> Vec<SpikingVector> {
        self.records.iter().filter_map(|r| r.sp.clone()).collect()
    }
}

/// What happened between a state and its successor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Transition {
    pub sp: SpikingVector,
    pub iv: IndicatorVector,
    pub ng: Vec<i64>,
    pub emitted: Option<i64>,
}

/// One matrix step: `C + Sp·M` for delay-free systems, the
/// production/consumption form otherwise.
pub(crate) fn matrix_step(
    sys: &SnpSystem,
    mats: &Matrices,
    state: &SimState,
    sp: &SpikingVector,
    mode: DelayMode,
) -> Result<(Transition, SimState), EngineError> {
    if !admissible(sys, &state.config, &state.st, sp) {
        return Err(EngineError::InvalidSpikingVector {
            config: state.config.0.clone(),
            spiking: sp.0.clone(),
        });
    }
    let iv = indicator_vector(sys, &state.dst, sp, mode);
    let (next, ng) = if sys.has_delays() {
        let d = step_with_delay_v1(&state.config, sp, &iv, &state.st, &mats.production, &mats.consumption)?;
        (d.next, d.net)
    } else {
        (step_no_delay(&state.config, sp, &mats.spiking)?, net_gain(sp, &mats.spiking)?)
    };
    if !next.is_nonnegative() {
        return Err(EngineError::SemanticsViolation {
            k: state.k,
            context: format!("next configuration {next} is negative"),
        });
    }
    let mut after = update_delay_state(sys, state, sp, mode);
    after.config = next;
    let emitted = mats.emitted(&iv);
    Ok((Transition { sp: sp.clone(), iv, ng, emitted }, after))
}

/// Spiking vectors to try from `state`; `None` when the system has halted.
/// When only closed neurons could act, the single choice is the zero vector.
pub(crate) fn choices(sys: &SnpSystem, state: &SimState) -> Option<Vec<SpikingVector>> {
    let valid = enumerate_spiking_vectors(sys, &state.config, &state.st);
    if !valid.is_empty() {
        Some(valid)
    } else if state.all_open() {
        None
    } else {
        Some(vec![BitVector::zeros(sys.rule_count())])
    }
}

fn record(state: &SimState, via: Option<&Transition>) -> TraceRecord {
    TraceRecord {
        k: state.k,
        config: state.config.clone(),
        sp: via.map(|t| t.sp.clone()),
        iv: via.map(|t| t.iv.clone()),
        st: state.st.clone(),
        dst: state.dst.clone(),
        ng: via.map(|t| t.ng.clone()),
        emitted: via.and_then(|t| t.emitted),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Computation {
    Linear(Trace),
    Tree(ComputationTree),
}

impl Computation {
    /// Every root-to-leaf trace (one for linear computations).
    pub fn traces(&self) -> Vec<Trace> {
        match self {
            Computation::Linear(t) => vec![t.clone()],
            Computation::Tree(t) => t.leaf_traces(),
        }
    }
}

/// Runs at most `steps` steps from the initial configuration.
pub fn run_trace(sys: &SnpSystem, steps: usize, policy: Policy, mode: DelayMode) -> Result<Computation, EngineError> {
    let mats = Matrices::of(sys);
    let start = SimState::initial(sys);
    let mut rng = match policy {
        Policy::Exhaustive { node_limit } => {
            return ComputationTree::explore(sys, &mats, start, steps, mode, node_limit).map(Computation::Tree)
        }
        Policy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Policy::First => None,
    };
    let mut records = Vec::new();
    let mut state = start;
    let mut halted = false;
    for _ in 0..steps {
        let Some(options) = choices(sys, &state) else {
            halted = true;
            break;
        };
        let pick = match rng.as_mut() {
            Some(r) => r.gen_range(0..options.len()),
            None => 0,
        };
        let (t, next) = matrix_step(sys, &mats, &state, &options[pick], mode)?;
        records.push(record(&state, Some(&t)));
        state = next;
    }
    if !halted {
        halted = choices(sys, &state).is_none();
    }
    records.push(record(&state, None));
    Ok(Computation::Linear(Trace::finish(mode, records, halted)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub state: SimState,
    pub halted: bool,
    pub(crate) via: Option<Transition>,
}

/// All computations up to a depth, stored as an arena.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputationTree {
    pub mode: DelayMode,
    pub nodes: Vec<TreeNode>,
}

impl ComputationTree {
    fn explore(
        sys: &SnpSystem,
        mats: &Matrices,
        start: SimState,
        depth: usize,
        mode: DelayMode,
        node_limit: usize,
    ) -> Result<Self, EngineError> {
        let mut nodes = vec![TreeNode { parent: None, children: Vec::new(), state: start, halted: false, via: None }];
        let mut frontier = vec![0usize];
        for _ in 0..=depth {
            let mut next_frontier = Vec::new();
            for &id in &frontier {
                let Some(options) = choices(sys, &nodes[id].state) else {
                    nodes[id].halted = true;
                    continue;
                };
                if nodes[id].state.k == depth {
                    continue;
                }
                for sp in &options {
                    let (t, s) = matrix_step(sys, mats, &nodes[id].state, sp, mode)?;
                    if nodes.len() >= node_limit {
                        return Err(EngineError::TreeTooLarge { limit: node_limit });
                    }
                    let child = nodes.len();
                    nodes.push(TreeNode { parent: Some(id), children: Vec::new(), state: s, halted: false, via: Some(t) });
                    nodes[id].children.push(child);
                    next_frontier.push(child);
                }
            }
            frontier = next_frontier;
        }
        Ok(ComputationTree { mode, nodes })
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].children.is_empty())
    }

    /// The trace from the root to `leaf`.
    pub fn trace_to(&self, leaf: usize) -> Trace {
        let mut path = vec![leaf];
        while let Some(p) = self.nodes[*path.last().unwrap()].parent {
            path.push(p);
        }
        path.reverse();
        let records = path
            .iter()
            .enumerate()
            .map(|(pos, &id)| {
                let via = path.get(pos + 1).and_then(|&c| self.nodes[c].via.as_ref());
                record(&self.nodes[id].state, via)
            })
            .collect();
        Trace::finish(self.mode, records, self.nodes[leaf].halted)
    }

    pub fn leaf_traces(&self) -> Vec<Trace> {
        self.leaves().map(|l| self.trace_to(l)).collect()
    }
}
