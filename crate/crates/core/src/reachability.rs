//! Bounded reachability for delay-free systems.
//!
//! A target `C` is k-reachable when `C - C0 = s · M` for some `s` that
//! splits into k valid spiking vectors. Candidates `s` come from the
//! integer solution lattice of that system; each candidate is then split
//! by a search over valid spiking vectors. An independent breadth-first
//! search over configurations serves as ground truth in tests.

use std::collections::{HashMap, HashSet, VecDeque};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{
    enumerate_spiking_vectors, is_valid_spiking_vector, operational_step, rule_status_vector, step_no_delay,
    BitVector, Configuration, DelayMode, SimState, SpikingVector, Trace,
};
use crate::error::ReachabilityError;
use crate::forms::spiking_matrix;
use crate::linalg::{integer_left_solutions, rational_left_solve};
use crate::system::SnpSystem;
use crate::IntMatrix;

/// A sum of spiking vectors, indexed by rule.
pub type SumVector = Vec<i64>;

/// Failure tables kept per candidate before truncating.
pub const MAX_FAILURES_PER_CANDIDATE: usize = 64;

/// All solutions of `s · M = C - C0`: `particular + Σ tᵢ·kernel[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionFamily {
    /// Rational solution with free coordinates at zero.
    pub rational_particular: Vec<Ratio<i64>>,
    pub integer_particular: Vec<i64>,
    /// Basis of the integer left kernel of `M`.
    pub kernel: Vec<Vec<i64>>,
    /// Upper bound on `Σ s`.
    pub bound: i64,
}

fn difference(target: &[i64], origin: &[i64]) -> Vec<i64> {
    target.iter().zip(origin).map(|(a, b)| a - b).collect()
}

/// The solution family of `s · M = target - origin`, or `None` when the
/// system has no integer solution. `bound = k_max · m`.
pub fn solution_family(
    m: &IntMatrix,
    origin: &[i64],
    target: &[i64],
    k_max: usize,
) -> Result<Option<SolutionFamily>, ReachabilityError> {
    let b = difference(target, origin);
    let Some(rational_particular) = rational_left_solve(m, &b)? else {
        return Ok(None);
    };
    let Some(int) = integer_left_solutions(m, &b)? else {
        return Ok(None);
    };
    Ok(Some(SolutionFamily {
        rational_particular,
        integer_particular: int.particular,
        kernel: int.kernel,
        bound: (k_max * m.cols()) as i64,
    }))
}

/// Every nonnegative integer `s` with `s · M = target - origin` and
/// `Σ s <= k_max · m`, sorted by `Σ s` then lexicographically.
pub fn sum_vector_solutions(
    m: &IntMatrix,
    origin: &[i64],
    target: &[i64],
    k_max: usize,
) -> Result<Vec<SumVector>, ReachabilityError> {
    let b = difference(target, origin);
    if rational_left_solve(m, &b)?.is_none() {
        return Ok(Vec::new());
    }
    let Some(sols) = integer_left_solutions(m, &b)? else {
        return Ok(Vec::new());
    };
    Ok(sols.nonnegative_within(&((k_max * m.cols()) as i64)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Reachable,
    NotReachableWithinBounds,
    InvalidTarget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    /// Subtracting the spiking vector left a negative residual entry: the
    /// residual is not a sum of valid spiking vectors.
    NegativeResidual,
    /// The residual is a 0/1 vector but not a valid spiking vector for the
    /// current configuration.
    InvalidSpikingVector,
    /// Residual left over but no rule can fire.
    NoApplicableRules,
    /// Step bound reached with residual left over.
    DepthExhausted,
}

/// One row of a failure table: residual and configuration at step `i`, and
/// the spiking vector applied there (absent on the final row).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureRow {
    pub i: usize,
    pub residual: Vec<i64>,
    #[serde(rename = "Sp")]
    pub sp: Option<SpikingVector>,
    #[serde(rename = "C")]
    pub config: Configuration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchFailure {
    pub reason: FailureReason,
    pub rows: Vec<FailureRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateOutcome {
    pub sum_vector: SumVector,
    pub decomposed: bool,
    pub failures: Vec<BranchFailure>,
    /// More failing branches existed than were kept.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReachabilityCertificate {
    pub verdict: Verdict,
    pub k: Option<usize>,
    pub origin: Configuration,
    pub target: Configuration,
    /// `C(0..=k)` on success.
    pub configurations: Vec<Configuration>,
    /// `Sp(0..k)` on success.
    pub spiking_vectors: Vec<SpikingVector>,
    pub sum_vector: Option<SumVector>,
    pub candidates: Vec<CandidateOutcome>,
    pub message: Option<String>,
}

impl ReachabilityCertificate {
    fn invalid(origin: &[i64], target: &[i64], message: String) -> Self {
        ReachabilityCertificate {
            verdict: Verdict::InvalidTarget,
            k: None,
            origin: Configuration(origin.to_vec()),
            target: Configuration(target.to_vec()),
            configurations: Vec::new(),
            spiking_vectors: Vec::new(),
            sum_vector: None,
            candidates: Vec::new(),
            message: Some(message),
        }
    }

    pub fn is_reachable(&self) -> bool {
        self.verdict == Verdict::Reachable
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Node {
    config: Vec<i64>,
    residual: Vec<i64>,
}

/// Splits `s` into valid spiking vectors starting at `origin`, trying every
/// valid vector at every step (breadth first, so the shortest split wins).
/// `max_steps` caps the split length.
pub fn decompose_sum_vector(
    sys: &SnpSystem,
    origin: &[i64],
    s: &[i64],
    max_steps: Option<usize>,
) -> ReachabilityCertificate {
    let m = spiking_matrix(sys);
    let Ok(gain) = m.left_mul(s) else {
        return ReachabilityCertificate::invalid(origin, &[], "sum vector has the wrong length".into());
    };
    let target: Vec<i64> = origin.iter().zip(gain).map(|(a, b)| a + b).collect();
    let (outcome, path) = split(sys, &m, origin, s, max_steps);
    certificate(origin, &target, outcome, path)
}

type Path = (Vec<Configuration>, Vec<SpikingVector>);

fn certificate(origin: &[i64], target: &[i64], outcome: CandidateOutcome, path: Option<Path>) -> ReachabilityCertificate {
    let sum_vector = Some(outcome.sum_vector.clone());
    let (verdict, k, configurations, spiking_vectors) = match path {
        Some((cs, sps)) => (Verdict::Reachable, Some(sps.len()), cs, sps),
        None => (Verdict::NotReachableWithinBounds, None, Vec::new(), Vec::new()),
    };
    ReachabilityCertificate {
        verdict,
        k,
        origin: Configuration(origin.to_vec()),
        target: Configuration(target.to_vec()),
        configurations,
        spiking_vectors,
        sum_vector,
        candidates: vec![outcome],
        message: None,
    }
}

fn split(
    sys: &SnpSystem,
    m: &IntMatrix,
    origin: &[i64],
    s: &[i64],
    max_steps: Option<usize>,
) -> (CandidateOutcome, Option<Path>) {
    let st = BitVector::ones(sys.neuron_count());
    let mut failures = Vec::new();
    let mut truncated = false;
    let mut record = |reason, rows: Vec<FailureRow>, failures: &mut Vec<BranchFailure>| {
        if failures.len() < MAX_FAILURES_PER_CANDIDATE {
            failures.push(BranchFailure { reason, rows });
        } else {
            truncated = true;
        }
    };

    let root = Node { config: origin.to_vec(), residual: s.to_vec() };
    // parent links: node -> (parent node, spiking vector used)
    let mut parent: HashMap<Node, Option<(Node, SpikingVector)>> = HashMap::new();
    parent.insert(root.clone(), None);
    let mut queue = VecDeque::from([(root, 0usize)]);
    let mut found = None;

    let rows_to = |parent: &HashMap<Node, Option<(Node, SpikingVector)>>, node: &Node| -> Vec<FailureRow> {
        let mut chain = vec![(node.clone(), None)];
        let mut cur = node.clone();
        while let Some(Some((p, sp))) = parent.get(&cur) {
            chain.push((p.clone(), Some(sp.clone())));
            cur = p.clone();
        }
        chain.reverse();
        chain
            .into_iter()
            .enumerate()
            .map(|(i, (n, sp))| FailureRow { i, residual: n.residual, sp, config: Configuration(n.config) })
            .collect()
    };

    while let Some((node, depth)) = queue.pop_front() {
        if node.residual.iter().all(|&x| x == 0) {
            found = Some(node);
            break;
        }
        if max_steps.is_some_and(|cap| depth >= cap) {
            record(FailureReason::DepthExhausted, rows_to(&parent, &node), &mut failures);
            continue;
        }
        let residual_bits = node.residual.iter().all(|&x| x == 0 || x == 1);
        if residual_bits {
            let as_bits: Vec<u8> = node.residual.iter().map(|&x| x as u8).collect();
            if !is_valid_spiking_vector(sys, &node.config, &st, &as_bits) {
                record(FailureReason::InvalidSpikingVector, rows_to(&parent, &node), &mut failures);
            }
        }
        let options = enumerate_spiking_vectors(sys, &node.config, &st);
        if options.is_empty() {
            record(FailureReason::NoApplicableRules, rows_to(&parent, &node), &mut failures);
            continue;
        }
        for sp in options {
            let residual: Vec<i64> = node.residual.iter().zip(sp.iter()).map(|(r, &b)| r - b as i64).collect();
            let config = step_no_delay(&node.config, &sp, m).expect("dimensions fixed by the system").0;
            let child = Node { config, residual };
            if parent.contains_key(&child) {
                continue;
            }
            parent.insert(child.clone(), Some((node.clone(), sp)));
            if child.residual.iter().any(|&x| x < 0) {
                record(FailureReason::NegativeResidual, rows_to(&parent, &child), &mut failures);
                continue;
            }
            queue.push_back((child, depth + 1));
        }
    }

    let path = found.map(|end| {
        let rows = rows_to(&parent, &end);
        let configs = rows.iter().map(|r| r.config.clone()).collect();
        let sps = rows.into_iter().filter_map(|r| r.sp).collect();
        (configs, sps)
    });
    let outcome = CandidateOutcome {
        sum_vector: s.to_vec(),
        decomposed: path.is_some(),
        failures,
        truncated,
    };
    (outcome, path)
}

fn check_delay_free(sys: &SnpSystem) -> Result<(), ReachabilityError> {
    match sys.rules().iter().enumerate().find(|(_, r)| r.delay > 0) {
        Some((rule, r)) => Err(ReachabilityError::DelaysUnsupported { rule, delay: r.delay }),
        None => Ok(()),
    }
}

fn target_problem(sys: &SnpSystem, target: &[i64]) -> Option<String> {
    if target.len() != sys.neuron_count() {
        Some(format!("target has {} entries, the system has {} neurons", target.len(), sys.neuron_count()))
    } else if target.iter().any(|&x| x < 0) {
        Some("target has a negative entry".into())
    } else {
        None
    }
}

/// Whether `target` is reachable from the initial configuration in at most
/// `k_max` steps. The certificate carries the shortest witness found.
pub fn is_reachable(sys: &SnpSystem, target: &[i64], k_max: usize) -> Result<ReachabilityCertificate, ReachabilityError> {
    reach_between(sys, &sys.initial_configuration(), target, k_max)
}

/// Same as [`is_reachable`] with `from` as the starting configuration.
pub fn reach_between(
    sys: &SnpSystem,
    from: &[i64],
    to: &[i64],
    v_max: usize,
) -> Result<ReachabilityCertificate, ReachabilityError> {
    check_delay_free(sys)?;
    if let Some(problem) = target_problem(sys, from) {
        return Ok(ReachabilityCertificate::invalid(from, to, format!("origin: {problem}")));
    }
    if let Some(problem) = target_problem(sys, to) {
        return Ok(ReachabilityCertificate::invalid(from, to, problem));
    }
    let m = spiking_matrix(sys);
    let candidates = sum_vector_solutions(&m, from, to, v_max)?;
    let results: Vec<(CandidateOutcome, Option<Path>)> = candidates
        .par_iter()
        .map(|s| split(sys, &m, from, s, Some(v_max)))
        .collect();

    let best = results
        .iter()
        .enumerate()
        .filter_map(|(i, (_, p))| p.as_ref().map(|p| (i, p)))
        .min_by(|(_, a), (_, b)| a.1.len().cmp(&b.1.len()).then_with(|| a.1.cmp(&b.1)));
    let (verdict, k, configurations, spiking_vectors, sum_vector) = match best {
        Some((i, (cs, sps))) => (Verdict::Reachable, Some(sps.len()), cs.clone(), sps.clone(), Some(candidates[i].clone())),
        None => (Verdict::NotReachableWithinBounds, None, Vec::new(), Vec::new(), None),
    };
    Ok(ReachabilityCertificate {
        verdict,
        k,
        origin: Configuration(from.to_vec()),
        target: Configuration(to.to_vec()),
        configurations,
        spiking_vectors,
        sum_vector,
        candidates: results.into_iter().map(|(o, _)| o).collect(),
        message: None,
    })
}

/// Result of the breadth-first search oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub reachable: bool,
    pub k: Option<usize>,
    pub explored: usize,
}

/// Shortest number of steps from the initial configuration to `target`,
/// found by exploring all computations without any matrix algebra.
pub fn bfs_oracle(sys: &SnpSystem, target: &[i64], k_max: usize) -> Result<OracleVerdict, ReachabilityError> {
    bfs_oracle_from(sys, &sys.initial_configuration(), target, k_max)
}

pub fn bfs_oracle_from(
    sys: &SnpSystem,
    from: &[i64],
    target: &[i64],
    k_max: usize,
) -> Result<OracleVerdict, ReachabilityError> {
    check_delay_free(sys)?;
    let mut visited: HashSet<Vec<i64>> = HashSet::from([from.to_vec()]);
    let mut frontier = vec![from.to_vec()];
    for k in 0..=k_max {
        if frontier.iter().any(|c| c == target) {
            return Ok(OracleVerdict { reachable: true, k: Some(k), explored: visited.len() });
        }
        if k == k_max {
            break;
        }
        let mut next = Vec::new();
        for c in &frontier {
            let state = SimState::at(sys, Configuration(c.clone()));
            for sp in enumerate_spiking_vectors(sys, c, &state.st) {
                let after = operational_step(sys, &state, &sp, DelayMode::Standard)
                    .expect("enumerated vectors are valid")
                    .config
                    .0;
                if visited.insert(after.clone()) {
                    next.push(after);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(OracleVerdict { reachable: false, k: None, explored: visited.len() })
}

/// One prefix of a trace checked against the closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixCheck {
    pub k: usize,
    /// Recorded `C(k+1)`.
    pub recorded: Configuration,
    /// The closed form with rule-level status products inside the sum.
    pub closed_form: Configuration,
    /// The status form iterated step by step from `C(0)`.
    pub unrolled: Configuration,
    pub closed_form_matches: bool,
    pub unrolled_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormReport {
    pub prefixes: Vec<PrefixCheck>,
    /// First `k` whose closed form differs from the recorded configuration.
    pub first_failure: Option<usize>,
}

/// Evaluates, for every prefix `0..=k` of `trace`,
///
/// `C(k+1) = (⊙_{i=1}^{k+1} St(i)) ⊙ C(0) + (Σ_j ⊙_{i=j+2}^{k+1} St(i) ⊙ RSt(j+1) ⊙ Iv(j)) · M`
///
/// The status products inside the sum multiply a rule-indexed vector, so
/// they are taken at rule level (each rule gets its owner's status). `St(i)`
/// for `i <= k` also counts neurons that fire a delayed rule at step `i`
/// as closed, the convention under which the status form was derived.
pub fn verify_delay_closed_form(sys: &SnpSystem, trace: &Trace) -> Result<ClosedFormReport, ReachabilityError> {
    let m = spiking_matrix(sys);
    let recs = &trace.records;
    let steps = recs.len().saturating_sub(1);
    let mut st: Vec<BitVector> = Vec::with_capacity(recs.len());
    let mut iv: Vec<BitVector> = Vec::with_capacity(steps);
    for (k, r) in recs.iter().enumerate() {
        let mut s = r.st.clone();
        if k < steps {
            let (Some(sp), Some(v)) = (&r.sp, &r.iv) else {
                return Err(ReachabilityError::MissingDelayVectors { k });
            };
            for i in sp.ones_iter() {
                let rule = sys.rule(i);
                if rule.delay > 0 {
                    s.0[rule.owner] = 0;
                }
            }
            iv.push(v.clone());
        }
        st.push(s);
    }

    let c0 = &recs.first().map(|r| r.config.0.clone()).unwrap_or_default();
    let mut prefixes = Vec::new();
    let mut unrolled = c0.clone();
    for k in 0..steps {
        let status_prod = |from: usize| -> BitVector {
            (from..=k + 1).fold(BitVector::ones(sys.neuron_count()), |acc, i| acc.hadamard(&st[i]))
        };
        let head: Vec<i64> = status_prod(1).iter().zip(c0).map(|(&s, &c)| s as i64 * c).collect();
        let mut lifted = vec![0i64; sys.rule_count()];
        for (j, ivj) in iv.iter().enumerate().take(k + 1) {
            let rst = rule_status_vector(sys, &status_prod(j + 1));
            for (slot, (&a, &b)) in lifted.iter_mut().zip(rst.iter().zip(ivj.iter())) {
                *slot += (a & b) as i64;
            }
        }
        let tail = m.left_mul(&lifted)?;
        let closed = Configuration(head.iter().zip(tail).map(|(a, b)| a + b).collect());

        let gain = m.left_mul(&iv[k].to_i64())?;
        unrolled = unrolled
            .iter()
            .zip(gain)
            .zip(st[k + 1].iter())
            .map(|((c, g), &s)| s as i64 * (c + g))
            .collect();

        let recorded = recs[k + 1].config.clone();
        prefixes.push(PrefixCheck {
            k,
            closed_form_matches: closed == recorded,
            unrolled_matches: unrolled == recorded.0,
            closed_form: closed,
            unrolled: Configuration(unrolled.clone()),
            recorded,
        });
    }
    let first_failure = prefixes.iter().find(|p| !p.closed_form_matches).map(|p| p.k);
    Ok(ClosedFormReport { prefixes, first_failure })
}
