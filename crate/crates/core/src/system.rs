//! The static SN P system: neurons, totally ordered rules, synapses.
//!
//! Neurons and rules are referred to by zero-based index everywhere in the
//! crate. The rule order is the order of appearance in the source file and
//! fixes the row index of every matrix and the entry index of every
//! rule-indexed vector.
//!
//! File format (line oriented, `#` starts a comment):
//!
//! ```text
//! neuron <name> spikes=<uint>
//! rule <name> [E=<regex>] c=<uint> p=<uint> d=<uint>
//! syn <name> <name>
//! out <name>
//! in <name>
//! ```
//!
//! `p=0` marks a forgetting rule. When `E` is omitted the guard is `a^c`.
//! The `in` neuron is recorded but has no effect on any computation.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::ParseError;
use crate::regex::{compile, parse_regex, RegexAst, SemilinearMembership};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neuron {
    pub name: String,
    pub spikes: u64,
}

/// A rule guard `E`, kept both as syntax and in compiled form.
#[derive(Clone, Debug)]
pub struct Guard {
    ast: RegexAst,
    membership: SemilinearMembership,
}

impl Guard {
    pub fn new(ast: RegexAst) -> Self {
        let membership = compile(&ast);
        Self { ast, membership }
    }

    pub fn parse(src: &str) -> Result<Self, crate::error::RegexError> {
        Ok(Self::new(parse_regex(src)?))
    }

    /// The guard `a^count`.
    pub fn exactly(count: u32) -> Self {
        Self::new(RegexAst::Literal(count))
    }

    pub fn ast(&self) -> &RegexAst {
        &self.ast
    }

    pub fn membership(&self) -> &SemilinearMembership {
        &self.membership
    }

    pub fn matches(&self, spikes: u64) -> bool {
        self.membership.matches(spikes)
    }
}

impl PartialEq for Guard {
    fn eq(&self, other: &Self) -> bool {
        self.ast == other.ast
    }
}

impl Eq for Guard {}

/// `E / a^c → a^p ; d`, or the forgetting rule `a^c → λ` when `produce == 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub owner: usize,
    pub guard: Guard,
    pub consume: u32,
    pub produce: u32,
    pub delay: u32,
}

impl Rule {
    pub fn spiking(owner: usize, guard: Guard, consume: u32, produce: u32, delay: u32) -> Self {
        Self {
            owner,
            guard,
            consume,
            produce,
            delay,
        }
    }

    pub fn forgetting(owner: usize, spikes: u32) -> Self {
        Self {
            owner,
            guard: Guard::exactly(spikes),
            consume: spikes,
            produce: 0,
            delay: 0,
        }
    }

    pub fn is_forgetting(&self) -> bool {
        self.produce == 0
    }

    pub fn applicable(&self, spikes: u64) -> bool {
        self.guard.matches(spikes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SnpSystem {
    neurons: Vec<Neuron>,
    rules: Vec<Rule>,
    synapses: Vec<(usize, usize)>,
    input: Option<usize>,
    output: Option<usize>,
}

impl SnpSystem {
    /// Assembles a system without checking it; see [`validate`].
    pub fn new(
        neurons: Vec<Neuron>,
        rules: Vec<Rule>,
        synapses: Vec<(usize, usize)>,
        input: Option<usize>,
        output: Option<usize>,
    ) -> Self {
        Self {
            neurons,
            rules,
            synapses,
            input,
            output,
        }
    }

    /// Number of neurons, `m`.
    pub fn neuron_count(&self) -> usize {
        self.neurons.len()
    }

    /// Number of rules, `n`.
    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn neurons(&self) -> &[Neuron] {
        &self.neurons
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, i: usize) -> &Rule {
        &self.rules[i]
    }

    pub fn synapses(&self) -> &[(usize, usize)] {
        &self.synapses
    }

    pub fn input(&self) -> Option<usize> {
        self.input
    }

    pub fn output(&self) -> Option<usize> {
        self.output
    }

    pub fn neuron_index(&self, name: &str) -> Option<usize> {
        self.neurons.iter().position(|n| n.name == name)
    }

    /// Indices of the rules owned by neuron `j`, in rule order.
    pub fn rules_of(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.rules
            .iter()
            .enumerate()
            .filter(move |(_, r)| r.owner == j)
            .map(|(i, _)| i)
    }

    /// Targets of the synapses leaving neuron `j`.
    pub fn targets_of(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.synapses
            .iter()
            .filter(move |(s, _)| *s == j)
            .map(|&(_, t)| t)
    }

    pub fn initial_configuration(&self) -> Vec<i64> {
        self.neurons.iter().map(|n| n.spikes as i64).collect()
    }

    /// The delay vector `D`.
    pub fn delays(&self) -> Vec<u32> {
        self.rules.iter().map(|r| r.delay).collect()
    }

    pub fn has_delays(&self) -> bool {
        self.rules.iter().any(|r| r.delay > 0)
    }
}

struct PendingRule {
    line: usize,
    owner: String,
    guard: Option<Guard>,
    consume: u32,
    produce: u32,
    delay: u32,
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_uint<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, ParseError> {
    value
        .parse()
        .map_err(|_| syntax(line, format!("`{key}` needs an unsigned integer, got `{value}`")))
}

pub fn parse_system(text: &str) -> Result<SnpSystem, ParseError> {
    let mut neurons: Vec<Neuron> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut rules: Vec<PendingRule> = Vec::new();
    let mut syns: Vec<(usize, String, String)> = Vec::new();
    let mut output: Option<(usize, String)> = None;
    let mut input: Option<(usize, String)> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&keyword, args)) = tokens.split_first() else {
            continue;
        };
        match keyword {
            "neuron" => {
                let [name, spikes] = args else {
                    return Err(syntax(line, "expected `neuron <name> spikes=<uint>`"));
                };
                let value = spikes
                    .strip_prefix("spikes=")
                    .ok_or_else(|| syntax(line, "expected `spikes=<uint>`"))?;
                let spikes = parse_uint(line, "spikes", value)?;
                if index.contains_key(*name) {
                    return Err(ParseError::DuplicateNeuron {
                        line,
                        name: name.to_string(),
                    });
                }
                index.insert(name.to_string(), neurons.len());
                neurons.push(Neuron {
                    name: name.to_string(),
                    spikes,
                });
            }
            "rule" => {
                let Some((owner, fields)) = args.split_first() else {
                    return Err(syntax(line, "expected `rule <name> ...`"));
                };
                let mut guard = None;
                let (mut consume, mut produce, mut delay) = (None, None, None);
                for field in fields {
                    let (key, value) = field
                        .split_once('=')
                        .ok_or_else(|| syntax(line, format!("expected key=value, got `{field}`")))?;
                    let duplicate = match key {
                        "E" => guard
                            .replace(
                                Guard::parse(value)
                                    .map_err(|source| ParseError::Regex { line, source })?,
                            )
                            .is_some(),
                        "c" => consume.replace(parse_uint(line, key, value)?).is_some(),
                        "p" => produce.replace(parse_uint(line, key, value)?).is_some(),
                        "d" => delay.replace(parse_uint(line, key, value)?).is_some(),
                        _ => return Err(syntax(line, format!("unknown rule field `{key}`"))),
                    };
                    if duplicate {
                        return Err(syntax(line, format!("field `{key}` given twice")));
                    }
                }
                rules.push(PendingRule {
                    line,
                    owner: owner.to_string(),
                    guard,
                    consume: consume.ok_or_else(|| syntax(line, "rule needs `c=`"))?,
                    produce: produce.ok_or_else(|| syntax(line, "rule needs `p=`"))?,
                    delay: delay.unwrap_or(0),
                });
            }
            "syn" => {
                let [from, to] = args else {
                    return Err(syntax(line, "expected `syn <name> <name>`"));
                };
                syns.push((line, from.to_string(), to.to_string()));
            }
            "out" | "in" => {
                let [name] = args else {
                    return Err(syntax(line, format!("expected `{keyword} <name>`")));
                };
                let slot = if keyword == "out" {
                    &mut output
                } else {
                    &mut input
                };
                if slot.is_some() {
                    return Err(syntax(line, format!("`{keyword}` declared twice")));
                }
                *slot = Some((line, name.to_string()));
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }

    let resolve = |line: usize, name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| ParseError::UnknownNeuron {
                line,
                name: name.to_string(),
            })
    };

    let rules = rules
        .into_iter()
        .map(|r| {
            let owner = resolve(r.line, &r.owner)?;
            let guard = r.guard.unwrap_or_else(|| Guard::exactly(r.consume));
            Ok(Rule {
                owner,
                guard,
                consume: r.consume,
                produce: r.produce,
                delay: r.delay,
            })
        })
        .collect::<Result<Vec<_>, ParseError>>()?;

    let mut seen = HashSet::new();
    let mut synapses = Vec::with_capacity(syns.len());
    for (line, from, to) in syns {
        let pair = (resolve(line, &from)?, resolve(line, &to)?);
        if !seen.insert(pair) {
            return Err(ParseError::DuplicateSynapse { line, from, to });
        }
        synapses.push(pair);
    }

    let output = output.map(|(l, n)| resolve(l, &n)).transpose()?;
    let input = input.map(|(l, n)| resolve(l, &n)).transpose()?;
    Ok(SnpSystem {
        neurons,
        rules,
        synapses,
        input,
        output,
    })
}

/// Canonical text form; `parse_system` inverts it exactly.
pub fn serialize_system(sys: &SnpSystem) -> String {
    let mut out = String::new();
    let name = |j: usize| sys.neurons[j].name.as_str();
    for n in &sys.neurons {
        writeln!(out, "neuron {} spikes={}", n.name, n.spikes).unwrap();
    }
    for r in &sys.rules {
        write!(out, "rule {}", name(r.owner)).unwrap();
        if *r.guard.ast() != RegexAst::Literal(r.consume) {
            write!(out, " E={}", r.guard.ast()).unwrap();
        }
        writeln!(out, " c={} p={} d={}", r.consume, r.produce, r.delay).unwrap();
    }
    for &(a, b) in &sys.synapses {
        writeln!(out, "syn {} {}", name(a), name(b)).unwrap();
    }
    if let Some(j) = sys.output {
        writeln!(out, "out {}", name(j)).unwrap();
    }
    if let Some(j) = sys.input {
        writeln!(out, "in {}", name(j)).unwrap();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueCode {
    NoNeurons,
    RuleOwnerOutOfRange,
    ZeroConsumption,
    ProductionExceedsConsumption,
    GuardBelowConsumption,
    EmptyGuard,
    ForgettingWithDelay,
    ForgettingGuardNotExact,
    ForgettingOverlapsGuard,
    SynapseOutOfRange,
    SelfSynapse,
    DuplicateSynapse,
    OutputOutOfRange,
    InputOutOfRange,
}

impl IssueCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            IssueCode::NoNeurons => "no-neurons",
            IssueCode::RuleOwnerOutOfRange => "rule-owner-out-of-range",
            IssueCode::ZeroConsumption => "zero-consumption",
            IssueCode::ProductionExceedsConsumption => "production-exceeds-consumption",
            IssueCode::GuardBelowConsumption => "guard-below-consumption",
            IssueCode::EmptyGuard => "empty-guard",
            IssueCode::ForgettingWithDelay => "forgetting-with-delay",
            IssueCode::ForgettingGuardNotExact => "forgetting-guard-not-exact",
            IssueCode::ForgettingOverlapsGuard => "forgetting-overlaps-guard",
            IssueCode::SynapseOutOfRange => "synapse-out-of-range",
            IssueCode::SelfSynapse => "self-synapse",
            IssueCode::DuplicateSynapse => "duplicate-synapse",
            IssueCode::OutputOutOfRange => "output-out-of-range",
            IssueCode::InputOutOfRange => "input-out-of-range",
        }
    }
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Location {
    System,
    Neuron { index: usize },
    Rule { index: usize },
    Synapse { from: usize, to: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub severity: Severity,
    pub code: IssueCode,
    pub message: String,
    pub location: Location,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        !self.issues.iter().any(|i| i.severity == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn error_codes(&self) -> Vec<IssueCode> {
        self.errors().map(|i| i.code).collect()
    }

    fn push(&mut self, severity: Severity, code: IssueCode, location: Location, message: String) {
        self.issues.push(Issue {
            severity,
            code,
            message,
            location,
        });
    }

    fn error(&mut self, code: IssueCode, location: Location, message: String) {
        self.push(Severity::Error, code, location, message);
    }
}

pub fn validate(sys: &SnpSystem) -> ValidationReport {
    let mut report = ValidationReport::default();
    let m = sys.neuron_count();
    if m == 0 {
        report.error(IssueCode::NoNeurons, Location::System, "a system needs at least one neuron".into());
    }

    for (i, r) in sys.rules.iter().enumerate() {
        let at = Location::Rule { index: i };
        if r.owner >= m {
            report.error(
                IssueCode::RuleOwnerOutOfRange,
                at,
                format!("rule {} belongs to neuron {} of {m}", i + 1, r.owner + 1),
            );
        }
        if r.consume == 0 {
            report.error(IssueCode::ZeroConsumption, at, format!("rule {} consumes no spikes", i + 1));
        }
        let guard = r.guard.membership();
        if r.is_forgetting() {
            if r.delay != 0 {
                report.error(
                    IssueCode::ForgettingWithDelay,
                    at,
                    format!("forgetting rule {} has delay {}", i + 1, r.delay),
                );
            }
            if !guard.is_singleton(r.consume as u64) {
                report.error(
                    IssueCode::ForgettingGuardNotExact,
                    at,
                    format!("forgetting rule {} must fire on exactly a^{}", i + 1, r.consume),
                );
            }
        } else {
            if r.produce > r.consume {
                report.error(
                    IssueCode::ProductionExceedsConsumption,
                    at,
                    format!("rule {} produces {} > consumes {}", i + 1, r.produce, r.consume),
                );
            }
            if guard.is_empty() {
                report.push(
                    Severity::Warning,
                    IssueCode::EmptyGuard,
                    at,
                    format!("rule {} can never be applied", i + 1),
                );
            }
        }
        if let Some(n) = (0..r.consume as u64).find(|&n| guard.matches(n)) {
            report.error(
                IssueCode::GuardBelowConsumption,
                at,
                format!("rule {} is applicable with {n} spikes but consumes {}", i + 1, r.consume),
            );
        }
    }

    // a^s → λ in R_j excludes a^s from every spiking guard in R_j
    for (f, forget) in sys.rules.iter().enumerate().filter(|(_, r)| r.is_forgetting()) {
        let s = forget.consume as u64;
        for (i, r) in sys.rules.iter().enumerate() {
            if r.owner == forget.owner && !r.is_forgetting() && r.guard.matches(s) {
                report.error(
                    IssueCode::ForgettingOverlapsGuard,
                    Location::Rule { index: f },
                    format!("a^{s} of forgetting rule {} is in L(E) of rule {}", f + 1, i + 1),
                );
            }
        }
    }

    let mut seen = HashSet::new();
    for &(a, b) in &sys.synapses {
        let at = Location::Synapse { from: a, to: b };
        if a >= m || b >= m {
            report.error(
                IssueCode::SynapseOutOfRange,
                at,
                format!("synapse ({}, {}) leaves the {m} neurons", a + 1, b + 1),
            );
        } else if a == b {
            report.error(IssueCode::SelfSynapse, at, format!("synapse ({}, {}) is a loop", a + 1, b + 1));
        }
        if !seen.insert((a, b)) {
            report.error(
                IssueCode::DuplicateSynapse,
                at,
                format!("synapse ({}, {}) listed twice", a + 1, b + 1),
            );
        }
    }

    if sys.output.is_some_and(|j| j >= m) {
        report.error(IssueCode::OutputOutOfRange, Location::System, "output neuron out of range".into());
    }
    if sys.input.is_some_and(|j| j >= m) {
        report.error(IssueCode::InputOutOfRange, Location::System, "input neuron out of range".into());
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE1: &str = "\
neuron s1 spikes=2
neuron s2 spikes=1
neuron s3 spikes=1
rule s1 E=a^2 c=1 p=1 d=0
rule s1 c=2 p=1 d=0
rule s2 c=1 p=1 d=0
rule s3 c=1 p=1 d=0
rule s3 c=2 p=0 d=0
syn s1 s2
syn s1 s3
syn s2 s1
syn s2 s3
out s3
";

    #[test]
    fn parses_and_orders_rules() {
        let sys = parse_system(EXAMPLE1).unwrap();
        assert_eq!(sys.neuron_count(), 3);
        assert_eq!(sys.rule_count(), 5);
        assert_eq!(sys.initial_configuration(), vec![2, 1, 1]);
        assert_eq!(sys.rules_of(0).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(sys.output(), Some(2));
        assert!(sys.rule(4).is_forgetting());
        assert!(validate(&sys).is_valid());
    }

    #[test]
    fn canonical_form_is_stable() {
        let sys = parse_system(EXAMPLE1).unwrap();
        assert_eq!(serialize_system(&sys), EXAMPLE1);
    }

    #[test]
    fn empty_rule_set() {
        let sys = parse_system("neuron only spikes=0\n").unwrap();
        assert_eq!((sys.neuron_count(), sys.rule_count()), (1, 0));
        assert!(validate(&sys).is_valid());
        assert_eq!(parse_system(&serialize_system(&sys)).unwrap(), sys);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = parse_system("neuron a spikes=1\nrule b c=1 p=1\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownNeuron {
                line: 2,
                name: "b".into()
            }
        );
        let err = parse_system("neuron a spikes=1\nneuron b spikes=0\nsyn a b\n\nsyn a b\n").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateSynapse { line: 5, .. }));
        let err = parse_system("neuron a spikes=x\n").unwrap_err();
        assert_eq!(err.line(), 1);
        let err = parse_system("neuron a spikes=1\nrule a E=a^ c=1 p=1\n").unwrap_err();
        assert!(matches!(err, ParseError::Regex { line: 2, .. }));
        let err = parse_system("neuron a spikes=1\nrule a c=1\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
        let err = parse_system("bogus\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, .. }));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let sys = parse_system("# header\n\nneuron a spikes=3 # trailing\n").unwrap();
        assert_eq!(sys.initial_configuration(), vec![3]);
    }

    #[test]
    fn forgetting_overlap_is_reported() {
        let sys = parse_system("neuron a spikes=2\nrule a E=a* c=1 p=1 d=0\nrule a c=2 p=0 d=0\n").unwrap();
        let report = validate(&sys);
        assert!(report.error_codes().contains(&IssueCode::ForgettingOverlapsGuard));
    }

    #[test]
    fn self_synapse_is_reported() {
        let sys = parse_system("neuron a spikes=0\nneuron b spikes=0\nsyn b b\n").unwrap();
        assert_eq!(validate(&sys).error_codes(), vec![IssueCode::SelfSynapse]);
    }

    #[test]
    fn rule_shape_checks() {
        let sys = parse_system(
            "neuron a spikes=0\n\
             rule a c=1 p=2 d=0\n\
             rule a E=a^3 c=0 p=0 d=1\n\
             rule a E=a* c=2 p=1 d=0\n",
        )
        .unwrap();
        let codes = validate(&sys).error_codes();
        assert!(codes.contains(&IssueCode::ProductionExceedsConsumption));
        assert!(codes.contains(&IssueCode::ZeroConsumption));
        assert!(codes.contains(&IssueCode::ForgettingWithDelay));
        assert!(codes.contains(&IssueCode::ForgettingGuardNotExact));
        assert!(codes.contains(&IssueCode::GuardBelowConsumption));
    }

    #[test]
    fn out_of_range_indices_from_code() {
        let sys = SnpSystem::new(
            vec![Neuron {
                name: "a".into(),
                spikes: 0,
            }],
            vec![Rule::forgetting(3, 1)],
            vec![(0, 5), (0, 5)],
            None,
            Some(9),
        );
        let codes = validate(&sys).error_codes();
        for c in [
            IssueCode::RuleOwnerOutOfRange,
            IssueCode::SynapseOutOfRange,
            IssueCode::DuplicateSynapse,
            IssueCode::OutputOutOfRange,
        ] {
            assert!(codes.contains(&c), "{c}");
        }
    }
}
