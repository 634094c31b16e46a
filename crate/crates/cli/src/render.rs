//! Text and JSON shapes for command output.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde::Serialize;
use snp_core::engine::{DelayMode, IdentityReport, Trace};
use snp_core::forms::{augmented_matrix, consumption_matrix, production_matrix, spiking_matrix, struc_matrix, StructuralReport};
use snp_core::reachability::{ClosedFormReport, ReachabilityCertificate, Verdict};
use snp_core::system::{Location, Severity, ValidationReport};
use snp_core::{IntMatrix, SnpSystem};

fn tuple<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(header.to_vec(), &mut out);
    for row in rows {
        line(row.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

fn location(sys: &SnpSystem, loc: &Location) -> String {
    let neuron = |j: usize| sys.neurons().get(j).map_or_else(|| format!("#{}", j + 1), |n| n.name.clone());
    match *loc {
        Location::System => "system".into(),
        Location::Neuron { index } => format!("neuron {}", neuron(index)),
        Location::Rule { index } => format!("rule {} ({})", index + 1, neuron(sys.rule(index).owner)),
        Location::Synapse { from, to } => format!("synapse {} -> {}", neuron(from), neuron(to)),
    }
}

pub fn issues(sys: &SnpSystem, report: &ValidationReport) -> String {
    let mut out = String::new();
    for issue in &report.issues {
        let severity = match issue.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        let _ = writeln!(out, "{severity}[{}] {}: {}", issue.code, location(sys, &issue.location), issue.message);
    }
    out
}

pub fn validation(sys: &SnpSystem, report: &ValidationReport) -> String {
    let mut out = issues(sys, report);
    if report.is_valid() {
        let _ = writeln!(out, "valid: {} neurons, {} rules, {} synapses", sys.neuron_count(), sys.rule_count(), sys.synapses().len());
    }
    out
}

#[derive(Serialize)]
pub struct MatrixSet {
    pub spiking: IntMatrix,
    /// Absent when the system has no output neuron.
    pub augmented: Option<IntMatrix>,
    pub production: IntMatrix,
    pub consumption: IntMatrix,
    pub structure: IntMatrix,
}

impl MatrixSet {
    pub fn of(sys: &SnpSystem) -> Self {
        MatrixSet {
            spiking: spiking_matrix(sys),
            augmented: augmented_matrix(sys).ok(),
            production: production_matrix(sys),
            consumption: consumption_matrix(sys),
            structure: struc_matrix(sys),
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let mut section = |name: &str, m: &IntMatrix| {
            let _ = write!(out, "{name}\n{m}\n");
        };
        section("M", &self.spiking);
        if let Some(a) = &self.augmented {
            section("M augmented (last column: environment)", a);
        }
        section("PM", &self.production);
        section("CM", &self.consumption);
        section("Struc-M", &self.structure);
        out
    }
}

#[derive(Serialize)]
pub struct TraceSummary {
    pub mode: DelayMode,
    pub steps: usize,
    pub halted: bool,
    pub spike_train: String,
    pub first_interval: Option<usize>,
}

impl TraceSummary {
    pub fn of(t: &Trace) -> Self {
        TraceSummary {
            mode: t.mode,
            steps: t.records.len() - 1,
            halted: t.halted,
            spike_train: t.spike_train.clone(),
            first_interval: t.first_interval,
        }
    }
}

#[derive(Serialize)]
pub struct TreeSummary {
    pub mode: DelayMode,
    pub leaves: usize,
    pub halted_leaves: usize,
    pub first_intervals: Vec<usize>,
}

impl TreeSummary {
    pub fn of(mode: DelayMode, traces: &[Trace]) -> Self {
        let intervals: BTreeSet<usize> = traces.iter().filter_map(|t| t.first_interval).collect();
        TreeSummary {
            mode,
            leaves: traces.len(),
            halted_leaves: traces.iter().filter(|t| t.halted).count(),
            first_intervals: intervals.into_iter().collect(),
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

pub fn trace(sys: &SnpSystem, t: &Trace) -> String {
    let rows: Vec<Vec<String>> = t
        .records
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                r.config.to_string(),
                opt(r.sp.as_ref()),
                opt(r.iv.as_ref()),
                r.st.to_string(),
                tuple(&r.dst),
                opt(r.ng.as_ref().map(tuple)),
                opt(r.emitted),
            ]
        })
        .collect();
    let mut out = table(&["k", "C", "Sp", "Iv", "St", "DSt", "NG", "emitted"], &rows);
    let _ = writeln!(out, "mode: {}", t.mode);
    let _ = writeln!(out, "halted: {}", if t.halted { "yes" } else { "no" });
    if sys.output().is_some() {
        let _ = writeln!(out, "spike train: {}", t.spike_train);
        let _ = writeln!(out, "first interval: {}", opt(t.first_interval));
    }
    out
}

pub fn tree(sys: &SnpSystem, traces: &[Trace]) -> String {
    let summary = TreeSummary::of(traces.first().map_or(DelayMode::Standard, |t| t.mode), traces);
    let rows: Vec<Vec<String>> = traces
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let last = t.records.last().expect("traces are never empty");
            vec![
                i.to_string(),
                last.k.to_string(),
                last.config.to_string(),
                if t.halted { "yes".into() } else { "no".into() },
                t.spike_train.clone(),
                opt(t.first_interval),
            ]
        })
        .collect();
    let mut out = table(&["leaf", "k", "C", "halted", "spike train", "first interval"], &rows);
    let _ = writeln!(out, "leaves: {} ({} halted)", summary.leaves, summary.halted_leaves);
    if sys.output().is_some() {
        let _ = writeln!(out, "first intervals: {}", tuple(&summary.first_intervals));
    }
    out
}

#[derive(Serialize)]
pub struct DelayAnalysis {
    pub mode: DelayMode,
    pub steps: usize,
    pub identities: Vec<IdentityReport>,
    pub closed_form: ClosedFormReport,
}

#[derive(Serialize)]
pub struct Analysis {
    pub structure: StructuralReport,
    pub delay: Option<DelayAnalysis>,
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Analysis {
    pub fn text(&self, sys: &SnpSystem) -> String {
        let s = &self.structure;
        let o = &s.observations;
        let names = |idx: &[usize]| idx.iter().map(|&j| sys.neurons()[j].name.clone()).collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        let _ = writeln!(out, "negative entries per row: {}", tuple(&o.row_negative_counts));
        let _ = writeln!(out, "negative entries per column: {}", tuple(&o.column_negative_counts));
        let _ = writeln!(out, "every row has one negative entry: {}", yes_no(o.rows_have_unique_negative));
        let _ = writeln!(out, "every rule-owning column has a negative entry: {}", yes_no(s.rule_columns_have_negative));
        let _ = writeln!(out, "possible output neurons: {}", names(&o.inferred_output_neurons));
        let _ = writeln!(out, "out-degree: {}", tuple(&o.out_degree));
        let _ = writeln!(out, "square M: {}", yes_no(o.is_square));
        let _ = writeln!(out, "row rank of Struc-M: {} of {}", s.struc_rank, sys.neuron_count());
        let _ = writeln!(out, "rank suggests a cycle: {}", yes_no(s.rank_cycle_hint));
        let _ = writeln!(out, "synapse graph has a cycle: {}", yes_no(s.dfs_has_cycle));
        if let Some(d) = &self.delay {
            let _ = writeln!(out, "\nstep formulas along the first-choice trace ({} mode):", d.mode);
            let rows: Vec<Vec<String>> = d
                .identities
                .iter()
                .map(|r| {
                    vec![
                        r.k.to_string(),
                        r.oracle.to_string(),
                        r.v1.to_string(),
                        r.v2_deferred.to_string(),
                        opt(r.v2_immediate.as_ref()),
                        yes_no(r.rule_status.holds).into(),
                    ]
                })
                .collect();
            out.push_str(&table(&["k", "direct", "gain/loss", "status(next)", "status(closing)", "RSt identity"], &rows));
            let _ = writeln!(out, "\nclosed form per prefix:");
            let rows: Vec<Vec<String>> = d
                .closed_form
                .prefixes
                .iter()
                .map(|p| vec![p.k.to_string(), p.recorded.to_string(), p.closed_form.to_string(), p.unrolled.to_string()])
                .collect();
            out.push_str(&table(&["k", "recorded C(k+1)", "closed form", "unrolled"], &rows));
            let _ = writeln!(out, "first mismatch: {}", opt(d.closed_form.first_failure));
        }
        out
    }
}

/// Failing branches printed per candidate in text mode.
const TEXT_FAILURES: usize = 3;

pub fn certificate(cert: &ReachabilityCertificate) -> String {
    let mut out = String::new();
    let verdict = match cert.verdict {
        Verdict::Reachable => "reachable",
        Verdict::NotReachableWithinBounds => "not reachable within bounds",
        Verdict::InvalidTarget => "invalid target",
    };
    let _ = writeln!(out, "{} -> {}: {verdict}", cert.origin, cert.target);
    if let Some(msg) = &cert.message {
        let _ = writeln!(out, "{msg}");
    }
    if let (Some(k), Some(s)) = (cert.k, &cert.sum_vector) {
        let _ = writeln!(out, "k = {k}, sum vector {}", tuple(s));
        let rows: Vec<Vec<String>> = cert
            .configurations
            .iter()
            .enumerate()
            .map(|(i, c)| vec![i.to_string(), c.to_string(), opt(cert.spiking_vectors.get(i))])
            .collect();
        out.push_str(&table(&["i", "C", "Sp"], &rows));
        return out;
    }
    let _ = writeln!(out, "candidate sum vectors: {}", cert.candidates.len());
    for cand in &cert.candidates {
        let _ = writeln!(out, "\nsum vector {}", tuple(&cand.sum_vector));
        for f in cand.failures.iter().take(TEXT_FAILURES) {
            let _ = writeln!(out, "  {:?}", f.reason);
            let rows: Vec<Vec<String>> = f
                .rows
                .iter()
                .map(|r| vec![r.i.to_string(), tuple(&r.residual), opt(r.sp.as_ref()), r.config.to_string()])
                .collect();
            for line in table(&["i", "residual", "Sp", "C"], &rows).lines() {
                let _ = writeln!(out, "    {line}");
            }
        }
        let hidden = cand.failures.len().saturating_sub(TEXT_FAILURES);
        if hidden > 0 || cand.truncated {
            let _ = writeln!(out, "  ({hidden} more failing branches{})", if cand.truncated { ", list truncated" } else { "" });
        }
    }
    out
}
