//! JSON and text rendering of decisions and oracle runs.
//!
//! Generator indices are 1-based in every rendered form. Every field is
//! always present (null when not populated) so the JSON schema is stable.

use std::fmt::Write as _;

use heisenberg_core::arith::format_gaussian;
use heisenberg_core::decider::{AngleClass, Decision};
use heisenberg_core::oracle::{AuditReport, Search};
use serde::Serialize;

type Pair = [usize; 2];

fn one_based(i: usize) -> usize {
    i + 1
}

fn pair((i, j): (usize, usize)) -> Pair {
    [one_based(i), one_based(j)]
}

#[derive(Serialize)]
pub struct AngleJson {
    tag: &'static str,
    v: Option<String>,
    pairs: Vec<Pair>,
}

#[derive(Serialize)]
pub struct SystemJson {
    id: String,
    feasible: bool,
}

#[derive(Serialize)]
pub struct TraceJson {
    removed_redundant: Vec<usize>,
    commutators: Vec<Vec<String>>,
    angle_class: Option<AngleJson>,
    gamma_line_rep: Option<String>,
    feasible_tij_pair: Option<Pair>,
    half_plane_occupancy: Option<[bool; 2]>,
    gamma_usable_set: Option<Vec<usize>>,
    final_system_verdict: Option<bool>,
    witness: Option<Vec<String>>,
    systems: Vec<SystemJson>,
}

#[derive(Serialize)]
pub struct DecisionJson {
    problem: &'static str,
    answer: bool,
    branch: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<TraceJson>,
    timing_ms: f64,
}

fn angle_json(a: &AngleClass) -> AngleJson {
    let (v, pairs) = match a {
        AngleClass::AllZero => (None, Vec::new()),
        AngleClass::CommonLine { v, pair: p } => (Some(format_gaussian(v)), vec![pair(*p)]),
        AngleClass::TwoLines { first, second } => (None, vec![pair(*first), pair(*second)]),
    };
    AngleJson {
        tag: a.tag(),
        v,
        pairs,
    }
}

fn trace_json(d: &Decision) -> TraceJson {
    let tr = &d.trace;
    let t = tr.commutators.len();
    let indices = |v: &[usize]| v.iter().copied().map(one_based).collect::<Vec<_>>();
    TraceJson {
        removed_redundant: indices(&tr.removed_redundant),
        commutators: (0..t)
            .map(|i| {
                (0..t)
                    .map(|j| format_gaussian(tr.commutators.get(i, j)))
                    .collect()
            })
            .collect(),
        angle_class: tr.angle_class.as_ref().map(angle_json),
        gamma_line_rep: tr.gamma_line_rep.as_ref().map(format_gaussian),
        feasible_tij_pair: tr.feasible_tij_pair.map(pair),
        half_plane_occupancy: tr.half_plane_occupancy.map(|(h1, h2)| [h1, h2]),
        gamma_usable_set: tr.gamma_usable_set.as_deref().map(indices),
        final_system_verdict: tr.final_system_verdict,
        witness: tr
            .witness
            .as_ref()
            .map(|w| w.iter().map(ToString::to_string).collect()),
        systems: tr
            .systems
            .iter()
            .map(|s| SystemJson {
                id: s.id.to_string(),
                feasible: s.feasible,
            })
            .collect(),
    }
}

pub fn decision_json(d: &Decision, with_trace: bool, timing_ms: f64) -> DecisionJson {
    DecisionJson {
        problem: d.problem.as_str(),
        answer: d.answer,
        branch: d.branch.as_str(),
        trace: with_trace.then(|| trace_json(d)),
        timing_ms,
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn index_list(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn decision_text(d: &Decision, with_trace: bool, timing_ms: f64) -> String {
    let mut out = String::new();
    writeln!(out, "problem: {}", d.problem.as_str()).unwrap();
    writeln!(out, "answer: {}", yes_no(d.answer)).unwrap();
    writeln!(out, "branch: {}", d.branch).unwrap();
    if with_trace {
        let tr = &d.trace;
        writeln!(
            out,
            "removed redundant: {}",
            index_list(&tr.removed_redundant)
        )
        .unwrap();
        writeln!(out, "commutators:").unwrap();
        for i in 0..tr.commutators.len() {
            let row: Vec<String> = (0..tr.commutators.len())
                .map(|j| format_gaussian(tr.commutators.get(i, j)))
                .collect();
            writeln!(out, "  [{}]", row.join(", ")).unwrap();
        }
        if let Some(a) = &tr.angle_class {
            let j = angle_json(a);
            let pairs: Vec<String> = j
                .pairs
                .iter()
                .map(|p| format!("({},{})", p[0], p[1]))
                .collect();
            writeln!(out, "angle class: {} {}", j.tag, pairs.join(" ")).unwrap();
        }
        if let Some(v) = &tr.gamma_line_rep {
            writeln!(out, "line representative: {}", format_gaussian(v)).unwrap();
        }
        if let Some((i, j)) = tr.feasible_tij_pair {
            writeln!(out, "feasible T pair: ({},{})", i + 1, j + 1).unwrap();
        }
        if let Some((h1, h2)) = tr.half_plane_occupancy {
            writeln!(
                out,
                "half-plane occupancy: H1={} H2={}",
                yes_no(h1),
                yes_no(h2)
            )
            .unwrap();
        }
        if let Some(c) = &tr.gamma_usable_set {
            writeln!(out, "usable on line: {}", index_list(c)).unwrap();
        }
        if let Some(v) = tr.final_system_verdict {
            writeln!(
                out,
                "final system: {}",
                if v { "feasible" } else { "infeasible" }
            )
            .unwrap();
        }
        if let Some(w) = &tr.witness {
            let parts: Vec<String> = w.iter().map(ToString::to_string).collect();
            writeln!(out, "witness counts: ({})", parts.join(", ")).unwrap();
        }
        for s in &tr.systems {
            writeln!(
                out,
                "system {}: {}",
                s.id,
                if s.feasible { "feasible" } else { "infeasible" }
            )
            .unwrap();
        }
    }
    writeln!(out, "time: {timing_ms:.3} ms").unwrap();
    out
}

#[derive(Serialize)]
pub struct OracleJson {
    problem: &'static str,
    answer: bool,
    branch: &'static str,
    max_len: usize,
    budget: usize,
    states: usize,
    search: &'static str,
    witness: Option<Vec<usize>>,
    audit: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    inverse_words: Option<Vec<Vec<usize>>>,
    timing_ms: f64,
}

pub struct OracleRun<'a> {
    pub decision: &'a Decision,
    pub search: &'a Search<Vec<usize>>,
    pub audit: &'a AuditReport,
    pub budget: usize,
    pub show_inverses: bool,
}

fn word(w: &[usize]) -> Vec<usize> {
    w.iter().copied().map(one_based).collect()
}

fn search_tag(s: &Search<Vec<usize>>) -> &'static str {
    match s {
        Search::Found(_) => "found",
        Search::Absent => "absent",
        Search::Inconclusive => "inconclusive",
    }
}

pub fn oracle_json(run: &OracleRun<'_>, timing_ms: f64) -> OracleJson {
    OracleJson {
        problem: run.decision.problem.as_str(),
        answer: run.decision.answer,
        branch: run.decision.branch.as_str(),
        max_len: run.audit.max_len,
        budget: run.budget,
        states: run.audit.states,
        search: search_tag(run.search),
        witness: run.search.found().map(|w| word(w)),
        audit: run.audit.verdict.as_str(),
        inverse_words: run
            .show_inverses
            .then(|| run.audit.witnesses.iter().map(|w| word(w)).collect()),
        timing_ms,
    }
}

pub fn oracle_text(run: &OracleRun<'_>, timing_ms: f64) -> String {
    let j = oracle_json(run, timing_ms);
    let mut out = String::new();
    writeln!(out, "problem: {}", j.problem).unwrap();
    writeln!(out, "decider: {} ({})", yes_no(j.answer), j.branch).unwrap();
    writeln!(
        out,
        "search: {} up to length {} ({} states, budget {})",
        j.search, j.max_len, j.states, j.budget
    )
    .unwrap();
    if let Some(w) = &j.witness {
        let parts: Vec<String> = w.iter().map(ToString::to_string).collect();
        writeln!(out, "identity word: {}", parts.join(" ")).unwrap();
    }
    if let Some(ws) = &j.inverse_words {
        for (k, w) in ws.iter().enumerate() {
            let parts: Vec<String> = w.iter().map(ToString::to_string).collect();
            writeln!(out, "inverse of {}: {}", k + 1, parts.join(" ")).unwrap();
        }
    }
    writeln!(out, "audit: {}", j.audit).unwrap();
    writeln!(out, "time: {timing_ms:.3} ms").unwrap();
    out
}
