//! Report documents: structured JSON and human-readable text for every
//! command result, plus the on-disk file formats.

mod files;

pub use files::{
    load_agenda_file, load_imposed_map, load_operator_table, operator_table_json, parse_imposed_map,
    parse_operator_table, parse_set_text, resolve_agenda, save_agenda_file, save_operator_table, AgendaFile,
    LoadedAgenda,
};

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::agenda::{minimal_inconsistent_subsets, Agenda, Classification, JudgmentSet, Literal, DEFAULT_SUBSET_BUDGET};
use crate::dynamics::{CommutationSquare, DynamicReport};
use crate::error::Result;
use crate::property::{PropertyReport, Witness};
use crate::repro::ReproReport;
use crate::search::{EscapeReport, Replay, SearchOutcome, SearchVerdict};

/// What a command found, mapped onto the process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Violated,
    BudgetExhausted,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::Violated => 1,
            Outcome::BudgetExhausted => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AgendaInfo {
    pub name: Option<String>,
    pub description: Option<String>,
    pub warnings: Vec<String>,
    pub minimal_inconsistent: Vec<JudgmentSet>,
}

impl AgendaInfo {
    pub fn new(loaded: &LoadedAgenda) -> Result<Self> {
        let a = &loaded.agenda;
        let warnings = loaded
            .warnings
            .iter()
            .map(|w| {
                let kind = match w.classification {
                    Classification::Contradictory => "contradictory",
                    Classification::Tautological => "tautological",
                    Classification::Contingent => "contingent",
                };
                format!("issue `{}` is {kind}", a.issues()[w.issue])
            })
            .collect();
        Ok(AgendaInfo {
            name: loaded.name.clone(),
            description: loaded.description.clone(),
            warnings,
            minimal_inconsistent: minimal_inconsistent_subsets(a, None, DEFAULT_SUBSET_BUDGET)?,
        })
    }

    pub fn non_simple(&self) -> bool {
        self.minimal_inconsistent.iter().any(|s| s.len() >= 3)
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub rule: String,
    pub n: usize,
    pub required: String,
    pub outcome: SearchOutcome,
    pub replay: Option<Replay>,
}

/// The body of a report document.
#[derive(Debug, Clone)]
pub enum Report {
    AgendaInfo(AgendaInfo),
    RuleProperties {
        rule: String,
        n: usize,
        reports: Vec<PropertyReport>,
    },
    OperatorProperties {
        operator: String,
        reports: Vec<PropertyReport>,
    },
    Dynamic(DynamicReport),
    Search(SearchResult),
    Escapes(EscapeReport),
    Repro(ReproReport),
}

impl Report {
    pub fn kind(&self) -> &'static str {
        match self {
            Report::AgendaInfo(_) => "agenda_info",
            Report::RuleProperties { .. } => "rule_properties",
            Report::OperatorProperties { .. } => "operator_properties",
            Report::Dynamic(_) => "dynamic_rationality",
            Report::Search(_) => "operator_search",
            Report::Escapes(_) => "escape_routes",
            Report::Repro(_) => "example_reproduction",
        }
    }

    pub fn outcome(&self) -> Outcome {
        let ok = |b: bool| if b { Outcome::Ok } else { Outcome::Violated };
        match self {
            Report::AgendaInfo(_) => Outcome::Ok,
            Report::RuleProperties { reports, .. } | Report::OperatorProperties { reports, .. } => {
                ok(reports.iter().all(PropertyReport::holds))
            }
            Report::Dynamic(r) => ok(r.is_dynamically_rational()),
            Report::Search(s) => match s.outcome.verdict {
                SearchVerdict::BudgetExhausted => Outcome::BudgetExhausted,
                _ => ok(s.replay.as_ref().is_none_or(Replay::verified)),
            },
            Report::Escapes(e) => ok(e.consistent()),
            Report::Repro(r) => ok(r.passed()),
        }
    }

    pub fn to_json(&self, agenda: &Agenda) -> Value {
        let a = agenda;
        match self {
            Report::AgendaInfo(info) => {
                let literals: Vec<Value> = a
                    .literals()
                    .map(|l| json!({"literal": a.literal_name(l), "classification": a.classify(l)}))
                    .collect();
                json!({
                    "name": info.name,
                    "description": info.description,
                    "backend": match a.backend() {
                        crate::agenda::Backend::Valuations => "valuations",
                        crate::agenda::Backend::Formulas { .. } => "formulas",
                    },
                    "valuations": a.valuation_strings(),
                    "rational_sets": a.rational_sets().len(),
                    "literals": literals,
                    "minimal_inconsistent_subsets": info.minimal_inconsistent.iter().map(|&s| a.render(s)).collect::<Vec<_>>(),
                    "non_simple": info.non_simple(),
                    "warnings": info.warnings,
                })
            }
            Report::RuleProperties { rule, n, reports } => json!({
                "rule": rule,
                "n": n,
                "holds": reports.iter().all(PropertyReport::holds),
                "properties": reports.iter().map(|r| property_json(a, r)).collect::<Vec<_>>(),
            }),
            Report::OperatorProperties { operator, reports } => json!({
                "operator": operator,
                "holds": reports.iter().all(PropertyReport::holds),
                "properties": reports.iter().map(|r| property_json(a, r)).collect::<Vec<_>>(),
            }),
            Report::Dynamic(r) => json!({
                "rule": r.rule,
                "operator": r.operator,
                "n": r.n,
                "dynamically_rational": r.is_dynamically_rational(),
                "squares": r.squares,
                "commuting": r.commuting,
                "violations": r.violations,
                "vacuous": r.vacuous,
                "witnesses": r.witnesses.iter().map(|s| square_json(a, s)).collect::<Vec<_>>(),
            }),
            Report::Search(s) => {
                let o = &s.outcome;
                let mut body = json!({
                    "rule": s.rule,
                    "n": s.n,
                    "required": s.required,
                    "verdict": o.verdict.as_str(),
                    "stats": {
                        "nodes": o.stats.nodes,
                        "propagations": o.stats.propagations,
                        "max_depth": o.stats.max_depth,
                        "components": o.stats.components,
                    },
                });
                match &o.verdict {
                    SearchVerdict::Sat(table) => {
                        body["witness"] = operator_table_json(a, table)["records"].clone();
                    }
                    SearchVerdict::Unsat { literal } => body["failed_literal"] = json!(a.literal_name(*literal)),
                    SearchVerdict::BudgetExhausted => {}
                }
                if let Some(r) = &s.replay {
                    body["replay"] = json!({
                        "verified": r.verified(),
                        "squares": r.dynamic.squares,
                        "violations": r.dynamic.violations,
                        "vacuous": r.dynamic.vacuous,
                        "properties": r.properties.iter().map(|p| json!({"property": p.property, "verdict": p.verdict.as_str()})).collect::<Vec<_>>(),
                    });
                }
                body
            }
            Report::Escapes(e) => json!({
                "n": e.n,
                "consistent": e.consistent(),
                "contradictions": e.contradictions().len(),
                "rows": e.rows.iter().map(|r| json!({
                    "route": r.route.as_str(),
                    "rule": r.rule,
                    "operator": r.operator,
                    "precondition": r.route.precondition(),
                    "precondition_holds": r.precondition_holds,
                    "squares": r.squares,
                    "violations": r.violations,
                    "vacuous": r.vacuous,
                    "consistent": r.consistent(),
                })).collect::<Vec<_>>(),
            }),
            Report::Repro(r) => json!({
                "operator": r.operator,
                "passed": r.passed(),
                "first_mismatch": r.first_mismatch().map(|c| c.label),
                "cells": r.cells.iter().map(|c| json!({
                    "cell": c.label,
                    "expected": c.expected,
                    "actual": c.actual,
                    "matches": c.matches(),
                })).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn to_human(&self, agenda: &Agenda) -> String {
        let a = agenda;
        let mut out = String::new();
        let o = &mut out;
        match self {
            Report::AgendaInfo(info) => {
                if let Some(name) = &info.name {
                    let _ = writeln!(o, "agenda {name}");
                }
                if let Some(d) = &info.description {
                    let _ = writeln!(o, "  {d}");
                }
                let _ = writeln!(o, "issues: {}", a.issues().join(", "));
                let _ = writeln!(o, "valuations ({}): {}", a.valuation_count(), a.valuation_strings().join(" "));
                let _ = writeln!(o, "rational judgment sets: {}", a.rational_sets().len());
                for l in a.literals() {
                    let _ = writeln!(o, "  {:<16} {}", a.literal_name(l), format!("{:?}", a.classify(l)).to_lowercase());
                }
                let _ = writeln!(o, "minimal inconsistent subsets:");
                for &s in &info.minimal_inconsistent {
                    let _ = writeln!(o, "  {}", a.render(s));
                }
                let _ = writeln!(o, "non-simple: {}", yes_no(info.non_simple()));
                for w in &info.warnings {
                    let _ = writeln!(o, "warning: {w}");
                }
            }
            Report::RuleProperties { rule, n, reports } => {
                let _ = writeln!(o, "rule {rule}, n = {n}");
                for r in reports {
                    property_human(o, a, r);
                }
            }
            Report::OperatorProperties { operator, reports } => {
                let _ = writeln!(o, "operator {operator}");
                for r in reports {
                    property_human(o, a, r);
                }
            }
            Report::Dynamic(r) => {
                let _ = writeln!(o, "rule {}, operator {}, n = {}", r.rule, r.operator, r.n);
                let _ = writeln!(
                    o,
                    "squares {}: commuting {}, violated {}, vacuous {}",
                    r.squares, r.commuting, r.violations, r.vacuous
                );
                let verdict = if r.is_dynamically_rational() { "dynamically rational" } else { "NOT dynamically rational" };
                let _ = writeln!(o, "{verdict}");
                for (i, sq) in r.witnesses.iter().enumerate() {
                    let _ = writeln!(o, "\nwitness {}:", i + 1);
                    square_human(o, a, sq);
                }
                if (r.witnesses.len() as u64) < r.violations {
                    let _ = writeln!(o, "\n({} more violations not shown)", r.violations - r.witnesses.len() as u64);
                }
            }
            Report::Search(s) => {
                let st = &s.outcome.stats;
                let _ = writeln!(o, "rule {}, n = {}, required: {}", s.rule, s.n, s.required);
                let _ = writeln!(o, "verdict: {}", s.outcome.verdict.as_str().to_uppercase());
                let _ = writeln!(
                    o,
                    "nodes {}, propagations {}, max depth {}, components {}",
                    st.nodes, st.propagations, st.max_depth, st.components
                );
                match &s.outcome.verdict {
                    SearchVerdict::Unsat { literal } => {
                        let _ = writeln!(o, "no operator exists when learning {}", a.literal_name(*literal));
                    }
                    SearchVerdict::Sat(table) => {
                        let _ = writeln!(o, "witness table ({} entries):", table.len());
                        for (j, p, r) in table.entries() {
                            let _ = writeln!(o, "  {} | {} = {}", a.render(j), a.literal_name(p), a.render(r));
                        }
                    }
                    SearchVerdict::BudgetExhausted => {
                        let _ = writeln!(o, "node budget exhausted; no verdict");
                    }
                }
                if let Some(r) = &s.replay {
                    let _ = writeln!(o, "replay: {}", if r.verified() { "verified" } else { "FAILED" });
                }
            }
            Report::Escapes(e) => {
                let _ = writeln!(o, "n = {}", e.n);
                let _ = writeln!(
                    o,
                    "{:<28} {:<22} {:<14} {:>10} {:>8}  consistent",
                    "route", "rule", "precondition", "violations", "vacuous"
                );
                for r in &e.rows {
                    let _ = writeln!(
                        o,
                        "{:<28} {:<22} {:<14} {:>10} {:>8}  {}",
                        r.route.as_str(),
                        r.rule,
                        if r.precondition_holds { "holds" } else { "fails" },
                        r.violations,
                        r.vacuous,
                        yes_no(r.consistent())
                    );
                }
                let _ = writeln!(o, "contradictions: {}", e.contradictions().len());
            }
            Report::Repro(r) => {
                let _ = writeln!(o, "operator {}", r.operator);
                for c in &r.cells {
                    let mark = if c.matches() { "ok  " } else { "FAIL" };
                    let _ = writeln!(o, "{mark} {:<27} {}", c.label, c.actual);
                    if !c.matches() {
                        let _ = writeln!(o, "     {:<27} {}", "expected", c.expected);
                    }
                }
                match r.first_mismatch() {
                    None => {
                        let _ = writeln!(o, "reproduction passed");
                    }
                    Some(c) => {
                        let _ = writeln!(o, "reproduction FAILED at {}", c.label);
                    }
                }
            }
        }
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// A set as its literal list plus a compact per-issue code.
pub fn set_json(agenda: &Agenda, set: JudgmentSet) -> Value {
    json!({
        "literals": agenda.render(set),
        "bits": set.to_issue_string(agenda.k()),
    })
}

fn profile_json(agenda: &Agenda, profile: &[JudgmentSet]) -> Value {
    Value::Array(profile.iter().map(|&s| set_json(agenda, s)).collect())
}

fn opt_set_json(agenda: &Agenda, set: Option<JudgmentSet>) -> Value {
    set.map_or(Value::Null, |s| set_json(agenda, s))
}

fn lit_json(agenda: &Agenda, lit: Literal) -> Value {
    json!(agenda.literal_name(lit))
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

pub fn witness_json(agenda: &Agenda, w: &Witness) -> Value {
    let a = agenda;
    match w {
        Witness::RestrictedDomain { domain_size } => json!({"kind": "restricted_domain", "domain_size": domain_size}),
        Witness::ConstantOutput { output } => json!({"kind": "constant_output", "output": set_json(a, *output)}),
        Witness::Output { profile, output } => json!({
            "kind": "output",
            "profile": profile_json(a, profile),
            "output": set_json(a, *output),
        }),
        Witness::Monotonicity {
            profile,
            literal,
            member,
            replacement,
            output_after,
        } => json!({
            "kind": "monotonicity",
            "profile": profile_json(a, profile),
            "literal": lit_json(a, *literal),
            "individual": member + 1,
            "replacement": set_json(a, *replacement),
            "output_after": set_json(a, *output_after),
        }),
        Witness::Systematicity { coalition, first, second } => {
            let side = |(p, l, acc): &(Vec<JudgmentSet>, Literal, bool)| {
                json!({"profile": profile_json(a, p), "literal": lit_json(a, *l), "accepted": acc})
            };
            json!({
                "kind": "systematicity",
                "coalition": one_based(coalition),
                "first": side(first),
                "second": side(second),
            })
        }
        Witness::Oligarchy { members } => json!({"kind": "oligarchy", "members": one_based(members)}),
        Witness::Unanimity { profile, literal, output } => json!({
            "kind": "unanimity",
            "profile": profile_json(a, profile),
            "literal": literal.map_or(Value::Null, |l| lit_json(a, l)),
            "output": set_json(a, *output),
        }),
        Witness::Revision { set, literal, result } => json!({
            "kind": "revision",
            "set": set_json(a, *set),
            "literal": lit_json(a, *literal),
            "result": opt_set_json(a, *result),
        }),
    }
}

pub fn property_json(agenda: &Agenda, r: &PropertyReport) -> Value {
    json!({
        "property": r.property,
        "verdict": r.verdict.as_str(),
        "examined": r.examined,
        "violations": r.violations,
        "witnesses": r.witnesses.iter().map(|w| witness_json(agenda, w)).collect::<Vec<_>>(),
    })
}

pub fn square_json(agenda: &Agenda, sq: &CommutationSquare) -> Value {
    let a = agenda;
    json!({
        "profile": profile_json(a, &sq.profile),
        "learnt": lit_json(a, sq.learnt),
        "collective": set_json(a, sq.collective),
        "collective_revised": opt_set_json(a, sq.collective_revised),
        "revised_profile": sq.revised_profile.iter().map(|&s| opt_set_json(a, s)).collect::<Vec<_>>(),
        "revised_collective": opt_set_json(a, sq.revised_collective),
        "commutes": sq.commutes,
        "vacuous": sq.vacuous,
    })
}

fn render_profile(agenda: &Agenda, profile: &[JudgmentSet]) -> String {
    profile.iter().map(|&s| agenda.render(s)).collect::<Vec<_>>().join("  ")
}

fn render_opt(agenda: &Agenda, s: Option<JudgmentSet>) -> String {
    s.map_or_else(|| "undefined".to_string(), |s| agenda.render(s))
}

fn square_human(o: &mut String, a: &Agenda, sq: &CommutationSquare) {
    let revised: Vec<String> = sq.revised_profile.iter().map(|&s| render_opt(a, s)).collect();
    let p = a.literal_name(sq.learnt);
    let _ = writeln!(o, "  profile              {}", render_profile(a, &sq.profile));
    let _ = writeln!(o, "  learn                {p}");
    let _ = writeln!(o, "  revised profile      {}", revised.join("  "));
    let _ = writeln!(o, "  F(revised profile)   {}", render_opt(a, sq.revised_collective));
    let _ = writeln!(o, "  F(profile)           {}", a.render(sq.collective));
    let _ = writeln!(o, "  F(profile)|{p:<9} {}", render_opt(a, sq.collective_revised));
}

fn witness_human(a: &Agenda, w: &Witness) -> String {
    match w {
        Witness::RestrictedDomain { domain_size } => format!("domain has only {domain_size} profiles"),
        Witness::ConstantOutput { output } => format!("every profile yields {}", a.render(*output)),
        Witness::Output { profile, output } => format!("{} -> {}", render_profile(a, profile), a.render(*output)),
        Witness::Monotonicity {
            profile,
            literal,
            member,
            replacement,
            output_after,
        } => format!(
            "{} accepts {}; individual {} switching to {} gives {}",
            render_profile(a, profile),
            a.literal_name(*literal),
            member + 1,
            a.render(*replacement),
            a.render(*output_after)
        ),
        Witness::Systematicity { coalition, first, second } => {
            let side = |(p, l, acc): &(Vec<JudgmentSet>, Literal, bool)| {
                format!(
                    "{} {} at {}",
                    a.literal_name(*l),
                    if *acc { "accepted" } else { "rejected" },
                    render_profile(a, p)
                )
            };
            format!("supporters {:?}: {} but {}", one_based(coalition), side(first), side(second))
        }
        Witness::Oligarchy { members } => format!("rule is the intersection over {:?}", one_based(members)),
        Witness::Unanimity { profile, literal, output } => match literal {
            Some(l) => format!(
                "{} unanimous at {} but output {}",
                a.literal_name(*l),
                render_profile(a, profile),
                a.render(*output)
            ),
            None => format!("unanimous profile {} yields {}", render_profile(a, profile), a.render(*output)),
        },
        Witness::Revision { set, literal, result } => format!(
            "{} | {} = {}",
            a.render(*set),
            a.literal_name(*literal),
            render_opt(a, *result)
        ),
    }
}

fn property_human(o: &mut String, a: &Agenda, r: &PropertyReport) {
    let _ = writeln!(
        o,
        "  {:<40} {:<9} ({} examined, {} violations)",
        r.property,
        r.verdict.as_str(),
        r.examined,
        r.violations
    );
    for w in &r.witnesses {
        let _ = writeln!(o, "      {}", witness_human(a, w));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Structured,
}

/// A command's full output.
#[derive(Debug, Clone)]
pub struct ReportDocument<'a> {
    pub command: Vec<String>,
    pub agenda: &'a Agenda,
    pub report: Report,
    pub wall_clock_ms: u64,
}

impl ReportDocument<'_> {
    /// Structured form; every field but `wall_clock_ms` is deterministic.
    pub fn to_json(&self) -> Value {
        json!({
            "tool": {"name": "dynjudge", "version": env!("CARGO_PKG_VERSION")},
            "command": self.command,
            "agenda": {
                "fingerprint": self.agenda.fingerprint(),
                "issues": self.agenda.issues(),
            },
            "kind": self.report.kind(),
            "outcome": match self.report.outcome() {
                Outcome::Ok => "ok",
                Outcome::Violated => "violated",
                Outcome::BudgetExhausted => "budget_exhausted",
            },
            "report": self.report.to_json(self.agenda),
            "wall_clock_ms": self.wall_clock_ms,
        })
    }
}

pub fn emit_report(doc: &ReportDocument<'_>, format: Format) -> String {
    match format {
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(&doc.to_json()).expect("reports always serialize");
            s.push('\n');
            s
        }
        Format::Human => doc.report.to_human(doc.agenda),
    }
}
