//! Agendas, judgment sets, and the consistency semantics.
//!
//! Consistency is decided by an explicit set of admissible valuations: a set
//! of literals is consistent iff some valuation agrees with all of them. The
//! formula backend compiles a list of propositional formulas into such a set
//! under the classical (material) reading; the table backend takes the set
//! directly, which is how non-material conditionals are declared.

mod formula;
mod judgment;
mod mis;

pub use formula::{parse_formula, Formula};
pub use judgment::{JudgmentSet, Literal, Polarity, MAX_ISSUES};
pub use mis::{is_non_simple, minimal_inconsistent_subsets, DEFAULT_SUBSET_BUDGET};

use std::collections::BTreeSet;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Most atoms a formula agenda may mention.
pub const MAX_ATOMS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Contradictory,
    Tautological,
    Contingent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JudgmentStatus {
    pub complete: bool,
    pub consistent: bool,
    pub rational: bool,
}

/// Where an agenda's valuation set came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    Valuations,
    Formulas {
        atoms: Vec<String>,
        formulas: Vec<Formula>,
    },
}

/// An issue whose positive proposition is tautological or contradictory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IssueWarning {
    pub issue: usize,
    pub classification: Classification,
}

/// Result of compiling formulas into an agenda.
#[derive(Debug, Clone)]
pub struct Compilation {
    pub agenda: Agenda,
    pub warnings: Vec<IssueWarning>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agenda {
    issues: Vec<String>,
    /// Sorted, duplicate-free; bit `k - 1 - i` holds issue `i`.
    valuations: Vec<u32>,
    /// Complete consistent set of each valuation, parallel to `valuations`.
    rational: Vec<JudgmentSet>,
    /// `(mask, index into rational)`, sorted by mask.
    lookup: Vec<(u64, usize)>,
    backend: Backend,
}

fn normalize_label(s: &str) -> String {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .replace('→', "->")
        .replace('¬', "~")
        .replace('∧', "&")
        .replace('∨', "|")
}

fn validate_labels(labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::InvalidAgenda("an agenda needs at least one issue".into()));
    }
    if labels.len() > MAX_ISSUES {
        return Err(Error::InvalidAgenda(format!(
            "{} issues exceeds the limit of {MAX_ISSUES}",
            labels.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for l in labels {
        if l.trim().is_empty() {
            return Err(Error::InvalidAgenda("empty issue label".into()));
        }
        if l.contains([',', '{', '}']) {
            return Err(Error::InvalidAgenda(format!(
                "issue label `{l}` contains a reserved character"
            )));
        }
        if !seen.insert(normalize_label(l)) {
            return Err(Error::InvalidAgenda(format!("duplicate issue label `{l}`")));
        }
    }
    Ok(())
}

impl Agenda {
    fn build(issues: Vec<String>, mut valuations: Vec<u32>, backend: Backend) -> Result<Self> {
        validate_labels(&issues)?;
        valuations.sort_unstable();
        valuations.dedup();
        if valuations.is_empty() {
            return Err(Error::EmptyValuations);
        }
        let k = issues.len();
        let rational: Vec<JudgmentSet> = valuations
            .iter()
            .map(|&v| valuation_to_set(v, k))
            .collect();
        let mut lookup: Vec<(u64, usize)> = rational
            .iter()
            .enumerate()
            .map(|(i, j)| (j.bits(), i))
            .collect();
        lookup.sort_unstable();
        Ok(Agenda {
            issues,
            valuations,
            rational,
            lookup,
            backend,
        })
    }

    /// Table backend: labels plus valuation strings (character `i` is issue
    /// `i`'s accepted polarity, `1` = positive). Duplicates are dropped.
    pub fn from_valuations<S: AsRef<str>, V: AsRef<str>>(labels: &[S], valuations: &[V]) -> Result<Self> {
        let issues: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        validate_labels(&issues)?;
        if valuations.is_empty() {
            return Err(Error::EmptyValuations);
        }
        let k = issues.len();
        let vals = valuations
            .iter()
            .map(|s| parse_valuation(s.as_ref(), k))
            .collect::<Result<Vec<_>>>()?;
        Agenda::build(issues, vals, Backend::Valuations)
    }

    /// Formula backend: valuations are the distinct truth-value vectors of the
    /// formulas over all assignments to `atoms` (or the atoms the formulas use).
    pub fn compile(formulas: &[Formula], atoms: Option<&[String]>) -> Result<Compilation> {
        let labels: Vec<String> = formulas.iter().map(|f| f.to_string()).collect();
        Self::compile_labelled(labels, formulas.to_vec(), atoms)
    }

    /// Parses and compiles formula texts; the texts become the issue labels.
    pub fn from_formula_texts<S: AsRef<str>>(texts: &[S], atoms: Option<&[String]>) -> Result<Compilation> {
        let formulas = texts
            .iter()
            .map(|t| parse_formula(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let labels = texts.iter().map(|t| t.as_ref().trim().to_string()).collect();
        Self::compile_labelled(labels, formulas, atoms)
    }

    fn compile_labelled(labels: Vec<String>, formulas: Vec<Formula>, atoms: Option<&[String]>) -> Result<Compilation> {
        if formulas.is_empty() {
            return Err(Error::InvalidAgenda("an agenda needs at least one issue".into()));
        }
        let used: BTreeSet<String> = formulas.iter().flat_map(|f| f.atoms()).collect();
        let atoms: Vec<String> = match atoms {
            Some(declared) => {
                let mut seen = BTreeSet::new();
                for a in declared {
                    if !is_atom_name(a) {
                        return Err(Error::InvalidAgenda(format!("invalid atom name `{a}`")));
                    }
                    if !seen.insert(a.as_str()) {
                        return Err(Error::InvalidAgenda(format!("duplicate atom `{a}`")));
                    }
                }
                if let Some(missing) = used.iter().find(|a| !seen.contains(a.as_str())) {
                    return Err(Error::InvalidAgenda(format!("atom `{missing}` is not declared")));
                }
                declared.to_vec()
            }
            None => used.into_iter().collect(),
        };
        if atoms.len() > MAX_ATOMS {
            return Err(Error::resource("formula atoms", atoms.len() as u128, MAX_ATOMS as u128));
        }
        let k = formulas.len();
        validate_labels(&labels)?;
        let mut vals = Vec::with_capacity(1 << atoms.len());
        for assignment in 0u32..(1u32 << atoms.len()) {
            let v = formulas.iter().enumerate().fold(0u32, |acc, (i, f)| {
                if f.eval_indexed(&atoms, assignment) {
                    acc | 1 << (k - 1 - i)
                } else {
                    acc
                }
            });
            vals.push(v);
        }
        let agenda = Agenda::build(labels, vals, Backend::Formulas { atoms, formulas })?;
        let warnings = (0..k)
            .filter_map(|issue| {
                let c = agenda.classify(Literal::positive(issue));
                (c != Classification::Contingent).then_some(IssueWarning { issue, classification: c })
            })
            .collect();
        Ok(Compilation { agenda, warnings })
    }

    pub fn k(&self) -> usize {
        self.issues.len()
    }

    pub fn issues(&self) -> &[String] {
        &self.issues
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    /// All `2k` literals in index order.
    pub fn literals(&self) -> impl Iterator<Item = Literal> + Clone {
        (0..2 * self.k()).map(Literal::from_index)
    }

    pub fn full_set(&self) -> JudgmentSet {
        JudgmentSet::from_bits(if self.k() == MAX_ISSUES { u64::MAX } else { (1u64 << (2 * self.k())) - 1 })
    }

    pub fn valuation_count(&self) -> usize {
        self.valuations.len()
    }

    /// Valuation strings in canonical (lexicographic) order.
    pub fn valuation_strings(&self) -> Vec<String> {
        self.valuations
            .iter()
            .map(|&v| valuation_to_string(v, self.k()))
            .collect()
    }

    /// Classically rational judgment sets, one per valuation, canonical order.
    pub fn rational_sets(&self) -> &[JudgmentSet] {
        &self.rational
    }

    /// Position of `set` in [`rational_sets`](Self::rational_sets), if rational.
    pub fn rational_index(&self, set: JudgmentSet) -> Option<usize> {
        self.lookup
            .binary_search_by_key(&set.bits(), |&(m, _)| m)
            .ok()
            .map(|i| self.lookup[i].1)
    }

    pub fn is_rational(&self, set: JudgmentSet) -> bool {
        self.rational_index(set).is_some()
    }

    pub fn is_consistent(&self, set: JudgmentSet) -> bool {
        self.rational.iter().any(|&r| set.is_subset(r))
    }

    pub fn is_complete(&self, set: JudgmentSet) -> bool {
        (0..self.k()).all(|i| set.on_issue(i) != 0)
    }

    pub fn judgment_status(&self, set: JudgmentSet) -> JudgmentStatus {
        let complete = self.is_complete(set);
        let consistent = self.is_consistent(set);
        JudgmentStatus {
            complete,
            consistent,
            rational: complete && consistent,
        }
    }

    pub fn classify(&self, lit: Literal) -> Classification {
        let accepting = self.rational.iter().filter(|r| r.contains(lit)).count();
        if accepting == 0 {
            Classification::Contradictory
        } else if accepting == self.rational.len() {
            Classification::Tautological
        } else {
            Classification::Contingent
        }
    }

    pub fn is_contradictory(&self, lit: Literal) -> bool {
        self.classify(lit) == Classification::Contradictory
    }

    /// First rational set (canonical order) containing `lit`.
    pub fn first_rational_containing(&self, lit: Literal) -> Option<JudgmentSet> {
        self.rational.iter().copied().find(|r| r.contains(lit))
    }

    /// Human-readable literal: the label, or `¬label` / `¬(label)`.
    pub fn literal_name(&self, lit: Literal) -> String {
        let label = &self.issues[lit.issue()];
        if lit.is_positive() {
            label.clone()
        } else if is_atom_name(label) {
            format!("¬{label}")
        } else {
            format!("¬({label})")
        }
    }

    /// `{a, ¬b, c}` in literal order.
    pub fn render(&self, set: JudgmentSet) -> String {
        let parts: Vec<String> = set.literals().map(|l| self.literal_name(l)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Parses a literal name. Accepts `¬`/`~` for negation, optional
    /// parentheses, and `→` for `->`; whitespace is ignored.
    pub fn parse_literal(&self, text: &str) -> Result<Literal> {
        let norm = normalize_label(text);
        if let Some(i) = self.issues.iter().position(|l| normalize_label(l) == norm) {
            return Ok(Literal::positive(i));
        }
        if let Some(rest) = norm.strip_prefix('~') {
            let inner = strip_parens(rest);
            if let Some(i) = self
                .issues
                .iter()
                .position(|l| normalize_label(l) == inner || normalize_label(l) == rest)
            {
                return Ok(Literal::negative(i));
            }
        }
        Err(Error::InvalidJudgmentSet(format!("unknown literal `{}`", text.trim())))
    }

    /// Parses `{lit, lit, ...}` (braces optional).
    pub fn parse_set(&self, text: &str) -> Result<JudgmentSet> {
        let t = text.trim();
        let t = t.strip_prefix('{').unwrap_or(t);
        let t = t.strip_suffix('}').unwrap_or(t);
        if t.trim().is_empty() {
            return Ok(JudgmentSet::EMPTY);
        }
        t.split(',')
            .map(|part| self.parse_literal(part))
            .collect::<Result<Vec<_>>>()
            .map(JudgmentSet::from_literals)
    }

    /// Parses either a `k`-character valuation string (a complete set) or a
    /// `2k`-character bit-pair string.
    pub fn parse_bits(&self, text: &str) -> Result<JudgmentSet> {
        let k = self.k();
        let t = text.trim();
        if !t.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::InvalidJudgmentSet(format!("`{t}` is not a bit string")));
        }
        if t.len() == k {
            Ok(valuation_to_set(parse_valuation(t, k)?, k))
        } else if t.len() == 2 * k {
            let bits = t
                .bytes()
                .enumerate()
                .fold(0u64, |acc, (i, b)| if b == b'1' { acc | 1 << i } else { acc });
            Ok(JudgmentSet::from_bits(bits))
        } else {
            Err(Error::InvalidJudgmentSet(format!(
                "`{t}` has length {}, expected {k} or {}",
                t.len(),
                2 * k
            )))
        }
    }

    /// Content hash over issue labels and the valuation set.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for label in &self.issues {
            h.update(b"issue:");
            h.update(label.as_bytes());
            h.update(b"\n");
        }
        for v in self.valuation_strings() {
            h.update(b"valuation:");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }
}

fn strip_parens(s: &str) -> &str {
    s.strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .unwrap_or(s)
}

pub(crate) fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
}

fn parse_valuation(s: &str, k: usize) -> Result<u32> {
    if s.len() != k {
        return Err(Error::InvalidAgenda(format!(
            "valuation `{s}` has length {}, expected {k}",
            s.len()
        )));
    }
    s.bytes().try_fold(0u32, |acc, b| match b {
        b'0' => Ok(acc << 1),
        b'1' => Ok(acc << 1 | 1),
        _ => Err(Error::InvalidAgenda(format!("valuation `{s}` is not a bit string"))),
    })
}

fn valuation_to_string(v: u32, k: usize) -> String {
    (0..k)
        .map(|i| if v >> (k - 1 - i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn valuation_to_set(v: u32, k: usize) -> JudgmentSet {
    JudgmentSet::from_literals((0..k).map(|i| {
        if v >> (k - 1 - i) & 1 == 1 {
            Literal::positive(i)
        } else {
            Literal::negative(i)
        }
    }))
}
