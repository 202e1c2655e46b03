use std::collections::BTreeMap;
use std::fmt;

use crate::agenda::{Agenda, JudgmentSet, Literal};
use crate::error::{Error, Result};

/// Tie-breaking for distance-based revision: among equally distant
/// candidates, prefer those that leave the protected issues unchanged, in
/// priority order; remaining ties go to the canonically first candidate.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TiePolicy {
    protected: Vec<usize>,
}

/// Named tie policies for conditional agendas whose last issue is the conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePreset {
    /// Protect the premises (every issue but the last) and let the conclusion move.
    #[default]
    Example,
    /// Protect the conclusion (the last issue) and let the premises move.
    Prose,
}

impl std::str::FromStr for TiePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "example" => Ok(TiePreset::Example),
            "prose" => Ok(TiePreset::Prose),
            other => Err(Error::InvalidOperator {
                spec: other.to_string(),
                reason: "tie policy must be `example` or `prose`".into(),
            }),
        }
    }
}

impl TiePolicy {
    pub fn new(agenda: &Agenda, protected: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; agenda.k()];
        for &i in &protected {
            if i >= agenda.k() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidOperator {
                    spec: "hamming".into(),
                    reason: format!("protected issue list is not a permutation of a subset of issues: {protected:?}"),
                });
            }
        }
        Ok(TiePolicy { protected })
    }

    pub fn premises(agenda: &Agenda) -> Self {
        TiePolicy {
            protected: (0..agenda.k().saturating_sub(1)).collect(),
        }
    }

    pub fn conclusion(agenda: &Agenda) -> Self {
        TiePolicy {
            protected: vec![agenda.k() - 1],
        }
    }

    pub fn preset(agenda: &Agenda, preset: TiePreset) -> Self {
        match preset {
            TiePreset::Example => Self::premises(agenda),
            TiePreset::Prose => Self::conclusion(agenda),
        }
    }

    pub fn protected(&self) -> &[usize] {
        &self.protected
    }

    fn describe(&self, agenda: &Agenda) -> String {
        self.protected
            .iter()
            .map(|&i| agenda.issues()[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrrationalVariant {
    /// `J|p = J` when `p ∈ J`, an irrational set containing `p` otherwise.
    Corrected,
    /// `J|p = J` when `p ∉ J`, an irrational set containing `p` otherwise.
    Printed,
}

/// Explicit revision values with a canonical completion for missing pairs:
/// `J` itself when `p ∈ J`, else the first rational set containing `p`,
/// else `J ∪ {p}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorTable {
    entries: BTreeMap<(JudgmentSet, Literal), JudgmentSet>,
}

impl OperatorTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, set: JudgmentSet, lit: Literal, result: JudgmentSet) {
        self.entries.insert((set, lit), result);
    }

    pub fn get(&self, set: JudgmentSet, lit: Literal) -> Option<JudgmentSet> {
        self.entries.get(&(set, lit)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries ordered by judgment set, then literal.
    pub fn entries(&self) -> impl Iterator<Item = (JudgmentSet, Literal, JudgmentSet)> + '_ {
        self.entries.iter().map(|(&(j, p), &r)| (j, p, r))
    }

    pub fn completion(agenda: &Agenda, set: JudgmentSet, lit: Literal) -> JudgmentSet {
        if set.contains(lit) {
            set
        } else {
            agenda.first_rational_containing(lit).unwrap_or(set.with(lit))
        }
    }

    pub fn revise(&self, agenda: &Agenda, set: JudgmentSet, lit: Literal) -> JudgmentSet {
        self.get(set, lit)
            .unwrap_or_else(|| Self::completion(agenda, set, lit))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorKind {
    Hamming(TiePolicy),
    Constant,
    /// Target per literal index.
    Imposed(Vec<JudgmentSet>),
    Irrationalizing {
        variant: IrrationalVariant,
        targets: Vec<JudgmentSet>,
    },
    Table(OperatorTable),
}

/// A judgment revision operator, total on all subsets of the agenda and all
/// agenda literals (distance-based revision excepted for contradictory
/// literals, where it is undefined).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevisionOperator {
    kind: OperatorKind,
    id: String,
}

impl fmt::Display for RevisionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

fn op_err(spec: &str, reason: impl Into<String>) -> Error {
    Error::InvalidOperator {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

/// Default irrational target for `lit`: the first rational set containing it
/// with the opposite of its last-issue literal added, or `{lit}` if no
/// rational set contains `lit`.
pub fn default_irrational_target(agenda: &Agenda, lit: Literal) -> JudgmentSet {
    match agenda.first_rational_containing(lit) {
        Some(r) => {
            let last = Literal::positive(agenda.k() - 1);
            let on_last = if r.contains(last) { last } else { !last };
            r.with(!on_last)
        }
        None => JudgmentSet::EMPTY.with(lit),
    }
}

impl RevisionOperator {
    pub fn hamming(agenda: &Agenda, tie: TiePolicy) -> Self {
        let id = format!("hamming:protect={}", tie.describe(agenda));
        RevisionOperator {
            kind: OperatorKind::Hamming(tie),
            id,
        }
    }

    pub fn constant() -> Self {
        RevisionOperator {
            kind: OperatorKind::Constant,
            id: "constant".into(),
        }
    }

    /// `J|p = J_p` with `J_p` the canonically first rational set containing `p`.
    pub fn imposed_canonical(agenda: &Agenda) -> Result<Self> {
        let contradictory: Vec<String> = agenda
            .literals()
            .filter(|&l| agenda.first_rational_containing(l).is_none())
            .map(|l| agenda.literal_name(l))
            .collect();
        if !contradictory.is_empty() {
            return Err(op_err(
                "imposed:canonical",
                format!("no rational judgment set contains {}", contradictory.join(", ")),
            ));
        }
        let targets = agenda
            .literals()
            .map(|l| agenda.first_rational_containing(l).expect("checked above"))
            .collect();
        Ok(RevisionOperator {
            kind: OperatorKind::Imposed(targets),
            id: "imposed:canonical".into(),
        })
    }

    /// Imposed operator from an explicit literal → target map covering every literal.
    pub fn imposed_map(agenda: &Agenda, map: &BTreeMap<Literal, JudgmentSet>, id: &str) -> Result<Self> {
        let mut targets = Vec::with_capacity(2 * agenda.k());
        for lit in agenda.literals() {
            let name = agenda.literal_name(lit);
            let t = *map
                .get(&lit)
                .ok_or_else(|| op_err(id, format!("no target for {name}")))?;
            if !t.contains(lit) {
                return Err(op_err(id, format!("target for {name} does not contain it")));
            }
            if !agenda.is_contradictory(lit) && !agenda.is_rational(t) {
                return Err(op_err(id, format!("target for {name} is not rational")));
            }
            targets.push(t);
        }
        Ok(RevisionOperator {
            kind: OperatorKind::Imposed(targets),
            id: id.to_string(),
        })
    }

    pub fn irrationalizing(agenda: &Agenda, variant: IrrationalVariant) -> Self {
        let targets = agenda
            .literals()
            .map(|l| default_irrational_target(agenda, l))
            .collect();
        let id = match variant {
            IrrationalVariant::Corrected => "irrational:corrected",
            IrrationalVariant::Printed => "irrational:printed",
        };
        RevisionOperator {
            kind: OperatorKind::Irrationalizing { variant, targets },
            id: id.into(),
        }
    }

    pub fn table(table: OperatorTable, id: &str) -> Self {
        RevisionOperator {
            kind: OperatorKind::Table(table),
            id: id.to_string(),
        }
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// The revised judgment set `J|p`.
    pub fn revise(&self, agenda: &Agenda, set: JudgmentSet, lit: Literal) -> Result<JudgmentSet> {
        match &self.kind {
            OperatorKind::Hamming(tie) => hamming_revise(agenda, tie, set, lit),
            OperatorKind::Constant => Ok(set),
            OperatorKind::Imposed(targets) => Ok(targets[lit.index()]),
            OperatorKind::Irrationalizing { variant, targets } => {
                let keep = match variant {
                    IrrationalVariant::Corrected => set.contains(lit),
                    IrrationalVariant::Printed => !set.contains(lit),
                };
                Ok(if keep { set } else { targets[lit.index()] })
            }
            OperatorKind::Table(t) => Ok(t.revise(agenda, set, lit)),
        }
    }
}

fn hamming_revise(agenda: &Agenda, tie: &TiePolicy, set: JudgmentSet, lit: Literal) -> Result<JudgmentSet> {
    if set.contains(lit) {
        return Ok(set);
    }
    agenda
        .rational_sets()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.contains(lit))
        .min_by_key(|&(idx, &r)| {
            let distance = set.symmetric_difference(r).len();
            let changes: Vec<bool> = tie
                .protected
                .iter()
                .map(|&i| set.on_issue(i) != r.on_issue(i))
                .collect();
            (distance, changes, idx)
        })
        .map(|(_, &r)| r)
        .ok_or_else(|| Error::RevisionUndefined(agenda.literal_name(lit)))
}

/// Operator configuration not carried by the spec string.
#[derive(Debug, Clone, Copy, Default)]
pub struct OperatorConfig {
    /// Tie policy used by a bare `hamming` spec.
    pub tie: TiePreset,
}

/// Builds an operator from its spec string:
/// `hamming`, `hamming:protect=<issues>`, `constant`, `imposed:canonical`,
/// `imposed:<map file>`, `irrational:corrected`, `irrational:printed`, or
/// `table:<table file>`. Issue lists take labels or the keywords `premises`
/// and `conclusion`.
pub fn make_operator(agenda: &Agenda, spec: &str) -> Result<RevisionOperator> {
    make_operator_with(agenda, spec, &OperatorConfig::default())
}

pub fn make_operator_with(agenda: &Agenda, spec: &str, config: &OperatorConfig) -> Result<RevisionOperator> {
    let spec = spec.trim();
    let (name, body) = match spec.split_once(':') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (spec, None),
    };
    match (name, body) {
        ("hamming", None) => Ok(RevisionOperator::hamming(agenda, TiePolicy::preset(agenda, config.tie))),
        ("hamming", Some(body)) => {
            let list = body
                .strip_prefix("protect=")
                .ok_or_else(|| op_err(spec, "expected `protect=<issue list>`"))?;
            let mut protected = Vec::new();
            for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                match item {
                    "premises" => protected.extend(TiePolicy::premises(agenda).protected),
                    "conclusion" => protected.extend(TiePolicy::conclusion(agenda).protected),
                    label => {
                        let lit = agenda
                            .parse_literal(label)
                            .map_err(|_| op_err(spec, format!("unknown issue `{label}`")))?;
                        if !lit.is_positive() {
                            return Err(op_err(spec, format!("`{label}` names a negated proposition, not an issue")));
                        }
                        protected.push(lit.issue());
                    }
                }
            }
            let tie = TiePolicy::new(agenda, protected).map_err(|_| op_err(spec, "an issue is listed twice"))?;
            Ok(RevisionOperator::hamming(agenda, tie))
        }
        ("constant", None) => Ok(RevisionOperator::constant()),
        ("imposed", Some("canonical")) => RevisionOperator::imposed_canonical(agenda),
        ("imposed", Some(path)) => {
            let map = crate::report::load_imposed_map(agenda, std::path::Path::new(path))?;
            RevisionOperator::imposed_map(agenda, &map, spec)
        }
        ("irrational", Some("corrected")) => Ok(RevisionOperator::irrationalizing(agenda, IrrationalVariant::Corrected)),
        ("irrational", Some("printed")) => Ok(RevisionOperator::irrationalizing(agenda, IrrationalVariant::Printed)),
        ("table", Some(path)) => {
            let table = crate::report::load_operator_table(agenda, std::path::Path::new(path))?;
            Ok(RevisionOperator::table(table, spec))
        }
        _ => Err(op_err(spec, "unknown operator")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_cond() -> Agenda {
        let vals: Vec<String> = (0..8u32)
            .map(|v| format!("{v:03b}"))
            .filter(|s| s != "110")
            .collect();
        Agenda::from_valuations(&["p", "p->q", "q"], &vals).unwrap()
    }

    fn rev(a: &Agenda, op: &RevisionOperator, set: &str, lit: &str) -> String {
        let j = a.parse_set(set).unwrap();
        let p = a.parse_literal(lit).unwrap();
        a.render(op.revise(a, j, p).unwrap())
    }

    #[test]
    fn hamming_reproduces_worked_example() {
        let a = x_cond();
        let op = make_operator(&a, "hamming:protect=p->q,p").unwrap();
        assert_eq!(rev(&a, &op, "{¬p, p->q, ¬q}", "p"), "{p, p->q, q}");
        assert_eq!(rev(&a, &op, "{¬p, ¬(p->q), ¬q}", "p"), "{p, ¬(p->q), ¬q}");
        assert_eq!(rev(&a, &op, "{¬p, ¬(p->q), q}", "p"), "{p, ¬(p->q), q}");
        assert_eq!(rev(&a, &op, "{p, p->q, q}", "p"), "{p, p->q, q}");
        let premises = make_operator(&a, "hamming:protect=premises").unwrap();
        assert_eq!(premises, make_operator(&a, "hamming").unwrap());
        assert_eq!(rev(&a, &premises, "{¬p, p->q, ¬q}", "p"), "{p, p->q, q}");
    }

    #[test]
    fn prose_tie_policy_moves_the_premise() {
        let a = x_cond();
        let op = make_operator(&a, "hamming:protect=conclusion").unwrap();
        assert_eq!(rev(&a, &op, "{¬p, p->q, ¬q}", "p"), "{p, ¬(p->q), ¬q}");
        let cfg = OperatorConfig { tie: TiePreset::Prose };
        assert_eq!(make_operator_with(&a, "hamming", &cfg).unwrap(), op);
    }

    #[test]
    fn constant_and_imposed() {
        let a = x_cond();
        let c = make_operator(&a, "constant").unwrap();
        assert_eq!(rev(&a, &c, "{¬p, p->q, ¬q}", "p"), "{¬p, p->q, ¬q}");
        let imp = make_operator(&a, "imposed:canonical").unwrap();
        assert_eq!(rev(&a, &imp, "{¬p, p->q, ¬q}", "p"), "{p, ¬(p->q), ¬q}");
        assert_eq!(rev(&a, &imp, "{p, p->q, q}", "p"), "{p, ¬(p->q), ¬q}");
    }

    #[test]
    fn irrational_variants() {
        let a = x_cond();
        let corrected = make_operator(&a, "irrational:corrected").unwrap();
        let printed = make_operator(&a, "irrational:printed").unwrap();
        let j = a.parse_set("{¬p, p->q, ¬q}").unwrap();
        let p = a.parse_literal("p").unwrap();
        let target = corrected.revise(&a, j, p).unwrap();
        assert!(target.contains(p));
        assert!(!a.is_rational(target));
        assert_eq!(printed.revise(&a, j, p).unwrap(), j);
        let k = a.parse_set("{p, p->q, q}").unwrap();
        assert_eq!(corrected.revise(&a, k, p).unwrap(), k);
        assert_eq!(printed.revise(&a, k, p).unwrap(), target);
    }

    #[test]
    fn contradictory_literals() {
        let a = Agenda::from_formula_texts(&["p | ~p", "q"], None).unwrap().agenda;
        let err = make_operator(&a, "imposed:canonical").unwrap_err();
        assert!(err.to_string().contains("¬(p | ~p)"), "{err}");
        let h = make_operator(&a, "hamming").unwrap();
        let neg = Literal::negative(0);
        let j = a.rational_sets()[0];
        assert!(matches!(h.revise(&a, j, neg), Err(Error::RevisionUndefined(_))));
        let irr = make_operator(&a, "irrational:corrected").unwrap();
        assert_eq!(irr.revise(&a, j, neg).unwrap(), JudgmentSet::EMPTY.with(neg));
    }

    #[test]
    fn malformed_strings_are_rejected() {
        let a = x_cond();
        for bad in ["hamming:p", "hamming:protect=r", "hamming:protect=p,p", "hamming:protect=~p", "irrational", "bogus"] {
            assert!(make_operator(&a, bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn table_completion() {
        let a = x_cond();
        let mut t = OperatorTable::new();
        let j = a.parse_set("{¬p, p->q, ¬q}").unwrap();
        let p = a.parse_literal("p").unwrap();
        let target = a.parse_set("{p, p->q, q}").unwrap();
        t.insert(j, p, target);
        let op = RevisionOperator::table(t, "t");
        assert_eq!(op.revise(&a, j, p).unwrap(), target);
        let other = a.parse_set("{¬p, ¬(p->q), ¬q}").unwrap();
        assert_eq!(op.revise(&a, other, p).unwrap(), a.parse_set("{p, ¬(p->q), ¬q}").unwrap());
        assert_eq!(op.revise(&a, target, p).unwrap(), target);
    }
}
