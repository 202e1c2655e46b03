use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::agenda::{Agenda, JudgmentSet, Literal};
use crate::error::{Error, Result};

/// Default cap on the number of profiles a check may enumerate.
pub const DEFAULT_PROFILE_BUDGET: u64 = 10_000_000;

/// An ordered list of `n ≥ 2` judgment sets over one agenda.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile(Vec<JudgmentSet>);

impl Profile {
    pub fn new(members: Vec<JudgmentSet>) -> Result<Self> {
        if members.len() < 2 {
            return Err(Error::InvalidProfile(format!(
                "a profile needs at least two members, got {}",
                members.len()
            )));
        }
        Ok(Profile(members))
    }

    pub fn members(&self) -> &[JudgmentSet] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn into_members(self) -> Vec<JudgmentSet> {
        self.0
    }
}

/// All `|J|^n` rational profiles, indexed with member 1 as the most significant digit.
#[derive(Debug, Clone, Copy)]
pub struct ProfileSpace<'a> {
    rational: &'a [JudgmentSet],
    n: usize,
}

impl<'a> ProfileSpace<'a> {
    pub fn new(agenda: &'a Agenda, n: usize) -> Self {
        ProfileSpace {
            rational: agenda.rational_sets(),
            n,
        }
    }

    pub fn len(&self) -> u128 {
        (self.rational.len() as u128).pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes the members of profile `index` into `out`.
    pub fn fill(&self, mut index: u64, out: &mut Vec<JudgmentSet>) {
        let m = self.rational.len() as u64;
        out.clear();
        out.resize(self.n, JudgmentSet::EMPTY);
        for slot in out.iter_mut().rev() {
            *slot = self.rational[(index % m) as usize];
            index /= m;
        }
    }

    pub fn get(&self, index: u64) -> Vec<JudgmentSet> {
        let mut v = Vec::with_capacity(self.n);
        self.fill(index, &mut v);
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleKind {
    Majority,
    Quota(usize),
    /// 0-based, sorted, non-empty.
    Oligarchy(Vec<usize>),
    Dictator(usize),
    Constant(JudgmentSet),
    /// 0-based premise issues, sorted, non-empty.
    PremiseBased(Vec<usize>),
    Table(BTreeMap<Vec<JudgmentSet>, JudgmentSet>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    /// All profiles of rational judgment sets.
    Universal,
    Explicit(Vec<Vec<JudgmentSet>>),
}

/// A judgment aggregation rule for a fixed group size.
#[derive(Debug, Clone)]
pub struct AggregationRule {
    kind: RuleKind,
    n: usize,
    domain: Domain,
    explicit: HashSet<Vec<JudgmentSet>>,
    id: String,
}

impl fmt::Display for AggregationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

fn rule_err(spec: &str, reason: impl Into<String>) -> Error {
    Error::InvalidRule {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

fn parse_index_list(spec: &str, body: &str, upper: usize, what: &str) -> Result<Vec<usize>> {
    if body.trim().is_empty() {
        return Err(rule_err(spec, format!("the {what} list must be non-empty")));
    }
    let mut out = body
        .split(',')
        .map(|t| {
            let i: usize = t
                .trim()
                .parse()
                .map_err(|_| rule_err(spec, format!("`{}` is not a {what} number", t.trim())))?;
            if i == 0 || i > upper {
                return Err(rule_err(spec, format!("{what} {i} is outside 1..={upper}")));
            }
            Ok(i - 1)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn join_one_based(v: &[usize]) -> String {
    v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// Builds a rule over the universal domain from its spec string:
/// `majority`, `quota:m`, `oligarchy:i,j,...`, `dictator:i`,
/// `constant:<bits>`, or `premise:i,j,...`. Individuals and issues are 1-based.
pub fn make_rule(agenda: &Agenda, n: usize, spec: &str) -> Result<AggregationRule> {
    if n < 2 {
        return Err(rule_err(spec, format!("group size must be at least 2, got {n}")));
    }
    let spec = spec.trim();
    let (name, body) = match spec.split_once(':') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (spec, None),
    };
    let kind = match (name, body) {
        ("majority", None) => RuleKind::Majority,
        ("quota", Some(m)) => {
            let m: usize = m.parse().map_err(|_| rule_err(spec, "threshold must be an integer"))?;
            if m == 0 || m > n {
                return Err(rule_err(spec, format!("threshold {m} is outside 1..={n}")));
            }
            RuleKind::Quota(m)
        }
        ("oligarchy", Some(body)) => RuleKind::Oligarchy(parse_index_list(spec, body, n, "individual")?),
        ("dictator", Some(body)) => {
            let v = parse_index_list(spec, body, n, "individual")?;
            if v.len() != 1 {
                return Err(rule_err(spec, "a dictator is a single individual"));
            }
            RuleKind::Dictator(v[0])
        }
        ("constant", Some(bits)) => RuleKind::Constant(agenda.parse_bits(bits).map_err(|e| rule_err(spec, e.to_string()))?),
        ("premise", Some(body)) => RuleKind::PremiseBased(parse_index_list(spec, body, agenda.k(), "issue")?),
        _ => return Err(rule_err(spec, "unknown rule")),
    };
    Ok(AggregationRule::new(kind, n, Domain::Universal, agenda))
}

impl AggregationRule {
    fn new(kind: RuleKind, n: usize, domain: Domain, agenda: &Agenda) -> Self {
        let id = match &kind {
            RuleKind::Majority => "majority".to_string(),
            RuleKind::Quota(m) => format!("quota:{m}"),
            RuleKind::Oligarchy(m) => format!("oligarchy:{}", join_one_based(m)),
            RuleKind::Dictator(i) => format!("dictator:{}", i + 1),
            RuleKind::Constant(j) => format!("constant:{}", j.to_bitpairs(agenda.k())),
            RuleKind::PremiseBased(p) => format!("premise:{}", join_one_based(p)),
            RuleKind::Table(t) => format!("table:{}", t.len()),
        };
        let explicit = match &domain {
            Domain::Universal => HashSet::new(),
            Domain::Explicit(list) => list.iter().cloned().collect(),
        };
        AggregationRule {
            kind,
            n,
            domain,
            explicit,
            id,
        }
    }

    /// A rule given by an explicit table; its domain is the table's key set.
    pub fn from_table(agenda: &Agenda, n: usize, entries: BTreeMap<Vec<JudgmentSet>, JudgmentSet>) -> Result<Self> {
        if n < 2 {
            return Err(rule_err("table", "group size must be at least 2"));
        }
        if let Some(bad) = entries.keys().find(|p| p.len() != n) {
            return Err(rule_err("table", format!("profile of size {} in a table for n = {n}", bad.len())));
        }
        let domain = Domain::Explicit(entries.keys().cloned().collect());
        Ok(Self::new(RuleKind::Table(entries), n, domain, agenda))
    }

    pub fn kind(&self) -> &RuleKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn has_universal_domain(&self) -> bool {
        matches!(self.domain, Domain::Universal)
    }

    pub fn in_domain(&self, agenda: &Agenda, members: &[JudgmentSet]) -> bool {
        if members.len() != self.n {
            return false;
        }
        match &self.domain {
            Domain::Universal => members.iter().all(|&j| agenda.is_rational(j)),
            Domain::Explicit(_) => self.explicit.contains(members),
        }
    }

    /// Number of profiles in the declared domain.
    pub fn domain_size(&self, agenda: &Agenda) -> u128 {
        match &self.domain {
            Domain::Universal => ProfileSpace::new(agenda, self.n).len(),
            Domain::Explicit(list) => list.len() as u128,
        }
    }

    /// Profile number `index` of the domain, in canonical order.
    pub(crate) fn domain_profile(&self, agenda: &Agenda, index: u64, out: &mut Vec<JudgmentSet>) {
        match &self.domain {
            Domain::Universal => ProfileSpace::new(agenda, self.n).fill(index, out),
            Domain::Explicit(list) => {
                out.clear();
                out.extend_from_slice(&list[index as usize]);
            }
        }
    }

    pub(crate) fn check_budget(&self, agenda: &Agenda, budget: u64) -> Result<u64> {
        let size = self.domain_size(agenda);
        if size > budget as u128 {
            return Err(Error::resource("profiles", size, budget as u128));
        }
        Ok(size as u64)
    }

    /// Collective judgment set for a profile in the domain.
    pub fn apply(&self, agenda: &Agenda, members: &[JudgmentSet]) -> Result<JudgmentSet> {
        if !self.in_domain(agenda, members) {
            return Err(Error::DomainViolation);
        }
        Ok(self.apply_unchecked(agenda, members))
    }

    pub fn apply_profile(&self, agenda: &Agenda, profile: &Profile) -> Result<JudgmentSet> {
        self.apply(agenda, profile.members())
    }

    /// Applies the rule without the domain check. Table rules return the
    /// empty set off their domain.
    pub(crate) fn apply_unchecked(&self, agenda: &Agenda, members: &[JudgmentSet]) -> JudgmentSet {
        match &self.kind {
            RuleKind::Majority => quota(agenda, members, |c| 2 * c > members.len()),
            RuleKind::Quota(m) => quota(agenda, members, |c| c >= *m),
            RuleKind::Oligarchy(group) => intersection(members, group),
            RuleKind::Dictator(i) => members[*i],
            RuleKind::Constant(j) => *j,
            RuleKind::PremiseBased(premises) => premise_based(agenda, members, premises),
            RuleKind::Table(t) => t.get(members).copied().unwrap_or_default(),
        }
    }
}

fn support(members: &[JudgmentSet], lit: Literal) -> usize {
    members.iter().filter(|j| j.contains(lit)).count()
}

fn quota(agenda: &Agenda, members: &[JudgmentSet], accept: impl Fn(usize) -> bool) -> JudgmentSet {
    JudgmentSet::from_literals(agenda.literals().filter(|&l| accept(support(members, l))))
}

fn intersection(members: &[JudgmentSet], group: &[usize]) -> JudgmentSet {
    group
        .iter()
        .map(|&i| members[i])
        .reduce(JudgmentSet::intersection)
        .unwrap_or_default()
}

/// Majority on the premise issues; every other issue takes the polarity the
/// accepted premises entail, or its own majority when they entail neither.
fn premise_based(agenda: &Agenda, members: &[JudgmentSet], premises: &[usize]) -> JudgmentSet {
    let n = members.len();
    let majority = |lit: Literal| 2 * support(members, lit) > n;
    let accepted: JudgmentSet = JudgmentSet::from_literals(
        premises
            .iter()
            .flat_map(|&i| [Literal::positive(i), Literal::negative(i)])
            .filter(|&l| majority(l)),
    );
    let compatible: Vec<JudgmentSet> = agenda
        .rational_sets()
        .iter()
        .copied()
        .filter(|r| accepted.is_subset(*r))
        .collect();
    let mut out = accepted;
    for issue in (0..agenda.k()).filter(|i| !premises.contains(i)) {
        let pos = Literal::positive(issue);
        let entailed = if compatible.is_empty() {
            None
        } else if compatible.iter().all(|r| r.contains(pos)) {
            Some(pos)
        } else if compatible.iter().all(|r| !r.contains(pos)) {
            Some(!pos)
        } else {
            None
        };
        match entailed {
            Some(l) => out = out.with(l),
            None => {
                for l in [pos, !pos] {
                    if majority(l) {
                        out = out.with(l);
                    }
                }
            }
        }
    }
    out
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

    fn pre_profile(a: &Agenda) -> Vec<JudgmentSet> {
        ["{¬p, ¬(p->q), q}", "{¬p, p->q, ¬q}", "{¬p, ¬(p->q), ¬q}"]
            .iter()
            .map(|s| a.parse_set(s).unwrap())
            .collect()
    }

    #[test]
    fn majority_on_pre_and_post_profiles() {
        let a = x_cond();
        let maj = make_rule(&a, 3, "majority").unwrap();
        let out = maj.apply(&a, &pre_profile(&a)).unwrap();
        assert_eq!(a.render(out), "{¬p, ¬(p->q), ¬q}");
        let post: Vec<_> = ["{p, ¬(p->q), q}", "{p, p->q, q}", "{p, ¬(p->q), ¬q}"]
            .iter()
            .map(|s| a.parse_set(s).unwrap())
            .collect();
        assert_eq!(a.render(maj.apply(&a, &post).unwrap()), "{p, ¬(p->q), q}");
    }

    #[test]
    fn quota_and_dictator() {
        let a = x_cond();
        let pre = pre_profile(&a);
        let q3 = make_rule(&a, 3, "quota:3").unwrap();
        assert_eq!(a.render(q3.apply(&a, &pre).unwrap()), "{¬p}");
        let d1 = make_rule(&a, 3, "dictator:1").unwrap();
        assert_eq!(a.render(d1.apply(&a, &pre).unwrap()), "{¬p, ¬(p->q), q}");
    }

    #[test]
    fn quota_two_is_majority_for_three() {
        let a = x_cond();
        let q2 = make_rule(&a, 3, "quota:2").unwrap();
        let maj = make_rule(&a, 3, "majority").unwrap();
        let space = ProfileSpace::new(&a, 3);
        for i in 0..space.len() as u64 {
            let p = space.get(i);
            assert_eq!(q2.apply(&a, &p).unwrap(), maj.apply(&a, &p).unwrap());
        }
    }

    #[test]
    fn malformed_strings_are_rejected() {
        let a = x_cond();
        assert!(make_rule(&a, 3, "quota:4").is_err());
        assert!(make_rule(&a, 3, "quota:0").is_err());
        assert!(make_rule(&a, 3, "oligarchy:").is_err());
        assert!(make_rule(&a, 3, "oligarchy:1,4").is_err());
        assert!(make_rule(&a, 3, "dictator:1,2").is_err());
        assert!(make_rule(&a, 3, "constant:10").is_err());
        assert!(make_rule(&a, 3, "premise:4").is_err());
        assert!(make_rule(&a, 3, "plurality").is_err());
        assert!(make_rule(&a, 1, "majority").is_err());
    }

    #[test]
    fn domain_violation() {
        let a = x_cond();
        let maj = make_rule(&a, 3, "majority").unwrap();
        let bad = vec![a.parse_set("{p, p->q, ¬q}").unwrap(); 3];
        assert_eq!(maj.apply(&a, &bad), Err(Error::DomainViolation));
        assert_eq!(maj.apply(&a, &pre_profile(&a)[..2]), Err(Error::DomainViolation));
    }

    #[test]
    fn premise_rule_decides_conclusion_by_entailment() {
        let a = x_cond();
        let rule = make_rule(&a, 3, "premise:1,2").unwrap();
        assert_eq!(rule.id(), "premise:1,2");
        // p and p->q each carry a majority, so q is entailed although only one member accepts it.
        let profile: Vec<_> = ["{p, p->q, q}", "{p, ¬(p->q), ¬q}", "{¬p, p->q, ¬q}"]
            .iter()
            .map(|s| a.parse_set(s).unwrap())
            .collect();
        assert_eq!(a.render(rule.apply(&a, &profile).unwrap()), "{p, p->q, q}");
        // With ¬p accepted, q is not entailed and falls back to its majority.
        assert_eq!(a.render(rule.apply(&a, &pre_profile(&a)).unwrap()), "{¬p, ¬(p->q), ¬q}");
    }

    #[test]
    fn table_rule_has_explicit_domain() {
        let a = x_cond();
        let pre = pre_profile(&a);
        let mut t = BTreeMap::new();
        t.insert(pre.clone(), pre[0]);
        let rule = AggregationRule::from_table(&a, 3, t).unwrap();
        assert_eq!(rule.apply(&a, &pre).unwrap(), pre[0]);
        assert!(!rule.has_universal_domain());
        assert_eq!(rule.domain_size(&a), 1);
        let other = vec![pre[1], pre[1], pre[1]];
        assert_eq!(rule.apply(&a, &other), Err(Error::DomainViolation));
    }

    #[test]
    fn profile_space_order() {
        let a = x_cond();
        let space = ProfileSpace::new(&a, 3);
        assert_eq!(space.len(), 343);
        let r = a.rational_sets();
        assert_eq!(space.get(0), vec![r[0], r[0], r[0]]);
        assert_eq!(space.get(1), vec![r[0], r[0], r[1]]);
        assert_eq!(space.get(7), vec![r[0], r[1], r[0]]);
        assert_eq!(space.get(342), vec![r[6], r[6], r[6]]);
        assert!(Profile::new(vec![r[0]]).is_err());
    }
}
