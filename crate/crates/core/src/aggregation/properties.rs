//! Exhaustive checkers for aggregation-rule properties.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::rule::{AggregationRule, DEFAULT_PROFILE_BUDGET};
use crate::agenda::{Agenda, JudgmentSet, Literal};
use crate::error::{Error, Result};
use crate::property::{PropertyReport, Verdict, Witness};
use crate::scan::{and_fold, scan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleProperty {
    UniversalDomain,
    NonImposition,
    Monotonicity,
    Systematicity,
    NonOligarchy,
    UnanimityPreservation,
    PropositionwiseUnanimityPreservation,
    StaticRationality,
}

impl RuleProperty {
    pub const ALL: [RuleProperty; 8] = [
        RuleProperty::UniversalDomain,
        RuleProperty::NonImposition,
        RuleProperty::Monotonicity,
        RuleProperty::Systematicity,
        RuleProperty::NonOligarchy,
        RuleProperty::UnanimityPreservation,
        RuleProperty::PropositionwiseUnanimityPreservation,
        RuleProperty::StaticRationality,
    ];

    /// The five conditions of the general impossibility result.
    pub const IMPOSSIBILITY_CONDITIONS: [RuleProperty; 5] = [
        RuleProperty::UniversalDomain,
        RuleProperty::NonImposition,
        RuleProperty::Monotonicity,
        RuleProperty::NonOligarchy,
        RuleProperty::Systematicity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleProperty::UniversalDomain => "universal_domain",
            RuleProperty::NonImposition => "non_imposition",
            RuleProperty::Monotonicity => "monotonicity",
            RuleProperty::Systematicity => "systematicity",
            RuleProperty::NonOligarchy => "non_oligarchy",
            RuleProperty::UnanimityPreservation => "unanimity_preservation",
            RuleProperty::PropositionwiseUnanimityPreservation => "propositionwise_unanimity_preservation",
            RuleProperty::StaticRationality => "static_rationality",
        }
    }
}

impl fmt::Display for RuleProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleProperty {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleProperty::ALL
            .into_iter()
            .find(|p| p.as_str() == s.trim())
            .ok_or_else(|| Error::UnknownProperty(s.trim().to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Stored witnesses per report (at least one is always kept).
    pub max_witnesses: usize,
    pub profile_budget: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            max_witnesses: 100,
            profile_budget: DEFAULT_PROFILE_BUDGET,
        }
    }
}

impl CheckOptions {
    pub(crate) fn cap(&self) -> usize {
        self.max_witnesses.max(1)
    }
}

/// Exactly checks one property by enumerating the rule's domain.
pub fn check_rule_property(
    agenda: &Agenda,
    rule: &AggregationRule,
    property: RuleProperty,
    opts: &CheckOptions,
) -> Result<PropertyReport> {
    let size = rule.check_budget(agenda, opts.profile_budget)?;
    let name = property.as_str();
    let cap = opts.cap();
    let profile = |i: u64| {
        let mut v = Vec::with_capacity(rule.n());
        rule.domain_profile(agenda, i, &mut v);
        v
    };
    let report = match property {
        RuleProperty::UniversalDomain => {
            let witnesses = if rule.has_universal_domain() {
                vec![]
            } else {
                vec![Witness::RestrictedDomain { domain_size: size }]
            };
            PropertyReport::from_scan(name, size, witnesses.len() as u64, witnesses)
        }
        RuleProperty::NonImposition => {
            let mut first = None;
            let mut varies = false;
            for i in 0..size {
                let out = rule.apply_unchecked(agenda, &profile(i));
                match first {
                    None => first = Some(out),
                    Some(f) if f != out => {
                        varies = true;
                        break;
                    }
                    _ => {}
                }
            }
            let witnesses = match (varies, first) {
                (false, Some(output)) => vec![Witness::ConstantOutput { output }],
                _ => vec![],
            };
            PropertyReport::from_scan(name, size, witnesses.len() as u64, witnesses)
        }
        RuleProperty::Monotonicity => {
            let (count, witnesses) = scan(size, cap, |i, sink| {
                let members = profile(i);
                let out = rule.apply_unchecked(agenda, &members);
                let mut modified = members.clone();
                for lit in out.literals() {
                    for (member, &ji) in members.iter().enumerate() {
                        if ji.contains(lit) {
                            continue;
                        }
                        for &replacement in agenda.rational_sets().iter().filter(|r| r.contains(lit)) {
                            modified[member] = replacement;
                            if rule.in_domain(agenda, &modified) {
                                let after = rule.apply_unchecked(agenda, &modified);
                                if !after.contains(lit) {
                                    sink.push(Witness::Monotonicity {
                                        profile: members.clone(),
                                        literal: lit,
                                        member,
                                        replacement,
                                        output_after: after,
                                    });
                                }
                            }
                        }
                        modified[member] = ji;
                    }
                }
            });
            PropertyReport::from_scan(name, size, count, witnesses)
        }
        RuleProperty::Systematicity => systematicity(agenda, rule, size, cap),
        RuleProperty::NonOligarchy => {
            let n = rule.n();
            let groups = (1u64 << n) - 1;
            let all = if groups == 63 { u64::MAX } else { (1u64 << groups) - 1 };
            // Bit g - 1 survives iff the rule equals the intersection over group g everywhere.
            let surviving = and_fold(size, all, |i| {
                let members = profile(i);
                let out = rule.apply_unchecked(agenda, &members);
                (1..=groups).fold(0u64, |acc, g| {
                    let inter = (0..n)
                        .filter(|b| g >> b & 1 == 1)
                        .map(|b| members[b])
                        .reduce(JudgmentSet::intersection)
                        .unwrap_or_default();
                    if inter == out {
                        acc | 1 << (g - 1)
                    } else {
                        acc
                    }
                })
            });
            let witnesses: Vec<Witness> = (1..=groups)
                .filter(|g| size > 0 && surviving >> (g - 1) & 1 == 1)
                .map(|g| Witness::Oligarchy {
                    members: (0..n).filter(|b| g >> b & 1 == 1).collect(),
                })
                .take(cap)
                .collect();
            let count = (1..=groups).filter(|g| size > 0 && surviving >> (g - 1) & 1 == 1).count();
            PropertyReport::from_scan(name, size, count as u64, witnesses)
        }
        RuleProperty::UnanimityPreservation => {
            let n = rule.n();
            let mut examined = 0;
            let mut count = 0;
            let mut witnesses = Vec::new();
            for &j in agenda.rational_sets() {
                let members = vec![j; n];
                if !rule.in_domain(agenda, &members) {
                    continue;
                }
                examined += 1;
                let out = rule.apply_unchecked(agenda, &members);
                if out != j {
                    count += 1;
                    if witnesses.len() < cap {
                        witnesses.push(Witness::Unanimity { profile: members, literal: None, output: out });
                    }
                }
            }
            PropertyReport::from_scan(name, examined, count, witnesses)
        }
        RuleProperty::PropositionwiseUnanimityPreservation => {
            let (count, witnesses) = scan(size, cap, |i, sink| {
                let members = profile(i);
                let common = members.iter().copied().reduce(JudgmentSet::intersection).unwrap_or_default();
                let out = rule.apply_unchecked(agenda, &members);
                for lit in common.literals().filter(|&l| !out.contains(l)) {
                    sink.push(Witness::Unanimity { profile: members.clone(), literal: Some(lit), output: out });
                }
            });
            PropertyReport::from_scan(name, size, count, witnesses)
        }
        RuleProperty::StaticRationality => {
            let (count, witnesses) = scan(size, cap, |i, sink| {
                let members = profile(i);
                let out = rule.apply_unchecked(agenda, &members);
                if !agenda.is_rational(out) {
                    sink.push(Witness::Output { profile: members, output: out });
                }
            });
            PropertyReport::from_scan(name, size, count, witnesses)
        }
    };
    Ok(report)
}

fn coalition(members: &[JudgmentSet], lit: Literal) -> u32 {
    members
        .iter()
        .enumerate()
        .fold(0, |acc, (i, j)| if j.contains(lit) { acc | 1 << i } else { acc })
}

/// Acceptance must be a single function of the support coalition, shared by
/// all literals. Records the first observation per coalition and reports
/// every later observation that disagrees with it.
fn systematicity(agenda: &Agenda, rule: &AggregationRule, size: u64, cap: usize) -> PropertyReport {
    let mut table: HashMap<u32, (Vec<JudgmentSet>, Literal, bool)> = HashMap::new();
    let mut count = 0;
    let mut witnesses = Vec::new();
    let mut members = Vec::with_capacity(rule.n());
    for i in 0..size {
        rule.domain_profile(agenda, i, &mut members);
        let out = rule.apply_unchecked(agenda, &members);
        for lit in agenda.literals() {
            let c = coalition(&members, lit);
            let accepted = out.contains(lit);
            match table.get(&c) {
                None => {
                    table.insert(c, (members.clone(), lit, accepted));
                }
                Some(first) if first.2 != accepted => {
                    count += 1;
                    if witnesses.len() < cap {
                        witnesses.push(Witness::Systematicity {
                            coalition: (0..rule.n()).filter(|b| c >> b & 1 == 1).collect(),
                            first: first.clone(),
                            second: (members.clone(), lit, accepted),
                        });
                    }
                }
                Some(_) => {}
            }
        }
    }
    PropertyReport::from_scan("systematicity", size, count, witnesses)
}

/// Per-condition reports for the five conditions of the general impossibility
/// result, plus their conjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionLandscape {
    pub rule: String,
    pub reports: Vec<PropertyReport>,
}

impl ConditionLandscape {
    pub fn all_hold(&self) -> bool {
        self.reports.iter().all(|r| r.holds())
    }

    pub fn verdict(&self) -> Verdict {
        if self.all_hold() {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }

    /// Names of the conditions that fail.
    pub fn failing(&self) -> Vec<&str> {
        self.reports
            .iter()
            .filter(|r| !r.holds())
            .map(|r| r.property.as_str())
            .collect()
    }
}

pub fn impossibility_conditions(
    agenda: &Agenda,
    rule: &AggregationRule,
    opts: &CheckOptions,
) -> Result<ConditionLandscape> {
    let reports = RuleProperty::IMPOSSIBILITY_CONDITIONS
        .iter()
        .map(|&p| check_rule_property(agenda, rule, p, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConditionLandscape {
        rule: rule.id().to_string(),
        reports,
    })
}
