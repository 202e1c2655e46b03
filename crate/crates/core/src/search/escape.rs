//! Checks the three ways out of the impossibility: drop success (constant
//! operator), drop conservativeness (imposed operator), or drop rationality
//! preservation (irrationalizing operator).

use crate::aggregation::{check_rule_property, make_rule, AggregationRule, CheckOptions, RuleProperty};
use crate::agenda::Agenda;
use crate::dynamics::{check_dynamic_rationality, DynamicOptions};
use crate::error::Result;
use crate::revision::{make_operator, RevisionOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EscapeRoute {
    NonSuccessful,
    NonConservative,
    NonRationalityPreserving,
}

impl EscapeRoute {
    pub const ALL: [EscapeRoute; 3] = [
        EscapeRoute::NonSuccessful,
        EscapeRoute::NonConservative,
        EscapeRoute::NonRationalityPreserving,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EscapeRoute::NonSuccessful => "non_successful",
            EscapeRoute::NonConservative => "non_conservative",
            EscapeRoute::NonRationalityPreserving => "non_rationality_preserving",
        }
    }

    pub fn operator_spec(self) -> &'static str {
        match self {
            EscapeRoute::NonSuccessful => "constant",
            EscapeRoute::NonConservative => "imposed:canonical",
            EscapeRoute::NonRationalityPreserving => "irrational:corrected",
        }
    }

    /// The rule condition under which the route claims dynamic rationality.
    pub fn precondition(self) -> &'static str {
        match self {
            EscapeRoute::NonSuccessful => "none",
            EscapeRoute::NonConservative => "unanimity_preservation",
            EscapeRoute::NonRationalityPreserving => "universal_domain,propositionwise_unanimity_preservation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscapeRow {
    pub route: EscapeRoute,
    pub rule: String,
    pub operator: String,
    pub precondition_holds: bool,
    pub squares: u64,
    pub violations: u64,
    pub vacuous: u64,
}

impl EscapeRow {
    /// A claimed route must produce no violated square.
    pub fn consistent(&self) -> bool {
        !self.precondition_holds || self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscapeReport {
    pub n: usize,
    pub rows: Vec<EscapeRow>,
}

impl EscapeReport {
    pub fn contradictions(&self) -> Vec<&EscapeRow> {
        self.rows.iter().filter(|r| !r.consistent()).collect()
    }

    pub fn consistent(&self) -> bool {
        self.rows.iter().all(EscapeRow::consistent)
    }
}

/// The rules every escape check runs against.
pub fn standard_rules(agenda: &Agenda, n: usize) -> Result<Vec<AggregationRule>> {
    let mut specs = vec!["majority".to_string()];
    specs.extend((1..=n).map(|m| format!("quota:{m}")));
    specs.push("dictator:1".into());
    specs.push("oligarchy:1,2".into());
    if let Some(&first) = agenda.rational_sets().first() {
        specs.push(format!("constant:{}", first.to_issue_string(agenda.k())));
    }
    if agenda.k() >= 2 {
        let premises: Vec<String> = (1..agenda.k()).map(|i| i.to_string()).collect();
        specs.push(format!("premise:{}", premises.join(",")));
    }
    specs.iter().map(|s| make_rule(agenda, n, s)).collect()
}

pub fn verify_escape_routes(agenda: &Agenda, n: usize) -> Result<EscapeReport> {
    let rules = standard_rules(agenda, n)?;
    let operators: Vec<(EscapeRoute, RevisionOperator)> = EscapeRoute::ALL
        .iter()
        .map(|&r| Ok((r, make_operator(agenda, r.operator_spec())?)))
        .collect::<Result<_>>()?;
    let check_opts = CheckOptions {
        max_witnesses: 1,
        ..Default::default()
    };
    let dyn_opts = DynamicOptions {
        max_witnesses: 1,
        ..Default::default()
    };
    let mut rows = Vec::new();
    for rule in &rules {
        let holds = |p| -> Result<bool> { Ok(check_rule_property(agenda, rule, p, &check_opts)?.holds()) };
        for (route, op) in &operators {
            let precondition_holds = match route {
                EscapeRoute::NonSuccessful => true,
                EscapeRoute::NonConservative => holds(RuleProperty::UnanimityPreservation)?,
                EscapeRoute::NonRationalityPreserving => {
                    rule.has_universal_domain() && holds(RuleProperty::PropositionwiseUnanimityPreservation)?
                }
            };
            let report = check_dynamic_rationality(agenda, rule, op, &dyn_opts)?;
            rows.push(EscapeRow {
                route: *route,
                rule: rule.id().to_string(),
                operator: op.id().to_string(),
                precondition_holds,
                squares: report.squares,
                violations: report.violations,
                vacuous: report.vacuous,
            });
        }
    }
    Ok(EscapeReport { n, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn all_routes_hold_where_claimed() {
        let a = fixtures::x_cond();
        let report = verify_escape_routes(&a, 3).unwrap();
        assert!(report.consistent(), "{:?}", report.contradictions());
        let constant_rows = report.rows.iter().filter(|r| r.route == EscapeRoute::NonSuccessful);
        assert!(constant_rows.clone().count() >= 7);
        assert!(constant_rows.into_iter().all(|r| r.precondition_holds && r.violations == 0));
    }
}
