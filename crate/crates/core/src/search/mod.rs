//! Exhaustive search for commuting revision operators, an independent
//! brute-force cross-check, and the escape-route verifier.

mod csp;
mod escape;
mod oracle;

pub use csp::exists_commuting_operator;
pub use escape::{standard_rules, verify_escape_routes, EscapeRoute, EscapeReport, EscapeRow};
pub use oracle::csp_cross_check_oracle;

use crate::aggregation::AggregationRule;
use crate::agenda::{Agenda, Literal};
use crate::dynamics::{check_dynamic_rationality, DynamicOptions, DynamicReport};
use crate::error::{Error, Result};
use crate::property::PropertyReport;
use crate::revision::{check_operator_property, OperatorTable, Requirements, RevisionOperator};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
/// Largest number of rational sets the search accepts.
pub const MAX_SEARCH_RATIONAL: usize = 16;
/// Largest number of individuals the search accepts.
pub const MAX_SEARCH_INDIVIDUALS: usize = 3;
/// Largest number of agenda literals the search accepts.
pub const MAX_SEARCH_LITERALS: usize = 12;

/// One search problem: is there an operator meeting `required` under which
/// `rule` is dynamically rational?
#[derive(Debug, Clone, Copy)]
pub struct CspInstance<'a> {
    pub agenda: &'a Agenda,
    pub rule: &'a AggregationRule,
    pub required: Requirements,
    pub node_budget: u64,
}

impl<'a> CspInstance<'a> {
    pub fn new(agenda: &'a Agenda, rule: &'a AggregationRule, required: Requirements) -> Self {
        CspInstance {
            agenda,
            rule,
            required,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchVerdict {
    /// An operator table witnessing satisfiability.
    Sat(OperatorTable),
    /// No operator exists; the search failed for this learnt literal.
    Unsat { literal: Literal },
    BudgetExhausted,
}

impl SearchVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchVerdict::Sat(_) => "sat",
            SearchVerdict::Unsat { .. } => "unsat",
            SearchVerdict::BudgetExhausted => "budget_exhausted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub propagations: u64,
    pub max_depth: usize,
    /// Learnt-literal components attempted.
    pub components: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub verdict: SearchVerdict,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&OperatorTable> {
        match &self.verdict {
            SearchVerdict::Sat(t) => Some(t),
            _ => None,
        }
    }
}

pub(crate) fn check_instance(inst: &CspInstance<'_>) -> Result<()> {
    let agenda = inst.agenda;
    let invalid = |reason: String| Error::InvalidRule {
        spec: inst.rule.id().to_string(),
        reason,
    };
    if !inst.rule.has_universal_domain() {
        return Err(invalid("operator search needs a rule on the universal domain".into()));
    }
    let limits = [
        ("rational judgment sets", agenda.rational_sets().len(), MAX_SEARCH_RATIONAL),
        ("individuals", inst.rule.n(), MAX_SEARCH_INDIVIDUALS),
        ("agenda literals", 2 * agenda.k(), MAX_SEARCH_LITERALS),
    ];
    for (what, needed, limit) in limits {
        if needed > limit {
            return Err(Error::resource(what, needed as u128, limit as u128));
        }
    }
    Ok(())
}

/// Result of replaying a found operator through the independent checkers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    pub dynamic: DynamicReport,
    pub properties: Vec<PropertyReport>,
}

impl Replay {
    pub fn verified(&self) -> bool {
        self.dynamic.is_dynamically_rational() && self.properties.iter().all(|p| p.holds())
    }
}

/// Checks a witness table with the dynamic-rationality and operator checkers.
pub fn replay_witness(
    agenda: &Agenda,
    rule: &AggregationRule,
    required: Requirements,
    table: &OperatorTable,
) -> Result<Replay> {
    let op = RevisionOperator::table(table.clone(), "search-witness");
    let dynamic = check_dynamic_rationality(agenda, rule, &op, &DynamicOptions::default())?;
    let properties = required
        .properties()
        .into_iter()
        .map(|p| check_operator_property(agenda, &op, p, 10))
        .collect::<Result<Vec<_>>>()?;
    Ok(Replay { dynamic, properties })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregation::make_rule;
    use crate::fixtures;

    fn run(a: &Agenda, n: usize, spec: &str, req: &str) -> SearchOutcome {
        let rule = make_rule(a, n, spec).unwrap();
        exists_commuting_operator(&CspInstance::new(a, &rule, req.parse().unwrap())).unwrap()
    }

    #[test]
    fn quota_rules_admit_no_commuting_operator() {
        let a = fixtures::x_cond();
        for spec in ["quota:1", "quota:2"] {
            let out = run(&a, 3, spec, "regular,rational");
            assert!(matches!(out.verdict, SearchVerdict::Unsat { .. }), "{spec}");
        }
    }

    #[test]
    fn majority_escapes_without_success() {
        let a = fixtures::x_cond();
        let rule = make_rule(&a, 3, "majority").unwrap();
        let req: Requirements = "conservative,rational".parse().unwrap();
        let out = exists_commuting_operator(&CspInstance::new(&a, &rule, req)).unwrap();
        let table = out.witness().expect("satisfiable");
        assert!(replay_witness(&a, &rule, req, table).unwrap().verified());
    }

    #[test]
    fn independent_issues_are_satisfiable() {
        let a = fixtures::independent(2);
        let rule = make_rule(&a, 3, "majority").unwrap();
        let out = exists_commuting_operator(&CspInstance::new(&a, &rule, Requirements::ALL)).unwrap();
        let table = out.witness().expect("satisfiable");
        assert!(replay_witness(&a, &rule, Requirements::ALL, table).unwrap().verified());
    }

    #[test]
    fn tiny_budget_is_reported() {
        let a = fixtures::x_cond();
        let rule = make_rule(&a, 3, "majority").unwrap();
        let mut inst = CspInstance::new(&a, &rule, Requirements::ALL);
        inst.node_budget = 1;
        let out = exists_commuting_operator(&inst).unwrap();
        assert_eq!(out.verdict, SearchVerdict::BudgetExhausted);
    }

    #[test]
    fn oversized_instances_are_refused() {
        let a = fixtures::x_cond();
        let rule = make_rule(&a, 4, "majority").unwrap();
        let err = exists_commuting_operator(&CspInstance::new(&a, &rule, Requirements::ALL)).unwrap_err();
        assert!(err.is_resource_limit());
    }
}
