//! Aggregation rules and their exhaustive property checkers.

mod properties;
mod rule;

pub use properties::{check_rule_property, impossibility_conditions, CheckOptions, ConditionLandscape, RuleProperty};
pub use rule::{make_rule, AggregationRule, Domain, Profile, ProfileSpace, RuleKind, DEFAULT_PROFILE_BUDGET};
