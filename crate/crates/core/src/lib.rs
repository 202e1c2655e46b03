//! Judgment aggregation and judgment revision over finite agendas, with
//! exhaustive checks of whether aggregating and revising commute.
//!
//! Everything here works by enumeration: agendas are small, rules and
//! operators are evaluated on every rational profile and every judgment set,
//! and reports carry exact counts plus capped, canonically ordered witnesses.

pub mod agenda;
pub mod aggregation;
pub mod dynamics;
pub mod error;
pub mod fixtures;
pub mod property;
pub mod repro;
pub mod report;
pub mod revision;
pub mod scan;
pub mod search;

pub use agenda::{Agenda, Formula, JudgmentSet, Literal};
pub use aggregation::{make_rule, AggregationRule, CheckOptions, RuleProperty};
pub use dynamics::{check_dynamic_rationality, commutation_diagram, CommutationSquare, DynamicOptions, DynamicReport};
pub use error::{Error, Result};
pub use property::{PropertyReport, Verdict, Witness};
pub use repro::{repro_tark_example, ReproConfig, ReproReport};
pub use revision::{make_operator, OperatorProperty, OperatorTable, Requirements, RevisionOperator, TiePreset};
pub use search::{csp_cross_check_oracle, exists_commuting_operator, CspInstance, SearchOutcome, SearchVerdict};
