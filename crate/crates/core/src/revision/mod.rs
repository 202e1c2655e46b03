//! Judgment revision operators and their exhaustive property checkers.

mod operator;
mod properties;

pub use operator::{
    default_irrational_target, make_operator, make_operator_with, IrrationalVariant, OperatorConfig, OperatorKind,
    OperatorTable, RevisionOperator, TiePolicy, TiePreset,
};
pub use properties::{check_operator_property, OperatorProperty, Requirements, MAX_OPERATOR_LITERALS};
