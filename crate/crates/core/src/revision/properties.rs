use std::fmt;
use std::str::FromStr;

use super::operator::RevisionOperator;
use crate::agenda::{Agenda, JudgmentSet, Literal};
use crate::error::{Error, Result};
use crate::property::{PropertyReport, Witness};
use crate::scan::scan;

/// Largest agenda (in literals) the operator checks quantify over.
pub const MAX_OPERATOR_LITERALS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorProperty {
    Successful,
    Conservative,
    Regular,
    RationalityPreserving,
}

impl OperatorProperty {
    pub const ALL: [OperatorProperty; 4] = [
        OperatorProperty::Successful,
        OperatorProperty::Conservative,
        OperatorProperty::Regular,
        OperatorProperty::RationalityPreserving,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OperatorProperty::Successful => "successful",
            OperatorProperty::Conservative => "conservative",
            OperatorProperty::Regular => "regular",
            OperatorProperty::RationalityPreserving => "rationality_preserving",
        }
    }
}

impl fmt::Display for OperatorProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OperatorProperty {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OperatorProperty::ALL
            .into_iter()
            .find(|p| p.as_str() == s.trim())
            .ok_or_else(|| Error::UnknownProperty(s.trim().to_string()))
    }
}

/// A conjunction of the basic operator properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Requirements {
    pub successful: bool,
    pub conservative: bool,
    pub rationality_preserving: bool,
}

impl Requirements {
    pub const ALL: Requirements = Requirements {
        successful: true,
        conservative: true,
        rationality_preserving: true,
    };

    pub fn is_subset_of(&self, other: &Requirements) -> bool {
        (!self.successful || other.successful)
            && (!self.conservative || other.conservative)
            && (!self.rationality_preserving || other.rationality_preserving)
    }

    pub fn properties(&self) -> Vec<OperatorProperty> {
        let mut v = Vec::new();
        if self.successful {
            v.push(OperatorProperty::Successful);
        }
        if self.conservative {
            v.push(OperatorProperty::Conservative);
        }
        if self.rationality_preserving {
            v.push(OperatorProperty::RationalityPreserving);
        }
        v
    }

    /// Canonical comma-separated form, e.g. `successful,conservative`.
    pub fn describe(&self) -> String {
        self.properties()
            .iter()
            .map(|p| p.as_str())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl FromStr for Requirements {
    type Err = Error;

    /// Comma list over `successful`, `conservative`, `regular`,
    /// `rationality_preserving` (alias `rational`), or `none`.
    fn from_str(s: &str) -> Result<Self> {
        let mut r = Requirements::default();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match item {
                "successful" => r.successful = true,
                "conservative" => r.conservative = true,
                "regular" => {
                    r.successful = true;
                    r.conservative = true;
                }
                "rational" | "rationality_preserving" => r.rationality_preserving = true,
                "none" => {}
                other => return Err(Error::UnknownProperty(other.to_string())),
            }
        }
        Ok(r)
    }
}

/// Checks a property over every subset of the agenda and every literal.
pub fn check_operator_property(
    agenda: &Agenda,
    op: &RevisionOperator,
    property: OperatorProperty,
    max_witnesses: usize,
) -> Result<PropertyReport> {
    let width = 2 * agenda.k();
    if width > MAX_OPERATOR_LITERALS {
        return Err(Error::resource(
            "operator check literals",
            width as u128,
            MAX_OPERATOR_LITERALS as u128,
        ));
    }
    let sets = 1u64 << width;
    let contradictory: Vec<bool> = agenda.literals().map(|l| agenda.is_contradictory(l)).collect();
    let cap = max_witnesses.max(1);
    let (count, witnesses) = scan(sets, cap, |bits, sink| {
        let set = JudgmentSet::from_bits(bits);
        for lit in agenda.literals() {
            let result = op.revise(agenda, set, lit).ok();
            if violates(agenda, property, set, lit, result, contradictory[lit.index()]) {
                sink.push(Witness::Revision { set, literal: lit, result });
            }
        }
    });
    Ok(PropertyReport::from_scan(property.as_str(), sets * width as u64, count, witnesses))
}

fn violates(
    agenda: &Agenda,
    property: OperatorProperty,
    set: JudgmentSet,
    lit: Literal,
    result: Option<JudgmentSet>,
    contradictory: bool,
) -> bool {
    let successful = || result.is_some_and(|r| r.contains(lit));
    let conservative = || !set.contains(lit) || result == Some(set);
    match property {
        OperatorProperty::Successful => !successful(),
        OperatorProperty::Conservative => !conservative(),
        OperatorProperty::Regular => !(successful() && conservative()),
        OperatorProperty::RationalityPreserving => {
            agenda.is_rational(set) && !contradictory && !result.is_some_and(|r| agenda.is_rational(r))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::revision::make_operator;

    fn x_cond() -> Agenda {
        let vals: Vec<String> = (0..8u32)
            .map(|v| format!("{v:03b}"))
            .filter(|s| s != "110")
            .collect();
        Agenda::from_valuations(&["p", "p->q", "q"], &vals).unwrap()
    }

    fn holds(a: &Agenda, spec: &str, p: OperatorProperty) -> bool {
        let op = make_operator(a, spec).unwrap();
        check_operator_property(a, &op, p, 10).unwrap().holds()
    }

    #[test]
    fn hamming_is_regular_and_rational() {
        let a = x_cond();
        let op = make_operator(&a, "hamming").unwrap();
        let r = check_operator_property(&a, &op, OperatorProperty::Regular, 10).unwrap();
        assert!(r.holds());
        assert_eq!(r.examined, 64 * 6);
        assert!(holds(&a, "hamming", OperatorProperty::RationalityPreserving));
    }

    #[test]
    fn constant_is_not_successful() {
        let a = x_cond();
        let op = make_operator(&a, "constant").unwrap();
        let r = check_operator_property(&a, &op, OperatorProperty::Successful, 10).unwrap();
        assert!(!r.holds());
        match &r.witnesses[0] {
            Witness::Revision { set, literal, result } => {
                assert!(!set.contains(*literal));
                assert_eq!(result, &Some(*set));
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn imposed_is_not_conservative() {
        let a = x_cond();
        let op = make_operator(&a, "imposed:canonical").unwrap();
        let r = check_operator_property(&a, &op, OperatorProperty::Conservative, 10).unwrap();
        assert!(!r.holds());
        match &r.witnesses[0] {
            Witness::Revision { set, literal, result } => {
                assert!(set.contains(*literal));
                assert_ne!(result, &Some(*set));
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn corrected_irrationalizer_breaks_rationality() {
        let a = x_cond();
        assert!(!holds(&a, "irrational:corrected", OperatorProperty::RationalityPreserving));
        assert!(holds(&a, "irrational:corrected", OperatorProperty::Regular));
        // The printed variant is neither successful nor conservative.
        assert!(!holds(&a, "irrational:printed", OperatorProperty::Successful));
        assert!(!holds(&a, "irrational:printed", OperatorProperty::Conservative));
    }

    #[test]
    fn requirements_parse() {
        let r: Requirements = "regular,rational".parse().unwrap();
        assert_eq!(r, Requirements::ALL);
        let r: Requirements = "conservative,rationality_preserving".parse().unwrap();
        assert!(!r.successful && r.conservative && r.rationality_preserving);
        assert!(r.is_subset_of(&Requirements::ALL));
        assert!(!Requirements::ALL.is_subset_of(&r));
        assert!("magic".parse::<Requirements>().is_err());
        assert_eq!(Requirements::ALL.describe(), "successful,conservative,rationality_preserving");
    }

    #[test]
    fn large_agendas_are_refused() {
        let labels: Vec<String> = (0..11).map(|i| format!("a{i}")).collect();
        let a = Agenda::from_valuations(&labels, &["0".repeat(11)]).unwrap();
        let op = make_operator(&a, "constant").unwrap();
        assert!(check_operator_property(&a, &op, OperatorProperty::Successful, 1)
            .unwrap_err()
            .is_resource_limit());
    }
}
