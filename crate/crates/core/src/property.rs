//! Verdicts and witnesses shared by rule and operator property checks.

use crate::agenda::{JudgmentSet, Literal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
        }
    }
}

/// Counterexample evidence for a violated property.
///
/// Individuals are 0-based here; reports print them 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The rule's declared domain is not the set of all rational profiles.
    RestrictedDomain { domain_size: u64 },
    /// Every profile in the domain yields this output.
    ConstantOutput { output: JudgmentSet },
    /// A profile whose output fails a requirement.
    Output { profile: Vec<JudgmentSet>, output: JudgmentSet },
    /// Raising support for an accepted literal overturned its acceptance.
    Monotonicity {
        profile: Vec<JudgmentSet>,
        literal: Literal,
        member: usize,
        replacement: JudgmentSet,
        output_after: JudgmentSet,
    },
    /// The same support coalition led to different collective verdicts.
    Systematicity {
        coalition: Vec<usize>,
        first: (Vec<JudgmentSet>, Literal, bool),
        second: (Vec<JudgmentSet>, Literal, bool),
    },
    /// The rule equals the intersection over this group on the whole domain.
    Oligarchy { members: Vec<usize> },
    /// A unanimous literal missing from the output.
    Unanimity {
        profile: Vec<JudgmentSet>,
        literal: Option<Literal>,
        output: JudgmentSet,
    },
    /// A revision pair violating an operator property; `result` is `None`
    /// when the revision is undefined.
    Revision {
        set: JudgmentSet,
        literal: Literal,
        result: Option<JudgmentSet>,
    },
}

/// Outcome of one exhaustively checked property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: String,
    pub verdict: Verdict,
    /// Items (profiles, or judgment-set/literal pairs) quantified over.
    pub examined: u64,
    /// Exact number of violating instances found.
    pub violations: u64,
    pub witnesses: Vec<Witness>,
}

impl PropertyReport {
    pub(crate) fn from_scan(property: &str, examined: u64, violations: u64, witnesses: Vec<Witness>) -> Self {
        PropertyReport {
            property: property.to_string(),
            verdict: if violations == 0 { Verdict::Holds } else { Verdict::Violated },
            examined,
            violations,
            witnesses,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}
