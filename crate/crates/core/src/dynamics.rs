//! Dynamic rationality: does aggregating revised judgments equal revising
//! the aggregate?

use crate::aggregation::AggregationRule;
use crate::agenda::{Agenda, JudgmentSet, Literal};
use crate::error::{Error, Result};
use crate::revision::RevisionOperator;
use crate::scan::scan_tallied;

/// Default cap on `domain size × literals`.
pub const DEFAULT_SQUARE_BUDGET: u64 = 100_000_000;

const VACUOUS: usize = 0;
const COMMUTING: usize = 1;

/// The four corners for one profile and one learnt literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationSquare {
    pub profile: Vec<JudgmentSet>,
    pub learnt: Literal,
    /// `F(profile)`.
    pub collective: JudgmentSet,
    /// `F(profile)|p`; `None` when the revision is undefined.
    pub collective_revised: Option<JudgmentSet>,
    /// `(J1|p, ..., Jn|p)`; `None` entries are undefined revisions.
    pub revised_profile: Vec<Option<JudgmentSet>>,
    /// `F(J1|p, ..., Jn|p)` when the revised profile is in the domain.
    pub revised_collective: Option<JudgmentSet>,
    /// `None` for vacuous squares.
    pub commutes: Option<bool>,
    pub vacuous: bool,
}

/// Builds the square for `profile` (which must be in the rule's domain) and `learnt`.
pub fn commutation_diagram(
    agenda: &Agenda,
    rule: &AggregationRule,
    op: &RevisionOperator,
    profile: &[JudgmentSet],
    learnt: Literal,
) -> Result<CommutationSquare> {
    if !rule.in_domain(agenda, profile) {
        return Err(Error::DomainViolation);
    }
    Ok(square(agenda, rule, op, profile, learnt))
}

fn square(
    agenda: &Agenda,
    rule: &AggregationRule,
    op: &RevisionOperator,
    profile: &[JudgmentSet],
    learnt: Literal,
) -> CommutationSquare {
    let collective = rule.apply_unchecked(agenda, profile);
    let collective_revised = op.revise(agenda, collective, learnt).ok();
    let revised_profile: Vec<Option<JudgmentSet>> = profile
        .iter()
        .map(|&j| op.revise(agenda, j, learnt).ok())
        .collect();
    let defined: Option<Vec<JudgmentSet>> = revised_profile.iter().copied().collect();
    let revised_collective = defined
        .filter(|members| rule.in_domain(agenda, members))
        .map(|members| rule.apply_unchecked(agenda, &members));
    let (vacuous, commutes) = match (revised_collective, collective_revised) {
        (Some(a), Some(b)) => (false, Some(a == b)),
        _ => (true, None),
    };
    CommutationSquare {
        profile: profile.to_vec(),
        learnt,
        collective,
        collective_revised,
        revised_profile,
        revised_collective,
        commutes,
        vacuous,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DynamicOptions {
    pub max_witnesses: usize,
    pub square_budget: u64,
    /// Also learn literals that no rational set contains.
    pub include_contradictory: bool,
}

impl Default for DynamicOptions {
    fn default() -> Self {
        DynamicOptions {
            max_witnesses: 100,
            square_budget: DEFAULT_SQUARE_BUDGET,
            include_contradictory: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicReport {
    pub rule: String,
    pub operator: String,
    pub n: usize,
    pub squares: u64,
    pub commuting: u64,
    pub violations: u64,
    pub vacuous: u64,
    /// The first violating squares in canonical order (profile, then literal).
    pub witnesses: Vec<CommutationSquare>,
}

impl DynamicReport {
    pub fn is_dynamically_rational(&self) -> bool {
        self.violations == 0
    }
}

/// Evaluates every square over the rule's domain and the agenda's literals.
pub fn check_dynamic_rationality(
    agenda: &Agenda,
    rule: &AggregationRule,
    op: &RevisionOperator,
    opts: &DynamicOptions,
) -> Result<DynamicReport> {
    let literals: Vec<Literal> = agenda
        .literals()
        .filter(|&l| opts.include_contradictory || !agenda.is_contradictory(l))
        .collect();
    let domain = rule.domain_size(agenda);
    let needed = domain * literals.len() as u128;
    if needed > opts.square_budget as u128 {
        return Err(Error::resource("commutation squares", needed, opts.square_budget as u128));
    }
    let (violations, witnesses, tallies) = scan_tallied(domain as u64, opts.max_witnesses.max(1), |i, sink| {
        let mut profile = Vec::with_capacity(rule.n());
        rule.domain_profile(agenda, i, &mut profile);
        for &lit in &literals {
            let sq = square(agenda, rule, op, &profile, lit);
            match sq.commutes {
                None => sink.tally(VACUOUS),
                Some(true) => sink.tally(COMMUTING),
                Some(false) => sink.push(sq),
            }
        }
    });
    Ok(DynamicReport {
        rule: rule.id().to_string(),
        operator: op.id().to_string(),
        n: rule.n(),
        squares: needed as u64,
        commuting: tallies[COMMUTING],
        violations,
        vacuous: tallies[VACUOUS],
        witnesses,
    })
}
