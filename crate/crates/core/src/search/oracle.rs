//! Brute-force enumeration of every candidate operator restricted to the
//! rational sets, used to cross-check the backtracking search.

use std::collections::BTreeMap;

use super::{check_instance, CspInstance, SearchOutcome, SearchStats, SearchVerdict};
use crate::aggregation::ProfileSpace;
use crate::agenda::{JudgmentSet, Literal};
use crate::error::{Error, Result};
use crate::revision::{default_irrational_target, OperatorTable};

const ORACLE_BUDGET: u128 = 10_000_000;

/// Enumerates, per learnt literal, all assignments of revisions to the free
/// rational sets (`None` standing for "some irrational set") and checks the
/// commutation constraints directly. Same verdict contract as the search.
pub fn csp_cross_check_oracle(inst: &CspInstance<'_>) -> Result<SearchOutcome> {
    check_instance(inst)?;
    let agenda = inst.agenda;
    let req = inst.required;
    let rational = agenda.rational_sets();
    let space = ProfileSpace::new(agenda, inst.rule.n());
    let profiles: Vec<Vec<JudgmentSet>> = (0..space.len() as u64).map(|i| space.get(i)).collect();

    let mut per_literal = Vec::new();
    let mut total: u128 = 0;
    for lit in agenda.literals() {
        let options: Vec<Option<JudgmentSet>> = rational
            .iter()
            .copied()
            .filter(|r| !req.successful || r.contains(lit))
            .map(Some)
            .chain((!req.rationality_preserving || agenda.is_contradictory(lit)).then_some(None))
            .collect();
        let free: Vec<usize> = (0..rational.len())
            .filter(|&i| !(req.conservative && rational[i].contains(lit)))
            .collect();
        let count = (options.len() as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
        total = total.saturating_add(count);
        per_literal.push((lit, options, free, count));
    }
    if total > ORACLE_BUDGET {
        return Err(Error::resource("oracle assignments", total, ORACLE_BUDGET));
    }

    let mut stats = SearchStats::default();
    let mut table = OperatorTable::new();
    for (lit, options, free, count) in per_literal {
        stats.components += 1;
        let mut found = None;
        for code in 0..count {
            stats.nodes += 1;
            let mut value: Vec<Option<JudgmentSet>> = rational.iter().map(|&r| Some(r)).collect();
            let mut rest = code;
            for &i in &free {
                value[i] = options[(rest % options.len() as u128) as usize];
                rest /= options.len() as u128;
            }
            if let Some(forced) = satisfies(inst, lit, &value, &profiles) {
                found = Some((value, forced));
                break;
            }
        }
        let Some((value, forced)) = found else {
            return Ok(SearchOutcome {
                verdict: SearchVerdict::Unsat { literal: lit },
                stats,
            });
        };
        for (i, v) in value.iter().enumerate() {
            let set = rational[i];
            let result = forced
                .get(&set)
                .copied()
                .or(*v)
                .unwrap_or_else(|| default_irrational_target(agenda, lit));
            table.insert(set, lit, result);
        }
        for (set, result) in forced {
            table.insert(set, lit, result);
        }
    }
    Ok(SearchOutcome {
        verdict: SearchVerdict::Sat(table),
        stats,
    })
}

/// Returns the collective revisions the assignment forces, or `None` if some
/// constraint fails.
fn satisfies(
    inst: &CspInstance<'_>,
    lit: Literal,
    value: &[Option<JudgmentSet>],
    profiles: &[Vec<JudgmentSet>],
) -> Option<BTreeMap<JudgmentSet, JudgmentSet>> {
    let agenda = inst.agenda;
    let req = inst.required;
    let mut forced: BTreeMap<JudgmentSet, JudgmentSet> = BTreeMap::new();
    'profiles: for profile in profiles {
        let mut revised = Vec::with_capacity(profile.len());
        for member in profile {
            let idx = agenda.rational_index(*member)?;
            match value[idx] {
                Some(r) => revised.push(r),
                None => continue 'profiles,
            }
        }
        let collective = inst.rule.apply(agenda, profile).ok()?;
        let target = inst.rule.apply(agenda, &revised).ok()?;
        if *forced.entry(collective).or_insert(target) != target {
            return None;
        }
    }
    for (&collective, &target) in &forced {
        if req.successful && !target.contains(lit) {
            return None;
        }
        if req.conservative && collective.contains(lit) && target != collective {
            return None;
        }
        if let Some(idx) = agenda.rational_index(collective) {
            match value[idx] {
                Some(r) if r != target => return None,
                Some(_) => {}
                None if agenda.is_rational(target) => return None,
                None => {}
            }
        }
    }
    Some(forced)
}
