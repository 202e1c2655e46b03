//! Independent reference implementations used as test oracles. They work on
//! valuation strings and plain loops and share no code paths with the
//! library beyond reading an agenda's valuation list and labels.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use dynjudge::aggregation::ProfileSpace;
use dynjudge::{Agenda, AggregationRule, JudgmentSet, Literal};

/// `(issue, positive)` pairs.
pub type Lits = Vec<(usize, bool)>;

pub fn lits(set: JudgmentSet) -> Lits {
    set.literals().map(|l| (l.issue(), l.is_positive())).collect()
}

pub fn to_set(lits: &[(usize, bool)]) -> JudgmentSet {
    JudgmentSet::from_literals(lits.iter().map(|&(i, pos)| if pos { Literal::positive(i) } else { Literal::negative(i) }))
}

/// Valuations of the agenda as character vectors.
pub fn valuations(agenda: &Agenda) -> Vec<Vec<char>> {
    agenda.valuation_strings().iter().map(|s| s.chars().collect()).collect()
}

/// Consistency: some admissible valuation agrees with every literal.
pub fn consistent(vals: &[Vec<char>], lits: &[(usize, bool)]) -> bool {
    vals.iter()
        .any(|v| lits.iter().all(|&(i, pos)| v[i] == if pos { '1' } else { '0' }))
}

/// A formula as a closure over an atom assignment.
pub type Column = dyn Fn(&[bool]) -> bool;

/// Truth-table valuations for formulas given as closures over an atom assignment.
pub fn truth_table(atoms: usize, formulas: &[&Column]) -> BTreeSet<String> {
    (0..1u32 << atoms)
        .map(|bits| {
            let a: Vec<bool> = (0..atoms).map(|i| bits >> (atoms - 1 - i) & 1 == 1).collect();
            formulas.iter().map(|f| if f(&a) { '1' } else { '0' }).collect()
        })
        .collect()
}

/// Every minimal inconsistent subset, by exhaustive enumeration of literal subsets.
pub fn minimal_inconsistent(agenda: &Agenda) -> BTreeSet<Vec<(usize, bool)>> {
    let vals = valuations(agenda);
    let all: Lits = (0..agenda.k()).flat_map(|i| [(i, true), (i, false)]).collect();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << all.len()) {
        let subset: Lits = (0..all.len()).filter(|b| mask >> b & 1 == 1).map(|b| all[b]).collect();
        if consistent(&vals, &subset) {
            continue;
        }
        let minimal = (0..subset.len()).all(|skip| {
            let smaller: Lits = subset.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &l)| l).collect();
            consistent(&vals, &smaller)
        });
        if minimal {
            let mut s = subset;
            s.sort();
            out.insert(s);
        }
    }
    out
}

/// Distance-based revision by direct argmin over valuation strings: fewest
/// changed literals, then keep protected issues in priority order, then the
/// lexicographically smallest valuation.
pub fn hamming_oracle(agenda: &Agenda, protected: &[usize], set: JudgmentSet, lit: Literal) -> Option<JudgmentSet> {
    if set.contains(lit) {
        return Some(set);
    }
    let k = agenda.k();
    let code: Vec<char> = set.to_issue_string(k).chars().collect();
    let want = if lit.is_positive() { '1' } else { '0' };
    let cost = |v: &[char], i: usize| match (code[i], v[i]) {
        ('-', _) | ('*', _) => 1,
        (a, b) if a == b => 0,
        _ => 2,
    };
    let mut best: Vec<Vec<char>> = valuations(agenda).into_iter().filter(|v| v[lit.issue()] == want).collect();
    let d = best.iter().map(|v| (0..k).map(|i| cost(v, i)).sum::<usize>()).min()?;
    best.retain(|v| (0..k).map(|i| cost(v, i)).sum::<usize>() == d);
    for &i in protected {
        if best.iter().any(|v| v[i] == code[i]) {
            best.retain(|v| v[i] == code[i]);
        }
    }
    best.sort();
    let v = &best[0];
    Some(to_set(&(0..k).map(|i| (i, v[i] == '1')).collect::<Vec<_>>()))
}

/// All profiles of rational sets, in no particular order.
pub fn all_profiles(agenda: &Agenda, n: usize) -> Vec<Vec<JudgmentSet>> {
    let mut out: Vec<Vec<JudgmentSet>> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                agenda.rational_sets().iter().map(move |&r| {
                    let mut q = p.clone();
                    q.push(r);
                    q
                })
            })
            .collect();
    }
    out
}

/// Systematicity by comparing every pair of (profile, literal) instances.
pub fn systematic_pairwise(agenda: &Agenda, rule: &AggregationRule, domain: &[Vec<JudgmentSet>]) -> bool {
    let mut instances = Vec::new();
    for p in domain {
        let out = rule.apply(agenda, p).unwrap();
        for l in agenda.literals() {
            let coalition: Vec<usize> = (0..p.len()).filter(|&i| p[i].contains(l)).collect();
            instances.push((coalition, out.contains(l)));
        }
    }
    for a in &instances {
        for b in &instances {
            if a.0 == b.0 && a.1 != b.1 {
                return false;
            }
        }
    }
    true
}

/// Number of profiles the library's own profile space enumerates.
pub fn profile_count(agenda: &Agenda, n: usize) -> u128 {
    ProfileSpace::new(agenda, n).len()
}

/// Proposition-wise quota acceptance computed from raw literal counts.
pub fn quota_oracle(profile: &[JudgmentSet], m: usize, k: usize) -> JudgmentSet {
    let mut counts: HashMap<(usize, bool), usize> = HashMap::new();
    for j in profile {
        for l in lits(*j) {
            *counts.entry(l).or_default() += 1;
        }
    }
    let accepted: Lits = (0..k)
        .flat_map(|i| [(i, true), (i, false)])
        .filter(|l| counts.get(l).copied().unwrap_or(0) >= m)
        .collect();
    to_set(&accepted)
}
