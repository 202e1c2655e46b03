use super::{Agenda, JudgmentSet, Literal};
use crate::error::{Error, Result};

/// Default cap on the number of literal subsets (`2^(2k)`) the enumeration may touch.
pub const DEFAULT_SUBSET_BUDGET: u64 = 1 << 24;

/// Every minimal inconsistent subset of the agenda, optionally bounded in size.
///
/// Ordered by size, then lexicographically by literal index.
pub fn minimal_inconsistent_subsets(
    agenda: &Agenda,
    max_size: Option<usize>,
    budget: u64,
) -> Result<Vec<JudgmentSet>> {
    let width = 2 * agenda.k();
    let space = 1u128 << width;
    if space > budget as u128 {
        return Err(Error::resource("literal subsets", space, budget as u128));
    }
    let n = 1usize << width;

    // Downward closure of the rational sets: consistent[s] iff s extends to a valuation.
    let mut consistent = vec![false; n];
    for r in agenda.rational_sets() {
        consistent[r.bits() as usize] = true;
    }
    for b in 0..width {
        let bit = 1usize << b;
        for s in 0..n {
            if s & bit == 0 && consistent[s | bit] {
                consistent[s] = true;
            }
        }
    }

    let bound = max_size.unwrap_or(width);
    let mut out: Vec<JudgmentSet> = (0..n)
        .filter(|&s| !consistent[s] && (s.count_ones() as usize) <= bound)
        .filter(|&s| {
            let mut rest = s;
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                if !consistent[s ^ low] {
                    return false;
                }
                rest ^= low;
            }
            true
        })
        .map(|s| JudgmentSet::from_bits(s as u64))
        .collect();
    out.sort_by_key(|s| (s.len(), s.literals().map(Literal::index).collect::<Vec<_>>()));
    Ok(out)
}

/// True iff some minimal inconsistent subset has three or more members.
pub fn is_non_simple(agenda: &Agenda, budget: u64) -> Result<bool> {
    Ok(minimal_inconsistent_subsets(agenda, None, budget)?
        .iter()
        .any(|s| s.len() >= 3))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_cond() -> Agenda {
        let vals: Vec<String> = (0..8u32)
            .map(|v| format!("{v:03b}"))
            .filter(|s| s != "110")
            .collect();
        Agenda::from_valuations(&["p", "p->q", "q"], &vals).unwrap()
    }

    fn names(a: &Agenda, sets: &[JudgmentSet]) -> Vec<String> {
        sets.iter().map(|s| a.render(*s)).collect()
    }

    #[test]
    fn x_cond_mis() {
        let a = x_cond();
        let mis = minimal_inconsistent_subsets(&a, None, DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(
            names(&a, &mis),
            vec!["{p, ¬p}", "{p->q, ¬(p->q)}", "{q, ¬q}", "{p, p->q, ¬q}"]
        );
        assert!(is_non_simple(&a, DEFAULT_SUBSET_BUDGET).unwrap());
    }

    #[test]
    fn size_bound_filters() {
        let a = x_cond();
        let mis = minimal_inconsistent_subsets(&a, Some(2), DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(mis.len(), 3);
    }

    #[test]
    fn independent_agenda_is_simple() {
        let a = Agenda::from_valuations(&["p", "q"], &["00", "01", "10", "11"]).unwrap();
        let mis = minimal_inconsistent_subsets(&a, None, DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(names(&a, &mis), vec!["{p, ¬p}", "{q, ¬q}"]);
        assert!(!is_non_simple(&a, DEFAULT_SUBSET_BUDGET).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let a = x_cond();
        let err = minimal_inconsistent_subsets(&a, None, 32).unwrap_err();
        assert!(err.is_resource_limit());
    }
}
