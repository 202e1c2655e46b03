mod common;

use std::collections::BTreeSet;

use dynjudge::agenda::{minimal_inconsistent_subsets, DEFAULT_SUBSET_BUDGET};
use dynjudge::revision::{check_operator_property, TiePolicy};
use dynjudge::search::replay_witness;
use dynjudge::{
    check_dynamic_rationality, exists_commuting_operator, fixtures, make_operator, make_rule, Agenda, CspInstance,
    DynamicOptions, Formula, JudgmentSet, OperatorProperty, Requirements, RevisionOperator,
};
use proptest::prelude::*;

fn agenda_strategy(max_k: usize) -> impl Strategy<Value = Agenda> {
    (1..=max_k)
        .prop_flat_map(|k| (Just(k), proptest::collection::btree_set(0u32..(1 << k), 1..=(1usize << k))))
        .prop_map(|(k, vals)| {
            let labels: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
            let vals: Vec<String> = vals.iter().map(|v| format!("{v:0k$b}")).collect();
            Agenda::from_valuations(&labels, &vals).unwrap()
        })
}

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just("a"), Just("b"), Just("c")].prop_map(Formula::atom);
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::negation),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::and(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::or(x, y)),
            (inner.clone(), inner).prop_map(|(x, y)| Formula::implies(x, y)),
        ]
    })
}

fn truth(f: &Formula, a: bool, b: bool, c: bool) -> bool {
    match f {
        Formula::Atom(name) => match name.as_str() {
            "a" => a,
            "b" => b,
            _ => c,
        },
        Formula::Not(x) => !truth(x, a, b, c),
        Formula::And(x, y) => truth(x, a, b, c) && truth(y, a, b, c),
        Formula::Or(x, y) => truth(x, a, b, c) || truth(y, a, b, c),
        Formula::Implies(x, y) => !truth(x, a, b, c) || truth(y, a, b, c),
    }
}

fn set_strategy(k: usize) -> impl Strategy<Value = JudgmentSet> {
    (0u64..(1 << (2 * k))).prop_map(JudgmentSet::from_bits)
}

fn universal_rules(a: &Agenda, n: usize) -> Vec<String> {
    let mut v = vec!["majority".to_string(), "dictator:1".into(), "oligarchy:1,2".into()];
    v.extend((1..=n).map(|m| format!("quota:{m}")));
    v.push(format!("constant:{}", a.valuation_strings()[0]));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn consistency_is_well_behaved(a in agenda_strategy(4), bits in 0u64..256) {
        let k = a.k();
        let set = JudgmentSet::from_bits(bits & ((1 << (2 * k)) - 1));
        for i in 0..k {
            let pair = JudgmentSet::from_literals([dynjudge::Literal::positive(i), dynjudge::Literal::negative(i)]);
            prop_assert!(!a.is_consistent(pair));
        }
        if a.is_consistent(set) {
            for l in set.literals() {
                prop_assert!(a.is_consistent(set.without(l)));
            }
            prop_assert!(a.rational_sets().iter().any(|r| set.is_subset(*r)));
        }
        prop_assert!(a.is_consistent(JudgmentSet::EMPTY));
        prop_assert_eq!(a.is_consistent(set), common::consistent(&common::valuations(&a), &common::lits(set)));
    }

    #[test]
    fn formula_backend_matches_truth_table(fs in proptest::collection::vec(formula_strategy(), 1..4)) {
        let mut seen = BTreeSet::new();
        let fs: Vec<Formula> = fs.into_iter().filter(|f| seen.insert(f.to_string())).collect();
        let atoms = vec!["a".to_string(), "b".into(), "c".into()];
        let compiled = Agenda::compile(&fs, Some(&atoms)).unwrap();
        let expected: BTreeSet<String> = (0..8u32)
            .map(|v| fs.iter().map(|f| if truth(f, v & 4 != 0, v & 2 != 0, v & 1 != 0) { '1' } else { '0' }).collect())
            .collect();
        let got: BTreeSet<String> = compiled.agenda.valuation_strings().into_iter().collect();
        prop_assert_eq!(got, expected);
        for f in &fs {
            let reparsed = dynjudge::agenda::parse_formula(&f.to_string()).unwrap();
            prop_assert_eq!(&reparsed, f);
        }
    }

    #[test]
    fn minimal_inconsistent_subsets_match_oracle(a in agenda_strategy(4)) {
        let lib: BTreeSet<Vec<(usize, bool)>> = minimal_inconsistent_subsets(&a, None, DEFAULT_SUBSET_BUDGET)
            .unwrap()
            .into_iter()
            .map(|s| {
                let mut l = common::lits(s);
                l.sort();
                l
            })
            .collect();
        prop_assert_eq!(lib, common::minimal_inconsistent(&a));
    }

    #[test]
    fn hamming_matches_argmin_oracle(a in agenda_strategy(4), seed in any::<u64>()) {
        let k = a.k();
        let mut order: Vec<usize> = (0..k).collect();
        let shift = (seed % k as u64) as usize;
        order.rotate_left(shift);
        order.truncate(1 + (seed as usize / 7) % k);
        let op = RevisionOperator::hamming(&a, TiePolicy::new(&a, order.clone()).unwrap());
        for bits in 0..1u64 << (2 * k) {
            let j = JudgmentSet::from_bits(bits);
            for p in a.literals() {
                prop_assert_eq!(op.revise(&a, j, p).ok(), common::hamming_oracle(&a, &order, j, p));
            }
        }
    }

    #[test]
    fn quota_rules_match_counting(profile in proptest::collection::vec(0usize..7, 2..=5)) {
        let a = fixtures::x_cond();
        let n = profile.len();
        let members: Vec<JudgmentSet> = profile.iter().map(|&i| a.rational_sets()[i]).collect();
        let mut previous: Option<JudgmentSet> = None;
        for m in (1..=n).rev() {
            let out = make_rule(&a, n, &format!("quota:{m}")).unwrap().apply(&a, &members).unwrap();
            prop_assert_eq!(out, common::quota_oracle(&members, m, a.k()));
            if let Some(stricter) = previous {
                prop_assert!(stricter.is_subset(out));
            }
            previous = Some(out);
        }
        let all: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let unanimity = make_rule(&a, n, &format!("quota:{n}")).unwrap().apply(&a, &members).unwrap();
        let oligarchy = make_rule(&a, n, &format!("oligarchy:{}", all.join(","))).unwrap().apply(&a, &members).unwrap();
        prop_assert_eq!(unanimity, oligarchy);
        if n % 2 == 1 {
            let maj = make_rule(&a, n, "majority").unwrap().apply(&a, &members).unwrap();
            prop_assert!(a.is_complete(maj));
        }
    }

    #[test]
    fn judgment_sets_round_trip_through_text(s in set_strategy(3)) {
        let a = fixtures::x_cond();
        prop_assert_eq!(a.parse_set(&a.render(s)).unwrap(), s);
        prop_assert_eq!(a.parse_bits(&s.to_bitpairs(3)).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constant_operator_commutes_with_every_rule(a in agenda_strategy(3), n in 2usize..=3) {
        let op = make_operator(&a, "constant").unwrap();
        for spec in universal_rules(&a, n) {
            let rule = make_rule(&a, n, &spec).unwrap();
            let r = check_dynamic_rationality(&a, &rule, &op, &DynamicOptions::default()).unwrap();
            prop_assert_eq!(r.violations, 0);
        }
    }

    #[test]
    fn rationality_preserving_revision_leaves_no_vacuous_squares(a in agenda_strategy(3)) {
        let op = make_operator(&a, "hamming").unwrap();
        let rule = make_rule(&a, 3, "majority").unwrap();
        let opts = DynamicOptions { include_contradictory: false, ..Default::default() };
        let r = check_dynamic_rationality(&a, &rule, &op, &opts).unwrap();
        prop_assert_eq!(r.vacuous, 0);
        prop_assert_eq!(r.commuting + r.violations, r.squares);
    }

    #[test]
    fn regular_operators_fix_learnt_inputs(a in agenda_strategy(3)) {
        for spec in ["hamming", "irrational:corrected", "constant"] {
            let op = make_operator(&a, spec).unwrap();
            let conservative = check_operator_property(&a, &op, OperatorProperty::Conservative, 1).unwrap().holds();
            prop_assert!(conservative);
            for &j in a.rational_sets() {
                for p in j.literals() {
                    prop_assert_eq!(op.revise(&a, j, p).unwrap(), j);
                }
            }
        }
    }

    #[test]
    fn weaker_requirements_stay_satisfiable(a in agenda_strategy(2), rule_pick in 0usize..4, n in 2usize..=3) {
        let specs = ["majority", "quota:1", "dictator:1", "oligarchy:1,2"];
        let rule = make_rule(&a, n, specs[rule_pick]).unwrap();
        let all = ["none", "successful", "conservative", "rational", "regular", "successful,rational", "conservative,rational", "regular,rational"];
        let reqs: Vec<Requirements> = all.iter().map(|s| s.parse().unwrap()).collect();
        for strong in &reqs {
            let out = exists_commuting_operator(&CspInstance::new(&a, &rule, *strong)).unwrap();
            let Some(table) = out.witness() else { continue };
            for weak in reqs.iter().filter(|w| w.is_subset_of(strong)) {
                prop_assert!(replay_witness(&a, &rule, *weak, table).unwrap().verified());
                let again = exists_commuting_operator(&CspInstance::new(&a, &rule, *weak)).unwrap();
                prop_assert!(again.witness().is_some());
            }
        }
    }

    #[test]
    fn search_agrees_with_oracle(a in agenda_strategy(2), rule_pick in 0usize..4, req_pick in 0usize..4) {
        let specs = ["majority", "quota:1", "quota:2", "dictator:2"];
        let reqs = ["regular,rational", "conservative,rational", "regular", "successful,rational"];
        let rule = make_rule(&a, 2, specs[rule_pick]).unwrap();
        let inst = CspInstance::new(&a, &rule, reqs[req_pick].parse().unwrap());
        let fast = exists_commuting_operator(&inst).unwrap();
        let slow = dynjudge::csp_cross_check_oracle(&inst).unwrap();
        prop_assert_eq!(fast.verdict.as_str(), slow.verdict.as_str());
        if let Some(t) = slow.witness() {
            prop_assert!(replay_witness(&a, &rule, inst.required, t).unwrap().verified());
        }
    }
}

#[test]
fn oracle_examples_agree() {
    let single = Agenda::from_valuations(&["p"], &["0", "1"]).unwrap();
    let cases = [
        (single, 2, "majority"),
        (fixtures::independent(2), 2, "quota:1"),
        (fixtures::x_cond(), 2, "quota:1"),
    ];
    for (a, n, spec) in cases {
        let rule = make_rule(&a, n, spec).unwrap();
        for req in ["regular,rational", "regular", "conservative,rational"] {
            let inst = CspInstance::new(&a, &rule, req.parse().unwrap());
            let fast = exists_commuting_operator(&inst).unwrap();
            let slow = dynjudge::csp_cross_check_oracle(&inst).unwrap();
            assert_eq!(fast.verdict.as_str(), slow.verdict.as_str(), "{spec} {req}");
        }
    }
}

#[test]
fn search_is_reproducible() {
    let a = fixtures::independent(2);
    let rule = make_rule(&a, 3, "majority").unwrap();
    let inst = CspInstance::new(&a, &rule, Requirements::ALL);
    let first = exists_commuting_operator(&inst).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let second = pool.install(|| exists_commuting_operator(&inst).unwrap());
    assert_eq!(first, second);
}
