//! Backtracking search for a revision operator that commutes with a fixed
//! aggregation rule.
//!
//! Commutation constraints for different learnt literals share no operator
//! values, so each literal is its own component and is searched
//! independently. Within a component the decision variables are the
//! revisions `J|p` of rational sets `J` (minus those pinned by
//! conservativeness). Once every member of a profile has a rational revision,
//! the constraint `F(J1|p, ..., Jn|p) = F(J1, ..., Jn)|p` forces the revision
//! of the collective set. Collective sets that are not rational get their
//! values only through such forcing.

use super::{check_instance, CspInstance, SearchOutcome, SearchStats, SearchVerdict};
use crate::agenda::{JudgmentSet, Literal};
use crate::error::Result;
use crate::revision::{default_irrational_target, OperatorTable};

/// Value of a decision variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Val {
    /// Index of a rational set.
    Exact(usize),
    /// Some irrational set; the concrete set comes from forcing or a default.
    Irr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KeyKind {
    /// Conservativeness fixes `S|p = S`.
    Pinned(JudgmentSet),
    /// A rational set's revision, chosen by search.
    Decision,
    /// A non-rational collective set's revision, set only by forcing.
    Free,
}

/// Instance data shared by all components.
struct Shared<'a> {
    inst: &'a CspInstance<'a>,
    rational: Vec<JudgmentSet>,
    /// Sets of the non-rational collective keys, after the rational ones.
    extra: Vec<JudgmentSet>,
    n: usize,
    /// Collective key of each profile.
    collective_key: Vec<usize>,
    /// Collective output of each profile.
    output: Vec<JudgmentSet>,
    /// Profiles in which each rational set occurs as a member.
    watch: Vec<Vec<u32>>,
}

impl<'a> Shared<'a> {
    fn new(inst: &'a CspInstance<'a>) -> Self {
        let agenda = inst.agenda;
        let rational = agenda.rational_sets().to_vec();
        let m = rational.len();
        let n = inst.rule.n();
        let count = m.pow(n as u32);
        let mut extra: Vec<JudgmentSet> = Vec::new();
        let mut collective_key = Vec::with_capacity(count);
        let mut output = Vec::with_capacity(count);
        let mut watch = vec![Vec::new(); m];
        let mut digits = vec![0usize; n];
        let mut members = vec![JudgmentSet::EMPTY; n];
        for idx in 0..count {
            let mut rest = idx;
            for d in digits.iter_mut().rev() {
                *d = rest % m;
                rest /= m;
            }
            for (slot, &d) in members.iter_mut().zip(&digits) {
                *slot = rational[d];
            }
            let out = inst.rule.apply_unchecked(agenda, &members);
            let key = match agenda.rational_index(out) {
                Some(r) => r,
                None => match extra.iter().position(|&e| e == out) {
                    Some(e) => m + e,
                    None => {
                        extra.push(out);
                        m + extra.len() - 1
                    }
                },
            };
            collective_key.push(key);
            output.push(out);
            let mut seen = digits.clone();
            seen.sort_unstable();
            seen.dedup();
            for d in seen {
                watch[d].push(idx as u32);
            }
        }
        Shared {
            inst,
            rational,
            extra,
            n,
            collective_key,
            output,
            watch,
        }
    }

    fn key_set(&self, key: usize) -> JudgmentSet {
        if key < self.rational.len() {
            self.rational[key]
        } else {
            self.extra[key - self.rational.len()]
        }
    }

    fn key_count(&self) -> usize {
        self.rational.len() + self.extra.len()
    }
}

enum Undo {
    Value(usize),
    Concrete(usize),
}

struct Component<'s, 'a> {
    shared: &'s Shared<'a>,
    lit: Literal,
    successful: bool,
    kind: Vec<KeyKind>,
    candidates: Vec<Vec<Val>>,
    /// Decision variables in search order.
    order: Vec<usize>,
    value: Vec<Option<Val>>,
    concrete: Vec<Option<JudgmentSet>>,
    trail: Vec<Undo>,
    queue: Vec<usize>,
    stats: &'s mut SearchStats,
    budget: u64,
}

struct BudgetExhausted;

impl<'s, 'a> Component<'s, 'a> {
    fn new(shared: &'s Shared<'a>, lit: Literal, stats: &'s mut SearchStats) -> Self {
        let inst = shared.inst;
        let req = inst.required;
        let m = shared.rational.len();
        let contradictory = inst.agenda.is_contradictory(lit);
        let allow_irrational = !req.rationality_preserving || contradictory;
        let mut kind = Vec::with_capacity(shared.key_count());
        let mut candidates = Vec::with_capacity(shared.key_count());
        let mut order = Vec::new();
        let mut value = vec![None; shared.key_count()];
        for (key, slot) in value.iter_mut().enumerate() {
            let set = shared.key_set(key);
            if req.conservative && set.contains(lit) {
                kind.push(KeyKind::Pinned(set));
                candidates.push(vec![]);
                if key < m {
                    *slot = Some(Val::Exact(key));
                }
            } else if key < m {
                let mut c: Vec<Val> = (0..m)
                    .filter(|&r| !req.successful || shared.rational[r].contains(lit))
                    .map(Val::Exact)
                    .collect();
                if allow_irrational {
                    c.push(Val::Irr);
                }
                kind.push(KeyKind::Decision);
                candidates.push(c);
                order.push(key);
            } else {
                kind.push(KeyKind::Free);
                candidates.push(vec![]);
            }
        }
        Component {
            shared,
            lit,
            successful: req.successful,
            kind,
            candidates,
            order,
            value,
            concrete: vec![None; shared.key_count()],
            trail: Vec::new(),
            queue: Vec::new(),
            stats,
            budget: inst.node_budget,
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("non-empty trail") {
                Undo::Value(k) => self.value[k] = None,
                Undo::Concrete(k) => self.concrete[k] = None,
            }
        }
        self.queue.clear();
    }

    fn set_value(&mut self, key: usize, v: Val) {
        self.value[key] = Some(v);
        self.trail.push(Undo::Value(key));
        self.queue.push(key);
    }

    /// Records `target` as the concrete revision of `key`; fails on a clash.
    fn set_concrete(&mut self, key: usize, target: JudgmentSet) -> bool {
        match self.concrete[key] {
            Some(existing) => existing == target,
            None => {
                self.concrete[key] = Some(target);
                self.trail.push(Undo::Concrete(key));
                true
            }
        }
    }

    fn acceptable_irrational(&self, target: JudgmentSet) -> bool {
        !self.shared.inst.agenda.is_rational(target) && (!self.successful || target.contains(self.lit))
    }

    /// Requires the revision of collective key `key` to be `target`.
    fn force(&mut self, key: usize, target: JudgmentSet) -> bool {
        self.stats.propagations += 1;
        match self.kind[key] {
            KeyKind::Pinned(set) => set == target,
            KeyKind::Free => (!self.successful || target.contains(self.lit)) && self.set_concrete(key, target),
            KeyKind::Decision => match self.value[key] {
                Some(Val::Exact(r)) => self.shared.rational[r] == target,
                Some(Val::Irr) => self.acceptable_irrational(target) && self.set_concrete(key, target),
                None => match self.shared.inst.agenda.rational_index(target) {
                    Some(r) if self.candidates[key].contains(&Val::Exact(r)) => {
                        self.set_value(key, Val::Exact(r));
                        true
                    }
                    Some(_) => false,
                    None if self.candidates[key].contains(&Val::Irr) && self.acceptable_irrational(target) => {
                        self.set_value(key, Val::Irr);
                        self.set_concrete(key, target)
                    }
                    None => false,
                },
            },
        }
    }

    /// Fires every commutation constraint whose members are all assigned.
    fn propagate(&mut self) -> bool {
        let shared = self.shared;
        let m = shared.rational.len();
        let n = shared.n;
        while let Some(key) = self.queue.pop() {
            'squares: for &profile in &shared.watch[key] {
                let mut rest = profile as usize;
                let mut revised = 0usize;
                let mut place = 1usize;
                for _ in 0..n {
                    let member = rest % m;
                    rest /= m;
                    match self.value[member] {
                        Some(Val::Exact(r)) => revised += r * place,
                        Some(Val::Irr) | None => continue 'squares,
                    }
                    place *= m;
                }
                let target = shared.output[revised];
                if !self.force(shared.collective_key[profile as usize], target) {
                    return false;
                }
            }
        }
        true
    }

    fn solve(&mut self) -> Result<bool, BudgetExhausted> {
        self.queue = (0..self.shared.rational.len())
            .filter(|&k| self.value[k].is_some())
            .collect();
        if !self.propagate() {
            return Ok(false);
        }
        self.descend(0, 1)
    }

    fn descend(&mut self, from: usize, depth: usize) -> Result<bool, BudgetExhausted> {
        let Some(pos) = (from..self.order.len()).find(|&i| self.value[self.order[i]].is_none()) else {
            return Ok(true);
        };
        let var = self.order[pos];
        self.stats.max_depth = self.stats.max_depth.max(depth);
        for ci in 0..self.candidates[var].len() {
            if self.stats.nodes >= self.budget {
                return Err(BudgetExhausted);
            }
            self.stats.nodes += 1;
            let mark = self.trail.len();
            let cand = self.candidates[var][ci];
            self.set_value(var, cand);
            if self.propagate() && self.descend(pos + 1, depth + 1)? {
                return Ok(true);
            }
            self.undo_to(mark);
        }
        Ok(false)
    }

    fn extract(&self, table: &mut OperatorTable) {
        let agenda = self.shared.inst.agenda;
        for key in 0..self.shared.key_count() {
            let set = self.shared.key_set(key);
            let result = match (self.kind[key], self.value.get(key).copied().flatten()) {
                (KeyKind::Pinned(s), _) => Some(s),
                (_, Some(Val::Exact(r))) => Some(self.shared.rational[r]),
                (_, Some(Val::Irr)) => Some(
                    self.concrete[key].unwrap_or_else(|| default_irrational_target(agenda, self.lit)),
                ),
                (KeyKind::Free, None) => self.concrete[key],
                (KeyKind::Decision, None) => unreachable!("all decision variables are assigned"),
            };
            if let Some(r) = result {
                table.insert(set, self.lit, r);
            }
        }
    }
}

/// Decides whether some operator with the required properties makes the rule
/// dynamically rational. UNSAT is reported only after exhaustive search.
pub fn exists_commuting_operator(inst: &CspInstance<'_>) -> Result<SearchOutcome> {
    check_instance(inst)?;
    let shared = Shared::new(inst);
    let mut stats = SearchStats::default();
    let mut table = OperatorTable::new();
    for lit in inst.agenda.literals() {
        stats.components += 1;
        let mut comp = Component::new(&shared, lit, &mut stats);
        match comp.solve() {
            Ok(true) => comp.extract(&mut table),
            Ok(false) => {
                return Ok(SearchOutcome {
                    verdict: SearchVerdict::Unsat { literal: lit },
                    stats,
                })
            }
            Err(BudgetExhausted) => {
                return Ok(SearchOutcome {
                    verdict: SearchVerdict::BudgetExhausted,
                    stats,
                })
            }
        }
    }
    Ok(SearchOutcome {
        verdict: SearchVerdict::Sat(table),
        stats,
    })
}
