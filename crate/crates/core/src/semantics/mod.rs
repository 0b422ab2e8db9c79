//! Truth of formulas in Kripke models.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use crate::models::{KripkeModel, PointedModel, Relation};
use crate::syntax::{AgentSet, Formula, RESERVED_ATOM};

/// Evaluation failure: the formula mentions names the model does not declare.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    /// Undeclared atom.
    UnknownAtom(alloc::string::String),
    /// Undeclared agent.
    UnknownAgent(alloc::string::String),
    /// Undeclared state.
    UnknownState(alloc::string::String),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::UnknownAtom(a) => write!(f, "atom {a:?} is not in the model's vocabulary"),
            EvalError::UnknownAgent(a) => write!(f, "agent {a:?} is not in the model's vocabulary"),
            EvalError::UnknownState(s) => write!(f, "state {s:?} is not in the model"),
        }
    }
}

impl core::error::Error for EvalError {}

/// Checks that every name of `f` is declared by `m`.
pub fn check_vocabulary(m: &KripkeModel, f: &Formula) -> Result<(), EvalError> {
    for a in f.atoms() {
        if !m.vocab().atoms.contains(&a) && a.name() != RESERVED_ATOM {
            return Err(EvalError::UnknownAtom(a.name().to_string()));
        }
    }
    for a in f.agents() {
        if m.relation(&a).is_none() {
            return Err(EvalError::UnknownAgent(a.id().to_string()));
        }
    }
    Ok(())
}

/// `M, s ⊨ f`.
pub fn eval(pm: &PointedModel, f: &Formula) -> Result<bool, EvalError> {
    eval_at(&pm.model, pm.point, f)
}

/// `M, s ⊨ f` for a state index.
pub fn eval_at(m: &KripkeModel, s: usize, f: &Formula) -> Result<bool, EvalError> {
    check_vocabulary(m, f)?;
    Ok(truth(m, s, f))
}

/// `M, s ⊨ f` for a state id.
pub fn eval_named(m: &KripkeModel, state: &str, f: &Formula) -> Result<bool, EvalError> {
    let s = m
        .index_of(state)
        .ok_or_else(|| EvalError::UnknownState(state.to_string()))?;
    eval_at(m, s, f)
}

/// `M ⊨ f`: truth at every state.
pub fn global_truth(m: &KripkeModel, f: &Formula) -> Result<bool, EvalError> {
    check_vocabulary(m, f)?;
    Ok((0..m.state_count()).all(|s| truth(m, s, f)))
}

/// Recursive truth without vocabulary checks; unknown names read as false / no edges.
pub fn truth(m: &KripkeModel, s: usize, f: &Formula) -> bool {
    match f {
        Formula::Atom(p) => m.holds(s, p),
        Formula::Not(g) => !truth(m, s, g),
        Formula::And(l, r) => truth(m, s, l) && truth(m, s, r),
        Formula::Know(a, g) => m
            .relation(a)
            .map_or(true, |r| r.successors(s).iter().all(|&t| truth(m, t, g))),
        Formula::Everyone(group, g) => group
            .iter()
            .filter_map(|a| m.relation(a))
            .all(|r| r.successors(s).iter().all(|&t| truth(m, t, g))),
        Formula::Distributed(group, g) => {
            let rels: Vec<&Relation> = group.iter().filter_map(|a| m.relation(a)).collect();
            let Some((first, rest)) = rels.split_first() else {
                return true;
            };
            first
                .successors(s)
                .iter()
                .filter(|&&t| rest.iter().all(|r| r.contains(s, t)))
                .all(|&t| truth(m, t, g))
        }
        Formula::Common(group, g) => {
            let n = m.state_count();
            let rels: Vec<&Relation> = group.iter().filter_map(|a| m.relation(a)).collect();
            let mut seen = alloc::vec![false; n];
            let mut stack: Vec<usize> = rels
                .iter()
                .flat_map(|r| r.successors(s).iter().copied())
                .collect();
            while let Some(t) = stack.pop() {
                if seen[t] {
                    continue;
                }
                seen[t] = true;
                if !truth(m, t, g) {
                    return false;
                }
                for r in &rels {
                    stack.extend(r.successors(t).iter().copied().filter(|&u| !seen[u]));
                }
            }
            true
        }
    }
}

/// Which derived group relation to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    /// Union: everyone knows.
    Everyone,
    /// Intersection: distributed knowledge.
    Distributed,
    /// Transitive closure of the union: common knowledge.
    Common,
}

/// The relation interpreting `E_A`, `D_A` or `C_A`.
pub fn group_relation(m: &KripkeModel, kind: GroupKind, group: &AgentSet) -> Relation {
    let n = m.state_count();
    let rels: Vec<&Relation> = group.iter().filter_map(|a| m.relation(a)).collect();
    match kind {
        GroupKind::Everyone => Relation::union(n, rels),
        GroupKind::Distributed => Relation::intersection(n, rels),
        GroupKind::Common => Relation::union(n, rels).transitive_closure(),
    }
}

/// Truth values of every subformula of a target formula at every state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    columns: BTreeMap<Formula, Vec<bool>>,
    scans: usize,
}

impl Labeling {
    /// Truth of `f` at state `s`; negations of labeled formulas are answered too.
    pub fn get(&self, s: usize, f: &Formula) -> Option<bool> {
        if let Some(col) = self.columns.get(f) {
            return Some(col[s]);
        }
        match f {
            Formula::Not(g) => self.columns.get(&**g).map(|col| !col[s]),
            _ => None,
        }
    }

    /// The full column of a labeled formula.
    pub fn column(&self, f: &Formula) -> Option<&[bool]> {
        self.columns.get(f).map(Vec::as_slice)
    }

    /// Labeled formulas.
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.columns.keys()
    }

    /// Number of relation edges visited while labeling.
    pub fn relation_scans(&self) -> usize {
        self.scans
    }
}

/// Labels every state with every subformula of `f`, shortest subformulas first.
///
/// Each modal subformula visits each edge of the relations involved at most
/// once; `C` runs a backward search from the states falsifying its argument.
pub fn label(m: &KripkeModel, f: &Formula) -> Labeling {
    let n = m.state_count();
    let mut subs: Vec<Formula> = f.subformulas().into_iter().collect();
    subs.sort_by_key(Formula::length);
    let mut scans = 0;
    let mut reversed: BTreeMap<&crate::syntax::Agent, Vec<Vec<usize>>> = BTreeMap::new();
    let reverse = |scans: &mut usize| -> BTreeMap<&crate::syntax::Agent, Vec<Vec<usize>>> {
        let mut out = BTreeMap::new();
        for (a, r) in m.relations() {
            let mut pred = alloc::vec![Vec::new(); n];
            for (s, t) in r.pairs() {
                *scans += 1;
                pred[t].push(s);
            }
            out.insert(a, pred);
        }
        out
    };
    let mut columns: BTreeMap<Formula, Vec<bool>> = BTreeMap::new();
    for g in subs {
        let col = match &g {
            Formula::Atom(p) => (0..n).map(|s| m.holds(s, p)).collect(),
            Formula::Not(h) => columns[&**h].iter().map(|v| !v).collect(),
            Formula::And(l, r) => columns[&**l]
                .iter()
                .zip(&columns[&**r])
                .map(|(a, b)| *a && *b)
                .collect(),
            Formula::Know(a, h) => {
                let arg = &columns[&**h];
                match m.relation(a) {
                    None => alloc::vec![true; n],
                    Some(r) => (0..n)
                        .map(|s| {
                            let succ = r.successors(s);
                            scans += succ.len();
                            succ.iter().all(|&t| arg[t])
                        })
                        .collect(),
                }
            }
            Formula::Everyone(group, h) => {
                let arg = &columns[&**h];
                let mut col = alloc::vec![true; n];
                for r in group.iter().filter_map(|a| m.relation(a)) {
                    for (s, t) in r.pairs() {
                        scans += 1;
                        if !arg[t] {
                            col[s] = false;
                        }
                    }
                }
                col
            }
            Formula::Distributed(group, h) => {
                let arg = &columns[&**h];
                let rels: Vec<&Relation> = group.iter().filter_map(|a| m.relation(a)).collect();
                let mut count = alloc::vec![0usize; n];
                let mut col = alloc::vec![true; n];
                for s in 0..n {
                    for r in &rels {
                        for &t in r.successors(s) {
                            scans += 1;
                            count[t] += 1;
                        }
                    }
                    for &t in rels.first().map_or(&[][..], |r| r.successors(s)) {
                        if count[t] == rels.len() && !arg[t] {
                            col[s] = false;
                        }
                    }
                    for r in &rels {
                        for &t in r.successors(s) {
                            count[t] = 0;
                        }
                    }
                }
                col
            }
            Formula::Common(group, h) => {
                if reversed.is_empty() {
                    reversed = reverse(&mut scans);
                }
                let arg = &columns[&**h];
                let preds: Vec<&Vec<Vec<usize>>> =
                    group.iter().filter_map(|a| reversed.get(a)).collect();
                // reach[s]: some path of length >= 1 from s ends in a state falsifying h
                let mut reach = alloc::vec![false; n];
                let mut expanded = alloc::vec![false; n];
                let mut queue: Vec<usize> = (0..n).filter(|&t| !arg[t]).collect();
                while let Some(t) = queue.pop() {
                    if expanded[t] {
                        continue;
                    }
                    expanded[t] = true;
                    for p in &preds {
                        for &s in &p[t] {
                            scans += 1;
                            if !reach[s] {
                                reach[s] = true;
                                if !expanded[s] {
                                    queue.push(s);
                                }
                            }
                        }
                    }
                }
                reach.iter().map(|r| !r).collect()
            }
        };
        columns.insert(g, col);
    }
    Labeling { columns, scans }
}
