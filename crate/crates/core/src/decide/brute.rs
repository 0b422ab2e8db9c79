//! Exhaustive search over small models, independent of the tableau.
//!
//! Every model is generated from state 0 and evaluated only there: any
//! pointed model can be cut down to its generated submodel without changing
//! truth or leaving its class. Isomorphic copies under permutations fixing 0
//! are skipped.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use super::DecideError;
use crate::models::{KripkeModel, ModelClass, PointedModel, Relation, State};
use crate::syntax::{Agent, AgentSet, Atom, Formula, Vocabulary};

/// Largest state bound the enumerator accepts.
pub const MAX_BRUTE_STATES: usize = 4;
/// Largest number of candidate models per call.
pub const MAX_BRUTE_MODELS: u64 = 1 << 30;

/// Outcome of the exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BruteVerdict {
    /// A model was found.
    Satisfiable,
    /// No model with at most the bound's number of states exists.
    UnsatisfiableWithinBound,
}

/// Verdict plus the model found, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteResult {
    /// The verdict.
    pub verdict: BruteVerdict,
    /// A model of the formula at its point, when satisfiable.
    pub witness: Option<PointedModel>,
}

/// Searches every model of class `c` with at most `max_states` states over the names of `f`.
pub fn brute_force_sat(
    f: &Formula,
    c: ModelClass,
    max_states: usize,
) -> Result<BruteResult, DecideError> {
    let vocab = f.vocabulary();
    let search = BruteForce::new(c, max_states, vocab.atoms, vocab.agents)?;
    let witness = search.solve(core::slice::from_ref(f)).pop().flatten();
    Ok(BruteResult {
        verdict: if witness.is_some() {
            BruteVerdict::Satisfiable
        } else {
            BruteVerdict::UnsatisfiableWithinBound
        },
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Op {
    Atom(usize),
    Not(usize),
    And(usize, usize),
    Box(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Modal {
    Agent(usize),
    Union(Vec<usize>),
    Intersection(Vec<usize>),
    Reach(Vec<usize>),
}

struct Dag {
    ops: Vec<Op>,
    modals: Vec<Modal>,
}

impl Dag {
    fn compile(
        f: &Formula,
        atoms: &[Atom],
        agents: &[Agent],
        memo: &mut BTreeMap<Formula, usize>,
        modal_ids: &mut BTreeMap<Modal, usize>,
        dag: &mut Dag,
    ) -> usize {
        if let Some(&id) = memo.get(f) {
            return id;
        }
        let group = |g: &AgentSet| -> Vec<usize> {
            g.iter()
                .map(|a| agents.binary_search(a).expect("agent of the vocabulary"))
                .collect()
        };
        let op = match f {
            Formula::Atom(p) => Op::Atom(atoms.binary_search(p).expect("atom of the vocabulary")),
            Formula::Not(g) => Op::Not(Self::compile(g, atoms, agents, memo, modal_ids, dag)),
            Formula::And(l, r) => {
                let l = Self::compile(l, atoms, agents, memo, modal_ids, dag);
                let r = Self::compile(r, atoms, agents, memo, modal_ids, dag);
                Op::And(l, r)
            }
            Formula::Know(a, g) => {
                let g = Self::compile(g, atoms, agents, memo, modal_ids, dag);
                let a = agents.binary_search(a).expect("agent of the vocabulary");
                Op::Box(modal(Modal::Agent(a), modal_ids, dag), g)
            }
            Formula::Everyone(grp, g) => {
                let g = Self::compile(g, atoms, agents, memo, modal_ids, dag);
                Op::Box(modal(Modal::Union(group(grp)), modal_ids, dag), g)
            }
            Formula::Distributed(grp, g) => {
                let g = Self::compile(g, atoms, agents, memo, modal_ids, dag);
                Op::Box(modal(Modal::Intersection(group(grp)), modal_ids, dag), g)
            }
            Formula::Common(grp, g) => {
                let g = Self::compile(g, atoms, agents, memo, modal_ids, dag);
                Op::Box(modal(Modal::Reach(group(grp)), modal_ids, dag), g)
            }
        };
        dag.ops.push(op);
        let id = dag.ops.len() - 1;
        memo.insert(f.clone(), id);
        id
    }
}

/// Batch exhaustive search sharing one model enumeration across many formulas.
#[derive(Clone, Debug)]
pub struct BruteForce {
    class: ModelClass,
    max_states: usize,
    atoms: Vec<Atom>,
    agents: Vec<Agent>,
    /// Per state count, the relation bitmasks (row-major, `s * n + t`) in the class.
    relations: Vec<Vec<u32>>,
}

impl BruteForce {
    /// Prepares a search over the given names; formulas must not mention others.
    pub fn new(
        class: ModelClass,
        max_states: usize,
        atoms: impl IntoIterator<Item = Atom>,
        agents: impl IntoIterator<Item = Agent>,
    ) -> Result<Self, DecideError> {
        let atoms: Vec<Atom> = atoms
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let agents: Vec<Agent> = agents
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if max_states == 0 || max_states > MAX_BRUTE_STATES {
            return Err(DecideError::SearchSpaceTooLarge { max_states });
        }
        let mut relations = alloc::vec![Vec::new()];
        let mut total: u64 = 0;
        for n in 1..=max_states {
            let allowed: Vec<u32> = (0u32..1 << (n * n))
                .filter(|&mask| {
                    let r = Relation::from_pairs(n, pairs(n, mask));
                    class.conditions().iter().all(|p| p.holds(&r))
                })
                .collect();
            let count = (allowed.len() as u64)
                .checked_pow(agents.len() as u32)
                .and_then(|x| x.checked_mul(1u64 << (atoms.len() * n).min(63)));
            total = total.saturating_add(count.unwrap_or(u64::MAX));
            relations.push(allowed);
        }
        if total > MAX_BRUTE_MODELS {
            return Err(DecideError::SearchSpaceTooLarge { max_states });
        }
        Ok(BruteForce {
            class,
            max_states,
            atoms,
            agents,
            relations,
        })
    }

    /// The class searched.
    pub fn class(&self) -> ModelClass {
        self.class
    }

    /// For each formula, the first model found (smallest state count first), if any.
    pub fn solve(&self, formulas: &[Formula]) -> Vec<Option<PointedModel>> {
        let mut dag = Dag {
            ops: Vec::new(),
            modals: Vec::new(),
        };
        let mut memo = BTreeMap::new();
        let mut modal_ids = BTreeMap::new();
        let roots: Vec<usize> = formulas
            .iter()
            .map(|f| {
                Dag::compile(
                    f,
                    &self.atoms,
                    &self.agents,
                    &mut memo,
                    &mut modal_ids,
                    &mut dag,
                )
            })
            .collect();
        let mut found: Vec<Option<PointedModel>> = alloc::vec![None; formulas.len()];
        let mut open: Vec<usize> = (0..formulas.len()).collect();
        for n in 1..=self.max_states {
            if open.is_empty() {
                break;
            }
            self.search_size(n, &dag, &roots, &mut open, &mut found);
        }
        found
    }

    fn search_size(
        &self,
        n: usize,
        dag: &Dag,
        roots: &[usize],
        open: &mut Vec<usize>,
        found: &mut [Option<PointedModel>],
    ) {
        let allowed = &self.relations[n];
        let k = self.agents.len();
        let perms = permutations_fixing_zero(n);
        let val_count: u64 = 1 << (self.atoms.len() * n);
        let mut active = active_nodes(dag, roots, open);
        let mut values = alloc::vec![0u32; dag.ops.len()];
        let mut choice = alloc::vec![0usize; k];
        let full = (1u32 << n) - 1;
        loop {
            let rels: Vec<u32> = choice.iter().map(|&c| allowed[c]).collect();
            if reaches_all(n, &rels) {
                let modal_succ = self.modal_successors(n, dag, &rels);
                for val in 0..val_count {
                    if !is_canonical(n, val, &rels, self.atoms.len(), &perms) {
                        continue;
                    }
                    for &i in &active {
                        values[i] = match dag.ops[i] {
                            Op::Atom(p) => atom_mask(n, val, p),
                            Op::Not(g) => !values[g] & full,
                            Op::And(l, r) => values[l] & values[r],
                            Op::Box(m, g) => (0..n)
                                .filter(|&s| modal_succ[m][s] & !values[g] == 0)
                                .fold(0, |acc, s| acc | (1 << s)),
                        };
                    }
                    let before = open.len();
                    open.retain(|&r| {
                        if values[roots[r]] & 1 == 1 {
                            found[r] = Some(self.model(n, val, &rels));
                            false
                        } else {
                            true
                        }
                    });
                    if open.is_empty() {
                        return;
                    }
                    if open.len() != before {
                        active = active_nodes(dag, roots, open);
                    }
                }
            }
            let mut j = 0;
            loop {
                if j == k {
                    return;
                }
                choice[j] += 1;
                if choice[j] < allowed.len() {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
        }
    }

    fn modal_successors(&self, n: usize, dag: &Dag, rels: &[u32]) -> Vec<Vec<u32>> {
        let row = |a: usize, s: usize| (rels[a] >> (s * n)) & ((1 << n) - 1);
        dag.modals
            .iter()
            .map(|m| match m {
                Modal::Agent(a) => (0..n).map(|s| row(*a, s)).collect(),
                Modal::Union(g) => (0..n)
                    .map(|s| g.iter().fold(0, |acc, &a| acc | row(a, s)))
                    .collect(),
                Modal::Intersection(g) => (0..n)
                    .map(|s| g.iter().fold((1 << n) - 1, |acc, &a| acc & row(a, s)))
                    .collect(),
                Modal::Reach(g) => {
                    let step: Vec<u32> = (0..n)
                        .map(|s| g.iter().fold(0, |acc, &a| acc | row(a, s)))
                        .collect();
                    (0..n)
                        .map(|s| {
                            let mut seen = step[s];
                            loop {
                                let next = (0..n)
                                    .filter(|&t| seen >> t & 1 == 1)
                                    .fold(seen, |acc, t| acc | step[t]);
                                if next == seen {
                                    return seen;
                                }
                                seen = next;
                            }
                        })
                        .collect()
                }
            })
            .collect()
    }

    fn model(&self, n: usize, val: u64, rels: &[u32]) -> PointedModel {
        let width = format!("{}", n - 1).len();
        let states: Vec<State> = (0..n)
            .map(|i| State::new(format!("s{i:0width$}")))
            .collect();
        let relations = self
            .agents
            .iter()
            .zip(rels)
            .map(|(a, &mask)| (a.clone(), Relation::from_pairs(n, pairs(n, mask))))
            .collect();
        let valuation = (0..n)
            .map(|s| {
                (0..self.atoms.len())
                    .filter(|&p| atom_mask(n, val, p) >> s & 1 == 1)
                    .map(|p| self.atoms[p].clone())
                    .collect()
            })
            .collect();
        let vocab = Vocabulary {
            atoms: self.atoms.iter().cloned().collect(),
            agents: self.agents.iter().cloned().collect(),
        };
        let model = KripkeModel::from_parts(vocab, states, relations, valuation)
            .expect("enumerated models are well formed");
        PointedModel { model, point: 0 }
    }
}

fn modal(m: Modal, ids: &mut BTreeMap<Modal, usize>, dag: &mut Dag) -> usize {
    *ids.entry(m.clone()).or_insert_with(|| {
        dag.modals.push(m);
        dag.modals.len() - 1
    })
}

fn pairs(n: usize, mask: u32) -> impl Iterator<Item = (usize, usize)> {
    (0..n * n)
        .filter(move |b| mask >> b & 1 == 1)
        .map(move |b| (b / n, b % n))
}

fn atom_mask(n: usize, val: u64, p: usize) -> u32 {
    ((val >> (p * n)) & ((1 << n) - 1)) as u32
}

fn reaches_all(n: usize, rels: &[u32]) -> bool {
    let full = (1u32 << n) - 1;
    let union = rels.iter().fold(0, |acc, r| acc | r);
    let mut seen = 1u32;
    loop {
        let next = (0..n)
            .filter(|&s| seen >> s & 1 == 1)
            .fold(seen, |acc, s| acc | ((union >> (s * n)) & full));
        if next == seen {
            return seen == full;
        }
        seen = next;
    }
}

fn permutations_fixing_zero(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for x in 1..n {
            if !prefix.contains(&x) {
                prefix.push(x);
                extend(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut alloc::vec![0], n, &mut out);
    out.retain(|p| p.iter().enumerate().any(|(i, &x)| i != x));
    out
}

/// Whether no permutation fixing 0 gives a lexicographically smaller encoding.
fn is_canonical(n: usize, val: u64, rels: &[u32], atoms: usize, perms: &[Vec<usize>]) -> bool {
    perms.iter().all(|p| {
        let mut pv = 0u64;
        for a in 0..atoms {
            for s in 0..n {
                if val >> (a * n + s) & 1 == 1 {
                    pv |= 1 << (a * n + p[s]);
                }
            }
        }
        let prels = rels
            .iter()
            .map(|&r| pairs(n, r).fold(0u32, |acc, (s, t)| acc | 1 << (p[s] * n + p[t])));
        let mine = rels.iter().copied();
        match pv.cmp(&val) {
            core::cmp::Ordering::Less => false,
            core::cmp::Ordering::Greater => true,
            core::cmp::Ordering::Equal => prels.cmp(mine) != core::cmp::Ordering::Less,
        }
    })
}

fn active_nodes(dag: &Dag, roots: &[usize], open: &[usize]) -> Vec<usize> {
    let mut needed = alloc::vec![false; dag.ops.len()];
    for &r in open {
        needed[roots[r]] = true;
    }
    for i in (0..dag.ops.len()).rev() {
        if needed[i] {
            match dag.ops[i] {
                Op::Atom(_) => {}
                Op::Not(g) | Op::Box(_, g) => needed[g] = true,
                Op::And(l, r) => {
                    needed[l] = true;
                    needed[r] = true;
                }
            }
        }
    }
    (0..dag.ops.len()).filter(|&i| needed[i]).collect()
}
