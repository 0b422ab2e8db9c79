//! Bisimulation: checking, the largest bisimulation, bounded bisimilarity and contraction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::models::{KripkeModel, PointedModel, Relation, State};
use crate::syntax::{Agent, AgentSet, Atom};

/// Standard bisimulation follows each agent separately; group bisimulation
/// follows edges labeled by the exact set of agents relating two states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BisimMode {
    /// One edge label per agent.
    Standard,
    /// One edge label per exact agent set.
    Group,
}

/// A relation between the states of two models, as index pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisimRelation {
    /// `(state of the first model, state of the second model)`.
    pub pairs: BTreeSet<(usize, usize)>,
    /// Which clauses the relation is meant to satisfy.
    pub mode: BisimMode,
}

impl BisimRelation {
    /// Builds a relation from state ids.
    pub fn from_names(
        m: &KripkeModel,
        m2: &KripkeModel,
        mode: BisimMode,
        pairs: &[(&str, &str)],
    ) -> Option<Self> {
        let pairs = pairs
            .iter()
            .map(|(s, t)| Some((m.index_of(s)?, m2.index_of(t)?)))
            .collect::<Option<_>>()?;
        Some(BisimRelation { pairs, mode })
    }

    /// The pairs as state ids.
    pub fn named_pairs(&self, m: &KripkeModel, m2: &KripkeModel) -> Vec<(State, State)> {
        self.pairs
            .iter()
            .map(|&(s, t)| (m.state(s).clone(), m2.state(t).clone()))
            .collect()
    }

    /// Whether `(s, t)` is related.
    pub fn relates(&self, s: usize, t: usize) -> bool {
        self.pairs.contains(&(s, t))
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// True when no pair is related.
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// For every related ordered pair, the exact set of agents relating it.
pub fn group_labels(m: &KripkeModel) -> BTreeMap<(usize, usize), AgentSet> {
    let mut acc: BTreeMap<(usize, usize), BTreeSet<Agent>> = BTreeMap::new();
    for (a, r) in m.relations() {
        for p in r.pairs() {
            acc.entry(p).or_default().insert(a.clone());
        }
    }
    acc.into_iter()
        .map(|(p, set)| (p, AgentSet::new(set).expect("only realized labels")))
        .collect()
}

/// Labeled successor lists: `label -> state -> successors`.
type Edges = BTreeMap<Vec<Agent>, Vec<Vec<usize>>>;

fn labeled_edges(m: &KripkeModel, agents: &BTreeSet<Agent>, mode: BisimMode) -> Edges {
    let n = m.state_count();
    let mut out: Edges = BTreeMap::new();
    match mode {
        BisimMode::Standard => {
            for a in agents {
                let succ = match m.relation(a) {
                    Some(r) => (0..n).map(|s| r.successors(s).to_vec()).collect(),
                    None => alloc::vec![Vec::new(); n],
                };
                out.insert(alloc::vec![a.clone()], succ);
            }
        }
        BisimMode::Group => {
            for ((s, t), label) in group_labels(m) {
                let key: Vec<Agent> = label.iter().cloned().collect();
                out.entry(key).or_insert_with(|| alloc::vec![Vec::new(); n])[s].push(t);
            }
        }
    }
    out
}

fn same_atoms(
    m: &KripkeModel,
    s: usize,
    m2: &KripkeModel,
    t: usize,
    atoms: &BTreeSet<Atom>,
) -> bool {
    atoms.iter().all(|p| m.holds(s, p) == m2.holds(t, p))
}

fn all_atoms(m: &KripkeModel, m2: &KripkeModel) -> BTreeSet<Atom> {
    m.vocab().atoms.union(&m2.vocab().atoms).cloned().collect()
}

fn all_agents(m: &KripkeModel, m2: &KripkeModel) -> BTreeSet<Agent> {
    m.vocab()
        .agents
        .union(&m2.vocab().agents)
        .cloned()
        .collect()
}

/// Checks the atoms, forth and back clauses for every pair; the empty relation is rejected.
pub fn is_bisimulation(m: &KripkeModel, m2: &KripkeModel, r: &BisimRelation) -> bool {
    if r.pairs.is_empty() {
        return false;
    }
    let n1 = m.state_count();
    let n2 = m2.state_count();
    if r.pairs.iter().any(|&(s, t)| s >= n1 || t >= n2) {
        return false;
    }
    let atoms = all_atoms(m, m2);
    let agents = all_agents(m, m2);
    let e1 = labeled_edges(m, &agents, r.mode);
    let e2 = labeled_edges(m2, &agents, r.mode);
    let empty1 = alloc::vec![Vec::new(); n1];
    let empty2 = alloc::vec![Vec::new(); n2];
    let labels: BTreeSet<&Vec<Agent>> = e1.keys().chain(e2.keys()).collect();
    r.pairs.iter().all(|&(s, s2)| {
        same_atoms(m, s, m2, s2, &atoms)
            && labels.iter().all(|l| {
                let a1 = e1.get(*l).unwrap_or(&empty1);
                let a2 = e2.get(*l).unwrap_or(&empty2);
                let forth = a1[s]
                    .iter()
                    .all(|&t| a2[s2].iter().any(|&t2| r.relates(t, t2)));
                let back = a2[s2]
                    .iter()
                    .all(|&t2| a1[s].iter().any(|&t| r.relates(t, t2)));
                forth && back
            })
    })
}

/// The disjoint union of two models as labeled graphs, with a valuation key per node.
struct Union {
    n1: usize,
    keys: Vec<Vec<bool>>,
    edges: Vec<Vec<Vec<usize>>>,
}

fn disjoint_union(m: &KripkeModel, m2: &KripkeModel, mode: BisimMode) -> Union {
    let atoms = all_atoms(m, m2);
    let agents = all_agents(m, m2);
    let e1 = labeled_edges(m, &agents, mode);
    let e2 = labeled_edges(m2, &agents, mode);
    let n1 = m.state_count();
    let n2 = m2.state_count();
    let labels: BTreeSet<&Vec<Agent>> = e1.keys().chain(e2.keys()).collect();
    let mut edges = Vec::new();
    for l in labels {
        let mut succ = alloc::vec![Vec::new(); n1 + n2];
        if let Some(a) = e1.get(l) {
            for (s, ts) in a.iter().enumerate() {
                succ[s] = ts.clone();
            }
        }
        if let Some(a) = e2.get(l) {
            for (s, ts) in a.iter().enumerate() {
                succ[n1 + s] = ts.iter().map(|t| n1 + t).collect();
            }
        }
        edges.push(succ);
    }
    let keys = (0..n1)
        .map(|s| atoms.iter().map(|p| m.holds(s, p)).collect())
        .chain((0..n2).map(|s| atoms.iter().map(|p| m2.holds(s, p)).collect()))
        .collect();
    Union { n1, keys, edges }
}

/// Coarsest stable partition: blocks are split by predecessor sets of splitter blocks.
fn refine(u: &Union) -> Vec<usize> {
    let n = u.keys.len();
    let mut by_key: BTreeMap<&Vec<bool>, usize> = BTreeMap::new();
    let mut block = alloc::vec![0usize; n];
    for (x, k) in u.keys.iter().enumerate() {
        let next = by_key.len();
        block[x] = *by_key.entry(k).or_insert(next);
    }
    let mut members: Vec<Vec<usize>> = alloc::vec![Vec::new(); by_key.len()];
    for x in 0..n {
        members[block[x]].push(x);
    }
    let preds: Vec<Vec<Vec<usize>>> = u
        .edges
        .iter()
        .map(|succ| {
            let mut p = alloc::vec![Vec::new(); n];
            for (x, ys) in succ.iter().enumerate() {
                for &y in ys {
                    p[y].push(x);
                }
            }
            p
        })
        .collect();
    let mut queue: Vec<usize> = (0..members.len()).collect();
    let mut mark = alloc::vec![false; n];
    while let Some(splitter) = queue.pop() {
        let targets = members[splitter].clone();
        for pred in &preds {
            let mut hit: Vec<usize> = Vec::new();
            for &y in &targets {
                for &x in &pred[y] {
                    if !mark[x] {
                        mark[x] = true;
                        hit.push(x);
                    }
                }
            }
            let touched: BTreeSet<usize> = hit.iter().map(|&x| block[x]).collect();
            for b in touched {
                let (inside, outside): (Vec<usize>, Vec<usize>) =
                    members[b].iter().partition(|&&x| mark[x]);
                if !outside.is_empty() {
                    let nb = members.len();
                    for &x in &inside {
                        block[x] = nb;
                    }
                    members[b] = outside;
                    members.push(inside);
                    queue.push(b);
                    queue.push(nb);
                }
            }
            for x in hit {
                mark[x] = false;
            }
        }
    }
    block
}

/// The largest bisimulation between `m` and `m2`; empty when no pair is bisimilar.
pub fn max_bisimulation(m: &KripkeModel, m2: &KripkeModel, mode: BisimMode) -> BisimRelation {
    let u = disjoint_union(m, m2, mode);
    let block = refine(&u);
    let n1 = u.n1;
    let pairs = (0..n1)
        .flat_map(|s| (0..m2.state_count()).map(move |t| (s, t)))
        .filter(|&(s, t)| block[s] == block[n1 + t])
        .collect();
    BisimRelation { pairs, mode }
}

/// Whether the two points are bisimilar in the given mode.
pub fn bisimilar(pm: &PointedModel, pm2: &PointedModel, mode: BisimMode) -> bool {
    max_bisimulation(&pm.model, &pm2.model, mode).relates(pm.point, pm2.point)
}

/// `n`-bisimilarity: atoms agree, and for `n > 0` forth and back reach `(n-1)`-bisimilar points.
pub fn n_bisimilar(pm: &PointedModel, pm2: &PointedModel, n: usize) -> bool {
    let u = disjoint_union(&pm.model, &pm2.model, BisimMode::Standard);
    let total = u.keys.len();
    let mut ids: BTreeMap<&Vec<bool>, usize> = BTreeMap::new();
    let mut block: Vec<usize> = u
        .keys
        .iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k).or_insert(next)
        })
        .collect();
    let mut count = ids.len();
    for _ in 0..n {
        let mut sigs: BTreeMap<(usize, Vec<BTreeSet<usize>>), usize> = BTreeMap::new();
        let mut next = alloc::vec![0; total];
        for x in 0..total {
            let succ_blocks = u
                .edges
                .iter()
                .map(|e| e[x].iter().map(|&y| block[y]).collect())
                .collect();
            let k = sigs.len();
            next[x] = *sigs.entry((block[x], succ_blocks)).or_insert(k);
        }
        block = next;
        // each round refines the last, so an unchanged block count means a fixpoint
        if sigs.len() == count {
            break;
        }
        count = sigs.len();
    }
    block[pm.point] == block[u.n1 + pm2.point]
}

/// Quotient of `m` by its largest auto-bisimulation.
///
/// Each class is named by its least member id; `[s] R_a [t]` holds when some
/// members are related. Returns the quotient and, per original state, the
/// index of its class.
pub fn contract_with_map(m: &KripkeModel) -> (KripkeModel, Vec<usize>) {
    let u = disjoint_union(m, m, BisimMode::Standard);
    let n = m.state_count();
    let block = refine(&Union {
        n1: n,
        keys: u.keys[..n].to_vec(),
        edges: u.edges.iter().map(|e| e[..n].to_vec()).collect(),
    });
    let mut rep: BTreeMap<usize, usize> = BTreeMap::new();
    for s in 0..n {
        rep.entry(block[s]).or_insert(s);
    }
    let reps: Vec<usize> = rep
        .values()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let class_of: Vec<usize> = (0..n)
        .map(|s| {
            reps.binary_search(&rep[&block[s]])
                .expect("representative listed")
        })
        .collect();
    let states = reps.iter().map(|&s| m.state(s).clone()).collect();
    let k = reps.len();
    let rels = m
        .relations()
        .iter()
        .map(|(a, r)| {
            (
                a.clone(),
                Relation::from_pairs(
                    k,
                    r.pairs()
                        .map(|(s, t)| (class_of[s], class_of[t]))
                        .collect::<Vec<_>>(),
                ),
            )
        })
        .collect();
    let val = reps.iter().map(|&s| m.true_atoms(s).clone()).collect();
    let q = KripkeModel::from_parts(m.vocab().clone(), states, rels, val)
        .expect("quotient of a valid model");
    (q, class_of)
}

/// Quotient of `m` by its largest auto-bisimulation.
pub fn contract(m: &KripkeModel) -> KripkeModel {
    contract_with_map(m).0
}
