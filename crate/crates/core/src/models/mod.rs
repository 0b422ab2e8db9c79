//! Kripke models, frame properties, model classes and random generation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{Agent, Atom, Vocabulary};

mod frame;
mod random;

pub use frame::{ensure_class, frame_properties, in_class, ClassError, FrameProperty, ModelClass};
pub use random::{random_model, random_model_with};

/// A state identifier.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State(String);

impl State {
    /// Creates a state id.
    pub fn new(id: impl Into<String>) -> Self {
        State(id.into())
    }

    /// The id.
    pub fn id(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// True for ids made of ASCII letters, digits, `_`, `'` and `.`.
pub fn valid_state_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '.')
}

/// Errors raised while assembling a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    /// A model needs at least one state.
    NoStates,
    /// The same id was declared twice.
    DuplicateState(String),
    /// Malformed state id.
    InvalidStateId(String),
    /// Reference to an undeclared state.
    UnknownState(String),
    /// Reference to an undeclared agent.
    UnknownAgent(String),
    /// Reference to an undeclared atom.
    UnknownAtom(String),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::NoStates => f.write_str("model has no states"),
            ModelError::DuplicateState(s) => write!(f, "duplicate state {s:?}"),
            ModelError::InvalidStateId(s) => write!(f, "invalid state id {s:?}"),
            ModelError::UnknownState(s) => write!(f, "unknown state {s:?}"),
            ModelError::UnknownAgent(s) => write!(f, "unknown agent {s:?}"),
            ModelError::UnknownAtom(s) => write!(f, "unknown atom {s:?}"),
        }
    }
}

impl core::error::Error for ModelError {}

/// One agent's accessibility relation as sorted successor lists over state indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    succ: Vec<Vec<usize>>,
}

impl Relation {
    /// The empty relation on `n` states.
    pub fn empty(n: usize) -> Self {
        Relation {
            succ: alloc::vec![Vec::new(); n],
        }
    }

    /// Builds a relation from index pairs.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Relation::empty(n);
        for (s, t) in pairs {
            r.succ[s].push(t);
        }
        r.normalize();
        r
    }

    fn normalize(&mut self) {
        for v in &mut self.succ {
            v.sort_unstable();
            v.dedup();
        }
    }

    /// Number of states the relation is defined over.
    pub fn state_count(&self) -> usize {
        self.succ.len()
    }

    /// Successors of `s`, ascending.
    pub fn successors(&self, s: usize) -> &[usize] {
        &self.succ[s]
    }

    /// Membership test.
    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.succ[s].binary_search(&t).is_ok()
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// True when there are no pairs.
    pub fn is_empty(&self) -> bool {
        self.succ.iter().all(Vec::is_empty)
    }

    /// All pairs in ascending order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, ts)| ts.iter().map(move |&t| (s, t)))
    }

    /// Pairs as a set.
    pub fn pair_set(&self) -> BTreeSet<(usize, usize)> {
        self.pairs().collect()
    }

    /// Adds pairs and returns the new relation.
    pub fn with_pairs(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = self.clone();
        for (s, t) in pairs {
            r.succ[s].push(t);
        }
        r.normalize();
        r
    }

    /// Union of relations over the same states.
    pub fn union<'a>(n: usize, rels: impl IntoIterator<Item = &'a Relation>) -> Relation {
        Relation::from_pairs(n, rels.into_iter().flat_map(|r| r.pairs()))
    }

    /// Intersection of a non-empty family; the empty relation when the family is empty.
    pub fn intersection<'a>(n: usize, rels: impl IntoIterator<Item = &'a Relation>) -> Relation {
        let mut it = rels.into_iter();
        let Some(first) = it.next() else {
            return Relation::empty(n);
        };
        let mut acc = first.clone();
        for r in it {
            for (s, ts) in acc.succ.iter_mut().enumerate() {
                ts.retain(|&t| r.contains(s, t));
            }
        }
        acc
    }

    /// Transitive closure (paths of length at least one).
    pub fn transitive_closure(&self) -> Relation {
        let n = self.succ.len();
        let mut out = Relation::empty(n);
        for s in 0..n {
            let mut seen = alloc::vec![false; n];
            let mut stack: Vec<usize> = self.succ[s].clone();
            while let Some(t) = stack.pop() {
                if !seen[t] {
                    seen[t] = true;
                    stack.extend(self.succ[t].iter().copied().filter(|&u| !seen[u]));
                }
            }
            out.succ[s] = (0..n).filter(|&t| seen[t]).collect();
        }
        out
    }
}

/// A finite Kripke model `⟨S, R, V⟩`.
///
/// States are kept sorted by id, so two models with the same ids, relations
/// and valuation compare equal regardless of construction order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KripkeModel {
    vocab: Vocabulary,
    states: Vec<State>,
    index: BTreeMap<State, usize>,
    relations: BTreeMap<Agent, Relation>,
    valuation: Vec<BTreeSet<Atom>>,
}

impl KripkeModel {
    /// Starts a builder over a vocabulary.
    pub fn builder(vocab: Vocabulary) -> ModelBuilder {
        ModelBuilder {
            vocab,
            states: Vec::new(),
            edges: Vec::new(),
            truths: Vec::new(),
        }
    }

    /// Assembles a model from index-based parts; states are re-sorted by id.
    ///
    /// `relations` may omit agents (they get the empty relation); every pair
    /// index must be below `states.len()`.
    pub fn from_parts(
        vocab: Vocabulary,
        states: Vec<State>,
        relations: BTreeMap<Agent, Relation>,
        valuation: Vec<BTreeSet<Atom>>,
    ) -> Result<Self, ModelError> {
        let n = states.len();
        if n == 0 {
            return Err(ModelError::NoStates);
        }
        for s in &states {
            if !valid_state_id(s.id()) {
                return Err(ModelError::InvalidStateId(s.id().to_string()));
            }
        }
        for a in relations.keys() {
            if !vocab.agents.contains(a) {
                return Err(ModelError::UnknownAgent(a.id().to_string()));
            }
        }
        for atoms in &valuation {
            for p in atoms {
                if !vocab.atoms.contains(p) {
                    return Err(ModelError::UnknownAtom(p.name().to_string()));
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| states[i].cmp(&states[j]));
        let mut new_index = alloc::vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let sorted: Vec<State> = order.iter().map(|&i| states[i].clone()).collect();
        let mut index = BTreeMap::new();
        for (i, s) in sorted.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(ModelError::DuplicateState(s.id().to_string()));
            }
        }
        let mut rels = BTreeMap::new();
        for a in &vocab.agents {
            let r = match relations.get(a) {
                Some(r) => {
                    Relation::from_pairs(n, r.pairs().map(|(s, t)| (new_index[s], new_index[t])))
                }
                None => Relation::empty(n),
            };
            rels.insert(a.clone(), r);
        }
        let mut val = alloc::vec![BTreeSet::new(); n];
        for (old, atoms) in valuation.into_iter().enumerate().take(n) {
            val[new_index[old]] = atoms;
        }
        Ok(KripkeModel {
            vocab,
            states: sorted,
            index,
            relations: rels,
            valuation: val,
        })
    }

    /// The vocabulary.
    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    /// States sorted by id.
    pub fn states(&self) -> &[State] {
        &self.states
    }

    /// Number of states.
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// The state at an index.
    pub fn state(&self, i: usize) -> &State {
        &self.states[i]
    }

    /// Index of a state id.
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(&State::new(id)).copied()
    }

    /// Agents in sorted order.
    pub fn agents(&self) -> impl Iterator<Item = &Agent> + '_ {
        self.relations.keys()
    }

    /// Relation of an agent.
    pub fn relation(&self, a: &Agent) -> Option<&Relation> {
        self.relations.get(a)
    }

    /// All relations keyed by agent.
    pub fn relations(&self) -> &BTreeMap<Agent, Relation> {
        &self.relations
    }

    /// Atoms true at state `s`.
    pub fn true_atoms(&self, s: usize) -> &BTreeSet<Atom> {
        &self.valuation[s]
    }

    /// Truth value of `p` at `s`.
    pub fn holds(&self, s: usize, p: &Atom) -> bool {
        self.valuation[s].contains(p)
    }

    /// The same states and valuation with replaced relations.
    pub fn with_relations(&self, relations: BTreeMap<Agent, Relation>) -> KripkeModel {
        let mut m = self.clone();
        for (a, r) in relations {
            debug_assert_eq!(r.state_count(), self.state_count());
            m.relations.insert(a, r);
        }
        m
    }

    /// `|S| + Σ_a |R_a|`.
    pub fn size(&self) -> usize {
        self.states.len() + self.relations.values().map(Relation::len).sum::<usize>()
    }

    /// Subset of states reachable from `root` (including it) and the induced submodel.
    pub fn generated_submodel(&self, root: usize) -> (KripkeModel, usize) {
        let n = self.state_count();
        let mut seen = alloc::vec![false; n];
        let mut stack = alloc::vec![root];
        seen[root] = true;
        while let Some(s) = stack.pop() {
            for r in self.relations.values() {
                for &t in r.successors(s) {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&i| seen[i]).collect();
        let mut map = alloc::vec![usize::MAX; n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let states = keep.iter().map(|&i| self.states[i].clone()).collect();
        let rels = self
            .relations
            .iter()
            .map(|(a, r)| {
                let pairs = r
                    .pairs()
                    .filter(|&(s, t)| seen[s] && seen[t])
                    .map(|(s, t)| (map[s], map[t]));
                (a.clone(), Relation::from_pairs(keep.len(), pairs))
            })
            .collect();
        let val = keep.iter().map(|&i| self.valuation[i].clone()).collect();
        let m = KripkeModel::from_parts(self.vocab.clone(), states, rels, val)
            .expect("submodel of a valid model");
        let point = m.index_of(self.states[root].id()).expect("root kept");
        (m, point)
    }
}

/// `|S| + Σ_a |R_a|`.
pub fn model_size(m: &KripkeModel) -> usize {
    m.size()
}

/// Incremental, name-based model construction.
#[derive(Clone, Debug)]
pub struct ModelBuilder {
    vocab: Vocabulary,
    states: Vec<String>,
    edges: Vec<(String, String, String)>,
    truths: Vec<(String, String)>,
}

impl ModelBuilder {
    /// Declares a state and the atoms true there.
    pub fn state(mut self, id: &str, true_atoms: &[&str]) -> Self {
        self.states.push(id.to_string());
        for p in true_atoms {
            self.truths.push((id.to_string(), p.to_string()));
        }
        self
    }

    /// Adds `(s, t)` to `R_agent`.
    pub fn edge(mut self, agent: &str, s: &str, t: &str) -> Self {
        self.edges
            .push((agent.to_string(), s.to_string(), t.to_string()));
        self
    }

    /// Adds `(s, t)` and `(t, s)` to `R_agent`.
    pub fn link(self, agent: &str, s: &str, t: &str) -> Self {
        self.edge(agent, s, t).edge(agent, t, s)
    }

    /// Adds all pairs within `class` to `R_agent`.
    pub fn cluster(mut self, agent: &str, class: &[&str]) -> Self {
        for s in class {
            for t in class {
                self = self.edge(agent, s, t);
            }
        }
        self
    }

    /// Validates names and produces the model.
    pub fn build(self) -> Result<KripkeModel, ModelError> {
        let mut idx = BTreeMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if idx.insert(s.clone(), i).is_some() {
                return Err(ModelError::DuplicateState(s.clone()));
            }
        }
        let lookup = |s: &String| {
            idx.get(s)
                .copied()
                .ok_or_else(|| ModelError::UnknownState(s.clone()))
        };
        let n = self.states.len();
        let mut pairs: BTreeMap<Agent, Vec<(usize, usize)>> = BTreeMap::new();
        for (a, s, t) in &self.edges {
            let agent = Agent::new(a.as_str());
            if !self.vocab.agents.contains(&agent) {
                return Err(ModelError::UnknownAgent(a.clone()));
            }
            pairs
                .entry(agent)
                .or_default()
                .push((lookup(s)?, lookup(t)?));
        }
        let mut val = alloc::vec![BTreeSet::new(); n];
        for (s, p) in &self.truths {
            val[lookup(s)?].insert(Atom::new(p.as_str()));
        }
        let rels = pairs
            .into_iter()
            .map(|(a, ps)| (a, Relation::from_pairs(n, ps)))
            .collect();
        KripkeModel::from_parts(
            self.vocab,
            self.states.into_iter().map(State).collect(),
            rels,
            val,
        )
    }
}

/// A model with a distinguished state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointedModel {
    /// The model.
    pub model: KripkeModel,
    /// Index of the point.
    pub point: usize,
}

impl PointedModel {
    /// Points `model` at the state named `id`.
    pub fn new(model: KripkeModel, id: &str) -> Result<Self, ModelError> {
        let point = model
            .index_of(id)
            .ok_or_else(|| ModelError::UnknownState(id.to_string()))?;
        Ok(PointedModel { model, point })
    }

    /// Id of the point.
    pub fn point_id(&self) -> &str {
        self.model.state(self.point).id()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_loop() -> KripkeModel {
        KripkeModel::builder(Vocabulary::new(["p"], ["a"]))
            .state("w", &["p"])
            .edge("a", "w", "w")
            .build()
            .unwrap()
    }

    #[test]
    fn size_counts_states_and_pairs() {
        assert_eq!(model_size(&one_loop()), 2);
        let m = KripkeModel::builder(Vocabulary::new(["p"], ["a", "b"]))
            .state("x", &[])
            .state("y", &[])
            .state("z", &[])
            .build()
            .unwrap();
        assert_eq!(model_size(&m), 3);
    }

    #[test]
    fn equality_ignores_declaration_order() {
        let v = Vocabulary::new(["p"], ["a"]);
        let m1 = KripkeModel::builder(v.clone())
            .state("u", &["p"])
            .state("t", &[])
            .edge("a", "u", "t")
            .build()
            .unwrap();
        let m2 = KripkeModel::builder(v)
            .state("t", &[])
            .state("u", &["p"])
            .edge("a", "u", "t")
            .build()
            .unwrap();
        assert_eq!(m1, m2);
    }

    #[test]
    fn builder_rejects_bad_names() {
        let v = Vocabulary::new(["p"], ["a"]);
        let e = KripkeModel::builder(v.clone()).state("w", &["q"]).build();
        assert_eq!(e, Err(ModelError::UnknownAtom("q".into())));
        let e = KripkeModel::builder(v.clone())
            .state("w", &[])
            .edge("b", "w", "w")
            .build();
        assert_eq!(e, Err(ModelError::UnknownAgent("b".into())));
        let e = KripkeModel::builder(v.clone())
            .state("w", &[])
            .edge("a", "w", "x")
            .build();
        assert_eq!(e, Err(ModelError::UnknownState("x".into())));
        let e = KripkeModel::builder(v.clone())
            .state("w", &[])
            .state("w", &[])
            .build();
        assert_eq!(e, Err(ModelError::DuplicateState("w".into())));
        let e = KripkeModel::builder(v.clone()).build();
        assert_eq!(e, Err(ModelError::NoStates));
        let e = KripkeModel::builder(v).state("w-1", &[]).build();
        assert_eq!(e, Err(ModelError::InvalidStateId("w-1".into())));
    }

    #[test]
    fn closure_and_intersection() {
        let r = Relation::from_pairs(3, [(0, 1), (1, 2)]);
        assert_eq!(
            r.transitive_closure().pair_set(),
            [(0, 1), (0, 2), (1, 2)].into_iter().collect()
        );
        let s = Relation::from_pairs(3, [(0, 1), (2, 2)]);
        assert_eq!(
            Relation::intersection(3, [&r, &s]).pair_set(),
            [(0, 1)].into_iter().collect()
        );
        assert_eq!(Relation::union(3, [&r, &s]).len(), 3);
    }
}
