//! Builds a finite model from the surviving Hintikka sets.
//!
//! States are labelled by live nodes. Each unmet demand is realized by an
//! edge to an existing state when the class closure keeps every pair's exact
//! agent label admissible, and by a fresh state otherwise.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec::Vec;

use super::graph::{Distance, Graph};
use super::tableau::{Kind, Lit};
use super::DecideError;
use crate::models::{in_class, KripkeModel, PointedModel, Relation, State};
use crate::semantics::eval;
use crate::syntax::{Atom, Formula};

/// Largest witness the builder will produce.
pub const WITNESS_LIMIT: usize = 4096;

type Rels = Vec<Vec<BTreeSet<usize>>>;

enum Task {
    Expand(usize),
    Path(usize, usize),
}

struct Builder<'g> {
    g: &'g Graph,
    /// Node index of each state.
    label: Vec<usize>,
    /// `[agent][state]` successors.
    rels: Rels,
    queue: VecDeque<Task>,
    distances: BTreeMap<usize, Distance>,
}

impl<'g> Builder<'g> {
    fn agents(&self) -> usize {
        self.rels.len()
    }

    fn pair_label(rels: &Rels, s: usize, t: usize) -> u32 {
        rels.iter()
            .enumerate()
            .filter(|(_, r)| r[s].contains(&t))
            .fold(0, |acc, (a, _)| acc | (1 << a))
    }

    fn close(&self, rels: &mut Rels) {
        let c = self.g.tableau.class;
        let n = self.label.len();
        for r in rels.iter_mut() {
            if c.is_reflexive() {
                for (s, succ) in r.iter_mut().enumerate() {
                    succ.insert(s);
                }
            }
            loop {
                let mut added = Vec::new();
                for s in 0..n {
                    for &t in &r[s] {
                        if c.is_symmetric() && !r[t].contains(&s) {
                            added.push((t, s));
                        }
                        if c.is_transitive() {
                            added
                                .extend(r[t].iter().filter(|u| !r[s].contains(u)).map(|&u| (s, u)));
                        }
                        if c.is_euclidean() {
                            added
                                .extend(r[s].iter().filter(|u| !r[t].contains(u)).map(|&u| (t, u)));
                        }
                    }
                }
                if added.is_empty() {
                    break;
                }
                for (s, t) in added {
                    r[s].insert(t);
                }
            }
        }
    }

    /// Adds `s -> t` for every agent in `label`, closes, and commits if every changed pair is admissible.
    fn try_link(&mut self, s: usize, t: usize, label: u32) -> bool {
        let mut rels = self.rels.clone();
        for (a, r) in rels.iter_mut().enumerate() {
            if label >> a & 1 == 1 {
                r[s].insert(t);
            }
        }
        self.close(&mut rels);
        let mut changed = BTreeSet::new();
        for (a, r) in rels.iter().enumerate() {
            for (x, succ) in r.iter().enumerate() {
                for &y in succ {
                    if !self.rels[a][x].contains(&y) {
                        changed.insert((x, y));
                    }
                }
            }
        }
        let ok = changed.iter().all(|&(x, y)| {
            let (i, j) = (self.label[x], self.label[y]);
            let g = self.g;
            g.rules
                .label_edge(i, g.nodes[i], g.nodes[j], Self::pair_label(&rels, x, y))
        });
        let ok = ok && self.twins_agree(&rels);
        if ok {
            self.rels = rels;
        }
        ok
    }

    /// In euclidean classes, states with the same nonempty clusters for every
    /// member of a group share all future group successors, so they must
    /// agree on the group's distributed-knowledge formulas.
    fn twins_agree(&self, rels: &Rels) -> bool {
        let g = self.g;
        if !g.tableau.class.is_euclidean() {
            return true;
        }
        let n = self.label.len();
        g.tableau.groups.iter().enumerate().all(|(h, members)| {
            let mask = g.tableau.dist_mask[h];
            (0..n).all(|x| {
                if members.iter().any(|&a| rels[a][x].is_empty()) {
                    return true;
                }
                (x + 1..n).all(|y| {
                    !members.iter().all(|&a| rels[a][x] == rels[a][y])
                        || g.nodes[self.label[x]] & mask == g.nodes[self.label[y]] & mask
                })
            })
        })
    }

    fn add_state(&mut self, node: usize) -> Result<usize, DecideError> {
        if self.label.len() >= WITNESS_LIMIT {
            return Err(DecideError::WitnessConstruction {
                states: self.label.len(),
            });
        }
        let s = self.label.len();
        self.label.push(node);
        for r in &mut self.rels {
            r.push(BTreeSet::new());
        }
        let mut rels = self.rels.clone();
        self.close(&mut rels);
        self.rels = rels;
        self.queue.push_back(Task::Expand(s));
        Ok(s)
    }

    fn remove_last_state(&mut self) {
        self.label.pop();
        for r in &mut self.rels {
            r.pop();
        }
        self.queue.pop_back();
    }

    /// Links `s` to a state labelled by one of `candidates`, reusing states first.
    fn attach(&mut self, s: usize, label: u32, candidates: &[usize]) -> Result<usize, DecideError> {
        let wanted: BTreeSet<usize> = candidates.iter().copied().collect();
        for t in 0..self.label.len() {
            if wanted.contains(&self.label[t]) && self.try_link(s, t, label) {
                return Ok(t);
            }
        }
        for &node in candidates {
            let t = self.add_state(node)?;
            if self.try_link(s, t, label) {
                return Ok(t);
            }
            self.remove_last_state();
        }
        Err(DecideError::WitnessConstruction {
            states: self.label.len(),
        })
    }

    fn refutes(&self, t: usize, arg: Lit) -> bool {
        !arg.holds(self.g.nodes[self.label[t]])
    }

    /// Whether a path of one or more `agents`-steps from `s` reaches a state refuting `arg`.
    fn reaches(&self, s: usize, agents: &[usize], arg: Lit) -> bool {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            for &a in agents {
                for &y in &self.rels[a][x] {
                    if self.refutes(y, arg) {
                        return true;
                    }
                    if seen.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
        }
        false
    }

    fn step(&mut self, s: usize, c: usize) -> Result<(), DecideError> {
        let agents = match &self.g.tableau.kinds[c] {
            Kind::Common { agents, .. } => agents.clone(),
            _ => unreachable!("path demand on a non-C formula"),
        };
        if !self.distances.contains_key(&c) {
            self.distances.insert(c, self.g.distance(c));
        }
        let dist = &self.distances[&c];
        let i = self.label[s];
        let mut options: Vec<(u32, usize, usize)> = Vec::new();
        for &a in &agents {
            for &j in &self.g.know_adj[a][i] {
                let j = j as usize;
                if let (true, Some(d)) = (self.g.alive[j], dist[j]) {
                    options.push((d, a, j));
                }
            }
        }
        let best = options
            .iter()
            .map(|o| o.0)
            .min()
            .ok_or(DecideError::WitnessConstruction {
                states: self.label.len(),
            })?;
        options.retain(|o| o.0 == best);
        for t in 0..self.label.len() {
            for &(_, a, j) in &options {
                if self.label[t] == j && self.try_link(s, t, 1 << a) {
                    if best > 0 {
                        self.queue.push_back(Task::Path(t, c));
                    }
                    return Ok(());
                }
            }
        }
        for &(_, a, j) in &options {
            let t = self.add_state(j)?;
            if self.try_link(s, t, 1 << a) {
                if best > 0 {
                    self.queue.push_back(Task::Path(t, c));
                }
                return Ok(());
            }
            self.remove_last_state();
        }
        Err(DecideError::WitnessConstruction {
            states: self.label.len(),
        })
    }

    fn expand(&mut self, s: usize) -> Result<(), DecideError> {
        let g = self.g;
        let i = self.label[s];
        let node = g.nodes[i];
        for (k, kind) in g.tableau.kinds.iter().enumerate() {
            if (node >> k) & 1 == 1 {
                continue;
            }
            match kind {
                Kind::Know { agent, arg } => {
                    if self.rels[*agent][s].iter().any(|&t| self.refutes(t, *arg)) {
                        continue;
                    }
                    let cands: Vec<usize> = g.know_adj[*agent][i]
                        .iter()
                        .map(|&j| j as usize)
                        .filter(|&j| g.alive[j] && !arg.holds(g.nodes[j]))
                        .collect();
                    self.attach(s, 1 << agent, &cands)?;
                }
                Kind::Dist { group, arg } => {
                    let members = g.tableau.groups[*group]
                        .iter()
                        .fold(0u32, |acc, &a| acc | (1 << a));
                    let met = (0..self.label.len()).any(|t| {
                        Self::pair_label(&self.rels, s, t) & members == members
                            && self.refutes(t, *arg)
                    });
                    if met {
                        continue;
                    }
                    let cands: Vec<usize> = g.dist_adj[*group][i]
                        .iter()
                        .map(|&j| j as usize)
                        .filter(|&j| g.alive[j] && !arg.holds(g.nodes[j]))
                        .collect();
                    self.attach(s, members, &cands)?;
                }
                Kind::Common { agents, arg, .. } => {
                    if !self.reaches(s, agents, *arg) {
                        self.step(s, k)?;
                    }
                }
                _ => {}
            }
        }
        if g.tableau.class.is_serial() {
            for a in 0..self.agents() {
                if self.rels[a][s].is_empty() {
                    let cands: Vec<usize> = g.know_adj[a][i]
                        .iter()
                        .map(|&j| j as usize)
                        .filter(|&j| g.alive[j])
                        .collect();
                    self.attach(s, 1 << a, &cands)?;
                }
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<(), DecideError> {
        while let Some(task) = self.queue.pop_front() {
            match task {
                Task::Expand(s) => self.expand(s)?,
                Task::Path(t, c) => {
                    let (agents, arg) = match &self.g.tableau.kinds[c] {
                        Kind::Common { agents, arg, .. } => (agents.clone(), *arg),
                        _ => unreachable!("path demand on a non-C formula"),
                    };
                    if !self.refutes(t, arg) && !self.reaches(t, &agents, arg) {
                        self.step(t, c)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds and verifies a model of `f` rooted at live node `root`.
pub(crate) fn build(g: &Graph, f: &Formula, root: usize) -> Result<PointedModel, DecideError> {
    let mut b = Builder {
        g,
        label: Vec::new(),
        rels: alloc::vec![Vec::new(); g.tableau.agents.len()],
        queue: VecDeque::new(),
        distances: BTreeMap::new(),
    };
    b.add_state(root)?;
    b.run()?;
    let n = b.label.len();
    let width = format!("{}", n - 1).len();
    let states: Vec<State> = (0..n)
        .map(|i| State::new(format!("w{i:0width$}")))
        .collect();
    let atoms: Vec<(usize, Atom)> = g
        .tableau
        .kinds
        .iter()
        .enumerate()
        .filter(|(_, k)| matches!(k, Kind::Atom))
        .map(|(i, _)| match &g.tableau.formulas[i] {
            Formula::Atom(p) => (i, p.clone()),
            _ => unreachable!("atom kind"),
        })
        .collect();
    let valuation = b
        .label
        .iter()
        .map(|&i| {
            atoms
                .iter()
                .filter(|(k, _)| (g.nodes[i] >> k) & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect();
    let relations = g
        .tableau
        .agents
        .iter()
        .enumerate()
        .map(|(a, agent)| {
            let pairs = b.rels[a]
                .iter()
                .enumerate()
                .flat_map(|(s, succ)| succ.iter().map(move |&t| (s, t)));
            (agent.clone(), Relation::from_pairs(n, pairs))
        })
        .collect();
    let failure = DecideError::WitnessConstruction { states: n };
    let model = KripkeModel::from_parts(f.vocabulary(), states, relations, valuation)
        .map_err(|_| failure.clone())?;
    let pm = PointedModel::new(model, &format!("w{:0width$}", 0)).map_err(|_| failure.clone())?;
    if eval(&pm, f) != Ok(true) || !in_class(&pm.model, g.tableau.class) {
        return Err(failure);
    }
    Ok(pm)
}
