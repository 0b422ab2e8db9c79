//! The canonical graph over Hintikka sets and its elimination loop.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::tableau::{EdgeRules, Kind, Lit, Tableau, MAX_NODES};
use super::DecideError;

/// Order in which failing nodes are removed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EliminationOrder {
    /// Remove every failing node each round.
    Rounds,
    /// Remove one randomly chosen failing node at a time.
    Shuffled(u64),
}

pub(crate) struct Graph {
    pub tableau: Tableau,
    pub nodes: Vec<u128>,
    pub rules: EdgeRules,
    /// `[agent][node]`: nodes that may be `a`-successors.
    pub know_adj: Vec<Vec<Vec<u32>>>,
    /// `[group][node]`: nodes that may be successors over the whole group.
    pub dist_adj: Vec<Vec<Vec<u32>>>,
    pub alive: Vec<bool>,
}

/// Distance in live edges (zero or more steps) to a node refuting the argument of a `C`.
pub(crate) type Distance = Vec<Option<u32>>;

impl Graph {
    pub fn new(tableau: Tableau) -> Result<Self, DecideError> {
        let nodes = tableau.nodes();
        if nodes.len() > MAX_NODES {
            return Err(DecideError::TooLarge {
                closure: tableau.formulas.len(),
                free: tableau.free.len(),
            });
        }
        let rules = EdgeRules::new(&tableau, &nodes);
        let n = nodes.len();
        let know_adj = (0..tableau.agents.len())
            .map(|a| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&j| rules.agent_edge(i, nodes[i], nodes[j], a))
                            .map(|j| j as u32)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let dist_adj = tableau
            .groups
            .iter()
            .map(|g| {
                let label = g.iter().fold(0u32, |acc, &a| acc | (1 << a));
                (0..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&j| rules.label_edge(i, nodes[i], nodes[j], label))
                            .map(|j| j as u32)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Graph {
            alive: alloc::vec![true; n],
            tableau,
            nodes,
            rules,
            know_adj,
            dist_adj,
        })
    }

    /// Distances for the `C` formula at closure index `c`.
    pub fn distance(&self, c: usize) -> Distance {
        let (agents, arg) = match &self.tableau.kinds[c] {
            Kind::Common { agents, arg, .. } => (agents, *arg),
            _ => unreachable!("distance asked for a non-C formula"),
        };
        let n = self.nodes.len();
        let mut reverse: Vec<Vec<u32>> = alloc::vec![Vec::new(); n];
        for &a in agents {
            for i in (0..n).filter(|&i| self.alive[i]) {
                for &j in &self.know_adj[a][i] {
                    if self.alive[j as usize] {
                        reverse[j as usize].push(i as u32);
                    }
                }
            }
        }
        let mut dist = alloc::vec![None; n];
        let mut queue = VecDeque::new();
        for i in 0..n {
            if self.alive[i] && !arg.holds(self.nodes[i]) {
                dist[i] = Some(0);
                queue.push_back(i);
            }
        }
        while let Some(j) = queue.pop_front() {
            let d = dist[j].expect("queued nodes have a distance") + 1;
            for &i in &reverse[j] {
                if dist[i as usize].is_none() {
                    dist[i as usize] = Some(d);
                    queue.push_back(i as usize);
                }
            }
        }
        dist
    }

    fn refutes(&self, j: u32, arg: Lit) -> bool {
        self.alive[j as usize] && !arg.holds(self.nodes[j as usize])
    }

    /// Whether live node `i` has all of its demands met by live nodes.
    fn supported(&self, i: usize, distances: &[(usize, Distance)]) -> bool {
        let node = self.nodes[i];
        let t = &self.tableau;
        for (k, kind) in t.kinds.iter().enumerate() {
            if (node >> k) & 1 == 1 {
                continue;
            }
            let ok = match kind {
                Kind::Know { agent, arg } => self.know_adj[*agent][i]
                    .iter()
                    .any(|&j| self.refutes(j, *arg)),
                Kind::Dist { group, arg } => self.dist_adj[*group][i]
                    .iter()
                    .any(|&j| self.refutes(j, *arg)),
                Kind::Common { agents, .. } => {
                    let dist = &distances
                        .iter()
                        .find(|(c, _)| *c == k)
                        .expect("distance computed")
                        .1;
                    agents.iter().any(|&a| {
                        self.know_adj[a][i]
                            .iter()
                            .any(|&j| self.alive[j as usize] && dist[j as usize].is_some())
                    })
                }
                _ => true,
            };
            if !ok {
                return false;
            }
        }
        if t.class.is_serial() {
            for adj in &self.know_adj {
                if !adj[i].iter().any(|&j| self.alive[j as usize]) {
                    return false;
                }
            }
        }
        true
    }

    fn failing(&self) -> Vec<usize> {
        let distances: Vec<(usize, Distance)> = self
            .tableau
            .kinds
            .iter()
            .enumerate()
            .filter(|(_, k)| matches!(k, Kind::Common { .. }))
            .map(|(c, _)| (c, self.distance(c)))
            .collect();
        (0..self.nodes.len())
            .filter(|&i| self.alive[i] && !self.supported(i, &distances))
            .collect()
    }

    /// Removes unsupported nodes until none remain.
    pub fn eliminate(&mut self, order: EliminationOrder) {
        let mut rng = match order {
            EliminationOrder::Rounds => None,
            EliminationOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        loop {
            let failing = self.failing();
            if failing.is_empty() {
                return;
            }
            match rng.as_mut() {
                None => {
                    for i in failing {
                        self.alive[i] = false;
                    }
                }
                Some(rng) => {
                    let &i = failing.choose(rng).expect("non-empty");
                    self.alive[i] = false;
                }
            }
        }
    }

    /// First live node containing the target, by mask order.
    pub fn root(&self) -> Option<usize> {
        (0..self.nodes.len()).find(|&i| self.alive[i] && self.tableau.target.holds(self.nodes[i]))
    }
}
