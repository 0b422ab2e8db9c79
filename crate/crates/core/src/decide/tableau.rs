//! Hintikka sets over the closure of a formula, encoded as bitmasks.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::DecideError;
use crate::models::ModelClass;
use crate::syntax::{collect_positive, strip_negations, Agent, AgentSet, Formula};

/// Largest closure the bitmask encoding supports.
pub const MAX_BASE: usize = 128;
/// Largest number of independently chosen closure members.
pub const MAX_FREE: usize = 16;
/// Largest number of coherent sets the elimination graph accepts.
pub const MAX_NODES: usize = 1 << 13;

/// A closure member or its negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Lit {
    pub idx: usize,
    pub pos: bool,
}

impl Lit {
    pub fn holds(self, node: u128) -> bool {
        ((node >> self.idx) & 1 == 1) == self.pos
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Kind {
    Atom,
    And(Lit, Lit),
    Know {
        agent: usize,
        arg: Lit,
    },
    Everyone {
        parts: Vec<usize>,
    },
    Common {
        agents: Vec<usize>,
        arg: Lit,
        parts: Vec<(usize, usize)>,
    },
    DistSingle {
        know: usize,
    },
    Dist {
        group: usize,
        arg: Lit,
    },
}

/// The non-negated closure members of one formula and how their truth is determined.
pub(crate) struct Tableau {
    pub class: ModelClass,
    pub formulas: Vec<Formula>,
    pub kinds: Vec<Kind>,
    pub agents: Vec<Agent>,
    /// Distributed-knowledge groups of two or more agents, as agent indices.
    pub groups: Vec<Vec<usize>>,
    pub free: Vec<usize>,
    pub derived: Vec<usize>,
    pub know_mask: Vec<u128>,
    pub dist_mask: Vec<u128>,
    pub target: Lit,
}

impl Tableau {
    pub fn new(f: &Formula, class: ModelClass) -> Result<Self, DecideError> {
        let mut positive = alloc::collections::BTreeSet::new();
        collect_positive(f, &mut positive);
        if positive.len() > MAX_BASE {
            return Err(DecideError::TooLarge {
                closure: positive.len(),
                free: 0,
            });
        }
        let mut formulas: Vec<Formula> = positive.into_iter().collect();
        formulas.sort_by(|a, b| a.length().cmp(&b.length()).then(a.cmp(b)));
        let index: BTreeMap<Formula, usize> = formulas
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        let lit = |g: &Formula| {
            let base = strip_negations(g);
            let mut depth = 0;
            let mut cur = g;
            while let Formula::Not(inner) = cur {
                depth += 1;
                cur = inner;
            }
            Lit {
                idx: index[base],
                pos: depth % 2 == 0,
            }
        };
        let agents: Vec<Agent> = f.agents().into_iter().collect();
        let agent_idx = |a: &Agent| agents.binary_search(a).expect("agent of the formula");
        let mut group_sets: Vec<AgentSet> = Vec::new();
        let mut kinds = Vec::with_capacity(formulas.len());
        for g in &formulas {
            let kind = match g {
                Formula::Atom(_) => Kind::Atom,
                Formula::And(l, r) => Kind::And(lit(l), lit(r)),
                Formula::Know(a, h) => Kind::Know {
                    agent: agent_idx(a),
                    arg: lit(h),
                },
                Formula::Everyone(group, h) => Kind::Everyone {
                    parts: group
                        .iter()
                        .map(|a| index[&Formula::know(a.clone(), (**h).clone())])
                        .collect(),
                },
                Formula::Common(group, h) => Kind::Common {
                    agents: group.iter().map(agent_idx).collect(),
                    arg: lit(h),
                    parts: group
                        .iter()
                        .map(|a| {
                            (
                                index[&Formula::know(a.clone(), (**h).clone())],
                                index[&Formula::know(a.clone(), g.clone())],
                            )
                        })
                        .collect(),
                },
                Formula::Distributed(group, h) if group.len() == 1 => {
                    let a = group.iter().next().expect("non-empty").clone();
                    Kind::DistSingle {
                        know: index[&Formula::know(a, (**h).clone())],
                    }
                }
                Formula::Distributed(group, h) => {
                    let gi = match group_sets.iter().position(|x| x == group) {
                        Some(i) => i,
                        None => {
                            group_sets.push(group.clone());
                            group_sets.len() - 1
                        }
                    };
                    Kind::Dist {
                        group: gi,
                        arg: lit(h),
                    }
                }
                Formula::Not(_) => unreachable!("closure base holds no negations"),
            };
            kinds.push(kind);
        }
        let groups: Vec<Vec<usize>> = group_sets
            .iter()
            .map(|g| g.iter().map(agent_idx).collect())
            .collect();
        let mut free = Vec::new();
        let mut derived = Vec::new();
        let mut know_mask = alloc::vec![0u128; agents.len()];
        let mut dist_mask = alloc::vec![0u128; groups.len()];
        for (i, k) in kinds.iter().enumerate() {
            match k {
                Kind::Atom => free.push(i),
                Kind::Know { agent, .. } => {
                    free.push(i);
                    know_mask[*agent] |= 1 << i;
                }
                Kind::Dist { group, .. } => {
                    free.push(i);
                    dist_mask[*group] |= 1 << i;
                }
                _ => derived.push(i),
            }
        }
        if free.len() > MAX_FREE {
            return Err(DecideError::TooLarge {
                closure: formulas.len(),
                free: free.len(),
            });
        }
        let target = lit(f);
        Ok(Tableau {
            class,
            formulas,
            kinds,
            agents,
            groups,
            free,
            derived,
            know_mask,
            dist_mask,
            target,
        })
    }

    /// Every propositionally and class-coherent assignment, ascending by mask.
    pub fn nodes(&self) -> Vec<u128> {
        let mut out = Vec::new();
        let count: u64 = 1 << self.free.len();
        'assign: for bits in 0..count {
            let mut m: u128 = 0;
            for (j, &i) in self.free.iter().enumerate() {
                if (bits >> j) & 1 == 1 {
                    m |= 1 << i;
                }
            }
            for &i in &self.derived {
                let v = match &self.kinds[i] {
                    Kind::And(l, r) => l.holds(m) && r.holds(m),
                    Kind::Everyone { parts } => parts.iter().all(|&k| (m >> k) & 1 == 1),
                    Kind::Common { parts, .. } => parts
                        .iter()
                        .all(|&(kp, kc)| (m >> kp) & 1 == 1 && (m >> kc) & 1 == 1),
                    Kind::DistSingle { know } => (m >> know) & 1 == 1,
                    _ => unreachable!("free kinds are assigned"),
                };
                if v {
                    m |= 1 << i;
                }
            }
            if self.class.is_reflexive() {
                for (i, k) in self.kinds.iter().enumerate() {
                    if let Kind::Know { arg, .. } | Kind::Dist { arg, .. } = k {
                        if (m >> i) & 1 == 1 && !arg.holds(m) {
                            continue 'assign;
                        }
                    }
                }
            }
            out.push(m);
        }
        out.sort_unstable();
        out
    }

    /// Literals that `K_a`-successors of `node` must satisfy: `(must be set, must be clear)`.
    pub fn know_requirements(&self, node: u128, agent: usize) -> (u128, u128) {
        let mut set = 0;
        let mut clear = 0;
        let mut mask = node & self.know_mask[agent];
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            if let Kind::Know { arg, .. } = self.kinds[i] {
                if arg.pos {
                    set |= 1 << arg.idx;
                } else {
                    clear |= 1 << arg.idx;
                }
            }
        }
        (set, clear)
    }

    /// As [`Self::know_requirements`] for a distributed-knowledge group.
    pub fn dist_requirements(&self, node: u128, group: usize) -> (u128, u128) {
        let mut set = 0;
        let mut clear = 0;
        let mut mask = node & self.dist_mask[group];
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            if let Kind::Dist { arg, .. } = self.kinds[i] {
                if arg.pos {
                    set |= 1 << arg.idx;
                } else {
                    clear |= 1 << arg.idx;
                }
            }
        }
        (set, clear)
    }
}

/// Precomputed per-node successor requirements for fast edge tests.
pub(crate) struct EdgeRules {
    /// `[node][agent] -> (set, clear)`.
    know: Vec<Vec<(u128, u128)>>,
    /// `[node][group] -> (set, clear)`.
    dist: Vec<Vec<(u128, u128)>>,
    know_mask: Vec<u128>,
    dist_mask: Vec<u128>,
    transitive: bool,
    euclidean: bool,
    /// For each agent set (bitmask over agents), the groups it contains.
    groups: Vec<u32>,
}

impl EdgeRules {
    pub fn new(t: &Tableau, nodes: &[u128]) -> Self {
        let know = nodes
            .iter()
            .map(|&n| {
                (0..t.agents.len())
                    .map(|a| t.know_requirements(n, a))
                    .collect()
            })
            .collect();
        let dist = nodes
            .iter()
            .map(|&n| {
                (0..t.groups.len())
                    .map(|g| t.dist_requirements(n, g))
                    .collect()
            })
            .collect();
        let groups = t
            .groups
            .iter()
            .map(|g| g.iter().fold(0u32, |acc, &a| acc | (1 << a)))
            .collect();
        EdgeRules {
            know,
            dist,
            know_mask: t.know_mask.clone(),
            dist_mask: t.dist_mask.clone(),
            transitive: t.class.is_transitive(),
            euclidean: t.class.is_euclidean(),
            groups,
        }
    }

    fn propagates(&self, req: (u128, u128), own: u128, mask: u128, to: u128) -> bool {
        let (set, clear) = req;
        if to & set != set || to & clear != 0 {
            return false;
        }
        let from = own & mask;
        let dst = to & mask;
        if self.euclidean {
            from == dst
        } else if self.transitive {
            from & !dst == 0
        } else {
            true
        }
    }

    /// Whether a pair of nodes may be related by agent `a`.
    pub fn agent_edge(&self, i: usize, from: u128, to: u128, a: usize) -> bool {
        self.propagates(self.know[i][a], from, self.know_mask[a], to)
    }

    /// Whether the pair may carry exactly the agent set `label` (bitmask over agents).
    pub fn label_edge(&self, i: usize, from: u128, to: u128, label: u32) -> bool {
        let mut l = label;
        while l != 0 {
            let a = l.trailing_zeros() as usize;
            l &= l - 1;
            if !self.agent_edge(i, from, to, a) {
                return false;
            }
        }
        self.groups.iter().enumerate().all(|(g, &members)| {
            members & !label != 0 || self.propagates(self.dist[i][g], from, self.dist_mask[g], to)
        })
    }
}
