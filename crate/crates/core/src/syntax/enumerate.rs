//! Exhaustive enumeration of formulas by length.

use alloc::vec::Vec;

use super::{Agent, AgentSet, Atom, Formula};

/// A unary operator available to the enumerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnaryOp {
    /// `¬`.
    Not,
    /// `K_a`.
    Know(Agent),
    /// `E_A`.
    Everyone(AgentSet),
    /// `C_A`.
    Common(AgentSet),
    /// `D_A`.
    Distributed(AgentSet),
}

impl UnaryOp {
    /// Length contributed by the operator.
    pub fn cost(&self) -> usize {
        match self {
            UnaryOp::Not | UnaryOp::Know(_) => 1,
            UnaryOp::Everyone(g) | UnaryOp::Common(g) | UnaryOp::Distributed(g) => g.len(),
        }
    }

    /// Applies the operator.
    pub fn apply(&self, f: Formula) -> Formula {
        match self {
            UnaryOp::Not => f.not(),
            UnaryOp::Know(a) => Formula::know(a.clone(), f),
            UnaryOp::Everyone(g) => Formula::everyone(g.clone(), f),
            UnaryOp::Common(g) => Formula::common(g.clone(), f),
            UnaryOp::Distributed(g) => Formula::distributed(g.clone(), f),
        }
    }
}

/// The fragment to enumerate: atoms, unary operators and binary `∧`.
#[derive(Clone, Debug)]
pub struct Grammar {
    /// Atoms.
    pub atoms: Vec<Atom>,
    /// Unary operators.
    pub ops: Vec<UnaryOp>,
}

impl Grammar {
    /// `¬` and `K_a` for the given agents over the given atoms.
    pub fn basic<'a>(
        atoms: impl IntoIterator<Item = &'a str>,
        agents: impl IntoIterator<Item = &'a str>,
    ) -> Self {
        let mut ops = alloc::vec![UnaryOp::Not];
        ops.extend(agents.into_iter().map(|a| UnaryOp::Know(Agent::new(a))));
        Grammar {
            atoms: atoms.into_iter().map(Atom::new).collect(),
            ops,
        }
    }

    /// Every formula of each length `0..=max_len`, indexed by length.
    pub fn by_length(&self, max_len: usize) -> Vec<Vec<Formula>> {
        let mut levels: Vec<Vec<Formula>> = alloc::vec![Vec::new(); max_len + 1];
        for len in 1..=max_len {
            let mut here = Vec::new();
            if len == 1 {
                here.extend(self.atoms.iter().cloned().map(Formula::Atom));
            }
            for op in &self.ops {
                let c = op.cost();
                if c < len {
                    for f in &levels[len - c] {
                        here.push(op.apply(f.clone()));
                    }
                }
            }
            for left in 1..len.saturating_sub(1) {
                let right = len - 1 - left;
                for l in &levels[left] {
                    for r in &levels[right] {
                        here.push(l.clone().and(r.clone()));
                    }
                }
            }
            levels[len] = here;
        }
        levels
    }

    /// Every formula of length at most `max_len`, shortest first.
    pub fn up_to(&self, max_len: usize) -> Vec<Formula> {
        self.by_length(max_len).into_iter().flatten().collect()
    }
}
