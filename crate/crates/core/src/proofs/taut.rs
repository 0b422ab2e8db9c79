use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::syntax::Formula;

/// Propositional shape of a formula: atoms and maximal modal subformulas become variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    /// The formula each variable stands for, indexed by variable.
    pub vars: Vec<Formula>,
    root: Node,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Var(usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
}

impl Node {
    fn eval(&self, v: &[bool]) -> bool {
        match self {
            Node::Var(i) => v[*i],
            Node::Not(n) => !n.eval(v),
            Node::And(l, r) => l.eval(v) && r.eval(v),
        }
    }

    /// Truth value under a partial assignment, if already determined.
    fn partial(&self, v: &[Option<bool>]) -> Option<bool> {
        match self {
            Node::Var(i) => v[*i],
            Node::Not(n) => n.partial(v).map(|b| !b),
            Node::And(l, r) => match (l.partial(v), r.partial(v)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
        }
    }
}

impl Skeleton {
    /// Truth value under an assignment to every variable.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.root.eval(assignment)
    }

    /// Whether every assignment makes the skeleton true.
    pub fn is_tautology(&self) -> bool {
        let mut v = alloc::vec![None; self.vars.len()];
        self.forced(&mut v, 0)
    }

    fn forced(&self, v: &mut [Option<bool>], next: usize) -> bool {
        match self.root.partial(v) {
            Some(b) => b,
            None => {
                let ok = [true, false].into_iter().all(|b| {
                    v[next] = Some(b);
                    self.forced(v, next + 1)
                });
                v[next] = None;
                ok
            }
        }
    }
}

/// The skeleton of `f` after expanding every `E_A`; equal subformulas share a variable.
pub fn propositional_skeleton(f: &Formula) -> Skeleton {
    fn walk(f: &Formula, ids: &mut BTreeMap<Formula, usize>, vars: &mut Vec<Formula>) -> Node {
        match f {
            Formula::Not(g) => Node::Not(Box::new(walk(g, ids, vars))),
            Formula::And(l, r) => {
                Node::And(Box::new(walk(l, ids, vars)), Box::new(walk(r, ids, vars)))
            }
            _ => {
                let i = *ids.entry(f.clone()).or_insert_with(|| {
                    vars.push(f.clone());
                    vars.len() - 1
                });
                Node::Var(i)
            }
        }
    }
    let mut vars = Vec::new();
    let root = walk(&f.expand_everyone(), &mut BTreeMap::new(), &mut vars);
    Skeleton { vars, root }
}

/// Whether `f` is a substitution instance of a propositional tautology.
pub fn is_tautology_instance(f: &Formula) -> bool {
    propositional_skeleton(f).is_tautology()
}
