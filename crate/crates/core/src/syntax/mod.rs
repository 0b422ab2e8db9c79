//! Formula syntax: the AST, vocabularies, measures, substitution and closure.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

pub mod enumerate;
mod flatten;
pub mod gen;
mod parser;
mod printer;

pub use flatten::{s5_flatten, FlattenError};
pub use parser::{infer_vocabulary, parse, parse_infer, ParseError, ParseErrorKind};
pub use printer::{print, print_sugared};

/// Atom name used for `false` when a vocabulary declares no atoms.
pub const RESERVED_ATOM: &str = "bot";

/// An agent symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Agent(String);

impl Agent {
    /// Creates an agent from its identifier.
    pub fn new(id: impl Into<String>) -> Self {
        Agent(id.into())
    }

    /// The identifier.
    pub fn id(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Agent {
    fn from(s: &str) -> Self {
        Agent::new(s)
    }
}

/// A primitive proposition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    /// Creates an atom from its name.
    pub fn new(name: impl Into<String>) -> Self {
        Atom(name.into())
    }

    /// The name.
    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::new(s)
    }
}

/// A non-empty group of agents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentSet(BTreeSet<Agent>);

impl AgentSet {
    /// Builds a group; `None` when `members` is empty.
    pub fn new<I, A>(members: I) -> Option<Self>
    where
        I: IntoIterator<Item = A>,
        A: Into<Agent>,
    {
        let set: BTreeSet<Agent> = members.into_iter().map(Into::into).collect();
        if set.is_empty() {
            None
        } else {
            Some(AgentSet(set))
        }
    }

    /// The singleton group `{a}`.
    pub fn singleton(a: Agent) -> Self {
        let mut set = BTreeSet::new();
        set.insert(a);
        AgentSet(set)
    }

    /// Members in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = &Agent> + '_ {
        self.0.iter()
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; groups are non-empty.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Membership test.
    pub fn contains(&self, a: &Agent) -> bool {
        self.0.contains(a)
    }

    /// True when every member of `self` belongs to `other`.
    pub fn is_subset(&self, other: &AgentSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// The underlying set.
    pub fn as_set(&self) -> &BTreeSet<Agent> {
        &self.0
    }
}

impl fmt::Display for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(a.id())?;
        }
        Ok(())
    }
}

/// A formula over the core connectives.
///
/// Disjunction, implication, equivalence, `M`, `true`, `false` and `E^n`
/// are abbreviations that the parser and constructors expand into these
/// variants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// A primitive proposition.
    Atom(Atom),
    /// Negation.
    Not(Box<Formula>),
    /// Conjunction.
    And(Box<Formula>, Box<Formula>),
    /// `K_a φ`.
    Know(Agent, Box<Formula>),
    /// `E_A φ`.
    Everyone(AgentSet, Box<Formula>),
    /// `C_A φ`.
    Common(AgentSet, Box<Formula>),
    /// `D_A φ`.
    Distributed(AgentSet, Box<Formula>),
}

impl Formula {
    /// An atom.
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(Atom::new(name))
    }

    /// `¬self`.
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    /// `self ∧ rhs`.
    pub fn and(self, rhs: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    /// `self ∨ rhs`, i.e. `¬(¬self ∧ ¬rhs)`.
    pub fn or(self, rhs: Formula) -> Self {
        self.not().and(rhs.not()).not()
    }

    /// `self → rhs`, i.e. `¬(self ∧ ¬rhs)`.
    pub fn implies(self, rhs: Formula) -> Self {
        self.and(rhs.not()).not()
    }

    /// `self ↔ rhs`, i.e. `(self → rhs) ∧ (rhs → self)`.
    pub fn iff(self, rhs: Formula) -> Self {
        self.clone().implies(rhs.clone()).and(rhs.implies(self))
    }

    /// `K_a φ`.
    pub fn know(a: impl Into<Agent>, f: Formula) -> Self {
        Formula::Know(a.into(), Box::new(f))
    }

    /// `M_a φ`, i.e. `¬K_a¬φ`.
    pub fn possible(a: impl Into<Agent>, f: Formula) -> Self {
        Formula::know(a, f.not()).not()
    }

    /// `E_A φ`.
    pub fn everyone(g: AgentSet, f: Formula) -> Self {
        Formula::Everyone(g, Box::new(f))
    }

    /// `E_A^n φ`, with `E_A^0 φ = φ`.
    pub fn everyone_iter(g: &AgentSet, n: usize, f: Formula) -> Self {
        (0..n).fold(f, |acc, _| Formula::everyone(g.clone(), acc))
    }

    /// `C_A φ`.
    pub fn common(g: AgentSet, f: Formula) -> Self {
        Formula::Common(g, Box::new(f))
    }

    /// `D_A φ`.
    pub fn distributed(g: AgentSet, f: Formula) -> Self {
        Formula::Distributed(g, Box::new(f))
    }

    /// `⊥` as `p ∧ ¬p`.
    pub fn falsum(p: Atom) -> Self {
        let a = Formula::Atom(p);
        a.clone().and(a.not())
    }

    /// `⊤` as `¬(p ∧ ¬p)`.
    pub fn verum(p: Atom) -> Self {
        Formula::falsum(p).not()
    }

    /// Conjunction of a non-empty list, left-nested; `None` when empty.
    pub fn conjoin(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Disjunction of a non-empty list, left-nested; `None` when empty.
    pub fn disjoin(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    /// Strips one negation if present.
    pub fn negated(&self) -> Formula {
        match self {
            Formula::Not(inner) => (**inner).clone(),
            other => other.clone().not(),
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) => Vec::new(),
            Formula::And(l, r) => alloc::vec![&**l, &**r],
            Formula::Not(f)
            | Formula::Know(_, f)
            | Formula::Everyone(_, f)
            | Formula::Common(_, f)
            | Formula::Distributed(_, f) => alloc::vec![&**f],
        }
    }

    /// True for `K`, `E`, `C` and `D` rooted formulas.
    pub fn is_modal(&self) -> bool {
        matches!(
            self,
            Formula::Know(..)
                | Formula::Everyone(..)
                | Formula::Common(..)
                | Formula::Distributed(..)
        )
    }

    /// Length: symbols counted per the inductive clauses, with `|O_A φ| = |A| + |φ|`.
    pub fn length(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::Know(_, f) => 1 + f.length(),
            Formula::And(l, r) => 1 + l.length() + r.length(),
            Formula::Everyone(g, f) | Formula::Common(g, f) | Formula::Distributed(g, f) => {
                g.len() + f.length()
            }
        }
    }

    /// Modal depth.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => f.depth(),
            Formula::And(l, r) => l.depth().max(r.depth()),
            Formula::Know(_, f)
            | Formula::Everyone(_, f)
            | Formula::Common(_, f)
            | Formula::Distributed(_, f) => 1 + f.depth(),
        }
    }

    /// `(length, depth)`.
    pub fn measures(&self) -> (usize, usize) {
        (self.length(), self.depth())
    }

    /// Atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                out.insert(a.clone());
            }
        });
        out
    }

    /// Agents occurring in the formula, including group members.
    pub fn agents(&self) -> BTreeSet<Agent> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Know(a, _) => {
                out.insert(a.clone());
            }
            Formula::Everyone(g, _) | Formula::Common(g, _) | Formula::Distributed(g, _) => {
                out.extend(g.iter().cloned());
            }
            _ => {}
        });
        out
    }

    /// Atoms and agents of the formula.
    pub fn vocabulary(&self) -> Vocabulary {
        Vocabulary {
            atoms: self.atoms(),
            agents: self.agents(),
        }
    }

    /// Pre-order traversal over every node.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// True when no modal operator occurs.
    pub fn is_propositional(&self) -> bool {
        self.depth() == 0
    }

    /// Distinct subformulas, including `self`.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            out.insert(f.clone());
        });
        out
    }

    /// Replaces every `E_A φ` by `K_a φ ∧ ...` over the members of `A`, in sorted order.
    pub fn expand_everyone(&self) -> Formula {
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::Not(f) => f.expand_everyone().not(),
            Formula::And(l, r) => l.expand_everyone().and(r.expand_everyone()),
            Formula::Know(a, f) => Formula::know(a.clone(), f.expand_everyone()),
            Formula::Everyone(g, f) => {
                let inner = f.expand_everyone();
                Formula::conjoin(g.iter().map(|a| Formula::know(a.clone(), inner.clone())))
                    .expect("groups are non-empty")
            }
            Formula::Common(g, f) => Formula::common(g.clone(), f.expand_everyone()),
            Formula::Distributed(g, f) => Formula::distributed(g.clone(), f.expand_everyone()),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

/// Uniform simultaneous replacement of atoms; unmapped atoms are kept.
pub fn substitute(f: &Formula, map: &BTreeMap<Atom, Formula>) -> Formula {
    match f {
        Formula::Atom(a) => map.get(a).cloned().unwrap_or_else(|| f.clone()),
        Formula::Not(g) => substitute(g, map).not(),
        Formula::And(l, r) => substitute(l, map).and(substitute(r, map)),
        Formula::Know(a, g) => Formula::know(a.clone(), substitute(g, map)),
        Formula::Everyone(a, g) => Formula::everyone(a.clone(), substitute(g, map)),
        Formula::Common(a, g) => Formula::common(a.clone(), substitute(g, map)),
        Formula::Distributed(a, g) => Formula::distributed(a.clone(), substitute(g, map)),
    }
}

/// `(length, depth)` of a formula.
pub fn measures(f: &Formula) -> (usize, usize) {
    f.measures()
}

/// The closure of `f`.
///
/// Contains every subformula and its single negation (`¬¬` collapses onto
/// the unnegated formula). Group operators are unfolded into their
/// individual parts: `C_A ψ` contributes `ψ`, `K_a ψ` and `K_a C_A ψ` for
/// each `a ∈ A`; `E_A ψ` contributes `K_a ψ`; `D_{a} ψ` contributes `K_a ψ`.
pub fn closure(f: &Formula) -> BTreeSet<Formula> {
    let mut positive = BTreeSet::new();
    collect_positive(f, &mut positive);
    let mut out = BTreeSet::new();
    for g in positive {
        out.insert(g.clone().not());
        out.insert(g);
    }
    // subformulas of the form ¬¬χ are kept as written
    f.visit(&mut |g| {
        out.insert(g.clone());
    });
    out
}

/// Collects the non-negation members of the closure.
pub(crate) fn collect_positive(f: &Formula, out: &mut BTreeSet<Formula>) {
    let f = strip_negations(f);
    if out.contains(f) {
        return;
    }
    out.insert(f.clone());
    match f {
        Formula::Atom(_) | Formula::Not(_) => {}
        Formula::And(l, r) => {
            collect_positive(l, out);
            collect_positive(r, out);
        }
        Formula::Know(_, g) => collect_positive(g, out),
        Formula::Everyone(group, g) => {
            for a in group.iter() {
                collect_positive(&Formula::know(a.clone(), (**g).clone()), out);
            }
        }
        Formula::Common(group, g) => {
            collect_positive(g, out);
            for a in group.iter() {
                collect_positive(&Formula::know(a.clone(), (**g).clone()), out);
                collect_positive(&Formula::know(a.clone(), f.clone()), out);
            }
        }
        Formula::Distributed(group, g) => {
            collect_positive(g, out);
            if group.len() == 1 {
                let a = group.iter().next().expect("non-empty").clone();
                collect_positive(&Formula::know(a, (**g).clone()), out);
            }
        }
    }
}

/// Removes all leading negations.
pub(crate) fn strip_negations(mut f: &Formula) -> &Formula {
    while let Formula::Not(g) = f {
        f = g;
    }
    f
}

/// A vocabulary of atoms and agents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vocabulary {
    /// Declared atoms.
    pub atoms: BTreeSet<Atom>,
    /// Declared agents.
    pub agents: BTreeSet<Agent>,
}

impl Vocabulary {
    /// Builds a vocabulary from names.
    pub fn new<'a>(
        atoms: impl IntoIterator<Item = &'a str>,
        agents: impl IntoIterator<Item = &'a str>,
    ) -> Self {
        Vocabulary {
            atoms: atoms.into_iter().map(Atom::new).collect(),
            agents: agents.into_iter().map(Agent::new).collect(),
        }
    }

    /// Union of two vocabularies.
    pub fn union(&self, other: &Vocabulary) -> Vocabulary {
        Vocabulary {
            atoms: self.atoms.union(&other.atoms).cloned().collect(),
            agents: self.agents.union(&other.agents).cloned().collect(),
        }
    }

    /// True when every name of `f` is declared here.
    pub fn covers(&self, f: &Formula) -> bool {
        f.atoms()
            .iter()
            .all(|a| self.atoms.contains(a) || a.name() == RESERVED_ATOM)
            && f.agents().is_subset(&self.agents)
    }

    /// The atom used to spell `⊥`: the least declared atom, or the reserved one.
    pub fn falsum_atom(&self) -> Atom {
        self.atoms
            .iter()
            .next()
            .cloned()
            .unwrap_or_else(|| Atom::new(RESERVED_ATOM))
    }

    /// The full agent set; `None` when there are no agents.
    pub fn all_agents(&self) -> Option<AgentSet> {
        AgentSet::new(self.agents.iter().cloned())
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms: Vec<String> = self.atoms.iter().map(ToString::to_string).collect();
        let agents: Vec<String> = self.agents.iter().map(ToString::to_string).collect();
        write!(
            f,
            "atoms: {}; agents: {}",
            atoms.join(" "),
            agents.join(" ")
        )
    }
}
