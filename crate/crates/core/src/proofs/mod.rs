//! Hilbert-style axiom systems and derivation checking.
//!
//! Derivations are premise-free: every line is an axiom instance or follows
//! from earlier lines by `MP`, `Nec` or (in systems with common knowledge)
//! `Ind`. Formulas are compared after expanding `E_A` into conjunctions of
//! `K_a`, so either spelling may be used.

mod derivations;
mod taut;

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use derivations::{derivable_theorem_corpus, CorpusDerivation};
pub use taut::{is_tautology_instance, propositional_skeleton, Skeleton};

use crate::models::ModelClass;
use crate::syntax::{Agent, AgentSet, Formula};

/// An axiom schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomKind {
    /// Substitution instances of propositional tautologies.
    Taut,
    /// `K_a(φ → ψ) → (K_aφ → K_aψ)`.
    K,
    /// `K_aφ → φ`.
    T,
    /// `M_a⊤`.
    D,
    /// `K_aφ → ¬K_a¬φ`.
    DPrime,
    /// `φ → K_a¬K_a¬φ`.
    B,
    /// `K_aφ → K_aK_aφ`.
    Four,
    /// `¬K_aφ → K_a¬K_aφ`.
    Five,
    /// `C_Aφ → E_A(φ ∧ C_Aφ)`.
    Fix,
    /// `K_aφ → D_Aφ` for `a ∈ A`.
    W,
    /// `D_A(φ → ψ) → (D_Aφ → D_Aψ)`.
    KDist,
    /// `D_Aφ → φ`.
    TDist,
    /// `¬D_A¬⊤`.
    DDist,
    /// `φ → D_A¬D_A¬φ`.
    BDist,
    /// `D_Aφ → D_AD_Aφ`.
    FourDist,
    /// `¬D_Aφ → D_A¬D_Aφ`.
    FiveDist,
}

impl AxiomKind {
    /// Every schema.
    pub const ALL: [AxiomKind; 16] = [
        AxiomKind::Taut,
        AxiomKind::K,
        AxiomKind::T,
        AxiomKind::D,
        AxiomKind::DPrime,
        AxiomKind::B,
        AxiomKind::Four,
        AxiomKind::Five,
        AxiomKind::Fix,
        AxiomKind::W,
        AxiomKind::KDist,
        AxiomKind::TDist,
        AxiomKind::DDist,
        AxiomKind::BDist,
        AxiomKind::FourDist,
        AxiomKind::FiveDist,
    ];

    /// Name used in derivation files.
    pub fn name(self) -> &'static str {
        match self {
            AxiomKind::Taut => "Taut",
            AxiomKind::K => "K",
            AxiomKind::T => "T",
            AxiomKind::D => "D",
            AxiomKind::DPrime => "D'",
            AxiomKind::B => "B",
            AxiomKind::Four => "4",
            AxiomKind::Five => "5",
            AxiomKind::Fix => "Fix",
            AxiomKind::W => "W",
            AxiomKind::KDist => "K_D",
            AxiomKind::TDist => "T_D",
            AxiomKind::DDist => "D_D",
            AxiomKind::BDist => "B_D",
            AxiomKind::FourDist => "4_D",
            AxiomKind::FiveDist => "5_D",
        }
    }

    /// The distributed-knowledge counterpart of an individual axiom.
    pub fn distributed_variant(self) -> Option<AxiomKind> {
        match self {
            AxiomKind::K => Some(AxiomKind::KDist),
            AxiomKind::T => Some(AxiomKind::TDist),
            AxiomKind::D => Some(AxiomKind::DDist),
            AxiomKind::B => Some(AxiomKind::BDist),
            AxiomKind::Four => Some(AxiomKind::FourDist),
            AxiomKind::Five => Some(AxiomKind::FiveDist),
            _ => None,
        }
    }

    /// The instance with the given metavariable bindings.
    ///
    /// `psi` is only used by the `K` schemas; `agent` must belong to `group` for `W`
    /// to yield a genuine instance. For `D` and `D_D`, `phi` stands for `⊤` and
    /// should be a tautology.
    pub fn instance(
        self,
        phi: &Formula,
        psi: &Formula,
        agent: &Agent,
        group: &AgentSet,
    ) -> Formula {
        let k = |f: Formula| Formula::know(agent.clone(), f);
        let d = |f: Formula| Formula::distributed(group.clone(), f);
        let (p, q) = (phi.clone(), psi.clone());
        match self {
            AxiomKind::Taut => p.clone().implies(p),
            AxiomKind::K => k(p.clone().implies(q.clone())).implies(k(p).implies(k(q))),
            AxiomKind::T => k(p.clone()).implies(p),
            AxiomKind::D => k(p.not()).not(),
            AxiomKind::DPrime => k(p.clone()).implies(k(p.not()).not()),
            AxiomKind::B => p.clone().implies(k(k(p.not()).not())),
            AxiomKind::Four => k(p.clone()).implies(k(k(p))),
            AxiomKind::Five => k(p.clone()).not().implies(k(k(p).not())),
            AxiomKind::Fix => {
                let c = Formula::common(group.clone(), p.clone());
                c.clone()
                    .implies(Formula::everyone(group.clone(), p.and(c)))
            }
            AxiomKind::W => k(p.clone()).implies(d(p)),
            AxiomKind::KDist => d(p.clone().implies(q.clone())).implies(d(p).implies(d(q))),
            AxiomKind::TDist => d(p.clone()).implies(p),
            AxiomKind::DDist => d(p.not()).not(),
            AxiomKind::BDist => p.clone().implies(d(d(p.not()).not())),
            AxiomKind::FourDist => d(p.clone()).implies(d(d(p))),
            AxiomKind::FiveDist => d(p.clone()).not().implies(d(d(p).not())),
        }
    }
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Unknown axiom or system name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownName(pub String);

impl fmt::Display for UnknownName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown name {:?}", self.0)
    }
}

impl core::error::Error for UnknownName {}

impl FromStr for AxiomKind {
    type Err = UnknownName;

    /// Accepts the file names plus `1` for `Taut` and `Dprime` for `D'`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "1" => return Ok(AxiomKind::Taut),
            "Dprime" => return Ok(AxiomKind::DPrime),
            _ => {}
        }
        AxiomKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

/// An axiom system: a base system for individual knowledge, optionally
/// extended for common knowledge (`Fix`, `Ind`) and distributed knowledge
/// (`W` plus the `_D` variant of every base axiom that has one).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AxiomSystem {
    /// The base system, named like its class.
    pub base: ModelClass,
    /// Adds `Fix` and `Ind`.
    pub common: bool,
    /// Adds `W` and the distributed variants.
    pub distributed: bool,
}

impl AxiomSystem {
    /// The base system without extensions.
    pub fn new(base: ModelClass) -> Self {
        AxiomSystem {
            base,
            common: false,
            distributed: false,
        }
    }

    /// Adds the common-knowledge axioms.
    pub fn with_common(mut self) -> Self {
        self.common = true;
        self
    }

    /// Adds the distributed-knowledge axioms.
    pub fn with_distributed(mut self) -> Self {
        self.distributed = true;
        self
    }

    /// The class the system is sound and complete for.
    pub fn class(self) -> ModelClass {
        self.base
    }

    fn base_axioms(self) -> &'static [AxiomKind] {
        use AxiomKind::*;
        match self.base {
            ModelClass::K => &[Taut, K],
            ModelClass::KD => &[Taut, K, D, DPrime],
            ModelClass::T => &[Taut, K, T],
            ModelClass::KB => &[Taut, K, B],
            ModelClass::K4 => &[Taut, K, Four],
            ModelClass::K5 => &[Taut, K, Five],
            ModelClass::S4 => &[Taut, K, T, Four],
            ModelClass::K45 => &[Taut, K, Four, Five],
            ModelClass::KD45 => &[Taut, K, D, DPrime, Four, Five],
            ModelClass::S5 => &[Taut, K, T, Four, Five],
        }
    }

    /// The axiom schemas of the system.
    ///
    /// `D_D` is never included: the intersection of serial relations need not be serial.
    pub fn axioms(self) -> BTreeSet<AxiomKind> {
        let mut out: BTreeSet<AxiomKind> = self.base_axioms().iter().copied().collect();
        if self.common {
            out.insert(AxiomKind::Fix);
        }
        if self.distributed {
            out.insert(AxiomKind::W);
            for k in self.base_axioms() {
                match k.distributed_variant() {
                    Some(AxiomKind::DDist) | None => {}
                    Some(v) => {
                        out.insert(v);
                    }
                }
            }
        }
        out
    }

    /// Whether `Ind` is a rule of the system.
    pub fn has_induction(self) -> bool {
        self.common
    }
}

impl fmt::Display for AxiomSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.base.name())?;
        // `KD` alone names the serial system
        if self.base == ModelClass::K && self.distributed && !self.common {
            return f.write_str("+D");
        }
        if self.common {
            f.write_str("C")?;
        }
        if self.distributed {
            f.write_str("D")?;
        }
        Ok(())
    }
}

impl FromStr for AxiomSystem {
    type Err = UnknownName;

    /// A class name, optionally followed by `C`, `D` or `CD` (with an optional `+`);
    /// a whole-name match wins, so `KD` is the serial system and `K+D` adds `D` to `K`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Ok(c) = s.parse::<ModelClass>() {
            return Ok(AxiomSystem::new(c));
        }
        for (suffix, common, distributed) in
            [("C", true, false), ("D", false, true), ("CD", true, true)]
        {
            if let Some(base) = s.strip_suffix(suffix) {
                if let Ok(c) = base.strip_suffix('+').unwrap_or(base).parse::<ModelClass>() {
                    return Ok(AxiomSystem {
                        base: c,
                        common,
                        distributed,
                    });
                }
            }
        }
        Err(UnknownName(s.to_string()))
    }
}

/// Why a line is accepted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// An instance of a schema.
    Axiom(AxiomKind),
    /// Modus ponens from line `antecedent` (`φ`) and line `implication` (`φ → ψ`), 1-based.
    MP {
        /// The line holding `φ`.
        antecedent: usize,
        /// The line holding `φ → ψ`.
        implication: usize,
    },
    /// Necessitation `K_a φ` from line `premise`.
    Nec {
        /// The agent.
        agent: Agent,
        /// The line holding `φ`.
        premise: usize,
    },
    /// Induction: `φ → C_Aψ` from line `premise` holding `φ → E_A(ψ ∧ φ)`.
    Ind {
        /// The group.
        group: AgentSet,
        /// The cited line.
        premise: usize,
    },
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(k) => write!(f, "{k}"),
            Justification::MP {
                antecedent,
                implication,
            } => write!(f, "MP {antecedent} {implication}"),
            Justification::Nec { agent, premise } => write!(f, "Nec {agent} {premise}"),
            Justification::Ind { group, premise } => write!(f, "Ind {{{group}}} {premise}"),
        }
    }
}

/// One numbered line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    /// The formula proved.
    pub formula: Formula,
    /// Its justification.
    pub justification: Justification,
}

/// A derivation in a system; the last line is the theorem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    /// The system.
    pub system: AxiomSystem,
    /// Lines, numbered from 1.
    pub lines: Vec<ProofLine>,
}

impl Derivation {
    /// The theorem proved: the last line.
    pub fn theorem(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

/// Reason a line fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofErrorKind {
    /// The derivation has no lines.
    Empty,
    /// A cited line is not strictly earlier.
    BadIndex(usize),
    /// The schema is not an axiom of the system.
    AxiomNotInSystem(AxiomKind),
    /// The formula is not an instance of the schema.
    SchemaMismatch(AxiomKind),
    /// `Ind` used outside a common-knowledge system.
    RuleNotInSystem(&'static str),
    /// The cited lines do not have the rule's shape.
    RuleMismatch(&'static str),
}

/// A failed check, with the 1-based line number (0 for an empty derivation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofError {
    /// The first failing line.
    pub line: usize,
    /// What went wrong.
    pub kind: ProofErrorKind,
}

impl fmt::Display for ProofErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofErrorKind::Empty => f.write_str("derivation has no lines"),
            ProofErrorKind::BadIndex(i) => write!(f, "cites line {i}, which is not earlier"),
            ProofErrorKind::AxiomNotInSystem(k) => write!(f, "axiom {k} is not in the system"),
            ProofErrorKind::SchemaMismatch(k) => write!(f, "not an instance of {k}"),
            ProofErrorKind::RuleNotInSystem(r) => write!(f, "rule {r} is not in the system"),
            ProofErrorKind::RuleMismatch(r) => write!(f, "does not follow by {r}"),
        }
    }
}

impl fmt::Display for ProofError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ProofErrorKind::Empty => write!(f, "{}", self.kind),
            kind => write!(f, "line {}: {kind}", self.line),
        }
    }
}

impl core::error::Error for ProofError {}

fn same(a: &Formula, b: &Formula) -> bool {
    a == b || a.expand_everyone() == b.expand_everyone()
}

/// Splits `¬(φ ∧ ¬ψ)` into `(φ, ψ)`.
pub fn as_implication(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Not(inner) => match &**inner {
            Formula::And(l, r) => match &**r {
                Formula::Not(q) => Some((l, q)),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

fn know(f: &Formula) -> Option<(&Agent, &Formula)> {
    match f {
        Formula::Know(a, g) => Some((a, g)),
        _ => None,
    }
}

fn dist(f: &Formula) -> Option<(&AgentSet, &Formula)> {
    match f {
        Formula::Distributed(a, g) => Some((a, g)),
        _ => None,
    }
}

fn negation(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Not(g) => Some(g),
        _ => None,
    }
}

/// Whether `f` is an instance of the schema.
pub fn matches_schema(f: &Formula, kind: AxiomKind) -> bool {
    if kind == AxiomKind::Taut {
        return is_tautology_instance(f);
    }
    if kind == AxiomKind::D {
        return negation(f)
            .and_then(know)
            .and_then(|(_, g)| negation(g))
            .map_or(false, is_tautology_instance);
    }
    if kind == AxiomKind::DDist {
        return negation(f)
            .and_then(dist)
            .and_then(|(_, g)| negation(g))
            .map_or(false, is_tautology_instance);
    }
    let Some((lhs, rhs)) = as_implication(f) else {
        return false;
    };
    match kind {
        AxiomKind::K => (|| {
            let (a, imp) = know(lhs)?;
            let (p, q) = as_implication(imp)?;
            let (kp, kq) = as_implication(rhs)?;
            Some(
                kp == &Formula::know(a.clone(), p.clone())
                    && kq == &Formula::know(a.clone(), q.clone()),
            )
        })()
        .unwrap_or(false),
        AxiomKind::KDist => (|| {
            let (g, imp) = dist(lhs)?;
            let (p, q) = as_implication(imp)?;
            let (dp, dq) = as_implication(rhs)?;
            Some(
                dp == &Formula::distributed(g.clone(), p.clone())
                    && dq == &Formula::distributed(g.clone(), q.clone()),
            )
        })()
        .unwrap_or(false),
        AxiomKind::T => know(lhs).map_or(false, |(_, p)| p == rhs),
        AxiomKind::TDist => dist(lhs).map_or(false, |(_, p)| p == rhs),
        AxiomKind::DPrime => know(lhs).map_or(false, |(a, p)| {
            rhs == &Formula::know(a.clone(), p.clone().not()).not()
        }),
        AxiomKind::B => know(rhs).map_or(false, |(a, m)| {
            m == &Formula::know(a.clone(), lhs.clone().not()).not()
        }),
        AxiomKind::BDist => dist(rhs).map_or(false, |(g, m)| {
            m == &Formula::distributed(g.clone(), lhs.clone().not()).not()
        }),
        AxiomKind::Four => know(lhs).map_or(false, |(a, _)| {
            rhs == &Formula::know(a.clone(), lhs.clone())
        }),
        AxiomKind::FourDist => dist(lhs).map_or(false, |(g, _)| {
            rhs == &Formula::distributed(g.clone(), lhs.clone())
        }),
        AxiomKind::Five => negation(lhs).and_then(know).map_or(false, |(a, _)| {
            rhs == &Formula::know(a.clone(), lhs.clone())
        }),
        AxiomKind::FiveDist => negation(lhs).and_then(dist).map_or(false, |(g, _)| {
            rhs == &Formula::distributed(g.clone(), lhs.clone())
        }),
        AxiomKind::Fix => match lhs {
            Formula::Common(g, p) => same(
                rhs,
                &Formula::everyone(g.clone(), (**p).clone().and(lhs.clone())),
            ),
            _ => false,
        },
        AxiomKind::W => match (lhs, rhs) {
            (Formula::Know(a, p), Formula::Distributed(g, q)) => g.contains(a) && p == q,
            _ => false,
        },
        AxiomKind::Taut | AxiomKind::D | AxiomKind::DDist => unreachable!("handled above"),
    }
}

/// Checks every line in order and reports the first failure.
pub fn check_derivation(d: &Derivation) -> Result<(), ProofError> {
    if d.lines.is_empty() {
        return Err(ProofError {
            line: 0,
            kind: ProofErrorKind::Empty,
        });
    }
    let axioms = d.system.axioms();
    for (i, line) in d.lines.iter().enumerate() {
        let n = i + 1;
        let fail = |kind| Err(ProofError { line: n, kind });
        let earlier = |j: usize| -> Result<&Formula, ProofError> {
            if j == 0 || j >= n {
                Err(ProofError {
                    line: n,
                    kind: ProofErrorKind::BadIndex(j),
                })
            } else {
                Ok(&d.lines[j - 1].formula)
            }
        };
        let f = &line.formula;
        match &line.justification {
            Justification::Axiom(k) => {
                if !axioms.contains(k) {
                    return fail(ProofErrorKind::AxiomNotInSystem(*k));
                }
                let ok = matches_schema(f, *k) || matches_schema(&f.expand_everyone(), *k);
                if !ok {
                    return fail(ProofErrorKind::SchemaMismatch(*k));
                }
            }
            Justification::MP {
                antecedent,
                implication,
            } => {
                let p = earlier(*antecedent)?;
                let imp = earlier(*implication)?;
                if !same(imp, &p.clone().implies(f.clone())) {
                    return fail(ProofErrorKind::RuleMismatch("MP"));
                }
            }
            Justification::Nec { agent, premise } => {
                let p = earlier(*premise)?;
                if !same(f, &Formula::know(agent.clone(), p.clone())) {
                    return fail(ProofErrorKind::RuleMismatch("Nec"));
                }
            }
            Justification::Ind { group, premise } => {
                if !d.system.has_induction() {
                    return fail(ProofErrorKind::RuleNotInSystem("Ind"));
                }
                let p = earlier(*premise)?;
                let shape = as_implication(f).and_then(|(phi, c)| match c {
                    Formula::Common(g, psi) if g == group => Some((phi, psi)),
                    _ => None,
                });
                let Some((phi, psi)) = shape else {
                    return fail(ProofErrorKind::RuleMismatch("Ind"));
                };
                let expected = phi.clone().implies(Formula::everyone(
                    group.clone(),
                    (**psi).clone().and(phi.clone()),
                ));
                if !same(p, &expected) {
                    return fail(ProofErrorKind::RuleMismatch("Ind"));
                }
            }
        }
    }
    Ok(())
}
