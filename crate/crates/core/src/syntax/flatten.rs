//! Depth-one normal form for single-agent S5.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use super::{Agent, Atom, Formula, RESERVED_ATOM};

/// Why a formula cannot be flattened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlattenError {
    /// More than one agent occurs.
    MultiAgent,
    /// An `E`, `C` or `D` operator occurs.
    GroupOperator,
}

impl fmt::Display for FlattenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlattenError::MultiAgent => f.write_str("formula mentions more than one agent"),
            FlattenError::GroupOperator => f.write_str("formula uses a group operator"),
        }
    }
}

impl core::error::Error for FlattenError {}

type Lit = (Formula, bool);
type Clause = Vec<Lit>;

/// Rewrites a single-agent formula into an S5-equivalent one of modal depth at most one.
///
/// Each `K` is applied to the clausal form of its flattened argument; within a
/// clause, `K(Kφ ∨ ψ) ↔ Kφ ∨ Kψ` and `K(¬Kφ ∨ ψ) ↔ ¬Kφ ∨ Kψ` pull modal
/// literals out, and `KKφ ↔ Kφ`, `K¬Kφ ↔ ¬Kφ` close off clauses that are
/// entirely modal.
pub fn s5_flatten(f: &Formula) -> Result<Formula, FlattenError> {
    if f.agents().len() > 1 {
        return Err(FlattenError::MultiAgent);
    }
    let unit = f
        .atoms()
        .into_iter()
        .next()
        .unwrap_or_else(|| Atom::new(RESERVED_ATOM));
    go(f, &unit)
}

fn go(f: &Formula, unit: &Atom) -> Result<Formula, FlattenError> {
    Ok(match f {
        Formula::Atom(_) => f.clone(),
        Formula::Not(g) => go(g, unit)?.not(),
        Formula::And(l, r) => go(l, unit)?.and(go(r, unit)?),
        Formula::Know(a, g) => {
            let inner = go(g, unit)?;
            let clauses = cnf(&inner, true);
            if clauses.iter().any(Vec::is_empty) {
                return Ok(Formula::falsum(unit.clone()));
            }
            let parts = clauses.iter().map(|c| boxed_clause(a, c));
            Formula::conjoin(parts).unwrap_or_else(|| Formula::verum(unit.clone()))
        }
        _ => return Err(FlattenError::GroupOperator),
    })
}

/// `K` applied to one clause with the modal literals pulled out.
fn boxed_clause(a: &Agent, clause: &Clause) -> Formula {
    let lit = |(b, pos): &Lit| if *pos { b.clone() } else { b.clone().not() };
    let modal: Vec<Formula> = clause
        .iter()
        .filter(|(b, _)| b.is_modal())
        .map(lit)
        .collect();
    let plain: Vec<Formula> = clause
        .iter()
        .filter(|(b, _)| !b.is_modal())
        .map(lit)
        .collect();
    let boxed = Formula::disjoin(plain).map(|p| Formula::know(a.clone(), p));
    Formula::disjoin(modal.into_iter().chain(boxed)).expect("clauses are non-empty")
}

/// Clausal form of `f` (or of `¬f` when `positive` is false), treating atoms
/// and `K`-formulas as propositional variables. Tautological clauses are dropped.
fn cnf(f: &Formula, positive: bool) -> Vec<Clause> {
    let raw = match (f, positive) {
        (Formula::Not(g), p) => return cnf(g, !p),
        (Formula::And(l, r), true) => {
            let mut out = cnf(l, true);
            out.extend(cnf(r, true));
            out
        }
        (Formula::And(l, r), false) => {
            let left = cnf(l, false);
            let right = cnf(r, false);
            let mut out = Vec::new();
            for c1 in &left {
                for c2 in &right {
                    let mut c = c1.clone();
                    c.extend(c2.iter().cloned());
                    out.push(c);
                }
            }
            out
        }
        (base, p) => alloc::vec![alloc::vec![(base.clone(), p)]],
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mut c in raw {
        c.sort();
        c.dedup();
        let tautology = c.windows(2).any(|w| w[0].0 == w[1].0);
        if !tautology && seen.insert(c.clone()) {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_infer;

    fn flat(s: &str) -> Formula {
        s5_flatten(&parse_infer(s).unwrap()).unwrap()
    }

    #[test]
    fn known_equivalences() {
        assert_eq!(flat("K{a}K{a}p"), parse_infer("K{a}p").unwrap());
        assert_eq!(flat("K{a}~K{a}p"), parse_infer("~K{a}p").unwrap());
        assert_eq!(
            flat("K{a}(K{a}p | q)"),
            parse_infer("K{a}p | K{a}q").unwrap()
        );
        assert_eq!(
            flat("K{a}(~K{a}p | q)"),
            parse_infer("~K{a}p | K{a}q").unwrap()
        );
    }

    #[test]
    fn depth_at_most_one() {
        let f = flat("K{a}(K{a}(p & ~K{a}q) | ~K{a}K{a}p)");
        assert!(f.depth() <= 1);
    }

    #[test]
    fn rejects_multi_agent() {
        let f = parse_infer("K{a}K{b}p").unwrap();
        assert_eq!(s5_flatten(&f), Err(FlattenError::MultiAgent));
        let f = parse_infer("C{a}p").unwrap();
        assert_eq!(s5_flatten(&f), Err(FlattenError::GroupOperator));
    }
}
