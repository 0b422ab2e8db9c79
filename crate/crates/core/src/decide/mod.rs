//! Satisfiability and validity over the standard model classes.
//!
//! The procedure builds every Hintikka set over the closure of the formula,
//! connects them by the class's canonical relation, eliminates sets whose
//! demands cannot be met, and builds a finite witness from what survives.
//! [`brute_force_sat`] is an independent exhaustive oracle for small bounds.

mod brute;
mod graph;
mod tableau;
mod witness;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

pub use brute::{
    brute_force_sat, BruteForce, BruteResult, BruteVerdict, MAX_BRUTE_MODELS, MAX_BRUTE_STATES,
};
pub use graph::EliminationOrder;
pub use tableau::{MAX_BASE, MAX_FREE, MAX_NODES};
pub use witness::WITNESS_LIMIT;

use crate::models::{ModelClass, PointedModel};
use crate::syntax::Formula;
use graph::Graph;
use tableau::Tableau;

/// Classes the decision procedure handles.
pub const SUPPORTED_CLASSES: [ModelClass; 8] = [
    ModelClass::K,
    ModelClass::KD,
    ModelClass::T,
    ModelClass::K4,
    ModelClass::S4,
    ModelClass::K45,
    ModelClass::KD45,
    ModelClass::S5,
];

/// Decision failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecideError {
    /// `K5` and `KB` are not decision targets.
    UnsupportedClass(ModelClass),
    /// The closure is too big for the bitmask tableau.
    TooLarge {
        /// Closure members without negations.
        closure: usize,
        /// Members whose truth is chosen independently.
        free: usize,
    },
    /// The witness builder gave up (state cap reached or verification failed).
    WitnessConstruction {
        /// States built so far.
        states: usize,
    },
    /// The brute-force bound is out of range or the search space too large.
    SearchSpaceTooLarge {
        /// The requested bound.
        max_states: usize,
    },
}

impl fmt::Display for DecideError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecideError::UnsupportedClass(c) => {
                write!(f, "class {c} is not supported by the decision procedure")
            }
            DecideError::TooLarge { closure, free } => {
                write!(f, "formula too large: closure of {closure} formulas with {free} independent members")
            }
            DecideError::WitnessConstruction { states } => {
                write!(f, "witness construction failed after {states} states")
            }
            DecideError::SearchSpaceTooLarge { max_states } => {
                write!(f, "exhaustive search with bound {max_states} is too large")
            }
        }
    }
}

impl core::error::Error for DecideError {}

/// Satisfiability verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Some model of the class satisfies the formula.
    Satisfiable,
    /// No model of the class satisfies the formula.
    Unsatisfiable,
}

/// Verdict with a verified witness when satisfiable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatResult {
    /// The verdict.
    pub verdict: Verdict,
    /// A model of the class satisfying the formula at its point.
    pub witness: Option<PointedModel>,
}

impl SatResult {
    /// True for a satisfiable verdict.
    pub fn is_satisfiable(&self) -> bool {
        self.verdict == Verdict::Satisfiable
    }
}

fn supported(c: ModelClass) -> Result<(), DecideError> {
    if SUPPORTED_CLASSES.contains(&c) {
        Ok(())
    } else {
        Err(DecideError::UnsupportedClass(c))
    }
}

fn eliminated(f: &Formula, c: ModelClass, order: EliminationOrder) -> Result<Graph, DecideError> {
    supported(c)?;
    let mut g = Graph::new(Tableau::new(f, c)?)?;
    g.eliminate(order);
    Ok(g)
}

/// Decides whether `f` holds at some state of some model in `c`.
pub fn satisfiable(f: &Formula, c: ModelClass) -> Result<SatResult, DecideError> {
    let g = eliminated(f, c, EliminationOrder::Rounds)?;
    match g.root() {
        None => Ok(SatResult {
            verdict: Verdict::Unsatisfiable,
            witness: None,
        }),
        Some(root) => Ok(SatResult {
            verdict: Verdict::Satisfiable,
            witness: Some(witness::build(&g, f, root)?),
        }),
    }
}

/// Decides whether `f` holds at every state of every model in `c`.
pub fn valid(f: &Formula, c: ModelClass) -> Result<bool, DecideError> {
    Ok(!satisfiable(&f.clone().not(), c)?.is_satisfiable())
}

/// A pointed model of `c` refuting `f`, if one exists.
pub fn countermodel(f: &Formula, c: ModelClass) -> Result<Option<PointedModel>, DecideError> {
    Ok(satisfiable(&f.clone().not(), c)?.witness)
}

/// The Hintikka sets surviving elimination, each as the set of closure members it contains.
///
/// Negated members appear as `¬ψ`. The result is sorted and does not depend on `order`.
pub fn live_sets(
    f: &Formula,
    c: ModelClass,
    order: EliminationOrder,
) -> Result<Vec<BTreeSet<Formula>>, DecideError> {
    let g = eliminated(f, c, order)?;
    let t = &g.tableau;
    let mut out: Vec<BTreeSet<Formula>> = (0..g.nodes.len())
        .filter(|&i| g.alive[i])
        .map(|i| {
            t.formulas
                .iter()
                .enumerate()
                .map(|(k, h)| {
                    if (g.nodes[i] >> k) & 1 == 1 {
                        h.clone()
                    } else {
                        h.clone().not()
                    }
                })
                .collect()
        })
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::in_class;
    use crate::semantics::eval;
    use crate::syntax::{gen::FormulaGen, parse_infer};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sat(text: &str, c: ModelClass) -> bool {
        let f = parse_infer(text).unwrap();
        let r = satisfiable(&f, c).unwrap();
        if let Some(w) = &r.witness {
            assert_eq!(eval(w, &f), Ok(true));
            assert!(in_class(&w.model, c));
        }
        r.is_satisfiable()
    }

    fn is_valid(text: &str, c: ModelClass) -> bool {
        valid(&parse_infer(text).unwrap(), c).unwrap()
    }

    #[test]
    fn contradiction_everywhere() {
        for c in SUPPORTED_CLASSES {
            assert!(!sat("p & ~p", c));
        }
    }

    #[test]
    fn reflexivity_matters() {
        assert!(sat("K{a}p & ~p", ModelClass::K));
        assert!(!sat("K{a}p & ~p", ModelClass::T));
    }

    #[test]
    fn textbook_validities() {
        assert!(is_valid("K{a}(p->q) -> (K{a}p -> K{a}q)", ModelClass::K));
        assert!(!is_valid("~K{a}p -> K{a}~K{a}p", ModelClass::K));
        assert!(is_valid("~K{a}p -> K{a}~K{a}p", ModelClass::S5));
        assert!(is_valid("K{a}p -> K{a}K{a}p", ModelClass::S5));
        assert!(is_valid("C{a,b}p -> E{a,b}(p & C{a,b}p)", ModelClass::K));
        assert!(is_valid("K{a}p -> D{a,b}p", ModelClass::K));
        assert!(!is_valid("D{a,b}p -> K{a}p", ModelClass::S5));
        assert!(is_valid("D{a,b}p -> p", ModelClass::T));
        assert!(is_valid("~D{a,b}p -> D{a,b}~D{a,b}p", ModelClass::K45));
        assert!(is_valid("~K{a}~(p | ~p)", ModelClass::KD));
    }

    #[test]
    fn compactness_instance() {
        assert!(sat("E{a,b}p & E{a,b}E{a,b}p & ~C{a,b}p", ModelClass::S5));
    }

    #[test]
    fn unsupported_classes() {
        let f = parse_infer("p").unwrap();
        assert_eq!(
            satisfiable(&f, ModelClass::K5),
            Err(DecideError::UnsupportedClass(ModelClass::K5))
        );
        assert_eq!(
            satisfiable(&f, ModelClass::KB),
            Err(DecideError::UnsupportedClass(ModelClass::KB))
        );
    }

    #[test]
    fn brute_examples() {
        let r = brute_force_sat(&parse_infer("M{a}p").unwrap(), ModelClass::K, 1).unwrap();
        assert_eq!(r.verdict, BruteVerdict::Satisfiable);
        let w = r.witness.unwrap();
        assert_eq!(w.model.state_count(), 1);
        assert_eq!(eval(&w, &parse_infer("M{a}p").unwrap()), Ok(true));
        let r = brute_force_sat(&parse_infer("p & ~p").unwrap(), ModelClass::K, 3).unwrap();
        assert_eq!(r.verdict, BruteVerdict::UnsatisfiableWithinBound);
        assert!(brute_force_sat(&parse_infer("p").unwrap(), ModelClass::K, 9).is_err());
    }

    #[test]
    fn random_formulas_agree_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let gen = FormulaGen::new(["p"], ["a", "b"], 3)
            .with_group_knowledge()
            .with_distributed();
        for c in [
            ModelClass::K,
            ModelClass::T,
            ModelClass::S5,
            ModelClass::KD45,
            ModelClass::S4,
        ] {
            let fs: Vec<Formula> = (0..60).map(|_| gen.sample(&mut rng)).collect();
            let vocab = crate::Vocabulary::new(["p"], ["a", "b"]);
            let brute = BruteForce::new(c, 3, vocab.atoms, vocab.agents).unwrap();
            let found = brute.solve(&fs);
            for (f, b) in fs.iter().zip(found) {
                let r = satisfiable(f, c)
                    .unwrap_or_else(|e| panic!("{c} {} {e:?}", crate::syntax::print(f)));
                if b.is_some() {
                    assert!(r.is_satisfiable(), "{c}: {f:?}");
                }
                if let Some(w) = r.witness {
                    assert_eq!(eval(&w, f), Ok(true));
                    assert!(w.model.state_count() <= 1 << f.length().min(30));
                }
            }
        }
    }

    #[test]
    fn elimination_order_does_not_matter() {
        for text in [
            "~C{a,b}p & K{a}p & D{a,b}~q",
            "M{a}p & M{a}~p & K{b}M{a}q",
            "~K{a}p & K{a}K{b}p",
        ] {
            let f = parse_infer(text).unwrap();
            for c in [ModelClass::K, ModelClass::S4, ModelClass::KD45] {
                let base = live_sets(&f, c, EliminationOrder::Rounds).unwrap();
                for seed in 0..5 {
                    assert_eq!(
                        live_sets(&f, c, EliminationOrder::Shuffled(seed)).unwrap(),
                        base
                    );
                }
            }
        }
    }
}
