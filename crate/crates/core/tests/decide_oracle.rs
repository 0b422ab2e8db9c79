use epk_core::decide::{
    brute_force_sat, live_sets, satisfiable, valid, BruteForce, BruteVerdict, EliminationOrder,
    SUPPORTED_CLASSES,
};
use epk_core::models::{in_class, ModelClass};
use epk_core::semantics::eval;
use epk_core::syntax::enumerate::{Grammar, UnaryOp};
use epk_core::syntax::gen::FormulaGen;
use epk_core::syntax::{parse_infer, print};
use epk_core::{Agent, AgentSet, Atom, Formula};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn two_agent_grammar() -> Grammar {
    let ab = AgentSet::new([Agent::new("a"), Agent::new("b")]).unwrap();
    Grammar {
        atoms: vec![Atom::new("p")],
        ops: vec![
            UnaryOp::Not,
            UnaryOp::Know(Agent::new("a")),
            UnaryOp::Know(Agent::new("b")),
            UnaryOp::Common(AgentSet::singleton(Agent::new("a"))),
            UnaryOp::Common(AgentSet::singleton(Agent::new("b"))),
            UnaryOp::Everyone(ab.clone()),
            UnaryOp::Common(ab.clone()),
            UnaryOp::Distributed(ab),
        ],
    }
}

fn agree_on(fs: &[Formula], c: ModelClass, atoms: &[&str]) {
    let brute = BruteForce::new(
        c,
        3,
        atoms.iter().map(|p| Atom::new(*p)),
        [Agent::new("a"), Agent::new("b")],
    )
    .unwrap();
    let found = brute.solve(fs);
    for (f, b) in fs.iter().zip(&found) {
        let r = satisfiable(f, c).unwrap_or_else(|e| panic!("{c} {}: {e}", print(f)));
        if let Some(b) = b {
            assert_eq!(eval(b, f), Ok(true));
            assert!(in_class(&b.model, c));
            assert!(
                r.is_satisfiable(),
                "{c}: brute force satisfies {}",
                print(f)
            );
        }
        if let Some(w) = r.witness {
            assert_eq!(eval(&w, f), Ok(true), "{c}: {}", print(f));
            assert!(in_class(&w.model, c));
            assert!(w.model.state_count() <= 1usize << f.length().min(40));
        }
    }
}

#[test]
fn every_class_agrees_on_short_formulas() {
    let fs = two_agent_grammar().up_to(5);
    for c in SUPPORTED_CLASSES {
        let brute =
            BruteForce::new(c, 3, [Atom::new("p")], [Agent::new("a"), Agent::new("b")]).unwrap();
        let found = brute.solve(&fs);
        for (f, b) in fs.iter().zip(&found) {
            let r = satisfiable(f, c).unwrap();
            assert_eq!(r.is_satisfiable(), b.is_some(), "{c}: {}", print(f));
        }
    }
}

#[test]
fn random_two_atom_formulas_never_contradict_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let gen = FormulaGen::new(["p", "q"], ["a", "b"], 4)
        .with_group_knowledge()
        .with_distributed();
    for c in SUPPORTED_CLASSES {
        let fs: Vec<Formula> = (0..80).map(|_| gen.sample(&mut rng)).collect();
        agree_on(&fs, c, &["p", "q"]);
    }
}

#[test]
fn bound_exceeded_is_an_error_not_a_verdict() {
    let f = parse_infer("p").unwrap();
    assert!(brute_force_sat(&f, ModelClass::K, 5).is_err());
    assert!(brute_force_sat(&f, ModelClass::K, 0).is_err());
    assert_eq!(
        brute_force_sat(&f, ModelClass::K, 4).unwrap().verdict,
        BruteVerdict::Satisfiable
    );
}

#[test]
fn compactness_prefixes_stay_satisfiable() {
    let ab = AgentSet::new([Agent::new("a"), Agent::new("b")]).unwrap();
    let p = Formula::atom("p");
    for k in 1..=5 {
        let parts = (1..=k).map(|i| Formula::everyone_iter(&ab, i, p.clone()));
        let f = Formula::conjoin(parts)
            .unwrap()
            .and(Formula::common(ab.clone(), p.clone()).not());
        let r = satisfiable(&f, ModelClass::S5).unwrap();
        assert!(r.is_satisfiable(), "k = {k}");
    }
    let with_c = parse_infer("E{a,b}p & C{a,b}p & ~C{a,b}p").unwrap();
    assert!(!satisfiable(&with_c, ModelClass::S5)
        .unwrap()
        .is_satisfiable());
}

#[test]
fn witness_for_eventuality_has_the_path() {
    let f = parse_infer("~C{a,b}p & p & K{a}p & K{b}p").unwrap();
    for c in SUPPORTED_CLASSES {
        let w = satisfiable(&f, c).unwrap().witness.unwrap();
        assert_eq!(eval(&w, &f), Ok(true));
    }
}

fn gen_formula() -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        FormulaGen::new(["p", "q"], ["a", "b"], 3)
            .with_group_knowledge()
            .with_distributed()
            .sample(&mut rng)
    })
}

fn gen_class() -> impl Strategy<Value = ModelClass> {
    prop::sample::select(SUPPORTED_CLASSES.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn validity_is_dual_to_satisfiability(f in gen_formula(), c in gen_class()) {
        let v = valid(&f, c).unwrap();
        let s = satisfiable(&f.clone().not(), c).unwrap();
        prop_assert!(v ^ s.is_satisfiable());
    }

    #[test]
    fn witnesses_check(f in gen_formula(), c in gen_class()) {
        if let Some(w) = satisfiable(&f, c).unwrap().witness {
            prop_assert_eq!(eval(&w, &f), Ok(true));
            prop_assert!(in_class(&w.model, c));
        }
    }

    #[test]
    fn elimination_is_confluent(f in gen_formula(), c in gen_class(), seed in any::<u64>()) {
        let rounds = live_sets(&f, c, EliminationOrder::Rounds).unwrap();
        let shuffled = live_sets(&f, c, EliminationOrder::Shuffled(seed)).unwrap();
        prop_assert_eq!(rounds, shuffled);
    }

    #[test]
    fn larger_classes_validate_less(f in gen_formula()) {
        let chain = [ModelClass::K, ModelClass::KD, ModelClass::T, ModelClass::S4, ModelClass::S5];
        for pair in chain.windows(2) {
            if valid(&f, pair[0]).unwrap() {
                prop_assert!(valid(&f, pair[1]).unwrap());
            }
        }
    }
}
