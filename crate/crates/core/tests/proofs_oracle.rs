use std::collections::BTreeMap;

use epk_core::decide::{valid, SUPPORTED_CLASSES};
use epk_core::proofs::{
    check_derivation, derivable_theorem_corpus, is_tautology_instance, matches_schema, AxiomKind,
    AxiomSystem, Justification, ProofErrorKind,
};
use epk_core::syntax::gen::FormulaGen;
use epk_core::syntax::{parse_infer, print, substitute};
use epk_core::{Agent, AgentSet, Atom, Formula, ModelClass};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn entry(name: &str) -> epk_core::proofs::Derivation {
    derivable_theorem_corpus()
        .into_iter()
        .find(|e| e.name == name)
        .unwrap()
        .derivation
}

#[test]
fn corpus_theorems_are_valid_in_their_class() {
    for e in derivable_theorem_corpus() {
        check_derivation(&e.derivation).unwrap();
        let thm = e.derivation.theorem().unwrap();
        assert!(
            valid(thm, e.derivation.system.class()).unwrap(),
            "{}",
            e.name
        );
    }
}

#[test]
fn k_distribution_matches_the_textbook_theorem() {
    let d = entry("k-distribution");
    assert_eq!(d.lines.len(), 11);
    assert_eq!(
        d.theorem(),
        Some(&parse_infer("K{a}(p & q) -> (K{a}p & K{a}q)").unwrap())
    );
    let cites: Vec<String> = d
        .lines
        .iter()
        .map(|l| l.justification.to_string())
        .collect();
    assert_eq!(cites[3], "MP 2 3");
    assert_eq!(cites[9], "MP 4 9");
    assert_eq!(cites[10], "MP 8 10");
    assert_eq!(
        entry("kcd-left").theorem(),
        Some(&parse_infer("K{a}(p & q) -> K{a}p").unwrap())
    );
    assert_eq!(
        entry("kcd-right").theorem(),
        Some(&parse_infer("K{a}(p & q) -> K{a}q").unwrap())
    );
    assert_eq!(
        entry("dprime-from-d").theorem(),
        Some(&parse_infer("K{a}p -> ~K{a}~p").unwrap())
    );
}

#[test]
fn swapped_lines_fail_at_the_first_mp() {
    let mut d = entry("k-distribution");
    d.lines.swap(1, 2);
    let err = check_derivation(&d).unwrap_err();
    assert_eq!(err.line, 4);
    assert_eq!(err.kind, ProofErrorKind::RuleMismatch("MP"));
}

#[test]
fn forward_citations_are_rejected() {
    let mut d = entry("k-distribution");
    d.lines[3].justification = Justification::MP {
        antecedent: 2,
        implication: 4,
    };
    assert_eq!(
        check_derivation(&d).unwrap_err().kind,
        ProofErrorKind::BadIndex(4)
    );
    d.lines[3].justification = Justification::MP {
        antecedent: 0,
        implication: 3,
    };
    assert_eq!(
        check_derivation(&d).unwrap_err().kind,
        ProofErrorKind::BadIndex(0)
    );
}

#[test]
fn weaker_systems_reject() {
    let mut d = entry("dprime-from-d");
    d.system = AxiomSystem::new(ModelClass::K);
    let err = check_derivation(&d).unwrap_err();
    assert_eq!(err.kind, ProofErrorKind::AxiomNotInSystem(AxiomKind::D));
    assert_eq!(err.line, 9);

    let mut d = entry("kc-weakening");
    d.system = AxiomSystem::new(ModelClass::S5).with_distributed();
    assert_eq!(
        check_derivation(&d).unwrap_err().kind,
        ProofErrorKind::AxiomNotInSystem(AxiomKind::Fix)
    );

    let mut d = entry("kd-weakening");
    d.system = AxiomSystem::new(ModelClass::S5).with_common();
    assert_eq!(
        check_derivation(&d).unwrap_err().kind,
        ProofErrorKind::AxiomNotInSystem(AxiomKind::W)
    );
}

#[test]
fn wrong_schema_is_reported() {
    let mut d = entry("kcd-left");
    d.lines[0].justification = Justification::Axiom(AxiomKind::K);
    assert_eq!(
        check_derivation(&d).unwrap_err().kind,
        ProofErrorKind::SchemaMismatch(AxiomKind::K)
    );
    d.lines[0].formula = parse_infer("K{a}p -> p").unwrap();
    d.lines[0].justification = Justification::Axiom(AxiomKind::Taut);
    assert_eq!(
        check_derivation(&d).unwrap_err().kind,
        ProofErrorKind::SchemaMismatch(AxiomKind::Taut)
    );
}

const TAUTOLOGIES: [&str; 6] = [
    "p -> (q -> p)",
    "(p -> (q -> r)) -> ((p -> q) -> (p -> r))",
    "(~q -> ~p) -> (p -> q)",
    "(p & q) -> (q | r)",
    "p | ~p",
    "((p -> q) -> p) -> p",
];

fn gen() -> FormulaGen {
    FormulaGen::new(["p", "q"], ["a", "b"], 1)
        .with_group_knowledge()
        .with_distributed()
}

fn random_instance(kind: AxiomKind, rng: &mut ChaCha8Rng) -> Formula {
    let g = gen();
    let phi = g.sample(rng);
    let psi = g.sample(rng);
    let ab = AgentSet::new([Agent::new("a"), Agent::new("b")]).unwrap();
    let agent = Agent::new(if rng.gen_bool(0.5) { "a" } else { "b" });
    let group = match rng.gen_range(0..3) {
        0 => ab,
        1 => AgentSet::singleton(Agent::new("a")),
        _ => AgentSet::singleton(Agent::new("b")),
    };
    match kind {
        AxiomKind::Taut => {
            let t = parse_infer(TAUTOLOGIES[rng.gen_range(0..TAUTOLOGIES.len())]).unwrap();
            let map: BTreeMap<Atom, Formula> = [("p", phi), ("q", psi), ("r", g.sample(rng))]
                .into_iter()
                .map(|(a, f)| (Atom::new(a), f))
                .collect();
            substitute(&t, &map)
        }
        AxiomKind::D | AxiomKind::DDist => {
            let top = phi.clone().implies(phi);
            kind.instance(&top, &psi, &agent, &group)
        }
        AxiomKind::W => {
            let member = group.iter().next().unwrap().clone();
            kind.instance(&phi, &psi, &member, &group)
        }
        _ => kind.instance(&phi, &psi, &agent, &group),
    }
}

#[test]
fn random_axiom_instances_are_valid_in_their_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for c in SUPPORTED_CLASSES {
        let system = AxiomSystem::new(c).with_common().with_distributed();
        for kind in system.axioms() {
            for _ in 0..200 {
                let f = random_instance(kind, &mut rng);
                assert!(matches_schema(&f, kind), "{kind}: {}", print(&f));
                assert!(valid(&f, c).unwrap(), "{system} {kind}: {}", print(&f));
            }
        }
    }
}

#[test]
fn dropped_axioms_have_countermodels() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cases = [
        (ModelClass::K, AxiomKind::T),
        (ModelClass::K, AxiomKind::D),
        (ModelClass::S4, AxiomKind::Five),
        (ModelClass::T, AxiomKind::Four),
        (ModelClass::KD45, AxiomKind::T),
    ];
    for (c, kind) in cases {
        assert!(!AxiomSystem::new(c).axioms().contains(&kind));
        let refuted = (0..200).any(|_| !valid(&random_instance(kind, &mut rng), c).unwrap());
        assert!(refuted, "{c} {kind}");
    }
}

fn skeleton_oracle(f: &Formula) -> Option<bool> {
    fn abstracted(f: &Formula, seen: &mut Vec<Formula>) {
        match f {
            Formula::Not(g) => abstracted(g, seen),
            Formula::And(l, r) => {
                abstracted(l, seen);
                abstracted(r, seen);
            }
            _ => {
                if !seen.contains(f) {
                    seen.push(f.clone());
                }
            }
        }
    }
    fn value(f: &Formula, seen: &[Formula], bits: u32) -> bool {
        match f {
            Formula::Not(g) => !value(g, seen, bits),
            Formula::And(l, r) => value(l, seen, bits) && value(r, seen, bits),
            _ => (bits >> seen.iter().position(|s| s == f).unwrap()) & 1 == 1,
        }
    }
    let e = f.expand_everyone();
    let mut seen = Vec::new();
    abstracted(&e, &mut seen);
    if seen.len() > 10 {
        return None;
    }
    Some((0..1u32 << seen.len()).all(|bits| value(&e, &seen, bits)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tautology_detection_matches_truth_tables(seed in any::<u64>(), template in 0usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = if template < TAUTOLOGIES.len() {
            random_instance(AxiomKind::Taut, &mut rng)
        } else {
            FormulaGen::new(["p", "q"], ["a", "b"], 4).with_group_knowledge().sample(&mut rng)
        };
        if let Some(expected) = skeleton_oracle(&f) {
            prop_assert_eq!(is_tautology_instance(&f), expected);
        }
    }

    #[test]
    fn tautology_instances_are_valid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FormulaGen::new(["p"], ["a", "b"], 4).with_group_knowledge().with_distributed().sample(&mut rng);
        let f = f.clone().or(f.not());
        prop_assert!(is_tautology_instance(&f));
        prop_assert!(valid(&f, ModelClass::K).unwrap());
    }
}
