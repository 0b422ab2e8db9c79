use std::collections::{BTreeMap, BTreeSet};

use epk_core::bisim::{
    bisimilar, contract, contract_with_map, is_bisimulation, max_bisimulation, n_bisimilar,
    BisimMode, BisimRelation,
};
use epk_core::corpus;
use epk_core::models::{random_model_with, Relation};
use epk_core::semantics::{eval, eval_at};
use epk_core::syntax::enumerate::Grammar;
use epk_core::syntax::gen::FormulaGen;
use epk_core::syntax::parse_infer;
use epk_core::{Agent, Formula, KripkeModel, ModelClass, PointedModel, State, Vocabulary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f(s: &str) -> Formula {
    parse_infer(s).unwrap()
}

fn vocab() -> Vocabulary {
    Vocabulary::new(["p", "q"], ["a", "b"])
}

/// Two copies of every state. Each edge `s -> t` becomes edges from both copies
/// of `s` into a random non-empty subset of the copies of `t`. With `shared`,
/// one subset is drawn per state pair and used for every agent, which keeps
/// the exact agent labels intact.
fn duplicate(m: &KripkeModel, rng: &mut ChaCha8Rng, shared: bool) -> KripkeModel {
    let n = m.state_count();
    let states: Vec<State> = (0..2 * n)
        .map(|i| {
            let id = m.state(i / 2).id();
            State::new(if i % 2 == 0 {
                id.to_string()
            } else {
                format!("{id}'")
            })
        })
        .collect();
    let pick = |rng: &mut ChaCha8Rng| match rng.gen_range(0..3) {
        0 => vec![0],
        1 => vec![1],
        _ => vec![0, 1],
    };
    let mut choice: BTreeMap<(usize, usize, usize), Vec<usize>> = BTreeMap::new();
    let mut rels = BTreeMap::new();
    for (a, r) in m.relations() {
        let mut pairs = Vec::new();
        for (s, t) in r.pairs() {
            for i in 0..2 {
                let js = if shared {
                    choice.entry((s, t, i)).or_insert_with(|| pick(rng)).clone()
                } else {
                    pick(rng)
                };
                pairs.extend(js.into_iter().map(|j| (2 * s + i, 2 * t + j)));
            }
        }
        rels.insert(a.clone(), Relation::from_pairs(2 * n, pairs));
    }
    let val = (0..2 * n).map(|i| m.true_atoms(i / 2).clone()).collect();
    KripkeModel::from_parts(m.vocab().clone(), states, rels, val).unwrap()
}

/// The projection relating each state to both of its copies.
fn projection(m: &KripkeModel, d: &KripkeModel, mode: BisimMode) -> BisimRelation {
    let pairs = (0..m.state_count())
        .flat_map(|s| {
            let id = m.state(s).id();
            [
                d.index_of(id).unwrap(),
                d.index_of(&format!("{id}'")).unwrap(),
            ]
            .map(|t| (s, t))
        })
        .collect();
    BisimRelation { pairs, mode }
}

fn labels(m: &KripkeModel, s: usize, t: usize) -> BTreeSet<Agent> {
    m.relations()
        .iter()
        .filter(|(_, r)| r.contains(s, t))
        .map(|(a, _)| a.clone())
        .collect()
}

/// Greatest fixpoint by deleting violating pairs until nothing changes.
fn naive_max(m: &KripkeModel, m2: &KripkeModel, mode: BisimMode) -> BTreeSet<(usize, usize)> {
    let (n, n2) = (m.state_count(), m2.state_count());
    let mut rel: BTreeSet<(usize, usize)> = (0..n)
        .flat_map(|s| (0..n2).map(move |t| (s, t)))
        .filter(|&(s, t)| m.true_atoms(s) == m2.true_atoms(t))
        .collect();
    let step_ok = |rel: &BTreeSet<(usize, usize)>, s: usize, t: usize| -> bool {
        match mode {
            BisimMode::Standard => m.relations().iter().all(|(a, r)| {
                let r2 = m2.relation(a).unwrap();
                (0..n)
                    .filter(|&u| r.contains(s, u))
                    .all(|u| (0..n2).any(|v| r2.contains(t, v) && rel.contains(&(u, v))))
                    && (0..n2)
                        .filter(|&v| r2.contains(t, v))
                        .all(|v| (0..n).any(|u| r.contains(s, u) && rel.contains(&(u, v))))
            }),
            BisimMode::Group => {
                (0..n).all(|u| {
                    let l = labels(m, s, u);
                    l.is_empty() || (0..n2).any(|v| labels(m2, t, v) == l && rel.contains(&(u, v)))
                }) && (0..n2).all(|v| {
                    let l = labels(m2, t, v);
                    l.is_empty() || (0..n).any(|u| labels(m, s, u) == l && rel.contains(&(u, v)))
                })
            }
        }
    };
    loop {
        let bad: Vec<_> = rel
            .iter()
            .copied()
            .filter(|&(s, t)| !step_ok(&rel, s, t))
            .collect();
        if bad.is_empty() {
            return rel;
        }
        for p in bad {
            rel.remove(&p);
        }
    }
}

#[test]
fn duplication_preserves_common_knowledge_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let gen = FormulaGen::new(["p", "q"], ["a", "b"], 3).with_group_knowledge();
    for seed in 0..500 {
        let m = random_model_with(&vocab(), 1 + seed as usize % 4, ModelClass::K, seed, 0.4);
        let d = duplicate(&m, &mut rng, false);
        let r = projection(&m, &d, BisimMode::Standard);
        assert!(is_bisimulation(&m, &d, &r), "seed {seed}");
        let max = max_bisimulation(&m, &d, BisimMode::Standard);
        assert!(r.pairs.is_subset(&max.pairs));
        for _ in 0..50 {
            let g = gen.sample(&mut rng);
            for &(s, t) in &r.pairs {
                assert_eq!(eval_at(&m, s, &g), eval_at(&d, t, &g), "seed {seed}");
            }
        }
    }
}

#[test]
fn group_duplication_preserves_distributed_knowledge() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let gen = FormulaGen::new(["p", "q"], ["a", "b"], 3)
        .with_group_knowledge()
        .with_distributed();
    for seed in 0..300 {
        let m = random_model_with(&vocab(), 1 + seed as usize % 4, ModelClass::K, seed, 0.5);
        let d = duplicate(&m, &mut rng, true);
        let r = projection(&m, &d, BisimMode::Group);
        assert!(is_bisimulation(&m, &d, &r), "seed {seed}");
        for _ in 0..30 {
            let g = gen.sample(&mut rng);
            for &(s, t) in &r.pairs {
                assert_eq!(eval_at(&m, s, &g), eval_at(&d, t, &g), "seed {seed}");
            }
        }
    }
}

#[test]
fn max_bisimulation_matches_naive_fixpoint() {
    for seed in 0..300u64 {
        let m = random_model_with(&vocab(), 1 + seed as usize % 4, ModelClass::K, seed, 0.4);
        let m2 = random_model_with(
            &vocab(),
            1 + (seed as usize / 4) % 4,
            ModelClass::K,
            seed + 1000,
            0.4,
        );
        for mode in [BisimMode::Standard, BisimMode::Group] {
            let fast = max_bisimulation(&m, &m2, mode);
            assert_eq!(fast.pairs, naive_max(&m, &m2, mode), "seed {seed} {mode:?}");
            assert!(fast.is_empty() || is_bisimulation(&m, &m2, &fast));
        }
        let group = max_bisimulation(&m, &m2, BisimMode::Group);
        let standard = max_bisimulation(&m, &m2, BisimMode::Standard);
        assert!(group.pairs.is_subset(&standard.pairs));
    }
}

#[test]
fn distributed_counterexample_is_exact() {
    let (m, n) = corpus::dist_counterexample();
    let r = max_bisimulation(&m.model, &n.model, BisimMode::Standard);
    assert!(is_bisimulation(&m.model, &n.model, &r));
    let mut group_view = r.clone();
    group_view.mode = BisimMode::Group;
    assert!(!is_bisimulation(&m.model, &n.model, &group_view));
    assert!(bisimilar(&m, &n, BisimMode::Standard));
    assert!(!bisimilar(&m, &n, BisimMode::Group));
    let d = f("D{a,b}p");
    assert_ne!(eval(&m, &d), eval(&n, &d));

    // adding any further pair breaks the relation
    for s in 0..m.model.state_count() {
        for t in 0..n.model.state_count() {
            if !r.relates(s, t) {
                let mut bigger = r.clone();
                bigger.pairs.insert((s, t));
                assert!(!is_bisimulation(&m.model, &n.model, &bigger));
            }
        }
    }
    assert_eq!(contract(&m.model), m.model);
    assert!(contract(&n.model).state_count() < n.model.state_count());
}

#[test]
fn identity_is_a_bisimulation_and_atoms_must_agree() {
    for seed in 0..100 {
        let m = random_model_with(&vocab(), 1 + seed as usize % 5, ModelClass::K, seed, 0.4);
        let id = BisimRelation {
            pairs: (0..m.state_count()).map(|s| (s, s)).collect(),
            mode: BisimMode::Standard,
        };
        assert!(is_bisimulation(&m, &m, &id));
        for s in 0..m.state_count() {
            for t in 0..m.state_count() {
                if m.true_atoms(s) != m.true_atoms(t) {
                    let pair = BisimRelation {
                        pairs: [(s, t)].into(),
                        mode: BisimMode::Standard,
                    };
                    assert!(!is_bisimulation(&m, &m, &pair));
                    assert!(!max_bisimulation(&m, &m, BisimMode::Standard).relates(s, t));
                }
            }
        }
    }
}

#[test]
fn bounded_bisimilarity_implies_agreement_up_to_depth() {
    let fs = Grammar::basic(["p"], ["a", "b"]).up_to(7);
    let by_depth: Vec<Vec<&Formula>> = (0..=2)
        .map(|n| fs.iter().filter(|g| g.depth() <= n).collect())
        .collect();
    let v = Vocabulary::new(["p"], ["a", "b"]);
    let models: Vec<KripkeModel> = (0..40)
        .map(|s| random_model_with(&v, 1 + s as usize % 4, ModelClass::K, s, 0.45))
        .collect();
    let mut hits = [0usize; 3];
    for m in &models {
        for m2 in &models {
            for s in 0..m.state_count() {
                for t in 0..m2.state_count() {
                    let pm = PointedModel {
                        model: m.clone(),
                        point: s,
                    };
                    let pm2 = PointedModel {
                        model: m2.clone(),
                        point: t,
                    };
                    for n in 0..=2 {
                        if n_bisimilar(&pm, &pm2, n) {
                            hits[n] += 1;
                            for g in &by_depth[n] {
                                assert_eq!(eval_at(m, s, g), eval_at(m2, t, g));
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(hits.iter().all(|&h| h > 0), "{hits:?}");
}

#[test]
fn bounded_bisimilarity_stabilizes_at_full_bisimilarity() {
    for seed in 0..200u64 {
        let m = random_model_with(&vocab(), 1 + seed as usize % 4, ModelClass::K, seed, 0.4);
        let m2 = random_model_with(
            &vocab(),
            1 + (seed as usize / 3) % 4,
            ModelClass::K,
            seed + 7,
            0.4,
        );
        let bound = m.state_count() + m2.state_count();
        for s in 0..m.state_count() {
            for t in 0..m2.state_count() {
                let pm = PointedModel {
                    model: m.clone(),
                    point: s,
                };
                let pm2 = PointedModel {
                    model: m2.clone(),
                    point: t,
                };
                let full = bisimilar(&pm, &pm2, BisimMode::Standard);
                assert_eq!(n_bisimilar(&pm, &pm2, bound), full);
                if !n_bisimilar(&pm, &pm2, 1) {
                    assert!(!n_bisimilar(&pm, &pm2, 2));
                }
            }
        }
    }
}

#[test]
fn contraction_is_idempotent_and_preserves_truth() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let gen = FormulaGen::new(["p", "q"], ["a", "b"], 3).with_group_knowledge();
    for seed in 0..200 {
        let m = random_model_with(&vocab(), 1 + seed as usize % 5, ModelClass::K, seed, 0.4);
        let m = duplicate(&m, &mut rng, false);
        let (q, class_of) = contract_with_map(&m);
        assert_eq!(contract(&q), q);
        assert!(q.state_count() <= m.state_count());
        let self_max = max_bisimulation(&q, &q, BisimMode::Standard);
        assert_eq!(self_max.len(), q.state_count());
        let r = BisimRelation {
            pairs: class_of.iter().enumerate().map(|(s, &c)| (s, c)).collect(),
            mode: BisimMode::Standard,
        };
        assert!(is_bisimulation(&m, &q, &r));
        for _ in 0..10 {
            let g = gen.sample(&mut rng);
            for (s, &c) in class_of.iter().enumerate() {
                assert_eq!(eval_at(&m, s, &g), eval_at(&q, c, &g));
            }
        }
    }
}
