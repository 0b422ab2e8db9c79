//! Seeded random models that lie in a requested class by construction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ensure_class, KripkeModel, ModelClass, Relation, State};
use crate::syntax::Vocabulary;

/// Default probability of each candidate edge.
pub const DEFAULT_DENSITY: f64 = 0.35;

/// A random model over `vocab` with `n_states` states in class `c`.
///
/// States are named `s0, s1, ...`. Equal seeds give equal models.
pub fn random_model(vocab: &Vocabulary, n_states: usize, c: ModelClass, seed: u64) -> KripkeModel {
    random_model_with(vocab, n_states, c, seed, DEFAULT_DENSITY)
}

/// [`random_model`] with an explicit edge density in `[0, 1]`.
pub fn random_model_with(
    vocab: &Vocabulary,
    n_states: usize,
    c: ModelClass,
    seed: u64,
    density: f64,
) -> KripkeModel {
    let n = n_states.max(1);
    let density = density.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = format!("{}", n - 1).len();
    let states: Vec<State> = (0..n)
        .map(|i| State::new(format!("s{i:0width$}")))
        .collect();
    let valuation: Vec<BTreeSet<_>> = (0..n)
        .map(|_| {
            vocab
                .atoms
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .cloned()
                .collect()
        })
        .collect();
    let mut rels = BTreeMap::new();
    for a in &vocab.agents {
        let r = match c {
            ModelClass::S5 => partition_relation(&mut rng, n),
            ModelClass::K5 | ModelClass::K45 => cluster_relation(&mut rng, n, density, false),
            ModelClass::KD45 => cluster_relation(&mut rng, n, density, true),
            ModelClass::KB => {
                let mut pairs = Vec::new();
                for s in 0..n {
                    for t in s..n {
                        if rng.gen_bool(density) {
                            pairs.push((s, t));
                            pairs.push((t, s));
                        }
                    }
                }
                Relation::from_pairs(n, pairs)
            }
            _ => {
                let mut pairs = Vec::new();
                for s in 0..n {
                    for t in 0..n {
                        if rng.gen_bool(density) {
                            pairs.push((s, t));
                        }
                    }
                }
                if c.is_serial() {
                    for s in 0..n {
                        if !pairs.iter().any(|&(x, _)| x == s) {
                            pairs.push((s, rng.gen_range(0..n)));
                        }
                    }
                }
                Relation::from_pairs(n, pairs)
            }
        };
        rels.insert(a.clone(), r);
    }
    let m = KripkeModel::from_parts(vocab.clone(), states, rels, valuation)
        .expect("generated names are valid");
    let m = ensure_class(&m, c).expect("generated relations are already euclidean where required");
    debug_assert!(super::in_class(&m, c));
    m
}

fn random_blocks<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=n);
    (0..n).map(|_| rng.gen_range(0..k)).collect()
}

/// An equivalence relation induced by a random partition.
fn partition_relation<R: Rng>(rng: &mut R, n: usize) -> Relation {
    let block = random_blocks(rng, n);
    Relation::from_pairs(
        n,
        (0..n)
            .flat_map(|s| (0..n).map(move |t| (s, t)))
            .filter(|&(s, t)| block[s] == block[t]),
    )
}

/// A transitive euclidean relation: states are grouped, and every member of a
/// group sees exactly the group's cluster, a subset of the group (a sink of
/// mutually related states). Empty clusters give dead ends unless `serial`.
fn cluster_relation<R: Rng>(rng: &mut R, n: usize, density: f64, serial: bool) -> Relation {
    let block = random_blocks(rng, n);
    let k = block.iter().max().map_or(0, |m| m + 1);
    let mut cluster: Vec<Vec<usize>> = alloc::vec![Vec::new(); k];
    for s in 0..n {
        if rng.gen_bool(density.max(0.2)) {
            cluster[block[s]].push(s);
        }
    }
    for (b, members) in cluster.iter_mut().enumerate() {
        if members.is_empty() && (serial || rng.gen_bool(0.5)) {
            let in_block: Vec<usize> = (0..n).filter(|&s| block[s] == b).collect();
            if !in_block.is_empty() {
                members.push(in_block[rng.gen_range(0..in_block.len())]);
            }
        }
    }
    let pairs = (0..n).flat_map(|s| cluster[block[s]].iter().map(move |&t| (s, t)));
    Relation::from_pairs(n, pairs.collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{frame_properties, in_class, FrameProperty};

    #[test]
    fn every_class_is_respected() {
        let v = Vocabulary::new(["p", "q"], ["a", "b"]);
        for c in ModelClass::ALL {
            for seed in 0..200 {
                let n = 1 + (seed as usize % 6);
                let m = random_model(&v, n, c, seed);
                assert!(in_class(&m, c), "{c} seed {seed}");
            }
        }
    }

    #[test]
    fn deterministic() {
        let v = Vocabulary::new(["p"], ["a", "b"]);
        assert_eq!(
            random_model(&v, 5, ModelClass::K, 9),
            random_model(&v, 5, ModelClass::K, 9)
        );
    }

    #[test]
    fn single_state_s5_has_loops() {
        let v = Vocabulary::new(["p"], ["a", "b"]);
        let m = random_model(&v, 1, ModelClass::S5, 3);
        for r in m.relations().values() {
            assert_eq!(r.pair_set(), [(0, 0)].into_iter().collect());
        }
    }

    #[test]
    fn t_samples_reflexive() {
        let v = Vocabulary::new(["p"], ["a"]);
        for seed in 0..1000 {
            let m = random_model(&v, 4, ModelClass::T, seed);
            assert!(frame_properties(&m)
                .values()
                .all(|p| p.contains(&FrameProperty::Reflexive)));
        }
    }
}
