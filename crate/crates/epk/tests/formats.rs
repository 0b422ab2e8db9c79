use std::collections::BTreeMap;

use epk::derivation::{encode_derivation, parse_derivation};
use epk::format::{
    decode_documents, decode_model, decode_pair, decode_pointed, encode_document, encode_model,
    encode_payload,
};
use epk_core::corpus::{self, generate, Payload, CATALOGUE};
use epk_core::models::{random_model_with, ModelClass};
use epk_core::proofs::{check_derivation, derivable_theorem_corpus};
use epk_core::syntax::parse_infer;
use epk_core::Vocabulary;
use proptest::prelude::*;

const INTERVIEW: &str = include_str!("fixtures/interview.km");
const K_DISTRIBUTION: &str = include_str!("fixtures/k_distribution.drv");

fn reencode(text: &str) -> String {
    decode_documents(text)
        .unwrap()
        .iter()
        .map(encode_document)
        .collect::<Vec<_>>()
        .join("---\n")
}

#[test]
fn every_corpus_artifact_round_trips() {
    for (name, rows) in CATALOGUE {
        let mut sizes: Vec<BTreeMap<String, u64>> = vec![BTreeMap::new()];
        for (param, _, min, max) in rows.iter() {
            for v in [*min, (*max).min(*min + 3)] {
                sizes.push([(param.to_string(), v)].into());
            }
        }
        for params in sizes {
            let art = generate(name, &params).unwrap();
            let text = encode_payload(&art.payload);
            match &art.payload {
                Payload::Model(m) => assert_eq!(&decode_model(&text).unwrap(), m),
                Payload::Pointed(pm) => assert_eq!(&decode_pointed(&text).unwrap(), pm),
                Payload::Pair(a, b) => {
                    assert_eq!(decode_pair(&text).unwrap(), (a.clone(), b.clone()))
                }
                Payload::Refutation(pm, f) => {
                    let doc = &decode_documents(&text).unwrap()[0];
                    assert_eq!(&doc.pointed().unwrap(), pm);
                    assert_eq!(doc.formula.as_ref(), Some(f));
                }
                Payload::Formula(f) => {
                    assert_eq!(&parse_infer(text.trim()).unwrap(), f);
                    continue;
                }
            }
            assert_eq!(reencode(&text), text, "{name} {params:?}");
        }
    }
}

#[test]
fn sugared_fixture_matches_the_corpus_model() {
    let m = decode_model(INTERVIEW).unwrap();
    assert_eq!(m, corpus::interview());
    let canonical = encode_model(&m);
    assert_ne!(canonical, INTERVIEW);
    assert_eq!(reencode(&canonical), canonical);
    assert!(canonical.starts_with("atoms: t_a t_b\nagents: a b\nstates: s u v w\n"));
}

#[test]
fn derivations_round_trip() {
    let d = parse_derivation(K_DISTRIBUTION).unwrap();
    assert_eq!(d.lines.len(), 11);
    check_derivation(&d).unwrap();
    let corpus_version = &derivable_theorem_corpus()[0].derivation;
    assert_eq!(&d, corpus_version);
    for c in derivable_theorem_corpus() {
        let text = encode_derivation(&c.derivation);
        let back = parse_derivation(&text).unwrap();
        assert_eq!(back, c.derivation, "{}", c.name);
        assert_eq!(encode_derivation(&back), text);
    }
}

#[test]
fn malformed_files_are_rejected() {
    for bad in [
        "atoms: p\nagents: a\n",
        "atoms: p\nagents: a\nstates: x\nrel b: x-x\n",
        "atoms: p\nagents: a\nstates: x\nrel a: x=x\n",
        "atoms: p\nagents: a\nstates: x\nval x: q=1\n",
        "atoms: p\nagents: a\nstates: x\nval x: p=1\nval x: p=0\n",
        "atoms: p\nagents: a\nstates: x\nclass: Q\n",
        "atoms: p\nagents: a\nstates: x\npoint: y\n",
        "atoms: p\nagents: a\nstates: x\nformula: K{b}p\n",
        "atoms: p\nagents: a\nstates: x-y\n",
        "nonsense\n",
    ] {
        assert!(decode_documents(bad).is_err(), "{bad:?}");
    }
    assert!(decode_pointed("atoms: p\nagents: a\nstates: x\n").is_err());
    assert!(decode_pair(INTERVIEW).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn random_models_round_trip(seed in any::<u64>(), n in 1usize..7, density in 0.0f64..1.0) {
        let vocab = Vocabulary::new(["p", "q", "r_1"], ["a", "b", "c"]);
        let m = random_model_with(&vocab, n, ModelClass::K, seed, density);
        let text = encode_model(&m);
        prop_assert_eq!(decode_model(&text).unwrap(), m);
        prop_assert_eq!(reencode(&text), text);
    }
}
