//! Named, deterministic example models, model pairs and formula families.
//!
//! [`generate`] is the single entry point; [`CATALOGUE`] lists every name
//! with its parameters and defaults.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::models::{KripkeModel, PointedModel, Relation, State};
use crate::syntax::{Agent, AgentSet, Atom, Formula, Vocabulary};

/// What an entry produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    /// A model.
    Model(KripkeModel),
    /// A model with a point.
    Pointed(PointedModel),
    /// Two pointed models meant to be compared.
    Pair(PointedModel, PointedModel),
    /// A pointed model refuting the formula.
    Refutation(PointedModel, Formula),
    /// A formula.
    Formula(Formula),
}

/// A generated artifact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedArtifact {
    /// Catalogue name.
    pub name: String,
    /// Every parameter, defaults filled in.
    pub params: BTreeMap<String, u64>,
    /// The artifact itself.
    pub payload: Payload,
}

/// Catalogue entry: name, then `(parameter, default, minimum, maximum)` rows.
pub type CatalogueEntry = (&'static str, &'static [(&'static str, u64, u64, u64)]);

/// Every entry.
pub const CATALOGUE: [CatalogueEntry; 11] = [
    ("interview", &[]),
    ("interview-b", &[]),
    ("playground", &[]),
    ("message-chain", &[("radius", 4, 1, 64)]),
    ("chain", &[("n", 3, 1, 256)]),
    ("dist-counterexample", &[]),
    ("succinct-alpha", &[("n", 1, 1, 64)]),
    ("succinct-beta", &[("n", 1, 1, 16)]),
    ("finite-pair", &[("k", 2, 1, 64)]),
    ("strictness", &[("k", 1, 1, 4)]),
    ("s5-ignorance", &[]),
];

/// Generation failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorpusError {
    /// No entry has this name.
    UnknownName(String),
    /// The entry has no such parameter.
    UnknownParam(String),
    /// The value is outside the allowed range.
    InvalidParam {
        /// Parameter name.
        param: String,
        /// Given value.
        value: u64,
        /// Smallest allowed value.
        min: u64,
        /// Largest allowed value.
        max: u64,
    },
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::UnknownName(n) => write!(f, "unknown corpus entry {n:?}"),
            CorpusError::UnknownParam(p) => write!(f, "unknown parameter {p:?}"),
            CorpusError::InvalidParam {
                param,
                value,
                min,
                max,
            } => {
                write!(f, "parameter {param} = {value} is outside {min}..={max}")
            }
        }
    }
}

impl core::error::Error for CorpusError {}

/// Builds the named artifact; missing parameters take their defaults.
pub fn generate(name: &str, params: &BTreeMap<String, u64>) -> Result<NamedArtifact, CorpusError> {
    let (_, rows) = CATALOGUE
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| CorpusError::UnknownName(name.to_string()))?;
    if let Some(p) = params.keys().find(|p| !rows.iter().any(|(r, ..)| r == p)) {
        return Err(CorpusError::UnknownParam(p.clone()));
    }
    let mut filled = BTreeMap::new();
    for &(param, default, min, max) in rows.iter() {
        let value = params.get(param).copied().unwrap_or(default);
        if value < min || value > max {
            return Err(CorpusError::InvalidParam {
                param: param.to_string(),
                value,
                min,
                max,
            });
        }
        filled.insert(param.to_string(), value);
    }
    let get = |p: &str| filled[p] as usize;
    let payload = match name {
        "interview" => Payload::Model(interview()),
        "interview-b" => Payload::Model(interview_b()),
        "playground" => Payload::Model(playground()),
        "message-chain" => Payload::Pointed(message_chain(get("radius"))),
        "chain" => {
            let (m, n) = chain(get("n"));
            Payload::Pair(m, n)
        }
        "dist-counterexample" => {
            let (m, n) = dist_counterexample();
            Payload::Pair(m, n)
        }
        "succinct-alpha" => Payload::Formula(succinct_alpha(get("n"))),
        "succinct-beta" => Payload::Formula(succinct_beta(get("n"))),
        "finite-pair" => {
            let (m, n) = finite_pair(get("k"));
            Payload::Pair(m, n)
        }
        "strictness" => {
            let (m, f) = strictness(get("k"));
            Payload::Refutation(m, f)
        }
        "s5-ignorance" => Payload::Pointed(s5_ignorance()),
        _ => unreachable!("catalogue and dispatch agree"),
    };
    Ok(NamedArtifact {
        name: name.to_string(),
        params: filled,
        payload,
    })
}

/// [`generate`] with default parameters.
pub fn generate_default(name: &str) -> Result<NamedArtifact, CorpusError> {
    generate(name, &BTreeMap::new())
}

fn ab() -> AgentSet {
    AgentSet::new([Agent::new("a"), Agent::new("b")]).expect("two agents")
}

fn built(b: crate::models::ModelBuilder) -> KripkeModel {
    b.build().expect("corpus models are well formed")
}

fn point(m: KripkeModel, s: &str) -> PointedModel {
    PointedModel::new(m, s).expect("point exists")
}

/// Four states `w, v, s, u` for `(t_a, t_b)` = 11, 10, 01, 00; each agent
/// knows exactly its own atom.
pub fn interview() -> KripkeModel {
    built(
        KripkeModel::builder(Vocabulary::new(["t_a", "t_b"], ["a", "b"]))
            .state("w", &["t_a", "t_b"])
            .state("v", &["t_a"])
            .state("s", &["t_b"])
            .state("u", &[])
            .cluster("a", &["w", "v"])
            .cluster("a", &["s", "u"])
            .cluster("b", &["w", "s"])
            .cluster("b", &["v", "u"]),
    )
}

/// The interview extended by `v'` (like `v`, but `a` knows `¬t_b`) and `u'`
/// (like `u`, and `a` knows both atoms are false); `b` cannot tell any
/// `¬t_b` state apart.
pub fn interview_b() -> KripkeModel {
    built(
        KripkeModel::builder(Vocabulary::new(["t_a", "t_b"], ["a", "b"]))
            .state("w", &["t_a", "t_b"])
            .state("v", &["t_a"])
            .state("s", &["t_b"])
            .state("u", &[])
            .state("v'", &["t_a"])
            .state("u'", &[])
            .cluster("a", &["w", "v"])
            .cluster("a", &["s", "u"])
            .cluster("a", &["v'"])
            .cluster("a", &["u'"])
            .cluster("b", &["w", "s"])
            .cluster("b", &["v", "u", "v'", "u'"]),
    )
}

/// Two children at the playground (`p_a`, `p_b`); `a`-classes `{s,w,t}, {u}`,
/// `b`-classes `{s,u,t}, {w}`. A child alone at the playground calls her
/// mother, so `u` (only `p_a`) is where `a` is told and `w` (only `p_b`) where `b` is.
pub fn playground() -> KripkeModel {
    built(
        KripkeModel::builder(Vocabulary::new(["p_a", "p_b"], ["a", "b"]))
            .state("s", &["p_a", "p_b"])
            .state("t", &[])
            .state("u", &["p_a"])
            .state("w", &["p_b"])
            .cluster("a", &["s", "w", "t"])
            .cluster("a", &["u"])
            .cluster("b", &["s", "u", "t"])
            .cluster("b", &["w"]),
    )
}

fn signed(z: i64) -> String {
    if z < 0 {
        format!("m{}", -z)
    } else {
        format!("{z}")
    }
}

/// Name of world `w_{i,j}` in [`message_chain`], e.g. `w_m1_0`.
pub fn message_world(i: i64, j: i64) -> String {
    format!("w_{}_{}", signed(i), signed(j))
}

/// Atom `s_z` (sent at `z`) or `d_z` (delivered at `z`), e.g. `s_m2`.
pub fn message_atom(kind: char, z: i64) -> Atom {
    Atom::new(format!("{kind}_{}", signed(z)))
}

/// Modal depth up to which the truncated message chain agrees with the
/// unbounded one at `w_{i,j}`.
pub fn message_chain_depth_bound(radius: usize, i: i64, j: i64) -> usize {
    (radius as i64 - i.abs().max(j.abs())).max(0) as usize
}

/// Worlds `w_{i,j}` with `j ∈ {i, i+1}` and `|i|, |j| ≤ radius`; the sender `s`
/// knows `i`, the receiver `r` knows `j`. Pointed at `w_{0,0}`.
pub fn message_chain(radius: usize) -> PointedModel {
    let r = radius as i64;
    let zs: Vec<i64> = (-r..=r).collect();
    let atom_names: Vec<String> = zs
        .iter()
        .flat_map(|&z| [message_atom('s', z), message_atom('d', z)])
        .map(|a| a.name().to_string())
        .collect();
    let mut worlds = Vec::new();
    for i in -r..=r {
        for j in [i, i + 1] {
            if j.abs() <= r {
                worlds.push((i, j));
            }
        }
    }
    let mut b = KripkeModel::builder(Vocabulary::new(
        atom_names.iter().map(String::as_str),
        ["r", "s"],
    ));
    let names: Vec<String> = worlds.iter().map(|&(i, j)| message_world(i, j)).collect();
    let atoms: Vec<[String; 2]> = worlds
        .iter()
        .map(|&(i, j)| {
            [
                message_atom('s', i).name().to_string(),
                message_atom('d', j).name().to_string(),
            ]
        })
        .collect();
    for (w, at) in names.iter().zip(&atoms) {
        b = b.state(w, &[at[0].as_str(), at[1].as_str()]);
    }
    for (x, &(i, j)) in worlds.iter().enumerate() {
        for (y, &(k, l)) in worlds.iter().enumerate() {
            if i == k {
                b = b.edge("s", &names[x], &names[y]);
            }
            if j == l {
                b = b.edge("r", &names[x], &names[y]);
            }
        }
    }
    point(built(b), &message_world(0, 0))
}

fn alternating_chain(n: usize, p_at_end: bool) -> PointedModel {
    let names: Vec<String> = (1..=n + 1).map(|i| format!("s_{i}")).collect();
    let mut b = KripkeModel::builder(Vocabulary::new(["p"], ["a", "b"]));
    for (i, s) in names.iter().enumerate() {
        let atoms: &[&str] = if p_at_end && i == n { &["p"] } else { &[] };
        b = b.state(s, atoms).edge("a", s, s).edge("b", s, s);
    }
    for i in 0..n {
        let agent = if i % 2 == 0 { "a" } else { "b" };
        b = b.link(agent, &names[i], &names[i + 1]);
    }
    point(built(b), "s_1")
}

/// `(M_n, s_1)` and `(N_n, s_1)`: `n + 1` states joined alternately by `a`
/// and `b` (S5); `p` holds only at the last state of `N_n`.
pub fn chain(n: usize) -> (PointedModel, PointedModel) {
    (alternating_chain(n, false), alternating_chain(n, true))
}

/// `(M, s)` and `(N, s1)`: bisimilar, but `D_{a,b}p` holds only in `N`.
///
/// `N` is the S5 cycle `s1 -a- t1 -b- s2 -a- t2 -b- s1`, which contracts to `M`.
pub fn dist_counterexample() -> (PointedModel, PointedModel) {
    let vocab = Vocabulary::new(["p"], ["a", "b"]);
    let m = built(
        KripkeModel::builder(vocab.clone())
            .state("s", &["p"])
            .state("t", &[])
            .cluster("a", &["s", "t"])
            .cluster("b", &["s", "t"]),
    );
    let n = built(
        KripkeModel::builder(vocab)
            .state("s1", &["p"])
            .state("s2", &["p"])
            .state("t1", &[])
            .state("t2", &[])
            .cluster("a", &["s1", "t1"])
            .cluster("a", &["s2", "t2"])
            .cluster("b", &["s1", "t2"])
            .cluster("b", &["s2", "t1"]),
    );
    (point(m, "s"), point(n, "s1"))
}

/// `α_n = ¬E^n_{a,b}¬p`.
pub fn succinct_alpha(n: usize) -> Formula {
    let not_p = Formula::atom("p").not();
    Formula::everyone_iter(&ab(), n, not_p).not()
}

/// `β_1 = ¬(K_a¬p ∧ K_b¬p)`, `β_n = ¬(K_a¬β_{n-1} ∧ K_b¬β_{n-1})`.
pub fn succinct_beta(n: usize) -> Formula {
    let step = |f: Formula| {
        let neg = f.not();
        Formula::know("a", neg.clone())
            .and(Formula::know("b", neg))
            .not()
    };
    (1..n).fold(step(Formula::atom("p")), |f, _| step(f))
}

/// A two-state S5 model `{s: p, t}` (`a` confuses them, `b` does not) and its
/// `k`-fold copy, where every copy of `x` sees every copy of `y` whenever `x` sees `y`.
pub fn finite_pair(k: usize) -> (PointedModel, PointedModel) {
    let vocab = Vocabulary::new(["p"], ["a", "b"]);
    let base = built(
        KripkeModel::builder(vocab.clone())
            .state("s", &["p"])
            .state("t", &[])
            .cluster("a", &["s", "t"])
            .cluster("b", &["s"])
            .cluster("b", &["t"]),
    );
    let n = base.state_count();
    let copy = |x: usize, i: usize| x * k + i;
    let states: Vec<State> = (0..n)
        .flat_map(|x| (1..=k).map(move |i| (x, i)))
        .map(|(x, i)| State::new(format!("{}_{i}", base.state(x).id())))
        .collect();
    let relations: BTreeMap<Agent, Relation> = base
        .relations()
        .iter()
        .map(|(a, r)| {
            let pairs = r.pairs().flat_map(|(x, y)| {
                (0..k).flat_map(move |i| (0..k).map(move |j| (copy(x, i), copy(y, j))))
            });
            (a.clone(), Relation::from_pairs(n * k, pairs))
        })
        .collect();
    let valuation = (0..n * k).map(|c| base.true_atoms(c / k).clone()).collect();
    let dup =
        KripkeModel::from_parts(vocab, states, relations, valuation).expect("copy is well formed");
    (point(base, "s"), point(dup, "s_1"))
}

/// Pointed models refuting the converse of each link of `C → E → K_a → D`
/// (`k` = 1, 2, 3) and, for `k = 4`, `D_{a,b}p → p` on an irreflexive model.
pub fn strictness(k: usize) -> (PointedModel, Formula) {
    let vocab = Vocabulary::new(["p"], ["a", "b"]);
    let p = Formula::atom("p");
    let g = ab();
    match k {
        1 => {
            let m = built(
                KripkeModel::builder(vocab)
                    .state("x", &["p"])
                    .state("y", &["p"])
                    .state("z", &[])
                    .cluster("a", &["x", "y"])
                    .cluster("a", &["z"])
                    .cluster("b", &["x"])
                    .cluster("b", &["y", "z"]),
            );
            let f = Formula::everyone(g.clone(), p.clone()).implies(Formula::common(g, p));
            (point(m, "x"), f)
        }
        2 => {
            let m = built(
                KripkeModel::builder(vocab)
                    .state("x", &["p"])
                    .state("y", &[])
                    .cluster("a", &["x"])
                    .cluster("a", &["y"])
                    .cluster("b", &["x", "y"]),
            );
            let f = Formula::know("a", p.clone()).implies(Formula::everyone(g, p));
            (point(m, "x"), f)
        }
        3 => {
            let (_, n) = dist_counterexample();
            let f = Formula::distributed(g, p.clone()).implies(Formula::know("a", p));
            (n, f)
        }
        _ => {
            let m = built(
                KripkeModel::builder(vocab)
                    .state("x", &[])
                    .state("y", &["p"])
                    .edge("a", "x", "y")
                    .edge("b", "x", "y"),
            );
            let f = Formula::distributed(g, p.clone()).implies(p);
            (point(m, "x"), f)
        }
    }
}

/// One agent ignorant about `p` in S5: `{x: p, y}` in a single `a`-class, pointed at `x`.
pub fn s5_ignorance() -> PointedModel {
    let m = built(
        KripkeModel::builder(Vocabulary::new(["p"], ["a"]))
            .state("x", &["p"])
            .state("y", &[])
            .cluster("a", &["x", "y"]),
    );
    point(m, "x")
}
