//! The text format for models, pointed models and generated artifacts.
//!
//! ```text
//! atoms: p q
//! agents: a b
//! states: s t
//! point: s
//! rel a: s-s, s~t
//! rel b: t-t
//! val s: p=1 q=0
//! class: S5
//! ```
//!
//! `x-y` is one directed pair and `x~y` adds both directions. A `class:` line
//! closes the relations under that class after loading. `point:` is optional.
//! Files holding two pointed models separate them with a line `---`; a
//! `formula:` line attaches a formula to a document.
//!
//! [`encode_model`] is canonical: sections in the order above, members sorted,
//! every pair written directed, every atom of every state written out.

use std::collections::{BTreeMap, BTreeSet};

use epk_core::corpus::Payload;
use epk_core::models::{ensure_class, ModelError, Relation};
use epk_core::syntax::{parse, print_sugared, ParseError};
use epk_core::{Agent, Atom, Formula, KripkeModel, ModelClass, PointedModel, State, Vocabulary};
use thiserror::Error;

/// Separator between documents in one file.
pub const SEPARATOR: &str = "---";

/// Failure to read a model file.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}:` line")]
    Missing(&'static str),
    #[error("{0}")]
    Model(#[from] ModelError),
    #[error("line {line}: formula {source}")]
    Formula { line: usize, source: ParseError },
    #[error("class {class}: {message}")]
    Class { class: ModelClass, message: String },
    #[error("expected {expected} document(s), found {found}")]
    Documents {
        expected: &'static str,
        found: usize,
    },
    #[error("model has no point; give one with `point:`")]
    NoPoint,
}

/// One decoded document: a model, maybe pointed, maybe carrying a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub model: KripkeModel,
    pub point: Option<usize>,
    pub formula: Option<Formula>,
}

impl Document {
    /// The pointed model, if the document names a point.
    pub fn pointed(&self) -> Option<PointedModel> {
        self.point.map(|point| PointedModel {
            model: self.model.clone(),
            point,
        })
    }
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn words(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

#[derive(Default)]
struct Raw<'a> {
    atoms: Option<Vec<&'a str>>,
    agents: Option<Vec<&'a str>>,
    states: Option<Vec<&'a str>>,
    point: Option<(usize, &'a str)>,
    rels: Vec<(usize, &'a str, &'a str)>,
    vals: Vec<(usize, &'a str, &'a str)>,
    class: Option<(usize, &'a str)>,
    formula: Option<(usize, &'a str)>,
}

/// Reads one document. Blank lines and `#` comments are ignored.
pub fn decode_document(text: &str) -> Result<Document, FormatError> {
    decode_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
}

fn decode_lines<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<Document, FormatError> {
    let mut raw = Raw::default();
    for (no, line) in lines {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| syntax(no, "expected `key: value`"))?;
        let key = key.trim();
        let rest = rest.trim();
        let once = |slot: bool, name: &str| {
            if slot {
                Err(syntax(no, format!("duplicate `{name}:` line")))
            } else {
                Ok(())
            }
        };
        match key {
            "atoms" => {
                once(raw.atoms.is_some(), key)?;
                raw.atoms = Some(words(rest));
            }
            "agents" => {
                once(raw.agents.is_some(), key)?;
                raw.agents = Some(words(rest));
            }
            "states" => {
                once(raw.states.is_some(), key)?;
                raw.states = Some(words(rest));
            }
            "point" => {
                once(raw.point.is_some(), key)?;
                raw.point = Some((no, rest));
            }
            "class" => {
                once(raw.class.is_some(), key)?;
                raw.class = Some((no, rest));
            }
            "formula" => {
                once(raw.formula.is_some(), key)?;
                raw.formula = Some((no, rest));
            }
            _ => match key.split_once(char::is_whitespace) {
                Some(("rel", who)) => raw.rels.push((no, who.trim(), rest)),
                Some(("val", who)) => raw.vals.push((no, who.trim(), rest)),
                _ => return Err(syntax(no, format!("unknown key `{key}`"))),
            },
        }
    }
    build(raw)
}

fn build(raw: Raw<'_>) -> Result<Document, FormatError> {
    let atoms = raw.atoms.ok_or(FormatError::Missing("atoms"))?;
    let agents = raw.agents.ok_or(FormatError::Missing("agents"))?;
    let states = raw.states.ok_or(FormatError::Missing("states"))?;
    let vocab = Vocabulary::new(atoms.iter().copied(), agents.iter().copied());
    let index: BTreeMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let lookup = |no: usize, s: &str| {
        index
            .get(s)
            .copied()
            .ok_or_else(|| syntax(no, format!("unknown state `{s}`")))
    };

    let mut pairs: BTreeMap<Agent, Vec<(usize, usize)>> = BTreeMap::new();
    for &(no, who, body) in &raw.rels {
        let agent = Agent::new(who);
        if !vocab.agents.contains(&agent) {
            return Err(syntax(no, format!("unknown agent `{who}`")));
        }
        let list = pairs.entry(agent).or_default();
        for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (x, y, both) = if let Some((x, y)) = item.split_once('~') {
                (x, y, true)
            } else if let Some((x, y)) = item.split_once('-') {
                (x, y, false)
            } else {
                return Err(syntax(
                    no,
                    format!("expected `x-y` or `x~y`, found `{item}`"),
                ));
            };
            let (s, t) = (lookup(no, x.trim())?, lookup(no, y.trim())?);
            list.push((s, t));
            if both {
                list.push((t, s));
            }
        }
    }
    let n = states.len();
    let rels = pairs
        .into_iter()
        .map(|(a, ps)| (a, Relation::from_pairs(n, ps)))
        .collect();

    let mut val = vec![BTreeSet::new(); n];
    let mut seen = BTreeSet::new();
    for &(no, who, body) in &raw.vals {
        let s = lookup(no, who)?;
        if !seen.insert(s) {
            return Err(syntax(no, format!("duplicate valuation for `{who}`")));
        }
        for item in words(body) {
            let (p, bit) = match item.split_once('=') {
                Some((p, "1")) => (p, true),
                Some((p, "0")) => (p, false),
                Some(_) => {
                    return Err(syntax(
                        no,
                        format!("expected `p=0` or `p=1`, found `{item}`"),
                    ))
                }
                None => (item, true),
            };
            let atom = Atom::new(p);
            if !vocab.atoms.contains(&atom) {
                return Err(syntax(no, format!("unknown atom `{p}`")));
            }
            if bit {
                val[s].insert(atom);
            }
        }
    }

    let states = states.iter().map(|s| State::new(*s)).collect();
    let mut model = KripkeModel::from_parts(vocab, states, rels, val)?;
    if let Some((no, name)) = raw.class {
        let class: ModelClass = name
            .parse()
            .map_err(|_| syntax(no, format!("unknown class `{name}`")))?;
        model = ensure_class(&model, class).map_err(|e| FormatError::Class {
            class,
            message: e.to_string(),
        })?;
    }
    let point = match raw.point {
        Some((no, id)) => Some(
            model
                .index_of(id)
                .ok_or_else(|| syntax(no, format!("unknown state `{id}`")))?,
        ),
        None => None,
    };
    let formula = match raw.formula {
        Some((line, text)) => Some(
            parse(text, model.vocab()).map_err(|source| FormatError::Formula { line, source })?,
        ),
        None => None,
    };
    Ok(Document {
        model,
        point,
        formula,
    })
}

/// Reads every document of a file, split at `---` lines.
pub fn decode_documents(text: &str) -> Result<Vec<Document>, FormatError> {
    let mut docs = Vec::new();
    let mut chunk: Vec<(usize, &str)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim() == SEPARATOR {
            docs.push(decode_lines(chunk.drain(..))?);
        } else {
            chunk.push((i + 1, line));
        }
    }
    docs.push(decode_lines(chunk.into_iter())?);
    Ok(docs)
}

/// Reads a file holding exactly one model; a point, if present, is dropped.
pub fn decode_model(text: &str) -> Result<KripkeModel, FormatError> {
    Ok(single(text)?.model)
}

/// Reads a file holding exactly one pointed model.
pub fn decode_pointed(text: &str) -> Result<PointedModel, FormatError> {
    single(text)?.pointed().ok_or(FormatError::NoPoint)
}

/// Reads a file holding exactly two pointed models.
pub fn decode_pair(text: &str) -> Result<(PointedModel, PointedModel), FormatError> {
    let docs = decode_documents(text)?;
    match docs.as_slice() {
        [m, n] => Ok((
            m.pointed().ok_or(FormatError::NoPoint)?,
            n.pointed().ok_or(FormatError::NoPoint)?,
        )),
        _ => Err(FormatError::Documents {
            expected: "2",
            found: docs.len(),
        }),
    }
}

fn single(text: &str) -> Result<Document, FormatError> {
    let mut docs = decode_documents(text)?;
    if docs.len() != 1 {
        return Err(FormatError::Documents {
            expected: "1",
            found: docs.len(),
        });
    }
    Ok(docs.remove(0))
}

fn line(out: &mut String, key: &str, items: impl IntoIterator<Item = String>, sep: &str) {
    let body = items.into_iter().collect::<Vec<_>>().join(sep);
    out.push_str(key);
    out.push(':');
    if !body.is_empty() {
        out.push(' ');
        out.push_str(&body);
    }
    out.push('\n');
}

fn encode_into(out: &mut String, m: &KripkeModel, point: Option<usize>, formula: Option<&Formula>) {
    let vocab = m.vocab();
    let id = |s: usize| m.state(s).id();
    line(
        out,
        "atoms",
        vocab.atoms.iter().map(ToString::to_string),
        " ",
    );
    line(
        out,
        "agents",
        vocab.agents.iter().map(ToString::to_string),
        " ",
    );
    line(
        out,
        "states",
        m.states().iter().map(|s| s.id().to_string()),
        " ",
    );
    if let Some(p) = point {
        line(out, "point", [id(p).to_string()], "");
    }
    for (a, r) in m.relations() {
        line(
            out,
            &format!("rel {a}"),
            r.pairs().map(|(s, t)| format!("{}-{}", id(s), id(t))),
            ", ",
        );
    }
    for s in 0..m.state_count() {
        let bits = vocab
            .atoms
            .iter()
            .map(|p| format!("{p}={}", u8::from(m.holds(s, p))));
        line(out, &format!("val {}", id(s)), bits, " ");
    }
    if let Some(f) = formula {
        line(out, "formula", [print_sugared(f)], "");
    }
}

/// Canonical text of a model.
pub fn encode_model(m: &KripkeModel) -> String {
    let mut out = String::new();
    encode_into(&mut out, m, None, None);
    out
}

/// Canonical text of a pointed model.
pub fn encode_pointed(pm: &PointedModel) -> String {
    let mut out = String::new();
    encode_into(&mut out, &pm.model, Some(pm.point), None);
    out
}

/// Canonical text of a document.
pub fn encode_document(d: &Document) -> String {
    let mut out = String::new();
    encode_into(&mut out, &d.model, d.point, d.formula.as_ref());
    out
}

/// Canonical text of a generated artifact. Formulas are written as a single line.
pub fn encode_payload(p: &Payload) -> String {
    match p {
        Payload::Model(m) => encode_model(m),
        Payload::Pointed(pm) => encode_pointed(pm),
        Payload::Pair(m, n) => format!("{}{SEPARATOR}\n{}", encode_pointed(m), encode_pointed(n)),
        Payload::Refutation(pm, f) => {
            let mut out = String::new();
            encode_into(&mut out, &pm.model, Some(pm.point), Some(f));
            out
        }
        Payload::Formula(f) => format!("{}\n", print_sugared(f)),
    }
}
