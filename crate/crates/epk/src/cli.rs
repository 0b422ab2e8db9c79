//! Command-line front end. [`run`] takes the argument vector and returns the
//! exit code and the text for stdout, so it can be driven from tests.
//!
//! Exit codes: 0 affirmative verdict or success, 1 negative verdict, 2 usage
//! or input error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use epk_core::bisim::{contract_with_map, max_bisimulation, n_bisimilar, BisimMode};
use epk_core::corpus::{self, Payload};
use epk_core::decide::{satisfiable, Verdict};
use epk_core::models::{frame_properties, in_class, random_model};
use epk_core::proofs::check_derivation;
use epk_core::semantics::{eval_at, label};
use epk_core::syntax::{parse, parse_infer, print_sugared};
use epk_core::{ModelClass, PointedModel, Vocabulary};
use serde_json::{json, Value};

use crate::derivation::parse_derivation;
use crate::format::{decode_documents, encode_document, encode_payload, Document};

/// Environment variable seeding randomized helpers.
pub const SEED_VAR: &str = "EPK_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "epk",
    version,
    about = "Workbench for multi-agent epistemic logic"
)]
struct Cli {
    /// Print a JSON object instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula on a model.
    Check {
        #[arg(long)]
        model: PathBuf,
        /// Evaluate at this state (default: the file's point, else every state).
        #[arg(long, conflicts_with = "global")]
        state: Option<String>,
        /// Require truth at every state.
        #[arg(long)]
        global: bool,
        formula: String,
    },
    /// Decide satisfiability in a model class.
    Sat(DecideArgs),
    /// Decide validity in a model class.
    Valid(DecideArgs),
    /// Compare two models up to bisimulation.
    Bisim {
        /// First model, or a file holding both models separated by `---`.
        m1: PathBuf,
        m2: Option<PathBuf>,
        /// Use group bisimulation.
        #[arg(long)]
        group: bool,
        /// Check n-bisimilarity only.
        #[arg(long, conflicts_with = "group")]
        depth: Option<usize>,
        #[arg(long, num_args = 2, value_names = ["S1", "S2"])]
        points: Option<Vec<String>>,
    },
    /// Quotient a model by its largest auto-bisimulation.
    Minimize {
        model: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Check a derivation file.
    Prove { file: PathBuf },
    /// Write a corpus artifact, or `random` for a seeded random model.
    Gen {
        name: String,
        #[arg(long = "param", value_parser = key_value)]
        params: Vec<(String, u64)>,
        /// Class for `random`.
        #[arg(long, value_parser = model_class)]
        class: Option<ModelClass>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// List the frame properties of every agent and the classes the model belongs to.
    Frame { model: PathBuf },
}

#[derive(Args, Debug)]
struct DecideArgs {
    #[arg(long, value_parser = model_class)]
    class: ModelClass,
    /// Write the witness or countermodel here.
    #[arg(long)]
    witness: Option<PathBuf>,
    formula: String,
}

fn model_class(s: &str) -> Result<ModelClass, String> {
    s.parse().map_err(|_| format!("unknown class `{s}`"))
}

fn key_value(s: &str) -> Result<(String, u64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, found `{s}`"))?;
    let v = v
        .trim()
        .parse()
        .map_err(|_| format!("`{v}` is not a natural number"))?;
    Ok((k.trim().to_string(), v))
}

struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn verdict(yes: bool, text: impl Into<String>, json: Value) -> Self {
        Report {
            code: if yes { 0 } else { 1 },
            text: text.into(),
            json,
        }
    }
}

/// Runs one command, reading the seed from `EPK_SEED`.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let seed = std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok());
    run_seeded(argv, seed)
}

/// Runs one command with an explicit seed for randomized helpers.
pub fn run_seeded<I, T>(argv: I, seed: Option<u64>) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let json = cli.json;
    match dispatch(cli.command, seed) {
        Ok(r) if json => (
            r.code,
            format!(
                "{}\n",
                serde_json::to_string_pretty(&r.json).expect("json value")
            ),
        ),
        Ok(r) => (r.code, r.text),
        Err(e) if json => (2, format!("{}\n", json!({ "error": format!("{e:#}") }))),
        Err(e) => (2, format!("error: {e:#}\n")),
    }
}

fn dispatch(cmd: Command, seed: Option<u64>) -> Result<Report> {
    match cmd {
        Command::Check {
            model,
            state,
            global,
            formula,
        } => check(&model, state.as_deref(), global, &formula),
        Command::Sat(args) => decide(args, false),
        Command::Valid(args) => decide(args, true),
        Command::Bisim {
            m1,
            m2,
            group,
            depth,
            points,
        } => bisim(&m1, m2.as_deref(), group, depth, points),
        Command::Minimize { model, output } => minimize(&model, output.as_deref()),
        Command::Prove { file } => prove(&file),
        Command::Gen {
            name,
            params,
            class,
            output,
        } => gen(&name, params, class, output.as_deref(), seed),
        Command::Frame { model } => frame(&model),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load(path: &Path) -> Result<Vec<Document>> {
    decode_documents(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_one(path: &Path) -> Result<Document> {
    let mut docs = load(path)?;
    if docs.len() != 1 {
        bail!(
            "{} holds {} models, expected one",
            path.display(),
            docs.len()
        );
    }
    Ok(docs.remove(0))
}

fn check(path: &Path, state: Option<&str>, global: bool, text: &str) -> Result<Report> {
    let doc = load_one(path)?;
    let m = &doc.model;
    let f = parse(text, m.vocab()).map_err(|e| anyhow!("formula {e}"))?;
    let at = match state {
        Some(id) => Some(
            m.index_of(id)
                .ok_or_else(|| anyhow!("unknown state `{id}`"))?,
        ),
        None if global => None,
        None => doc.point,
    };
    let (holds, scope, failing) = match at {
        Some(s) => (eval_at(m, s, &f)?, m.state(s).id().to_string(), Vec::new()),
        None => {
            let table = label(m, &f);
            let failing: Vec<String> = (0..m.state_count())
                .filter(|&s| table.get(s, &f) != Some(true))
                .map(|s| m.state(s).id().to_string())
                .collect();
            (failing.is_empty(), "global".to_string(), failing)
        }
    };
    let json = json!({
        "verb": "check",
        "formula": print_sugared(&f),
        "scope": scope,
        "holds": holds,
        "failing": failing,
    });
    Ok(Report::verdict(holds, format!("{holds}\n"), json))
}

fn decide(args: DecideArgs, validity: bool) -> Result<Report> {
    let f = parse_infer(&args.formula).map_err(|e| anyhow!("formula {e}"))?;
    let target = if validity { f.clone().not() } else { f.clone() };
    let result = satisfiable(&target, args.class).map_err(|e| anyhow!("{e}"))?;
    let sat = result.verdict == Verdict::Satisfiable;
    let mut text = match (validity, sat) {
        (false, true) => "satisfiable\n",
        (false, false) => "unsatisfiable\n",
        (true, false) => "valid\n",
        (true, true) => "not valid\n",
    }
    .to_string();
    let mut states = Value::Null;
    let mut written = Value::Null;
    if let Some(w) = &result.witness {
        states = json!(w.model.state_count());
        if let Some(path) = &args.witness {
            let doc = Document {
                model: w.model.clone(),
                point: Some(w.point),
                formula: Some(target.clone()),
            };
            write(path, &encode_document(&doc))?;
            let label = if validity { "countermodel" } else { "witness" };
            text.push_str(&format!("{label}: {}\n", path.display()));
            written = json!(path.display().to_string());
        }
    }
    let verb = if validity { "valid" } else { "sat" };
    let affirmative = sat != validity;
    let json = json!({
        "verb": verb,
        "class": args.class.name(),
        "formula": print_sugared(&f),
        "result": affirmative,
        "witness_states": states,
        "witness_path": written,
    });
    Ok(Report::verdict(affirmative, text, json))
}

fn pointed(doc: &Document, id: Option<&String>, which: &str) -> Result<PointedModel> {
    match id {
        Some(id) => {
            PointedModel::new(doc.model.clone(), id).map_err(|e| anyhow!("{which} model: {e}"))
        }
        None => doc
            .pointed()
            .ok_or_else(|| anyhow!("{which} model has no point; pass --points")),
    }
}

fn bisim(
    p1: &Path,
    p2: Option<&Path>,
    group: bool,
    depth: Option<usize>,
    points: Option<Vec<String>>,
) -> Result<Report> {
    let (d1, d2) = match p2 {
        Some(p2) => (load_one(p1)?, load_one(p2)?),
        None => {
            let mut docs = load(p1)?;
            if docs.len() != 2 {
                bail!(
                    "{} holds {} models; give two files or one file with two models",
                    p1.display(),
                    docs.len()
                );
            }
            let second = docs.pop().expect("two documents");
            (docs.pop().expect("two documents"), second)
        }
    };
    let mode = if group {
        BisimMode::Group
    } else {
        BisimMode::Standard
    };
    let noun = if group {
        "group bisimilar"
    } else {
        "bisimilar"
    };
    let have_points = points.is_some() || (d1.point.is_some() && d2.point.is_some());
    let ids = points.unwrap_or_default();

    if let Some(n) = depth {
        let (a, b) = (
            pointed(&d1, ids.first(), "first")?,
            pointed(&d2, ids.get(1), "second")?,
        );
        let yes = n_bisimilar(&a, &b, n);
        let text = format!("{}{n}-bisimilar\n", if yes { "" } else { "not " });
        let json = json!({
            "verb": "bisim",
            "mode": "bounded",
            "depth": n,
            "points": [a.point_id(), b.point_id()],
            "result": yes,
        });
        return Ok(Report::verdict(yes, text, json));
    }

    let rel = max_bisimulation(&d1.model, &d2.model, mode);
    let pairs: Vec<Value> = rel
        .named_pairs(&d1.model, &d2.model)
        .iter()
        .map(|(s, t)| json!([s.id(), t.id()]))
        .collect();
    let mode_name = if group { "group" } else { "standard" };
    if have_points {
        let (a, b) = (
            pointed(&d1, ids.first(), "first")?,
            pointed(&d2, ids.get(1), "second")?,
        );
        let yes = rel.relates(a.point, b.point);
        let text = format!("{}{noun}\n", if yes { "" } else { "not " });
        let json = json!({
            "verb": "bisim",
            "mode": mode_name,
            "points": [a.point_id(), b.point_id()],
            "result": yes,
            "relation": pairs,
        });
        Ok(Report::verdict(yes, text, json))
    } else {
        let mut text = format!("{} related pairs\n", rel.len());
        for (s, t) in rel.named_pairs(&d1.model, &d2.model) {
            text.push_str(&format!("{} {}\n", s.id(), t.id()));
        }
        let json = json!({
            "verb": "bisim",
            "mode": mode_name,
            "points": Value::Null,
            "result": !rel.is_empty(),
            "relation": pairs,
        });
        Ok(Report::verdict(!rel.is_empty(), text, json))
    }
}

fn minimize(path: &Path, output: Option<&Path>) -> Result<Report> {
    let doc = load_one(path)?;
    let (q, class_of) = contract_with_map(&doc.model);
    let before = doc.model.state_count();
    let after = q.state_count();
    let out = Document {
        model: q,
        point: doc.point.map(|p| class_of[p]),
        formula: doc.formula,
    };
    let encoded = encode_document(&out);
    let (text, model) = match output {
        Some(o) => {
            write(o, &encoded)?;
            (format!("{before} -> {after} states\n"), Value::Null)
        }
        None => (encoded.clone(), json!(encoded)),
    };
    let json = json!({
        "verb": "minimize",
        "states_before": before,
        "states_after": after,
        "output": output.map(|o| o.display().to_string()),
        "model": model,
    });
    Ok(Report {
        code: 0,
        text,
        json,
    })
}

fn prove(path: &Path) -> Result<Report> {
    let d = parse_derivation(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    let verdict = check_derivation(&d);
    let theorem = d.theorem().map(print_sugared);
    let text = match &verdict {
        Ok(()) => "accepted\n".to_string(),
        Err(e) => format!("rejected: {e}\n"),
    };
    let failure = match &verdict {
        Ok(()) => Value::Null,
        Err(e) => json!({ "line": e.line, "reason": e.kind.to_string() }),
    };
    let json = json!({
        "verb": "prove",
        "system": d.system.to_string(),
        "lines": d.lines.len(),
        "theorem": theorem,
        "accepted": verdict.is_ok(),
        "failure": failure,
    });
    Ok(Report::verdict(verdict.is_ok(), text, json))
}

const RANDOM_ATOMS: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];
const RANDOM_AGENTS: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

fn random_artifact(
    params: &BTreeMap<String, u64>,
    class: ModelClass,
    seed: Option<u64>,
) -> Result<(BTreeMap<String, u64>, Payload)> {
    let mut filled: BTreeMap<String, u64> = [
        ("states", 4),
        ("atoms", 2),
        ("agents", 2),
        ("seed", seed.unwrap_or(0)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    for (k, v) in params {
        let slot = filled
            .get_mut(k)
            .ok_or_else(|| anyhow!("unknown parameter {k:?}"))?;
        *slot = *v;
    }
    let (states, atoms, agents) = (
        filled["states"] as usize,
        filled["atoms"] as usize,
        filled["agents"] as usize,
    );
    if !(1..=64).contains(&states)
        || atoms > RANDOM_ATOMS.len()
        || !(1..=RANDOM_AGENTS.len()).contains(&agents)
    {
        bail!("random needs 1..=64 states, at most 8 atoms and 1..=8 agents");
    }
    let vocab = Vocabulary::new(
        RANDOM_ATOMS[..atoms].iter().copied(),
        RANDOM_AGENTS[..agents].iter().copied(),
    );
    let m = random_model(&vocab, states, class, filled["seed"]);
    let point = PointedModel { model: m, point: 0 };
    Ok((filled, Payload::Pointed(point)))
}

fn kind(p: &Payload) -> &'static str {
    match p {
        Payload::Model(_) => "model",
        Payload::Pointed(_) => "pointed",
        Payload::Pair(..) => "pair",
        Payload::Refutation(..) => "refutation",
        Payload::Formula(_) => "formula",
    }
}

fn gen(
    name: &str,
    params: Vec<(String, u64)>,
    class: Option<ModelClass>,
    output: Option<&Path>,
    seed: Option<u64>,
) -> Result<Report> {
    let given: BTreeMap<String, u64> = params.into_iter().collect();
    let (filled, payload) = if name == "random" {
        random_artifact(&given, class.unwrap_or(ModelClass::K), seed)?
    } else {
        if class.is_some() {
            bail!("--class only applies to `random`");
        }
        let a = corpus::generate(name, &given).map_err(|e| anyhow!("{e}"))?;
        (a.params, a.payload)
    };
    let encoded = encode_payload(&payload);
    let text = match output {
        Some(o) => {
            write(o, &encoded)?;
            format!("wrote {}\n", o.display())
        }
        None => encoded.clone(),
    };
    let json = json!({
        "verb": "gen",
        "name": name,
        "params": filled,
        "kind": kind(&payload),
        "output": output.map(|o| o.display().to_string()),
        "text": if output.is_some() { Value::Null } else { json!(encoded) },
    });
    Ok(Report {
        code: 0,
        text,
        json,
    })
}

fn frame(path: &Path) -> Result<Report> {
    let doc = load_one(path)?;
    let m = &doc.model;
    let mut text = String::new();
    let mut agents = serde_json::Map::new();
    for (a, props) in frame_properties(m) {
        let names: Vec<&str> = props.iter().map(|p| p.name()).collect();
        text.push_str(&format!("{a}: {}\n", names.join(" ")).replace(": \n", ":\n"));
        agents.insert(a.to_string(), json!(names));
    }
    let classes: Vec<&str> = ModelClass::ALL
        .iter()
        .filter(|&&c| in_class(m, c))
        .map(|c| c.name())
        .collect();
    text.push_str(&format!("classes: {}\n", classes.join(" ")));
    let json = json!({ "verb": "frame", "agents": agents, "classes": classes });
    Ok(Report {
        code: 0,
        text,
        json,
    })
}
