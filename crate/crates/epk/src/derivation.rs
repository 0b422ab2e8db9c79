//! The text format for Hilbert-style derivations.
//!
//! ```text
//! system: K
//! 1. p -> (q -> p) | Taut
//! 2. K{a}(p -> (q -> p)) | Nec a 1
//! 3. K{a}(p -> (q -> p)) -> (K{a}p -> K{a}(q -> p)) | K
//! 4. K{a}p -> K{a}(q -> p) | MP 2 3
//! ```
//!
//! Each line is split at its last `|`. Justifications are an axiom name,
//! `MP j h` (antecedent line, then implication line), `Nec a j` or
//! `Ind {a,b} j` (braces optional). Numbers must run 1, 2, 3, ...

use epk_core::proofs::{AxiomKind, AxiomSystem, Derivation, Justification, ProofLine};
use epk_core::syntax::{parse_infer, print_sugared, ParseError};
use epk_core::{Agent, AgentSet};
use thiserror::Error;

/// Failure to read a derivation file.
#[derive(Debug, Error)]
pub enum DerivationFormatError {
    #[error("missing `system:` header")]
    MissingSystem,
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: formula {source}")]
    Formula { line: usize, source: ParseError },
}

fn syntax(line: usize, message: impl Into<String>) -> DerivationFormatError {
    DerivationFormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn index(line: usize, s: &str) -> Result<usize, DerivationFormatError> {
    s.parse()
        .map_err(|_| syntax(line, format!("expected a line number, found `{s}`")))
}

fn justification(line: usize, text: &str) -> Result<Justification, DerivationFormatError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    match parts.as_slice() {
        ["MP", j, h] => Ok(Justification::MP {
            antecedent: index(line, j)?,
            implication: index(line, h)?,
        }),
        ["Nec", a, j] => Ok(Justification::Nec {
            agent: Agent::new(*a),
            premise: index(line, j)?,
        }),
        ["Ind", rest @ .., j] if !rest.is_empty() => {
            let names = rest.join(" ");
            let names = names.trim().trim_start_matches('{').trim_end_matches('}');
            let group = AgentSet::new(
                names
                    .split([',', ' '])
                    .filter(|s| !s.is_empty())
                    .map(Agent::new),
            )
            .ok_or_else(|| syntax(line, "empty group"))?;
            Ok(Justification::Ind {
                group,
                premise: index(line, j)?,
            })
        }
        [name] => name
            .parse::<AxiomKind>()
            .map(Justification::Axiom)
            .map_err(|_| syntax(line, format!("unknown axiom `{name}`"))),
        _ => Err(syntax(line, format!("unreadable justification `{text}`"))),
    }
}

/// Reads a derivation. Blank lines and `#` comments are ignored.
pub fn parse_derivation(text: &str) -> Result<Derivation, DerivationFormatError> {
    let mut system = None;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix("system:") {
            if system.is_some() {
                return Err(syntax(no, "duplicate `system:` header"));
            }
            let name = name.trim();
            system = Some(
                name.parse::<AxiomSystem>()
                    .map_err(|_| DerivationFormatError::UnknownSystem(name.into()))?,
            );
            continue;
        }
        if system.is_none() {
            return Err(DerivationFormatError::MissingSystem);
        }
        let (number, rest) = line
            .split_once('.')
            .ok_or_else(|| syntax(no, "expected `n. formula | justification`"))?;
        let number = index(no, number.trim())?;
        if number != lines.len() + 1 {
            return Err(syntax(
                no,
                format!("expected line number {}, found {number}", lines.len() + 1),
            ));
        }
        let (formula, just) = rest
            .rsplit_once('|')
            .ok_or_else(|| syntax(no, "missing `| justification`"))?;
        let formula = parse_infer(formula.trim())
            .map_err(|source| DerivationFormatError::Formula { line: no, source })?;
        lines.push(ProofLine {
            formula,
            justification: justification(no, just)?,
        });
    }
    let system = system.ok_or(DerivationFormatError::MissingSystem)?;
    Ok(Derivation { system, lines })
}

/// Canonical text of a derivation.
pub fn encode_derivation(d: &Derivation) -> String {
    let mut out = format!("system: {}\n", d.system);
    for (i, l) in d.lines.iter().enumerate() {
        out.push_str(&format!(
            "{}. {} | {}\n",
            i + 1,
            print_sugared(&l.formula),
            l.justification
        ));
    }
    out
}
