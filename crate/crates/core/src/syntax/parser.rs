//! Recursive-descent parser for the ASCII formula grammar.
//!
//! Precedence from tightest: unary (`~ K M E C D`), `&`, `|`, `->` (right
//! associative), `<->` (left associative).

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{Agent, AgentSet, Atom, Formula, Vocabulary, RESERVED_ATOM};

/// What went wrong while parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// A character outside the grammar.
    UnexpectedChar(char),
    /// A token that does not fit here.
    UnexpectedToken(String),
    /// Input ended early.
    UnexpectedEnd,
    /// Input continues after a complete formula.
    TrailingInput,
    /// Atom not in the vocabulary.
    UnknownAtom(String),
    /// Agent not in the vocabulary.
    UnknownAgent(String),
    /// `K`/`M` without braces needs exactly one agent in the vocabulary.
    AmbiguousAgent,
    /// `E{}` and friends.
    EmptyGroup,
    /// Malformed `^n` suffix.
    BadExponent,
}

/// A parse failure at a byte offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    /// The failure.
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: ", self.position)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected {t}"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::TrailingInput => f.write_str("trailing input"),
            ParseErrorKind::UnknownAtom(a) => write!(f, "unknown atom {a:?}"),
            ParseErrorKind::UnknownAgent(a) => write!(f, "unknown agent {a:?}"),
            ParseErrorKind::AmbiguousAgent => {
                f.write_str("modality without agent needs a single-agent vocabulary")
            }
            ParseErrorKind::EmptyGroup => f.write_str("empty agent group"),
            ParseErrorKind::BadExponent => f.write_str("malformed exponent"),
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Group(Vec<String>),
    Caret(usize),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier {s:?}"),
            Tok::Op(c) => write!(f, "operator {c}"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Not => f.write_str("'~'"),
            Tok::And => f.write_str("'&'"),
            Tok::Or => f.write_str("'|'"),
            Tok::Implies => f.write_str("'->'"),
            Tok::Iff => f.write_str("'<->'"),
            Tok::Group(_) => f.write_str("agent group"),
            Tok::Caret(_) => f.write_str("exponent"),
        }
    }
}

fn err(position: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { position, kind }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'(' => {
                out.push((start, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((start, Tok::RParen));
                i += 1;
            }
            b'~' => {
                out.push((start, Tok::Not));
                i += 1;
            }
            b'&' => {
                out.push((start, Tok::And));
                i += 1;
            }
            b'|' => {
                out.push((start, Tok::Or));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((start, Tok::Implies));
                i += 2;
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                out.push((start, Tok::Iff));
                i += 3;
            }
            b'K' | b'M' | b'E' | b'C' | b'D' => {
                out.push((start, Tok::Op(c as char)));
                i += 1;
            }
            b'{' => {
                let close = text[i..]
                    .find('}')
                    .map(|k| i + k)
                    .ok_or_else(|| err(start, ParseErrorKind::UnexpectedEnd))?;
                let mut names = Vec::new();
                let mut offset = i + 1;
                for part in text[i + 1..close].split(',') {
                    let name = part.trim();
                    let lead = part.len() - part.trim_start().len();
                    if name.is_empty() {
                        if text[i + 1..close].trim().is_empty() {
                            return Err(err(start, ParseErrorKind::EmptyGroup));
                        }
                        return Err(err(offset, ParseErrorKind::UnexpectedToken("','".into())));
                    }
                    if let Some(bad) = name
                        .chars()
                        .find(|ch| !(ch.is_ascii_alphanumeric() || *ch == '_'))
                    {
                        return Err(err(offset + lead, ParseErrorKind::UnexpectedChar(bad)));
                    }
                    names.push(name.to_string());
                    offset += part.len() + 1;
                }
                out.push((start, Tok::Group(names)));
                i = close + 1;
            }
            b'^' => {
                i += 1;
                while i < bytes.len() && bytes[i] == b' ' {
                    i += 1;
                }
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = text[digits_start..i]
                    .parse::<usize>()
                    .map_err(|_| err(start, ParseErrorKind::BadExponent))?;
                out.push((start, Tok::Caret(n)));
            }
            b'a'..=b'z' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase()
                        || bytes[i].is_ascii_digit()
                        || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(err(start, ParseErrorKind::UnexpectedChar(ch)));
            }
        }
    }
    Ok(out)
}

struct Parser<'v> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vocab: &'v Vocabulary,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            let rhs = self.implication()?;
            lhs = lhs.iff(rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let rhs = self.conjunction()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn agent(&self, name: &str, at: usize) -> Result<Agent, ParseError> {
        let a = Agent::new(name);
        if self.vocab.agents.contains(&a) {
            Ok(a)
        } else {
            Err(err(at, ParseErrorKind::UnknownAgent(name.to_string())))
        }
    }

    fn group(&mut self, op_at: usize) -> Result<AgentSet, ParseError> {
        match self.next() {
            Some((at, Tok::Group(names))) => {
                let mut members = BTreeSet::new();
                for n in &names {
                    members.insert(self.agent(n, at)?);
                }
                AgentSet::new(members).ok_or_else(|| err(at, ParseErrorKind::EmptyGroup))
            }
            Some((at, t)) => Err(err(at, ParseErrorKind::UnexpectedToken(t.to_string()))),
            None => Err(err(op_at, ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn single_agent(&mut self, op_at: usize) -> Result<Agent, ParseError> {
        if let Some(Tok::Group(_)) = self.peek() {
            let g = self.group(op_at)?;
            if g.len() != 1 {
                return Err(err(
                    op_at + 1,
                    ParseErrorKind::UnexpectedToken("agent group".into()),
                ));
            }
            return Ok(g.iter().next().cloned().expect("non-empty"));
        }
        if self.vocab.agents.len() == 1 {
            return Ok(self.vocab.agents.iter().next().cloned().expect("one agent"));
        }
        Err(err(op_at, ParseErrorKind::AmbiguousAgent))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let Some((at, tok)) = self.next() else {
            return Err(err(self.end, ParseErrorKind::UnexpectedEnd));
        };
        match tok {
            Tok::Not => Ok(self.unary()?.not()),
            Tok::LParen => {
                let f = self.iff()?;
                match self.next() {
                    Some((_, Tok::RParen)) => Ok(f),
                    Some((o, t)) => Err(err(o, ParseErrorKind::UnexpectedToken(t.to_string()))),
                    None => Err(err(self.end, ParseErrorKind::UnexpectedEnd)),
                }
            }
            Tok::Ident(name) => match name.as_str() {
                "true" => Ok(Formula::verum(self.vocab.falsum_atom())),
                "false" => Ok(Formula::falsum(self.vocab.falsum_atom())),
                _ => {
                    let a = Atom::new(name.as_str());
                    if self.vocab.atoms.contains(&a) || name == RESERVED_ATOM {
                        Ok(Formula::Atom(a))
                    } else {
                        Err(err(at, ParseErrorKind::UnknownAtom(name)))
                    }
                }
            },
            Tok::Op('K') => {
                let a = self.single_agent(at)?;
                Ok(Formula::know(a, self.unary()?))
            }
            Tok::Op('M') => {
                let a = self.single_agent(at)?;
                Ok(Formula::possible(a, self.unary()?))
            }
            Tok::Op(op) => {
                let g = self.group(at)?;
                let mut n = 1;
                if let Some(Tok::Caret(k)) = self.peek() {
                    if op != 'E' {
                        return Err(err(self.offset(), ParseErrorKind::BadExponent));
                    }
                    n = *k;
                    self.pos += 1;
                }
                let body = self.unary()?;
                Ok(match op {
                    'E' => Formula::everyone_iter(&g, n, body),
                    'C' => Formula::common(g, body),
                    _ => Formula::distributed(g, body),
                })
            }
            t => Err(err(at, ParseErrorKind::UnexpectedToken(t.to_string()))),
        }
    }
}

/// Parses `text` against a vocabulary, expanding all abbreviations.
pub fn parse(text: &str, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        vocab,
    };
    let f = p.iff()?;
    if p.pos < p.toks.len() {
        return Err(err(p.offset(), ParseErrorKind::TrailingInput));
    }
    Ok(f)
}

/// Parses `text` with the vocabulary made of the names it mentions.
///
/// A bare `K`/`M` with no braced agent anywhere in the text refers to agent `a`.
pub fn parse_infer(text: &str) -> Result<Formula, ParseError> {
    parse(text, &infer_vocabulary(text)?)
}

/// The atoms and agents mentioned in `text`.
pub fn infer_vocabulary(text: &str) -> Result<Vocabulary, ParseError> {
    let toks = lex(text)?;
    let mut vocab = Vocabulary::default();
    for (_, t) in &toks {
        match t {
            Tok::Ident(n) if n != "true" && n != "false" => {
                vocab.atoms.insert(Atom::new(n.as_str()));
            }
            Tok::Group(names) => vocab
                .agents
                .extend(names.iter().map(|n| Agent::new(n.as_str()))),
            _ => {}
        }
    }
    if vocab.agents.is_empty() {
        vocab.agents.insert(Agent::new("a"));
    }
    Ok(vocab)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v() -> Vocabulary {
        Vocabulary::new(["p", "q", "r"], ["a", "b"])
    }

    fn p(s: &str) -> Formula {
        Formula::atom(s)
    }

    #[test]
    fn implication_expands() {
        let f = parse("K{a}(p -> q)", &v()).unwrap();
        assert_eq!(f, Formula::know("a", p("p").and(p("q").not()).not()));
    }

    #[test]
    fn dual_expands() {
        let f = parse("M{a}p", &v()).unwrap();
        assert_eq!(f, Formula::know("a", p("p").not()).not());
    }

    #[test]
    fn bare_k_with_single_agent() {
        let one = Vocabulary::new(["p"], ["a"]);
        let f = parse("Kp | ~Kp", &one).unwrap();
        let kp = Formula::know("a", p("p"));
        assert_eq!(f, kp.clone().or(kp.not()));
        assert_eq!(
            parse("Kp", &v()).unwrap_err().kind,
            ParseErrorKind::AmbiguousAgent
        );
    }

    #[test]
    fn precedence() {
        let vv = v();
        assert_eq!(
            parse("p & q | r", &vv).unwrap(),
            p("p").and(p("q")).or(p("r"))
        );
        assert_eq!(
            parse("p -> q -> r", &vv).unwrap(),
            p("p").implies(p("q").implies(p("r")))
        );
        assert_eq!(
            parse("p <-> q -> r", &vv).unwrap(),
            p("p").iff(p("q").implies(p("r")))
        );
        assert_eq!(
            parse("~K{a}p & q", &vv).unwrap(),
            Formula::know("a", p("p")).not().and(p("q"))
        );
    }

    #[test]
    fn iterated_everyone() {
        let g = AgentSet::new(["a", "b"]).unwrap();
        assert_eq!(
            parse("E{a,b}^3 p", &v()).unwrap(),
            Formula::everyone_iter(&g, 3, p("p"))
        );
        assert_eq!(parse("E{b, a}^0 p", &v()).unwrap(), p("p"));
        assert_eq!(
            parse("C{a}^2 p", &v()).unwrap_err().kind,
            ParseErrorKind::BadExponent
        );
    }

    #[test]
    fn constants_use_first_atom() {
        assert_eq!(
            parse("false", &v()).unwrap(),
            Formula::falsum(Atom::new("p"))
        );
        let empty = Vocabulary::new([], ["a"]);
        assert_eq!(
            parse("true", &empty).unwrap(),
            Formula::verum(Atom::new(RESERVED_ATOM))
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("p & x", &v()).unwrap_err();
        assert_eq!(e, err(4, ParseErrorKind::UnknownAtom("x".into())));
        let e = parse("K{c}p", &v()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownAgent("c".into()));
        let e = parse("(p & q", &v()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
        let e = parse("p q", &v()).unwrap_err();
        assert_eq!(e, err(2, ParseErrorKind::TrailingInput));
        let e = parse("p # q", &v()).unwrap_err();
        assert_eq!(e, err(2, ParseErrorKind::UnexpectedChar('#')));
        assert_eq!(
            parse("E{}p", &v()).unwrap_err().kind,
            ParseErrorKind::EmptyGroup
        );
    }
}
