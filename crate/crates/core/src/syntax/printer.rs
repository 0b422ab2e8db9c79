//! Canonical surface syntax.

use alloc::format;
use alloc::string::String;

use super::Formula;

/// Prints with core connectives only: `~`, `&`, `K{a}`, `E{A}`, `C{A}`, `D{A}`.
///
/// Every conjunction is parenthesized, so the output re-parses to the same tree.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write(f, false, &mut out);
    out
}

/// Prints recovering `->`, `|`, `<->` and `M{a}` where the tree has their shape.
pub fn print_sugared(f: &Formula) -> String {
    let mut out = String::new();
    write(f, true, &mut out);
    out
}

fn write(f: &Formula, sugar: bool, out: &mut String) {
    if sugar {
        if let Some((l, r)) = as_iff(f) {
            return binary(l, "<->", r, out);
        }
        if let Formula::Not(inner) = f {
            match &**inner {
                Formula::And(l, r) => {
                    if let (Formula::Not(x), Formula::Not(y)) = (&**l, &**r) {
                        return binary(x, "|", y, out);
                    }
                    if let Formula::Not(y) = &**r {
                        return binary(l, "->", y, out);
                    }
                }
                Formula::Know(a, body) => {
                    if let Formula::Not(x) = &**body {
                        out.push_str(&format!("M{{{a}}}"));
                        return write(x, sugar, out);
                    }
                }
                _ => {}
            }
        }
    }
    match f {
        Formula::Atom(a) => out.push_str(a.name()),
        Formula::Not(g) => {
            out.push('~');
            write(g, sugar, out);
        }
        Formula::And(l, r) => {
            out.push('(');
            write(l, sugar, out);
            out.push_str(" & ");
            write(r, sugar, out);
            out.push(')');
        }
        Formula::Know(a, g) => {
            out.push_str(&format!("K{{{a}}}"));
            write(g, sugar, out);
        }
        Formula::Everyone(a, g) => {
            out.push_str(&format!("E{{{a}}}"));
            write(g, sugar, out);
        }
        Formula::Common(a, g) => {
            out.push_str(&format!("C{{{a}}}"));
            write(g, sugar, out);
        }
        Formula::Distributed(a, g) => {
            out.push_str(&format!("D{{{a}}}"));
            write(g, sugar, out);
        }
    }

    fn binary(l: &Formula, op: &str, r: &Formula, out: &mut String) {
        out.push('(');
        write(l, true, out);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        write(r, true, out);
        out.push(')');
    }
}

/// Matches `¬(x ∧ ¬y) ∧ ¬(y ∧ ¬x)`.
fn as_iff(f: &Formula) -> Option<(&Formula, &Formula)> {
    let Formula::And(l, r) = f else { return None };
    let (Formula::Not(l), Formula::Not(r)) = (&**l, &**r) else {
        return None;
    };
    let (Formula::And(x1, ny1), Formula::And(y2, nx2)) = (&**l, &**r) else {
        return None;
    };
    let (Formula::Not(y1), Formula::Not(x2)) = (&**ny1, &**nx2) else {
        return None;
    };
    (x1 == x2 && y1 == y2).then_some((&**x1, &**y1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_infer, AgentSet};

    #[test]
    fn core_printing() {
        assert_eq!(
            print(&Formula::possible("a", Formula::atom("p"))),
            "~K{a}~p"
        );
        assert_eq!(
            print(&Formula::atom("p").and(Formula::atom("q"))),
            "(p & q)"
        );
        let g = AgentSet::new(["b", "a"]).unwrap();
        assert_eq!(
            print(&Formula::common(g, Formula::atom("p").not())),
            "C{a,b}~p"
        );
    }

    #[test]
    fn sugared_printing() {
        let f = parse_infer("M{a}p").unwrap();
        assert_eq!(print_sugared(&f), "M{a}p");
        let f = parse_infer("K{a}(p -> q) | (p <-> q)").unwrap();
        assert_eq!(print_sugared(&f), "(K{a}(p -> q) | (p <-> q))");
    }
}
