use alloc::string::String;
use alloc::vec::Vec;

use super::{AxiomKind, AxiomSystem, Derivation, Justification, ProofLine};
use crate::models::ModelClass;
use crate::syntax::{Agent, AgentSet, Formula};

/// A named derivation from the built-in library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusDerivation {
    /// Stable name.
    pub name: String,
    /// The derivation, which checks in its own system.
    pub derivation: Derivation,
}

struct Builder {
    lines: Vec<ProofLine>,
}

impl Builder {
    fn new() -> Self {
        Builder { lines: Vec::new() }
    }

    fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.lines.push(ProofLine {
            formula,
            justification,
        });
        self.lines.len()
    }

    fn axiom(&mut self, formula: Formula, kind: AxiomKind) -> usize {
        self.push(formula, Justification::Axiom(kind))
    }

    fn mp(&mut self, antecedent: usize, implication: usize) -> usize {
        let (_, q) =
            super::as_implication(&self.lines[implication - 1].formula).expect("implication line");
        let q = q.clone();
        self.push(
            q,
            Justification::MP {
                antecedent,
                implication,
            },
        )
    }

    fn nec(&mut self, agent: &Agent, premise: usize) -> usize {
        let f = Formula::know(agent.clone(), self.lines[premise - 1].formula.clone());
        self.push(
            f,
            Justification::Nec {
                agent: agent.clone(),
                premise,
            },
        )
    }

    /// `K_a(φ → ψ)` at `line` turned into `K_aφ → K_aψ` via `K`.
    fn distribute(&mut self, line: usize) -> usize {
        let Formula::Know(a, imp) = &self.lines[line - 1].formula else {
            panic!("not a knowledge line");
        };
        let (p, q) = super::as_implication(imp).expect("implication under K");
        let k = AxiomKind::K.instance(p, q, a, &AgentSet::singleton(a.clone()));
        let k = self.axiom(k, AxiomKind::K);
        self.mp(line, k)
    }

    fn finish(self, name: &str, system: AxiomSystem) -> CorpusDerivation {
        CorpusDerivation {
            name: name.into(),
            derivation: Derivation {
                system,
                lines: self.lines,
            },
        }
    }
}

/// `K_a(φ∧ψ) → K_a(side)`; four lines.
fn kcd_half(b: &mut Builder, a: &Agent, phi: &Formula, psi: &Formula, side: &Formula) -> usize {
    let t = b.axiom(
        phi.clone().and(psi.clone()).implies(side.clone()),
        AxiomKind::Taut,
    );
    let n = b.nec(a, t);
    b.distribute(n)
}

fn k_distribution(a: &Agent, phi: &Formula, psi: &Formula) -> Builder {
    let mut b = Builder::new();
    let l4 = kcd_half(&mut b, a, phi, psi, phi);
    let l8 = kcd_half(&mut b, a, phi, psi, psi);
    let k = |f: &Formula| Formula::know(a.clone(), f.clone());
    let both = k(&phi.clone().and(psi.clone()));
    let (x, y, z) = (both.clone(), k(phi), k(psi));
    let cc = x
        .clone()
        .implies(y.clone())
        .implies(x.clone().implies(z.clone()).implies(x.implies(y.and(z))));
    let l9 = b.axiom(cc, AxiomKind::Taut);
    let l10 = b.mp(l4, l9);
    b.mp(l8, l10);
    b
}

fn dprime_from_d(a: &Agent, phi: &Formula) -> Builder {
    let mut b = Builder::new();
    let k = |f: Formula| Formula::know(a.clone(), f);
    let top = Formula::verum(crate::syntax::Atom::new("p"));
    let bot = top.clone().not();
    let not_phi = phi.clone().not();
    let l1 = b.axiom(
        phi.clone().implies(not_phi.clone().implies(bot.clone())),
        AxiomKind::Taut,
    );
    let l2 = b.nec(a, l1);
    let l4 = b.distribute(l2);
    let step = k(not_phi.clone().implies(bot.clone()));
    let l5 = b.axiom(
        AxiomKind::K.instance(&not_phi, &bot, a, &AgentSet::singleton(a.clone())),
        AxiomKind::K,
    );
    let kp = k(phi.clone());
    let tail = k(not_phi.clone()).implies(k(bot.clone()));
    let syllogism = kp.clone().implies(step.clone()).implies(
        step.implies(tail.clone())
            .implies(kp.clone().implies(tail.clone())),
    );
    let l6 = b.axiom(syllogism, AxiomKind::Taut);
    let l7 = b.mp(l4, l6);
    let l8 = b.mp(l5, l7);
    let l9 = b.axiom(k(bot.clone()).not(), AxiomKind::D);
    let goal = kp.clone().implies(k(not_phi).not());
    let closing = k(bot).not().implies(kp.implies(tail).implies(goal));
    let l10 = b.axiom(closing, AxiomKind::Taut);
    let l11 = b.mp(l9, l10);
    b.mp(l8, l11);
    b
}

fn common_weakening(g: &AgentSet, phi: &Formula, psi: &Formula) -> Builder {
    let mut b = Builder::new();
    let c = Formula::common(g.clone(), phi.clone().and(psi.clone()));
    let from = phi.clone().and(psi.clone()).and(c.clone());
    let to = phi.clone().and(c.clone());
    let l1 = b.axiom(
        AxiomKind::Fix.instance(
            &phi.clone().and(psi.clone()),
            psi,
            &g.iter().next().unwrap().clone(),
            g,
        ),
        AxiomKind::Fix,
    );
    let t = b.axiom(from.clone().implies(to.clone()), AxiomKind::Taut);
    let mut steps = Vec::new();
    for a in g.iter() {
        let n = b.nec(a, t);
        steps.push((a.clone(), b.distribute(n)));
    }
    let k = |a: &Agent, f: &Formula| Formula::know(a.clone(), f.clone());
    let conj = |f: &Formula| Formula::conjoin(g.iter().map(|a| k(a, f))).unwrap();
    let mut glue = c
        .clone()
        .implies(conj(&from))
        .implies(c.clone().implies(conj(&to)));
    for (a, _) in steps.iter().rev() {
        glue = k(a, &from).implies(k(a, &to)).implies(glue);
    }
    let mut cur = b.axiom(glue, AxiomKind::Taut);
    for (_, line) in &steps {
        cur = b.mp(*line, cur);
    }
    let everyone = b.mp(l1, cur);
    let goal = c.implies(Formula::common(g.clone(), phi.clone()));
    b.push(
        goal,
        Justification::Ind {
            group: g.clone(),
            premise: everyone,
        },
    );
    b
}

fn distributed_weakening(a: &Agent, g: &AgentSet, phi: &Formula, psi: &Formula) -> Builder {
    let mut b = Builder::new();
    let t = b.axiom(
        phi.clone().and(psi.clone()).implies(phi.clone()),
        AxiomKind::Taut,
    );
    let n = b.nec(a, t);
    let inner = b.lines[t - 1].formula.clone();
    let w = b.axiom(AxiomKind::W.instance(&inner, psi, a, g), AxiomKind::W);
    let d = b.mp(n, w);
    let kd = b.axiom(
        AxiomKind::KDist.instance(&phi.clone().and(psi.clone()), phi, a, g),
        AxiomKind::KDist,
    );
    b.mp(d, kd);
    b
}

/// Checked derivations of standard theorems, each tagged with its system.
pub fn derivable_theorem_corpus() -> Vec<CorpusDerivation> {
    let a = Agent::new("a");
    let ab = AgentSet::new([Agent::new("a"), Agent::new("b")]).expect("two agents");
    let (p, q) = (Formula::atom("p"), Formula::atom("q"));
    let k = AxiomSystem::new(ModelClass::K);

    let mut left = Builder::new();
    kcd_half(&mut left, &a, &p, &q, &p);
    let mut right = Builder::new();
    kcd_half(&mut right, &a, &p, &q, &q);
    let mut identity = Builder::new();
    identity.axiom(p.clone().implies(p.clone()), AxiomKind::Taut);

    alloc::vec![
        k_distribution(&a, &p, &q).finish("k-distribution", k),
        left.finish("kcd-left", k),
        right.finish("kcd-right", k),
        identity.finish("identity", k),
        dprime_from_d(&a, &p).finish("dprime-from-d", AxiomSystem::new(ModelClass::KD)),
        common_weakening(&ab, &p, &q).finish("kc-weakening", k.with_common()),
        distributed_weakening(&a, &ab, &p, &q).finish("kd-weakening", k.with_distributed()),
    ]
}
