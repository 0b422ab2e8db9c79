//! Seeded random formulas.

use alloc::vec::Vec;
use rand::Rng;

use super::{Agent, AgentSet, Atom, Formula};

/// Which constructors the generator may use.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    /// Atoms to draw from; must be non-empty.
    pub atoms: Vec<Atom>,
    /// Agents to draw from; modal operators are skipped when empty.
    pub agents: Vec<Agent>,
    /// Maximum modal/Boolean nesting.
    pub max_depth: usize,
    /// Allow `E_A`.
    pub everyone: bool,
    /// Allow `C_A`.
    pub common: bool,
    /// Allow `D_A`.
    pub distributed: bool,
}

impl FormulaGen {
    /// `K`-only generator.
    pub fn new<'a>(
        atoms: impl IntoIterator<Item = &'a str>,
        agents: impl IntoIterator<Item = &'a str>,
        max_depth: usize,
    ) -> Self {
        FormulaGen {
            atoms: atoms.into_iter().map(Atom::new).collect(),
            agents: agents.into_iter().map(Agent::new).collect(),
            max_depth,
            everyone: false,
            common: false,
            distributed: false,
        }
    }

    /// Enables `E` and `C`.
    pub fn with_group_knowledge(mut self) -> Self {
        self.everyone = true;
        self.common = true;
        self
    }

    /// Enables `D`.
    pub fn with_distributed(mut self) -> Self {
        self.distributed = true;
        self
    }

    /// Draws a formula.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        self.sample_at(rng, self.max_depth)
    }

    fn group<R: Rng + ?Sized>(&self, rng: &mut R) -> AgentSet {
        loop {
            let members = self.agents.iter().filter(|_| rng.gen_bool(0.6)).cloned();
            if let Some(g) = AgentSet::new(members) {
                return g;
            }
        }
    }

    fn sample_at<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize) -> Formula {
        let atom =
            |rng: &mut R| Formula::Atom(self.atoms[rng.gen_range(0..self.atoms.len())].clone());
        if depth == 0 || rng.gen_bool(0.2) {
            return atom(rng);
        }
        let modal = !self.agents.is_empty();
        loop {
            match rng.gen_range(0..6) {
                0 => return self.sample_at(rng, depth - 1).not(),
                1 => {
                    let l = self.sample_at(rng, depth - 1);
                    return l.and(self.sample_at(rng, depth - 1));
                }
                2 if modal => {
                    let a = self.agents[rng.gen_range(0..self.agents.len())].clone();
                    return Formula::know(a, self.sample_at(rng, depth - 1));
                }
                3 if modal && self.everyone => {
                    let g = self.group(rng);
                    return Formula::everyone(g, self.sample_at(rng, depth - 1));
                }
                4 if modal && self.common => {
                    let g = self.group(rng);
                    return Formula::common(g, self.sample_at(rng, depth - 1));
                }
                5 if modal && self.distributed => {
                    let g = self.group(rng);
                    return Formula::distributed(g, self.sample_at(rng, depth - 1));
                }
                _ if !modal => return atom(rng),
                _ => {}
            }
        }
    }
}
