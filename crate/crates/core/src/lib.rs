//! Multi-agent epistemic logic workbench.
//!
//! Formulas over knowledge (`K`), everyone-knows (`E`), common knowledge
//! (`C`) and distributed knowledge (`D`), evaluated on finite Kripke models.
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod bisim;
pub mod corpus;
pub mod decide;
pub mod models;
pub mod proofs;
pub mod semantics;
pub mod syntax;

pub use models::{KripkeModel, ModelClass, PointedModel, State};
pub use syntax::{Agent, AgentSet, Atom, Formula, Vocabulary};
