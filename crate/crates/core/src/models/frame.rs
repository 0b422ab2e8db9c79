//! Frame properties, model classes and class closures.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::{KripkeModel, Relation};
use crate::syntax::Agent;

/// A first-order condition on one accessibility relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FrameProperty {
    /// Every state has a successor.
    Serial,
    /// Every state sees itself.
    Reflexive,
    /// `sRt ∧ tRu ⇒ sRu`.
    Transitive,
    /// `sRt ∧ sRu ⇒ tRu`.
    Euclidean,
    /// `sRt ⇒ tRs`.
    Symmetric,
    /// Reflexive, symmetric and transitive.
    Equivalence,
}

impl FrameProperty {
    /// All six properties.
    pub const ALL: [FrameProperty; 6] = [
        FrameProperty::Serial,
        FrameProperty::Reflexive,
        FrameProperty::Transitive,
        FrameProperty::Euclidean,
        FrameProperty::Symmetric,
        FrameProperty::Equivalence,
    ];

    /// Lower-case name.
    pub fn name(self) -> &'static str {
        match self {
            FrameProperty::Serial => "serial",
            FrameProperty::Reflexive => "reflexive",
            FrameProperty::Transitive => "transitive",
            FrameProperty::Euclidean => "euclidean",
            FrameProperty::Symmetric => "symmetric",
            FrameProperty::Equivalence => "equivalence",
        }
    }

    /// Checks the property by direct quantification.
    pub fn holds(self, r: &Relation) -> bool {
        let n = r.state_count();
        let states = 0..n;
        match self {
            FrameProperty::Serial => states.clone().all(|s| !r.successors(s).is_empty()),
            FrameProperty::Reflexive => states.clone().all(|s| r.contains(s, s)),
            FrameProperty::Transitive => r
                .pairs()
                .all(|(s, t)| r.successors(t).iter().all(|&u| r.contains(s, u))),
            FrameProperty::Euclidean => r
                .pairs()
                .all(|(s, t)| r.successors(s).iter().all(|&u| r.contains(t, u))),
            FrameProperty::Symmetric => r.pairs().all(|(s, t)| r.contains(t, s)),
            FrameProperty::Equivalence => {
                FrameProperty::Reflexive.holds(r)
                    && FrameProperty::Symmetric.holds(r)
                    && FrameProperty::Transitive.holds(r)
            }
        }
    }
}

impl fmt::Display for FrameProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The model classes named after their axiom systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelClass {
    /// No conditions.
    K,
    /// Serial.
    KD,
    /// Reflexive.
    T,
    /// Symmetric.
    KB,
    /// Transitive.
    K4,
    /// Euclidean.
    K5,
    /// Reflexive and transitive.
    S4,
    /// Transitive and euclidean.
    K45,
    /// Serial, transitive and euclidean.
    KD45,
    /// Reflexive, symmetric and transitive.
    S5,
}

impl ModelClass {
    /// All classes.
    pub const ALL: [ModelClass; 10] = [
        ModelClass::K,
        ModelClass::KD,
        ModelClass::T,
        ModelClass::KB,
        ModelClass::K4,
        ModelClass::K5,
        ModelClass::S4,
        ModelClass::K45,
        ModelClass::KD45,
        ModelClass::S5,
    ];

    /// Canonical name.
    pub fn name(self) -> &'static str {
        match self {
            ModelClass::K => "K",
            ModelClass::KD => "KD",
            ModelClass::T => "T",
            ModelClass::KB => "KB",
            ModelClass::K4 => "K4",
            ModelClass::K5 => "K5",
            ModelClass::S4 => "S4",
            ModelClass::K45 => "K45",
            ModelClass::KD45 => "KD45",
            ModelClass::S5 => "S5",
        }
    }

    /// The frame conditions of the class.
    pub fn conditions(self) -> &'static [FrameProperty] {
        use FrameProperty::*;
        match self {
            ModelClass::K => &[],
            ModelClass::KD => &[Serial],
            ModelClass::T => &[Reflexive],
            ModelClass::KB => &[Symmetric],
            ModelClass::K4 => &[Transitive],
            ModelClass::K5 => &[Euclidean],
            ModelClass::S4 => &[Reflexive, Transitive],
            ModelClass::K45 => &[Transitive, Euclidean],
            ModelClass::KD45 => &[Serial, Transitive, Euclidean],
            ModelClass::S5 => &[Reflexive, Symmetric, Transitive],
        }
    }

    /// Whether the class requires a given property.
    pub fn requires(self, p: FrameProperty) -> bool {
        self.conditions().contains(&p)
    }

    /// Reflexive classes.
    pub fn is_reflexive(self) -> bool {
        self.requires(FrameProperty::Reflexive)
    }

    /// Serial classes (including the reflexive ones).
    pub fn is_serial(self) -> bool {
        self.requires(FrameProperty::Serial) || self.is_reflexive()
    }

    /// Transitive classes.
    pub fn is_transitive(self) -> bool {
        self.requires(FrameProperty::Transitive)
    }

    /// Euclidean classes (S5 is euclidean as an equivalence).
    pub fn is_euclidean(self) -> bool {
        self.requires(FrameProperty::Euclidean) || self == ModelClass::S5
    }

    /// Symmetric classes.
    pub fn is_symmetric(self) -> bool {
        self.requires(FrameProperty::Symmetric)
    }
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Unknown class name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownClass;

impl fmt::Display for UnknownClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown model class")
    }
}

impl core::error::Error for UnknownClass {}

impl FromStr for ModelClass {
    type Err = UnknownClass;

    /// Accepts the canonical names and the spellings `KT`, `KT4`, `KT45`, `KT5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            "K" => ModelClass::K,
            "KD" => ModelClass::KD,
            "T" | "KT" => ModelClass::T,
            "KB" => ModelClass::KB,
            "K4" => ModelClass::K4,
            "K5" => ModelClass::K5,
            "S4" | "KT4" => ModelClass::S4,
            "K45" => ModelClass::K45,
            "KD45" => ModelClass::KD45,
            "S5" | "KT45" | "KT5" => ModelClass::S5,
            _ => return Err(UnknownClass),
        })
    }
}

/// For each agent, every property its relation satisfies.
pub fn frame_properties(m: &KripkeModel) -> BTreeMap<Agent, BTreeSet<FrameProperty>> {
    m.relations()
        .iter()
        .map(|(a, r)| {
            let props = FrameProperty::ALL
                .iter()
                .copied()
                .filter(|p| p.holds(r))
                .collect();
            (a.clone(), props)
        })
        .collect()
}

/// True when every relation satisfies every condition of `c`.
pub fn in_class(m: &KripkeModel, c: ModelClass) -> bool {
    m.relations()
        .values()
        .all(|r| c.conditions().iter().all(|p| p.holds(r)))
}

/// `ensure_class` failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassError {
    /// No least euclidean extension exists; the input must already be in class.
    UnsupportedTarget(ModelClass),
}

impl fmt::Display for ClassError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassError::UnsupportedTarget(c) => {
                write!(
                    f,
                    "cannot close a model into class {c}: euclidean closure is not supported"
                )
            }
        }
    }
}

impl core::error::Error for ClassError {}

/// Closes every relation under the conditions of `c`.
///
/// Closure runs reflexive, then symmetric, then transitive; states without a
/// successor then get a self-loop when `c` is serial. Euclidean targets are
/// only accepted when the model is already in the class.
pub fn ensure_class(m: &KripkeModel, c: ModelClass) -> Result<KripkeModel, ClassError> {
    if c.requires(FrameProperty::Euclidean) {
        return if in_class(m, c) {
            Ok(m.clone())
        } else {
            Err(ClassError::UnsupportedTarget(c))
        };
    }
    let n = m.state_count();
    let rels = m
        .relations()
        .iter()
        .map(|(a, r)| {
            let mut r = r.clone();
            if c.requires(FrameProperty::Reflexive) {
                r = r.with_pairs((0..n).map(|s| (s, s)));
            }
            if c.requires(FrameProperty::Symmetric) {
                let back: Vec<(usize, usize)> = r.pairs().map(|(s, t)| (t, s)).collect();
                r = r.with_pairs(back);
            }
            if c.requires(FrameProperty::Transitive) {
                r = r.transitive_closure();
            }
            if c.requires(FrameProperty::Serial) {
                let loops: Vec<(usize, usize)> = (0..n)
                    .filter(|&s| r.successors(s).is_empty())
                    .map(|s| (s, s))
                    .collect();
                r = r.with_pairs(loops);
            }
            (a.clone(), r)
        })
        .collect();
    Ok(m.with_relations(rels))
}
