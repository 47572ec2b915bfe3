//! Explicit finite structures: situations, aspect relations, action maps,
//! fluent valuations and stored witness predicates.

use std::collections::BTreeMap;

use aspect_core::{AspectElem, AspectPath, DisjointnessSpec, SpecError};
use thiserror::Error;

use crate::formalism::Formalism;

/// A set of situations, one bit per situation.
pub type Mask = u64;

pub const MAX_SITUATIONS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model has {0} situations; at most {MAX_SITUATIONS} are supported")]
    TooLarge(usize),
    #[error("action `{action}` has no successor for situation `{situation}`")]
    Totality { action: String, situation: String },
    #[error("relation `{rel}` is not a function at situation `{situation}`")]
    NotFunctional { rel: String, situation: String },
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("{formalism} needs {what}")]
    Shape { formalism: Formalism, what: String },
    #[error("aspect `{0}` must be a sequence of single atoms here")]
    NotAtomic(String),
    #[error("no witness for `{fluent}` under {formalism} and the search space is too large")]
    MissingWitness { fluent: String, formalism: Formalism },
    #[error(transparent)]
    Spec(#[from] SpecError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionDef {
    pub name: String,
    pub map: Vec<usize>,
    pub aspect: AspectPath,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FluentDef {
    pub name: String,
    pub val: Mask,
    pub aspect: AspectPath,
}

/// The `q` of an existential factoring axiom; collective formalisms keep one
/// predicate per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Plain(Mask),
    PerElement(BTreeMap<String, Mask>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    pub name: String,
    pub situations: Vec<String>,
    /// Relation atoms; collective elements share this table.
    pub atoms: Vec<String>,
    /// `rels[i][s]` is the set of `t` with `R_{atoms[i]}(s,t)`.
    pub rels: Vec<Vec<Mask>>,
    pub functional: Vec<bool>,
    pub actions: Vec<ActionDef>,
    pub fluents: Vec<FluentDef>,
    pub witnesses: BTreeMap<(String, Formalism), Witness>,
    pub disjointness: DisjointnessSpec,
}

pub fn bit(s: usize) -> Mask {
    1 << s
}

pub fn full(n: usize) -> Mask {
    if n == 64 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

pub fn members(m: Mask) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| m & (1 << i) != 0)
}

impl FiniteModel {
    pub fn new(name: impl Into<String>, situations: Vec<String>) -> Result<Self, ModelError> {
        if situations.len() > MAX_SITUATIONS {
            return Err(ModelError::TooLarge(situations.len()));
        }
        Ok(FiniteModel {
            name: name.into(),
            situations,
            atoms: Vec::new(),
            rels: Vec::new(),
            functional: Vec::new(),
            actions: Vec::new(),
            fluents: Vec::new(),
            witnesses: BTreeMap::new(),
            disjointness: DisjointnessSpec::SeqExistsDiff,
        })
    }

    /// Situations named `s0`, `s1`, ...
    pub fn numbered(name: impl Into<String>, n: usize) -> Result<Self, ModelError> {
        Self::new(name, (0..n).map(|i| format!("s{i}")).collect())
    }

    pub fn n(&self) -> usize {
        self.situations.len()
    }

    pub fn situation(&self, name: &str) -> Result<usize, ModelError> {
        self.situations
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| ModelError::Unknown { kind: "situation", name: name.into() })
    }

    pub fn atom(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    /// Index of `name`, adding an empty relation if it is new.
    pub fn ensure_atom(&mut self, name: &str) -> usize {
        if let Some(i) = self.atom(name) {
            return i;
        }
        self.atoms.push(name.to_string());
        self.rels.push(vec![0; self.n()]);
        self.functional.push(false);
        self.atoms.len() - 1
    }

    pub fn set_relation(&mut self, atom: &str, rows: Vec<Mask>) -> usize {
        let i = self.ensure_atom(atom);
        self.rels[i] = rows;
        i
    }

    pub fn add_action(&mut self, name: &str, map: Vec<usize>, aspect: AspectPath) {
        for a in path_atoms(&aspect) {
            self.ensure_atom(&a);
        }
        self.actions.push(ActionDef { name: name.into(), map, aspect });
    }

    pub fn add_fluent(&mut self, name: &str, val: Mask, aspect: AspectPath) {
        for a in path_atoms(&aspect) {
            self.ensure_atom(&a);
        }
        self.fluents.push(FluentDef { name: name.into(), val, aspect });
    }

    pub fn fluent(&self, name: &str) -> Option<&FluentDef> {
        self.fluents.iter().find(|f| f.name == name)
    }

    pub fn action(&self, name: &str) -> Option<&ActionDef> {
        self.actions.iter().find(|a| a.name == name)
    }

    /// Checks totality of action maps and the shape of relations flagged
    /// functional.
    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.n();
        if n > MAX_SITUATIONS {
            return Err(ModelError::TooLarge(n));
        }
        for a in &self.actions {
            if a.map.len() != n || a.map.iter().any(|&t| t >= n) {
                let s = (0..n).find(|&s| a.map.get(s).is_none_or(|&t| t >= n)).unwrap_or(0);
                return Err(ModelError::Totality { action: a.name.clone(), situation: self.situations[s].clone() });
            }
        }
        for (i, f) in self.functional.iter().enumerate() {
            if *f {
                self.check_function(i)?;
            }
        }
        Ok(())
    }

    pub fn check_function(&self, atom: usize) -> Result<(), ModelError> {
        match self.rels[atom].iter().position(|m| m.count_ones() != 1) {
            Some(s) => Err(ModelError::NotFunctional {
                rel: self.atoms[atom].clone(),
                situation: self.situations[s].clone(),
            }),
            None => Ok(()),
        }
    }

    pub fn names(&self, m: Mask) -> Vec<String> {
        members(m).filter(|&i| i < self.n()).map(|i| self.situations[i].clone()).collect()
    }
}

/// Every atom named in a path, set members included.
pub fn path_atoms(p: &AspectPath) -> Vec<String> {
    p.elems().iter().flat_map(AspectElem::members).map(|a| a.name().to_string()).collect()
}
