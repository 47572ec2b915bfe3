//! Kripke evaluation of modal formulas over a finite model.

use std::fmt;

use aspect_core::{AspectPath, AspectAtom};

use crate::model::{full, FiniteModel, Mask, ModelError};
use crate::semantics::{after, factor_exists, factor_forall};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModalFormula {
    Top,
    Bottom,
    /// A fluent of the model.
    Fluent(String),
    /// A fixed set of worlds; used to range over all valuations of `X`.
    Worlds(Mask),
    Not(Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    Implies(Box<ModalFormula>, Box<ModalFormula>),
    Iff(Box<ModalFormula>, Box<ModalFormula>),
    /// `[a]φ`
    After(String, Box<ModalFormula>),
    /// `[α₁…αₙ]φ`, read as `[α₁]…[αₙ]φ`.
    Necessarily(AspectPath, Box<ModalFormula>),
    /// `⟨α₁…αₙ⟩φ`, read as `⟨α₁⟩…⟨αₙ⟩φ`.
    Possibly(AspectPath, Box<ModalFormula>),
}

impl ModalFormula {
    pub fn fluent(name: &str) -> Self {
        ModalFormula::Fluent(name.to_string())
    }

    pub fn not(self) -> Self {
        ModalFormula::Not(Box::new(self))
    }

    pub fn and(self, other: Self) -> Self {
        ModalFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        ModalFormula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Self) -> Self {
        ModalFormula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Self) -> Self {
        ModalFormula::Iff(Box::new(self), Box::new(other))
    }

    pub fn after(action: &str, f: Self) -> Self {
        ModalFormula::After(action.to_string(), Box::new(f))
    }

    pub fn necessarily(path: AspectPath, f: Self) -> Self {
        ModalFormula::Necessarily(path, Box::new(f))
    }

    pub fn possibly(path: AspectPath, f: Self) -> Self {
        ModalFormula::Possibly(path, Box::new(f))
    }

    pub fn depth(&self) -> usize {
        use ModalFormula::*;
        match self {
            Top | Bottom | Fluent(_) | Worlds(_) => 0,
            Not(f) => f.depth(),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => a.depth().max(b.depth()),
            After(_, f) => 1 + f.depth(),
            Necessarily(p, f) | Possibly(p, f) => p.len() + f.depth(),
        }
    }
}

impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ModalFormula::*;
        match self {
            Top => f.write_str("true"),
            Bottom => f.write_str("false"),
            Fluent(p) => f.write_str(p),
            Worlds(m) => write!(f, "X{m:#b}"),
            Not(a) => write!(f, "!{a}"),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
            Iff(a, b) => write!(f, "({a} <-> {b})"),
            After(a, x) => write!(f, "[{a}]{x}"),
            Necessarily(p, x) => write!(f, "[{p}]{x}"),
            Possibly(p, x) => write!(f, "<{p}>{x}"),
        }
    }
}

fn atom_rows<'m>(model: &'m FiniteModel, a: &AspectAtom) -> Result<&'m [Mask], ModelError> {
    model
        .atom(a.name())
        .map(|i| model.rels[i].as_slice())
        .ok_or_else(|| ModelError::Unknown { kind: "aspect", name: a.name().to_string() })
}

fn steps(path: &AspectPath) -> Result<Vec<AspectAtom>, ModelError> {
    path.atom_steps().ok_or_else(|| ModelError::NotAtomic(path.to_string()))
}

/// The set of worlds where `phi` holds.
pub fn extension(model: &FiniteModel, phi: &ModalFormula) -> Result<Mask, ModelError> {
    use ModalFormula::*;
    let all = full(model.n());
    Ok(match phi {
        Top => all,
        Bottom => 0,
        Fluent(p) => {
            model.fluent(p).ok_or_else(|| ModelError::Unknown { kind: "fluent", name: p.clone() })?.val & all
        }
        Worlds(m) => m & all,
        Not(a) => all & !extension(model, a)?,
        And(a, b) => extension(model, a)? & extension(model, b)?,
        Or(a, b) => extension(model, a)? | extension(model, b)?,
        Implies(a, b) => all & (!extension(model, a)? | extension(model, b)?),
        Iff(a, b) => all & !(extension(model, a)? ^ extension(model, b)?),
        After(a, x) => {
            let act = model.action(a).ok_or_else(|| ModelError::Unknown { kind: "action", name: a.clone() })?;
            after(&act.map, extension(model, x)?)
        }
        Necessarily(p, x) => {
            let mut m = extension(model, x)?;
            for a in steps(p)?.iter().rev() {
                m = factor_forall(atom_rows(model, a)?, m);
            }
            m
        }
        Possibly(p, x) => {
            let mut m = extension(model, x)?;
            for a in steps(p)?.iter().rev() {
                m = factor_exists(atom_rows(model, a)?, m);
            }
            m
        }
    })
}

pub fn modal_eval(model: &FiniteModel, world: usize, phi: &ModalFormula) -> Result<bool, ModelError> {
    if world >= model.n() {
        return Err(ModelError::Unknown { kind: "situation", name: format!("#{world}") });
    }
    Ok(extension(model, phi)? >> world & 1 == 1)
}

/// Whether `phi` holds at every world.
pub fn valid(model: &FiniteModel, phi: &ModalFormula) -> Result<bool, ModelError> {
    Ok(extension(model, phi)? == full(model.n()))
}
