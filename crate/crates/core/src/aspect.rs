//! Aspect vocabulary: atoms, elements, and paths that locate components of a
//! situation, plus the ground terms fluents and actions are built from.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

/// An opaque aspect identifier such as `r1`, `computer` or `0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AspectAtom(String);

impl AspectAtom {
    /// Panics on an empty name; the parsers never produce one.
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "aspect atom names are nonempty");
        AspectAtom(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AspectAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One position of an aspect path: a single atom or a nonempty set of atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AspectElem {
    Atom(AspectAtom),
    Set(BTreeSet<AspectAtom>),
}

impl AspectElem {
    pub fn atom(name: impl Into<String>) -> Self {
        AspectElem::Atom(AspectAtom::new(name))
    }

    /// Returns `None` for an empty set.
    pub fn set<I, S>(names: I) -> Option<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<AspectAtom> = names.into_iter().map(AspectAtom::new).collect();
        if set.is_empty() {
            None
        } else {
            Some(AspectElem::Set(set))
        }
    }

    /// The atoms this element covers; an atom covers itself.
    pub fn members(&self) -> BTreeSet<&AspectAtom> {
        match self {
            AspectElem::Atom(a) => std::iter::once(a).collect(),
            AspectElem::Set(s) => s.iter().collect(),
        }
    }

    /// An atom, or a singleton set read as its only atom.
    pub fn as_single(&self) -> Option<&AspectAtom> {
        match self {
            AspectElem::Atom(a) => Some(a),
            AspectElem::Set(s) if s.len() == 1 => s.iter().next(),
            AspectElem::Set(_) => None,
        }
    }
}

impl fmt::Display for AspectElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AspectElem::Atom(a) => write!(f, "{a}"),
            AspectElem::Set(s) => {
                f.write_str("{")?;
                for (i, a) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// A sequence of aspect elements. The empty path denotes the whole world.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AspectPath(Vec<AspectElem>);

impl AspectPath {
    pub fn new(elems: Vec<AspectElem>) -> Self {
        AspectPath(elems)
    }

    pub fn root() -> Self {
        AspectPath(Vec::new())
    }

    /// Path made only of atoms, e.g. `AspectPath::atoms(["1", "1"])`.
    pub fn atoms<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        AspectPath(names.into_iter().map(AspectElem::atom).collect())
    }

    pub fn elems(&self) -> &[AspectElem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, elem: AspectElem) {
        self.0.push(elem);
    }

    pub fn concat(&self, other: &AspectPath) -> AspectPath {
        let mut elems = self.0.clone();
        elems.extend(other.0.iter().cloned());
        AspectPath(elems)
    }

    pub fn is_prefix_of(&self, other: &AspectPath) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// The atom sequence, if every element is an atom.
    pub fn atom_steps(&self) -> Option<Vec<AspectAtom>> {
        self.0
            .iter()
            .map(|e| match e {
                AspectElem::Atom(a) => Some(a.clone()),
                AspectElem::Set(_) => None,
            })
            .collect()
    }

    /// The component address used to store fluents: singleton sets count as
    /// their atom and the path stops before the first multi-atom set.
    pub fn home_steps(&self) -> Vec<AspectAtom> {
        self.0
            .iter()
            .map_while(|e| e.as_single().cloned())
            .collect()
    }
}

impl From<Vec<AspectElem>> for AspectPath {
    fn from(elems: Vec<AspectElem>) -> Self {
        AspectPath(elems)
    }
}

impl fmt::Display for AspectPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for AspectPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A ground argument: an object, or a finite set of objects.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Obj(String),
    Set(BTreeSet<String>),
}

impl Value {
    pub fn obj(name: impl Into<String>) -> Self {
        Value::Obj(name.into())
    }

    pub fn set<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Value::Set(names.into_iter().map(Into::into).collect())
    }

    /// Objects covered by this value; an object covers itself.
    pub fn members(&self) -> BTreeSet<&str> {
        match self {
            Value::Obj(o) => std::iter::once(o.as_str()).collect(),
            Value::Set(s) => s.iter().map(String::as_str).collect(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Obj(o) => f.write_str(o),
            Value::Set(s) => {
                f.write_str("{")?;
                for (i, o) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    f.write_str(o)?;
                }
                f.write_str("}")
            }
        }
    }
}

macro_rules! ground_term {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name {
            pub name: String,
            pub args: Vec<Value>,
        }

        impl $name {
            pub fn new(name: impl Into<String>, args: Vec<Value>) -> Self {
                $name { name: name.into(), args }
            }

            /// Shorthand for a term whose arguments are all objects.
            pub fn objs<I, S>(name: impl Into<String>, args: I) -> Self
            where
                I: IntoIterator<Item = S>,
                S: Into<String>,
            {
                $name::new(name, args.into_iter().map(Value::obj).collect())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}(", self.name)?;
                for (i, a) in self.args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }
    };
}

ground_term!(
    /// A ground fluent such as `on(a,b)`.
    GroundFluent
);
ground_term!(
    /// A ground action such as `move(a,b)` or `set_pixels({p1,p2})`.
    GroundAction
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        let p = AspectPath::new(vec![
            AspectElem::atom("computer"),
            AspectElem::atom("display"),
            AspectElem::set(["p2", "p1"]).unwrap(),
        ]);
        assert_eq!(p.to_string(), "(computer,display,{p1,p2})");
        assert_eq!(AspectPath::root().to_string(), "()");
        assert_eq!(
            GroundAction::new("set_pixels", vec![Value::set(["p1"])]).to_string(),
            "set_pixels({p1})"
        );
    }

    #[test]
    fn home_steps_stop_at_wide_sets() {
        let p = AspectPath::new(vec![
            AspectElem::atom("computer"),
            AspectElem::set(["p1"]).unwrap(),
            AspectElem::set(["p1", "p2"]).unwrap(),
            AspectElem::atom("x"),
        ]);
        let steps: Vec<_> = p.home_steps().iter().map(|a| a.name().to_string()).collect();
        assert_eq!(steps, ["computer", "p1"]);
        assert!(p.atom_steps().is_none());
    }

    #[test]
    fn empty_set_rejected() {
        assert!(AspectElem::set(Vec::<String>::new()).is_none());
    }
}
