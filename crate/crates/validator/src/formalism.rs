//! The thirteen aspect formalisms and their axiom shapes.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formalism {
    RelExists,
    RelForall,
    SeqRelExists,
    SeqRelForall,
    Fun,
    SeqFun,
    CollRelExists,
    CollRelForall,
    CollFun,
    ModalBox,
    ModalDiamond,
    SeqModalBox,
    SeqModalDiamond,
}

/// How a fluent factors through its aspect.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factoring {
    /// `p(s) ≡ ∃t (q(t) ∧ R(s,t))`
    Exists,
    /// `p(s) ≡ ∀t (R(s,t) ⊃ q(t))`
    Forall,
    /// `p(s) ≡ q(f(s))`
    Function,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Relational,
    Functional,
    Collective,
    Modal,
}

impl Formalism {
    pub const ALL: [Formalism; 13] = [
        Formalism::RelExists,
        Formalism::RelForall,
        Formalism::SeqRelExists,
        Formalism::SeqRelForall,
        Formalism::Fun,
        Formalism::SeqFun,
        Formalism::CollRelExists,
        Formalism::CollRelForall,
        Formalism::CollFun,
        Formalism::ModalBox,
        Formalism::ModalDiamond,
        Formalism::SeqModalBox,
        Formalism::SeqModalDiamond,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Formalism::RelExists => "rel-exists",
            Formalism::RelForall => "rel-forall",
            Formalism::SeqRelExists => "seq-rel-exists",
            Formalism::SeqRelForall => "seq-rel-forall",
            Formalism::Fun => "fun",
            Formalism::SeqFun => "seq-fun",
            Formalism::CollRelExists => "coll-rel-exists",
            Formalism::CollRelForall => "coll-rel-forall",
            Formalism::CollFun => "coll-fun",
            Formalism::ModalBox => "modal-box",
            Formalism::ModalDiamond => "modal-diamond",
            Formalism::SeqModalBox => "seq-modal-box",
            Formalism::SeqModalDiamond => "seq-modal-diamond",
        }
    }

    pub fn family(self) -> Family {
        use Formalism::*;
        match self {
            RelExists | RelForall | SeqRelExists | SeqRelForall => Family::Relational,
            Fun | SeqFun => Family::Functional,
            CollRelExists | CollRelForall | CollFun => Family::Collective,
            ModalBox | ModalDiamond | SeqModalBox | SeqModalDiamond => Family::Modal,
        }
    }

    pub fn factoring(self) -> Factoring {
        use Formalism::*;
        match self {
            RelExists | SeqRelExists | CollRelExists | ModalDiamond | SeqModalDiamond => Factoring::Exists,
            RelForall | SeqRelForall | CollRelForall | ModalBox | SeqModalBox => Factoring::Forall,
            Fun | SeqFun | CollFun => Factoring::Function,
        }
    }

    pub fn is_sequential(self) -> bool {
        use Formalism::*;
        matches!(self, SeqRelExists | SeqRelForall | SeqFun | SeqModalBox | SeqModalDiamond)
    }

    pub fn is_collective(self) -> bool {
        self.family() == Family::Collective
    }

    pub fn needs_functions(self) -> bool {
        self.factoring() == Factoring::Function
    }

    /// Label of the axiom stating that actions leave disjoint aspects alone.
    pub fn persistence_axiom(self) -> &'static str {
        match self.family() {
            Family::Relational => "R_a(s,t) = R_a(do(a,s),t)",
            Family::Functional => "f_a(s) = f_a(do(a,s))",
            Family::Collective if self == Formalism::CollFun => "f_x(s) = f_x(do(a,s)) for x outside b",
            Family::Collective => "R_x(s,t) = R_x(do(a,s),t) for x outside b",
            Family::Modal if self.factoring() == Factoring::Forall => "[a]X = [act][a]X",
            Family::Modal => "<a>X = [act]<a>X",
        }
    }

    /// Label of the axiom tying a fluent to its aspect.
    pub fn factoring_axiom(self) -> &'static str {
        use Formalism::*;
        match self {
            RelExists | SeqRelExists => "p(s) = exists t (q(t) & R_a(s,t))",
            RelForall | SeqRelForall => "p(s) = forall t (R_a(s,t) -> q(t))",
            Fun | SeqFun => "p(s) = q(f_a(s))",
            CollRelExists => "p(s) = forall x in a, exists t (q_x(t) & R_x(s,t))",
            CollRelForall => "p(s) = forall x in a, forall t (R_x(s,t) -> q_x(t))",
            CollFun => "p(s) = forall x in a, q_x(f_x(s))",
            ModalBox | SeqModalBox => "p = [a]q",
            ModalDiamond | SeqModalDiamond => "p = <a>q",
        }
    }
}

impl fmt::Display for Formalism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Formalism {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown formalism `{0}`; expected one of rel-exists, rel-forall, seq-rel-exists, seq-rel-forall, fun, seq-fun, coll-rel-exists, coll-rel-forall, coll-fun, modal-box, modal-diamond, seq-modal-box, seq-modal-diamond")]
pub struct UnknownFormalism(pub String);

impl FromStr for Formalism {
    type Err = UnknownFormalism;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let canon = s
            .replace("∃", "exists")
            .replace("∀", "forall")
            .replace("[]", "box")
            .replace("<>", "diamond");
        Formalism::ALL
            .into_iter()
            .find(|f| f.name() == canon)
            .ok_or_else(|| UnknownFormalism(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in Formalism::ALL {
            assert_eq!(f.name().parse::<Formalism>().unwrap(), f);
        }
        assert_eq!("rel-∃".parse::<Formalism>().unwrap(), Formalism::RelExists);
        assert_eq!("modal-[]".parse::<Formalism>().unwrap(), Formalism::ModalBox);
        assert_eq!("seq-modal-<>".parse::<Formalism>().unwrap(), Formalism::SeqModalDiamond);
        assert!("rel".parse::<Formalism>().is_err());
    }
}
