//! Bounded model checking of the aspect formalisms: finite models, premise
//! axioms, the non-interference conclusion, modal evaluation, counterexample
//! search and the commutativity pitfall.

pub mod commute;
pub mod formalism;
pub mod modal;
pub mod model;
pub mod parse;
pub mod premises;
pub mod search;
pub mod semantics;

pub use commute::{check_commutativity, reproduce_commutative_pitfall, CommutativityReport, PitfallReport};
pub use formalism::Formalism;
pub use modal::{extension, modal_eval, ModalFormula};
pub use model::{FiniteModel, Mask, ModelError, Witness};
pub use parse::{parse_model, unparse_model};
pub use premises::{check_noninterference, check_premises, verify_theorem, AxiomKind, TheoremReport, Verdict};
pub use search::{search_counterexample, SearchBounds, SearchReport};
