//! Hierarchical situation calculus: aspect-annotated domains, world states,
//! the non-interference predicate, frame-axiom derivation and successor
//! state axioms.

pub mod aspect;
pub mod disjoint;
pub mod domain;
pub mod error;
pub mod guard;
pub mod dsl;
pub mod engine;
pub mod frame;
pub mod regress;
pub mod reiter;
pub mod state;
pub mod trace;
pub mod workload;

pub use aspect::{AspectAtom, AspectElem, AspectPath, GroundAction, GroundFluent, Value};
pub use disjoint::{canonicalize, check_monotonicity, d_eval, elem_disjoint, Commutation, DisjointnessSpec};
pub use domain::Domain;
pub use error::{EngineError, SpecError};
pub use state::{eval_fluent, resolve_component, with_fluent, WorldState};
