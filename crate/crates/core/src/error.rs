use thiserror::Error;

use crate::aspect::{AspectPath, GroundAction, GroundFluent};

/// Misuse of a disjointness specification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("simple inequality needs paths of length 1, got {fluent} and {action}")]
    LengthViolation { fluent: AspectPath, action: AspectPath },
    #[error("set element {0} cannot take part in full commutation")]
    SetUnderCommutation(String),
    #[error("{0} is not supported for this disjointness specification")]
    NotApplicable(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("unknown schema `{0}`")]
    UnknownSchema(String),
    #[error("`{name}` expects {expected} argument(s), got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("argument {value} of `{name}` is outside its sort")]
    Sort { name: String, value: String },
    #[error("{0} lies outside the modeled portion of the world")]
    UndefinedPortion(GroundFluent),
    #[error("{0} is undefined in this situation: it refers outside the modeled portion")]
    UndefinedAction(GroundAction),
    #[error("{action} is not applicable{}", step.map(|s| format!(" at step {}", s + 1)).unwrap_or_default())]
    Inapplicable { action: GroundAction, step: Option<usize> },
    #[error("no aspect rule applies to {0}")]
    MissingAspect(String),
    #[error("aspect of {term} is ambiguous: {}", candidates.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "))]
    AmbiguousAspect { term: String, candidates: Vec<AspectPath> },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("no persistence proof of {fluent} across {action}: {reason}")]
    NoProof { action: GroundAction, fluent: GroundFluent, reason: String },
    #[error("modes disagree on {fluent} after [{}]: {detail}", acts.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("; "))]
    CrossMode { acts: Vec<GroundAction>, fluent: GroundFluent, detail: String },
}
