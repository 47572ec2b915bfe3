//! Proof traces and query answers.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    DEvaluation,
    EffectApplication,
    EqualityCheck,
    AxiomInstantiation,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::DEvaluation => "d-evaluation",
            StepKind::EffectApplication => "effect-application",
            StepKind::EqualityCheck => "equality-check",
            StepKind::AxiomInstantiation => "axiom-instantiation",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub kind: StepKind,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ProofTrace {
    pub steps: Vec<TraceStep>,
}

impl ProofTrace {
    pub fn push(&mut self, kind: StepKind, detail: impl Into<String>) {
        self.steps.push(TraceStep { kind, detail: detail.into() });
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn count(&self, kind: StepKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "{:>3}. {}: {}", i + 1, s.kind, s.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Answer {
    True,
    False,
    Undefined,
    InsufficientAxioms,
}

impl Answer {
    pub fn is_defined(self) -> bool {
        matches!(self, Answer::True | Answer::False)
    }
}

impl From<Option<bool>> for Answer {
    fn from(v: Option<bool>) -> Self {
        match v {
            Some(true) => Answer::True,
            Some(false) => Answer::False,
            None => Answer::Undefined,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::True => "true",
            Answer::False => "false",
            Answer::Undefined => "undefined",
            Answer::InsufficientAxioms => "insufficient-axioms",
        })
    }
}
