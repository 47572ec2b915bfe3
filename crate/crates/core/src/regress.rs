//! Query answering by regression through the non-interference axiom, and
//! single-step persistence proofs.

use crate::aspect::{GroundAction, GroundFluent};
use crate::disjoint::d_eval;
use crate::domain::{Domain, EffectKind};
use crate::engine::{aspect_of_action, aspect_of_fluent, progress_all};
use crate::error::EngineError;
use crate::frame::{effect_mentions, frame_decl_applies, FrameAxiom};
use crate::guard::{self, Binding, Valuation};
use crate::state::{eval_fluent, WorldState};
use crate::trace::{Answer, ProofTrace, StepKind};

/// Which effect rules of `a` for `p` fire under `val`: (add fired, del fired).
fn fired(domain: &Domain, val: &dyn Valuation, a: &GroundAction, p: &GroundFluent) -> (bool, bool) {
    let mut add = false;
    let mut del = false;
    for e in domain.effects.iter().filter(|e| e.action.name == a.name && e.fluent.name == p.name) {
        let Some(b) = e
            .action
            .match_args(&a.args, &Binding::new())
            .and_then(|b| e.fluent.match_args(&p.args, &b))
        else {
            continue;
        };
        if guard::satisfiable(domain, &e.guard, &e.vars, &b, val) {
            match e.kind {
                EffectKind::Add => add = true,
                EffectKind::Del => del = true,
            }
        }
    }
    (add, del)
}

/// Answers `p` after `acts` from `init`, walking the actions backwards.
/// Disjoint actions are crossed with one `d` evaluation; intersecting ones
/// are resolved by their effect rules or an explicit frame declaration.
pub fn regress_query(
    domain: &Domain,
    init: &WorldState,
    acts: &[GroundAction],
    p: &GroundFluent,
) -> Result<(Answer, ProofTrace), EngineError> {
    domain.check_fluent(p)?;
    let states = progress_all(domain, init, acts)?;
    let mut trace = ProofTrace::default();
    let last = states.last().expect("nonempty");
    let defined_at_end = aspect_of_fluent(domain, last, p)
        .map(|alpha| last.covers(&alpha.home_steps()))
        .unwrap_or(false);
    if !defined_at_end {
        trace.push(StepKind::AxiomInstantiation, format!("{p} lies outside the modeled portion after the last action"));
        return Ok((Answer::Undefined, trace));
    }
    for i in (0..acts.len()).rev() {
        let (s, a) = (&states[i], &acts[i]);
        let alpha = match aspect_of_fluent(domain, s, p) {
            Ok(x) => x,
            Err(EngineError::MissingAspect(_)) => {
                trace.push(StepKind::AxiomInstantiation, format!("{p} has no aspect before step {}", i + 1));
                return Ok((Answer::Undefined, trace));
            }
            Err(e) => return Err(e),
        };
        let beta = aspect_of_action(domain, s, a)?;
        let d = d_eval(&domain.disjointness, &alpha, &beta)?;
        trace.push(StepKind::DEvaluation, format!("step {}: d({alpha}, {beta}) = {d} for {p} and {a}", i + 1));
        if d {
            continue;
        }
        if effect_mentions(domain, a, p) {
            let (add, del) = fired(domain, s, a, p);
            let outcome = if add {
                Some(true)
            } else if del {
                Some(false)
            } else {
                None
            };
            let detail = match outcome {
                Some(v) => format!("step {}: {a} makes {p} {v}", i + 1),
                None => format!("step {}: no effect of {a} on {p} applies", i + 1),
            };
            trace.push(StepKind::EffectApplication, detail);
            if let Some(v) = outcome {
                return Ok((Answer::from(Some(v)), trace));
            }
            continue;
        }
        if frame_decl_applies(domain, s, a, p) {
            trace.push(StepKind::AxiomInstantiation, format!("step {}: frame declaration keeps {p} across {a}", i + 1));
            continue;
        }
        trace.push(StepKind::AxiomInstantiation, format!("step {}: nothing determines {p} across {a}", i + 1));
        return Ok((Answer::Undefined, trace));
    }
    let v = eval_fluent(domain, init, p)?;
    trace.push(
        StepKind::AxiomInstantiation,
        format!("initial: {p} = {}", v.map_or("undefined".to_string(), |b| b.to_string())),
    );
    Ok((Answer::from(v), trace))
}

#[derive(Clone, Copy, Debug)]
pub enum ProofMode<'a> {
    Aspect,
    /// Classical frame axioms listed explicitly.
    Classical(&'a [FrameAxiom]),
}

/// Proof that `p` keeps its value across `a` in `state`.
pub fn persistence_proof(
    domain: &Domain,
    state: &WorldState,
    a: &GroundAction,
    p: &GroundFluent,
    mode: ProofMode,
) -> Result<ProofTrace, EngineError> {
    let mut trace = ProofTrace::default();
    let no_proof = |reason: String| EngineError::NoProof { action: a.clone(), fluent: p.clone(), reason };
    match mode {
        ProofMode::Aspect => {
            let alpha = aspect_of_fluent(domain, state, p)?;
            trace.push(StepKind::AxiomInstantiation, format!("{p} : {alpha}"));
            let beta = aspect_of_action(domain, state, a)?;
            trace.push(StepKind::AxiomInstantiation, format!("{a} : {beta}"));
            let d = d_eval(&domain.disjointness, &alpha, &beta)?;
            trace.push(StepKind::DEvaluation, format!("d({alpha}, {beta}) = {d}"));
            if !d {
                return Err(no_proof(format!("{alpha} and {beta} intersect")));
            }
            trace.push(StepKind::AxiomInstantiation, format!("non-interference gives F[{a}, {p}]"));
        }
        ProofMode::Classical(axioms) => {
            let hit = axioms.iter().find(|ax| {
                &ax.action == a
                    && &ax.fluent == p
                    && guard::satisfiable(domain, &ax.guard, &ax.vars, &Binding::new(), state)
            });
            match hit {
                Some(ax) => trace.push(StepKind::AxiomInstantiation, format!("lookup {ax}")),
                None => return Err(no_proof("no listed frame axiom applies".into())),
            }
        }
    }
    Ok(trace)
}
