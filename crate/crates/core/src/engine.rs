//! Aspects of ground terms, the intersect test, and progression.

use std::collections::BTreeSet;

use crate::aspect::{AspectPath, GroundAction, GroundFluent};
use crate::disjoint::d_eval;
use crate::domain::{Domain, EffectKind, RuleTarget};
use crate::error::EngineError;
use crate::guard::{self, Binding, Valuation};
use crate::state::WorldState;

pub fn aspect_of_fluent(domain: &Domain, state: &dyn Valuation, p: &GroundFluent) -> Result<AspectPath, EngineError> {
    domain.check_fluent(p)?;
    Ok(domain.resolve_aspect(RuleTarget::Fluent, &p.name, &p.args, state)?.path)
}

pub fn aspect_of_action(domain: &Domain, state: &dyn Valuation, a: &GroundAction) -> Result<AspectPath, EngineError> {
    domain.check_action(a)?;
    Ok(domain.resolve_aspect(RuleTarget::Action, &a.name, &a.args, state)?.path)
}

/// True unless `d(aspect(p), aspect(a))` holds in `state`.
pub fn intersects(domain: &Domain, state: &dyn Valuation, a: &GroundAction, p: &GroundFluent) -> Result<bool, EngineError> {
    let alpha = aspect_of_fluent(domain, state, p)?;
    let beta = aspect_of_action(domain, state, a)?;
    Ok(!d_eval(&domain.disjointness, &alpha, &beta)?)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EffectSet {
    pub adds: BTreeSet<GroundFluent>,
    pub dels: BTreeSet<GroundFluent>,
}

impl EffectSet {
    pub fn touched(&self) -> impl Iterator<Item = &GroundFluent> {
        self.adds.iter().chain(&self.dels)
    }

    /// Value of `p` after the action, given its value before. Adds win.
    pub fn apply(&self, p: &GroundFluent, before: Option<bool>) -> Option<bool> {
        if self.adds.contains(p) {
            Some(true)
        } else if self.dels.contains(p) {
            Some(false)
        } else {
            before
        }
    }
}

/// Effects of `a` whose conditions hold under `val`. Fluent variables not
/// fixed by the action range over their sort.
pub fn effects_of(domain: &Domain, val: &dyn Valuation, a: &GroundAction) -> EffectSet {
    let mut out = EffectSet::default();
    for e in &domain.effects {
        let Some(b0) = e.action.match_args(&a.args, &Binding::new()) else { continue };
        if e.action.name != a.name {
            continue;
        }
        for b in guard::extensions(domain, &e.fluent, &e.vars, &b0) {
            let Some(p) = e.fluent.ground_fluent(&b) else { continue };
            if !domain.fluent_fits(&p) || !guard::satisfiable(domain, &e.guard, &e.vars, &b, val) {
                continue;
            }
            match e.kind {
                EffectKind::Add => out.adds.insert(p),
                EffectKind::Del => out.dels.insert(p),
            };
        }
    }
    out
}

pub fn preconditions_hold(domain: &Domain, val: &dyn Valuation, a: &GroundAction) -> bool {
    domain.preconditions.iter().filter(|p| p.action.name == a.name).all(|pre| {
        pre.action
            .match_args(&a.args, &Binding::new())
            .is_some_and(|b| guard::satisfiable(domain, &pre.guard, &pre.vars, &b, val))
    })
}

fn check_step(domain: &Domain, state: &WorldState, a: &GroundAction) -> Result<EffectSet, EngineError> {
    let beta = aspect_of_action(domain, state, a)?;
    if !state.covers(&beta.home_steps()) {
        return Err(EngineError::UndefinedAction(a.clone()));
    }
    if !preconditions_hold(domain, state, a) {
        return Err(EngineError::Inapplicable { action: a.clone(), step: None });
    }
    let eff = effects_of(domain, state, a);
    if eff.touched().any(|p| state.value(p).is_none()) {
        return Err(EngineError::UndefinedAction(a.clone()));
    }
    Ok(eff)
}

/// Whether `a` can be performed in `state`.
pub fn applicable(domain: &Domain, state: &WorldState, a: &GroundAction) -> bool {
    check_step(domain, state, a).is_ok()
}

/// `do(a, s)`: applies the effects whose conditions hold; every other fluent
/// keeps its value. Homes are recomputed in the successor.
pub fn progress(domain: &Domain, state: &WorldState, a: &GroundAction) -> Result<WorldState, EngineError> {
    let eff = check_step(domain, state, a)?;
    let mut trues = state.true_fluents();
    for p in &eff.dels {
        trues.remove(p);
    }
    trues.extend(eff.adds.iter().cloned());
    state.rehome(domain, &trues)
}

/// All intermediate states, starting with `init`.
pub fn progress_all(domain: &Domain, init: &WorldState, acts: &[GroundAction]) -> Result<Vec<WorldState>, EngineError> {
    let mut states = vec![init.clone()];
    for (i, a) in acts.iter().enumerate() {
        let next = progress(domain, states.last().expect("nonempty"), a).map_err(|e| match e {
            EngineError::Inapplicable { action, .. } => EngineError::Inapplicable { action, step: Some(i) },
            other => other,
        })?;
        states.push(next);
    }
    Ok(states)
}

/// Actions that can be performed in `state`, in declaration order.
pub fn applicable_actions(domain: &Domain, state: &WorldState) -> Vec<GroundAction> {
    domain.ground_actions().into_iter().filter(|a| applicable(domain, state, a)).collect()
}
