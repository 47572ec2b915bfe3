//! Hierarchical world states. Every ground fluent whose home component lies
//! inside the modeled portion is stored, true or false, in that component.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::aspect::{AspectAtom, AspectPath, GroundFluent};
use crate::domain::{Domain, RuleTarget};
use crate::error::EngineError;
use crate::guard::Valuation;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComponentNode {
    pub local: BTreeMap<GroundFluent, bool>,
    pub children: BTreeMap<AspectAtom, Arc<ComponentNode>>,
}

impl ComponentNode {
    pub fn child(&self, atom: &AspectAtom) -> Option<&ComponentNode> {
        self.children.get(atom).map(Arc::as_ref)
    }

    fn ensure_path(node: &mut Arc<ComponentNode>, steps: &[AspectAtom]) {
        if let Some((first, rest)) = steps.split_first() {
            let inner = Arc::make_mut(node);
            let child = inner.children.entry(first.clone()).or_default();
            ComponentNode::ensure_path(child, rest);
        }
    }

    fn write(node: &mut Arc<ComponentNode>, steps: &[AspectAtom], p: &GroundFluent, v: bool) {
        let inner = Arc::make_mut(node);
        match steps.split_first() {
            None => {
                inner.local.insert(p.clone(), v);
            }
            Some((first, rest)) => {
                let child = inner.children.entry(first.clone()).or_default();
                ComponentNode::write(child, rest, p, v);
            }
        }
    }
}

/// An immutable situation. Updates return new states that share untouched
/// components with the original.
#[derive(Clone, Debug)]
pub struct WorldState {
    root: Arc<ComponentNode>,
    scope: Vec<Vec<AspectAtom>>,
    homes: Arc<BTreeMap<GroundFluent, Vec<AspectAtom>>>,
}

impl PartialEq for WorldState {
    fn eq(&self, other: &Self) -> bool {
        self.scope == other.scope && self.root == other.root
    }
}

impl Eq for WorldState {}

impl WorldState {
    /// Builds a state from the set of true fluents; every other fluent whose
    /// home lies in `scope` is false. An empty scope list means the whole world.
    pub fn from_true_set(
        domain: &Domain,
        trues: &BTreeSet<GroundFluent>,
        scope: &[AspectPath],
    ) -> Result<WorldState, EngineError> {
        for p in trues {
            domain.check_fluent(p)?;
        }
        let mut scope: Vec<Vec<AspectAtom>> = scope
            .iter()
            .map(|s| {
                s.atom_steps()
                    .ok_or_else(|| EngineError::MissingAspect(format!("scope {s} must consist of atoms")))
            })
            .collect::<Result<_, _>>()?;
        if scope.is_empty() {
            scope.push(Vec::new());
        }
        scope.sort();
        scope.dedup();
        let state = WorldState::assemble(domain, trues, scope)?;
        if let Some(p) = trues.iter().find(|p| !state.homes.contains_key(*p)) {
            return Err(EngineError::UndefinedPortion(p.clone()));
        }
        Ok(state)
    }

    fn assemble(
        domain: &Domain,
        trues: &BTreeSet<GroundFluent>,
        scope: Vec<Vec<AspectAtom>>,
    ) -> Result<WorldState, EngineError> {
        let mut root = Arc::new(ComponentNode::default());
        for s in &scope {
            ComponentNode::ensure_path(&mut root, s);
        }
        let mut homes = BTreeMap::new();
        for p in domain.ground_fluents() {
            let home = match domain.resolve_aspect(RuleTarget::Fluent, &p.name, &p.args, trues) {
                Ok(r) => r.path.home_steps(),
                Err(EngineError::MissingAspect(_)) => continue,
                Err(e) => return Err(e),
            };
            if !in_scope(&scope, &home) {
                continue;
            }
            ComponentNode::write(&mut root, &home, &p, trues.contains(&p));
            homes.insert(p, home);
        }
        Ok(WorldState { root, scope, homes: Arc::new(homes) })
    }

    pub fn root(&self) -> &ComponentNode {
        &self.root
    }

    pub fn scope(&self) -> Vec<AspectPath> {
        self.scope
            .iter()
            .map(|s| AspectPath::atoms(s.iter().map(|a| a.name().to_string())))
            .collect()
    }

    pub fn covers(&self, home: &[AspectAtom]) -> bool {
        in_scope(&self.scope, home)
    }

    /// Home component of a stored fluent.
    pub fn home(&self, p: &GroundFluent) -> Option<&[AspectAtom]> {
        self.homes.get(p).map(Vec::as_slice)
    }

    /// Fluents that currently hold.
    pub fn true_fluents(&self) -> BTreeSet<GroundFluent> {
        self.entries().filter(|(_, v, _)| *v).map(|(p, _, _)| p.clone()).collect()
    }

    /// Every stored fluent with its value and home.
    pub fn entries(&self) -> impl Iterator<Item = (&GroundFluent, bool, &[AspectAtom])> {
        self.homes.iter().map(|(p, home)| {
            let v = self.node_at(home).and_then(|n| n.local.get(p)).copied().unwrap_or(false);
            (p, v, home.as_slice())
        })
    }

    fn node_at(&self, steps: &[AspectAtom]) -> Option<&ComponentNode> {
        steps.iter().try_fold(self.root.as_ref(), |node, a| node.child(a))
    }

    /// Rebuilds the state from a new set of true fluents, recomputing homes.
    /// Fluents whose home leaves the modeled portion become undefined.
    pub fn rehome(&self, domain: &Domain, trues: &BTreeSet<GroundFluent>) -> Result<WorldState, EngineError> {
        WorldState::assemble(domain, trues, self.scope.clone())
    }
}

fn in_scope(scope: &[Vec<AspectAtom>], home: &[AspectAtom]) -> bool {
    scope.iter().any(|s| home.len() >= s.len() && home[..s.len()] == s[..])
}

impl Valuation for WorldState {
    fn value(&self, p: &GroundFluent) -> Option<bool> {
        let home = self.homes.get(p)?;
        self.node_at(home).and_then(|n| n.local.get(p)).copied()
    }
}

/// The component addressed by an atom-only path, if present.
pub fn resolve_component<'a>(state: &'a WorldState, path: &AspectPath) -> Option<&'a ComponentNode> {
    let steps = path.atom_steps()?;
    state.node_at(&steps)
}

/// Truth value of `p`, or `None` when `p` lies outside the modeled portion.
pub fn eval_fluent(domain: &Domain, state: &WorldState, p: &GroundFluent) -> Result<Option<bool>, EngineError> {
    domain.check_fluent(p)?;
    Ok(state.value(p))
}

/// The state with `p` set to `v`. Homes of other fluents are left as they are.
pub fn with_fluent(domain: &Domain, state: &WorldState, p: &GroundFluent, v: bool) -> Result<WorldState, EngineError> {
    domain.check_fluent(p)?;
    let home = match state.homes.get(p) {
        Some(h) => h.clone(),
        None => {
            let home = domain
                .resolve_aspect(RuleTarget::Fluent, &p.name, &p.args, state)
                .map_err(|_| EngineError::UndefinedPortion(p.clone()))?
                .path
                .home_steps();
            if !state.covers(&home) {
                return Err(EngineError::UndefinedPortion(p.clone()));
            }
            home
        }
    };
    let mut root = state.root.clone();
    ComponentNode::write(&mut root, &home, p, v);
    let mut homes = state.homes.clone();
    if !homes.contains_key(p) {
        Arc::make_mut(&mut homes).insert(p.clone(), home);
    }
    Ok(WorldState { root, scope: state.scope.clone(), homes })
}
