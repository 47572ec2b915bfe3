//! Seeded random queries: a random walk over applicable actions, then a
//! fluent that is defined in the final state.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::aspect::GroundFluent;
use crate::domain::Domain;
use crate::dsl::WorkloadSpec;
use crate::engine::{applicable_actions, progress};
use crate::error::EngineError;
use crate::reiter::Query;
use crate::state::WorldState;

/// `count` queries of up to `depth` actions each. The walk stops early when
/// no action applies.
pub fn random_queries(
    domain: &Domain,
    init: &WorldState,
    count: usize,
    depth: usize,
    seed: u64,
) -> Result<Vec<Query>, EngineError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut state = init.clone();
        let mut acts = Vec::new();
        for _ in 0..depth {
            let options = applicable_actions(domain, &state);
            let Some(a) = options.choose(&mut rng) else { break };
            state = progress(domain, &state, a)?;
            acts.push(a.clone());
        }
        let defined: Vec<GroundFluent> = state.entries().map(|(p, _, _)| p.clone()).collect();
        let Some(p) = defined.choose(&mut rng) else { continue };
        out.push(Query { init: init.clone(), acts, fluent: p.clone() });
    }
    Ok(out)
}

/// Explicit queries of a workload file followed by its random batches.
pub fn expand_workload(domain: &Domain, spec: &WorkloadSpec) -> Result<Vec<Query>, EngineError> {
    let mut states = BTreeMap::new();
    for (name, s) in &spec.states {
        states.insert(name.as_str(), s.build(domain)?);
    }
    let mut out: Vec<Query> = spec
        .queries
        .iter()
        .map(|(name, acts, p)| Query { init: states[name.as_str()].clone(), acts: acts.clone(), fluent: p.clone() })
        .collect();
    for b in &spec.random {
        out.extend(random_queries(domain, &states[b.state.as_str()], b.count, b.depth, b.seed)?);
    }
    Ok(out)
}
