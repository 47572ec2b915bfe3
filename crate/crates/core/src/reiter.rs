//! Successor state axioms compiled from the effect rules, SSA-mode query
//! evaluation, and the cross-mode comparison.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::aspect::{GroundAction, GroundFluent};
use crate::domain::{Domain, EffectKind, Guard, Pattern, VarSorts};
use crate::engine::{aspect_of_action, aspect_of_fluent, progress_all};
use crate::error::EngineError;
use crate::frame::derive_frame_axioms;
use crate::guard::{self, Binding, Valuation};
use crate::regress::{persistence_proof, regress_query, ProofMode};
use crate::state::WorldState;
use crate::trace::{Answer, ProofTrace, StepKind};

/// One disjunct of a gamma condition: `a = action ∧ R(args) = fluent ∧ guard`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaEntry {
    pub action: Pattern,
    pub fluent: Pattern,
    pub guard: Guard,
    #[serde(skip)]
    pub vars: VarSorts,
}

impl fmt::Display for GammaEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.action, self.fluent)?;
        if !self.guard.is_empty() {
            write!(f, " if {}", self.guard)?;
        }
        Ok(())
    }
}

/// `Poss(a,s) ⊃ [R(do(a,s)) ≡ γ⁺ ∨ R(s) ∧ ¬γ⁻]` for one fluent schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuccessorStateAxiom {
    pub fluent: String,
    pub gamma_plus: Vec<GammaEntry>,
    pub gamma_minus: Vec<GammaEntry>,
}

impl fmt::Display for SuccessorStateAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ssa {}", self.fluent)?;
        for g in &self.gamma_plus {
            writeln!(f, "  gamma+ {g}")?;
        }
        for g in &self.gamma_minus {
            writeln!(f, "  gamma- {g}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SsaSet {
    pub axioms: Vec<SuccessorStateAxiom>,
    /// Actions the axioms quantify over; `None` means all.
    pub actions: Option<BTreeSet<String>>,
}

impl SsaSet {
    pub fn get(&self, fluent: &str) -> Option<&SuccessorStateAxiom> {
        self.axioms.iter().find(|s| s.fluent == fluent)
    }

    fn covers(&self, action: &str) -> bool {
        self.actions.as_ref().map_or(true, |s| s.contains(action))
    }
}

/// One axiom per fluent schema. With `actions`, only effects of those
/// action schemas are compiled in.
pub fn compile_ssa(domain: &Domain, actions: Option<&BTreeSet<String>>) -> SsaSet {
    let axioms = domain
        .fluents
        .iter()
        .map(|schema| {
            let mut ax = SuccessorStateAxiom { fluent: schema.name.clone(), gamma_plus: Vec::new(), gamma_minus: Vec::new() };
            for e in domain.effects.iter().filter(|e| e.fluent.name == schema.name) {
                if actions.is_some_and(|s| !s.contains(&e.action.name)) {
                    continue;
                }
                let entry = GammaEntry {
                    action: e.action.clone(),
                    fluent: e.fluent.clone(),
                    guard: e.guard.clone(),
                    vars: e.vars.clone(),
                };
                match e.kind {
                    EffectKind::Add => ax.gamma_plus.push(entry),
                    EffectKind::Del => ax.gamma_minus.push(entry),
                }
            }
            ax
        })
        .collect();
    SsaSet { axioms, actions: actions.cloned() }
}

/// Recursive evaluator of `R(do(a_k, ... do(a_1, S0)))` by the axioms.
struct SsaEval<'a> {
    domain: &'a Domain,
    ssas: &'a SsaSet,
    init: &'a WorldState,
    acts: &'a [GroundAction],
    memo: RefCell<BTreeMap<(usize, GroundFluent), Option<bool>>>,
}

/// Valuation of the situation after `k` actions.
struct At<'e, 'a> {
    eval: &'e SsaEval<'a>,
    k: usize,
}

impl Valuation for At<'_, '_> {
    fn value(&self, p: &GroundFluent) -> Option<bool> {
        self.eval.value(self.k, p, None)
    }
}

impl SsaEval<'_> {
    fn entry_fires(&self, g: &GammaEntry, k: usize, q: &GroundFluent) -> bool {
        let a = &self.acts[k - 1];
        if g.action.name != a.name {
            return false;
        }
        g.action
            .match_args(&a.args, &Binding::new())
            .and_then(|b| g.fluent.match_args(&q.args, &b))
            .is_some_and(|b| guard::satisfiable(self.domain, &g.guard, &g.vars, &b, &At { eval: self, k: k - 1 }))
    }

    /// Value of `q` after `k` actions. With a trace, the steps used for the
    /// queried fluent are recorded; guard sub-evaluations are not.
    fn value(&self, k: usize, q: &GroundFluent, mut trace: Option<&mut ProofTrace>) -> Option<bool> {
        if trace.is_none() {
            if let Some(v) = self.memo.borrow().get(&(k, q.clone())) {
                return *v;
            }
        }
        let result = if k == 0 {
            let v = self.init.value(q);
            if let Some(t) = trace {
                t.push(
                    StepKind::AxiomInstantiation,
                    format!("initial: {q} = {}", v.map_or("undefined".to_string(), |b| b.to_string())),
                );
            }
            v
        } else {
            let a = &self.acts[k - 1];
            let ax = self.ssas.get(&q.name).expect("every fluent schema has an axiom");
            let before = self.value(k - 1, q, trace.as_deref_mut());
            let step = |t: &mut Option<&mut ProofTrace>, kind, detail: String| {
                if let Some(t) = t.as_deref_mut() {
                    t.push(kind, detail);
                }
            };
            let plus = |t: &mut Option<&mut ProofTrace>| -> bool {
                for g in &ax.gamma_plus {
                    if self.entry_fires(g, k, q) {
                        step(t, StepKind::EffectApplication, format!("step {k}: gamma+ {g} fires for {a}"));
                        return true;
                    }
                    step(t, StepKind::EqualityCheck, format!("step {k}: {a} is not gamma+ {g} for {q}"));
                }
                false
            };
            match before {
                Some(true) => {
                    let mut killed = false;
                    for g in &ax.gamma_minus {
                        if self.entry_fires(g, k, q) {
                            step(&mut trace, StepKind::EffectApplication, format!("step {k}: gamma- {g} fires for {a}"));
                            killed = true;
                            break;
                        }
                        step(&mut trace, StepKind::EqualityCheck, format!("step {k}: {a} is not gamma- {g} for {q}"));
                    }
                    Some(!killed || plus(&mut trace))
                }
                Some(false) => Some(plus(&mut trace)),
                None => {
                    if plus(&mut trace) {
                        Some(true)
                    } else {
                        None
                    }
                }
            }
        };
        self.memo.borrow_mut().insert((k, q.clone()), result);
        result
    }
}

fn poss(domain: &Domain, val: &dyn Valuation, a: &GroundAction) -> bool {
    crate::engine::preconditions_hold(domain, val, a)
}

/// Evaluates `p` after `acts` by the successor state axioms alone.
pub fn ssa_query(
    domain: &Domain,
    ssas: &SsaSet,
    init: &WorldState,
    acts: &[GroundAction],
    p: &GroundFluent,
) -> Result<(Answer, ProofTrace), EngineError> {
    domain.check_fluent(p)?;
    let eval = SsaEval { domain, ssas, init, acts, memo: RefCell::new(BTreeMap::new()) };
    for (i, a) in acts.iter().enumerate() {
        domain.check_action(a)?;
        if !ssas.covers(&a.name) {
            let mut trace = ProofTrace::default();
            trace.push(StepKind::AxiomInstantiation, format!("step {}: {a} is outside the axiomatized actions", i + 1));
            return Ok((Answer::InsufficientAxioms, trace));
        }
        if !poss(domain, &At { eval: &eval, k: i }, a) {
            return Err(EngineError::Inapplicable { action: a.clone(), step: Some(i) });
        }
    }
    let mut trace = ProofTrace::default();
    let v = eval.value(acts.len(), p, Some(&mut trace));
    Ok((Answer::from(v), trace))
}

/// A query: the fluent `fluent` after `acts` from `init`.
#[derive(Clone, Debug)]
pub struct Query {
    pub init: WorldState,
    pub acts: Vec<GroundAction>,
    pub fluent: GroundFluent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCounts {
    /// Frame axioms listed one by one (sum of m·n).
    pub classical: usize,
    /// Aspect assertions plus `d` (sum of m+n+2).
    pub aspect: usize,
    pub ssa: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueryComparison {
    pub acts: Vec<GroundAction>,
    pub fluent: GroundFluent,
    pub oracle: Answer,
    pub aspect: Answer,
    pub ssa: Answer,
    pub aspect_trace: usize,
    pub ssa_trace: usize,
    /// `None` when some mode leaves the query undefined.
    pub agree: Option<bool>,
    /// Trace lengths of a single-step persistence proof, when applicable.
    pub persistence: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub counts: AxiomCounts,
    pub queries: Vec<QueryComparison>,
    pub defined: usize,
    pub agreed: usize,
    /// True when no domain constraints restrict reachable states; the DSL has
    /// no constraint declarations, so this is always false here.
    pub has_state_constraints: bool,
}

impl CompareReport {
    pub fn all_agree(&self) -> bool {
        self.queries.iter().all(|q| q.agree != Some(false))
    }
}

/// Answer of the progression oracle.
pub fn oracle_query(
    domain: &Domain,
    init: &WorldState,
    acts: &[GroundAction],
    p: &GroundFluent,
) -> Result<Answer, EngineError> {
    domain.check_fluent(p)?;
    let states = progress_all(domain, init, acts)?;
    Ok(Answer::from(states.last().expect("nonempty").value(p)))
}

fn compare_one(domain: &Domain, ssas: &SsaSet, q: &Query) -> Result<QueryComparison, EngineError> {
    let oracle = oracle_query(domain, &q.init, &q.acts, &q.fluent)?;
    let (aspect, at) = regress_query(domain, &q.init, &q.acts, &q.fluent)?;
    let (ssa, st) = ssa_query(domain, ssas, &q.init, &q.acts, &q.fluent)?;
    let agree = if oracle.is_defined() && aspect.is_defined() && ssa.is_defined() {
        Some(oracle == aspect && aspect == ssa)
    } else {
        None
    };
    let persistence = match q.acts.as_slice() {
        [a] => match persistence_proof(domain, &q.init, a, &q.fluent, ProofMode::Aspect) {
            Ok(t) => ssa_query(domain, ssas, &q.init, &q.acts, &q.fluent).ok().map(|(_, s)| (t.len(), s.len())),
            Err(_) => None,
        },
        _ => None,
    };
    Ok(QueryComparison {
        acts: q.acts.clone(),
        fluent: q.fluent.clone(),
        oracle,
        aspect,
        ssa,
        aspect_trace: at.len(),
        ssa_trace: st.len(),
        agree,
        persistence,
    })
}

/// Runs every query in all three modes. A disagreement is an error carrying
/// the shortest prefix of the offending action sequence that still disagrees.
pub fn compare_modes(domain: &Domain, queries: &[Query]) -> Result<CompareReport, EngineError> {
    let ssas = compile_ssa(domain, None);
    let derivation = derive_frame_axioms(domain);
    let counts = AxiomCounts {
        classical: derivation.economy.iter().map(|e| e.derived_frame_axioms).sum(),
        aspect: derivation.economy.iter().map(|e| e.source_axioms).sum(),
        ssa: ssas.axioms.len(),
    };
    let mut out = Vec::new();
    for q in queries {
        let c = compare_one(domain, &ssas, q)?;
        if c.agree == Some(false) {
            return Err(minimal_witness(domain, &ssas, q, &c));
        }
        out.push(c);
    }
    let defined = out.iter().filter(|c| c.agree.is_some()).count();
    let agreed = out.iter().filter(|c| c.agree == Some(true)).count();
    Ok(CompareReport { counts, queries: out, defined, agreed, has_state_constraints: false })
}

fn minimal_witness(domain: &Domain, ssas: &SsaSet, q: &Query, full: &QueryComparison) -> EngineError {
    for len in 0..=q.acts.len() {
        let prefix = Query { init: q.init.clone(), acts: q.acts[..len].to_vec(), fluent: q.fluent.clone() };
        if let Ok(c) = compare_one(domain, ssas, &prefix) {
            if c.agree == Some(false) {
                return EngineError::CrossMode {
                    acts: prefix.acts,
                    fluent: q.fluent.clone(),
                    detail: format!("oracle {}, aspect {}, ssa {}", c.oracle, c.aspect, c.ssa),
                };
            }
        }
    }
    EngineError::CrossMode {
        acts: q.acts.clone(),
        fluent: q.fluent.clone(),
        detail: format!("oracle {}, aspect {}, ssa {}", full.oracle, full.aspect, full.ssa),
    }
}

/// Is `(a, p)` a disjoint pair in `state`?
pub fn disjoint_in(domain: &Domain, state: &WorldState, a: &GroundAction, p: &GroundFluent) -> bool {
    match (aspect_of_fluent(domain, state, p), aspect_of_action(domain, state, a)) {
        (Ok(alpha), Ok(beta)) => crate::disjoint::d_eval(&domain.disjointness, &alpha, &beta).unwrap_or(false),
        _ => false,
    }
}
