//! Frame axioms derived from aspects, economy figures, and the check that
//! aspect annotations agree with the effect rules.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::aspect::{AspectPath, GroundAction, GroundFluent, Value};
use crate::disjoint::{check_monotonicity, d_eval, DisjointnessSpec, MonotonicityReport};
use crate::domain::{
    AspectRule, Domain, Guard, Literal, ParamSort, Pattern, RuleTarget, TemplateElem, Term, VarSorts, NEG_LOCAL,
};
use crate::engine::{applicable, aspect_of_action, aspect_of_fluent, effects_of, preconditions_hold, progress};
use crate::error::EngineError;
use crate::guard::{self, Binding, Valuation};
use crate::state::WorldState;

/// `F[a,p]` under a guard: whenever the guard holds in `s`, `p` has the same
/// value in `s` and `do(a,s)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FrameAxiom {
    pub action: GroundAction,
    pub fluent: GroundFluent,
    pub guard: Guard,
    /// Sorts of the variables left in negated guard literals.
    #[serde(skip)]
    pub vars: VarSorts,
}

impl fmt::Display for FrameAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "frame {} {}", self.action, self.fluent)?;
        if !self.guard.is_empty() {
            write!(f, " if {}", self.guard)?;
        }
        Ok(())
    }
}

/// A frame axiom over variables, read off a pair of aspect rules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchematicAxiom {
    pub action: Pattern,
    pub fluent: Pattern,
    pub guard: Guard,
}

impl fmt::Display for SchematicAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "frame {} {}", self.action, self.fluent)?;
        if !self.guard.is_empty() {
            write!(f, " if {}", self.guard)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EconomyReport {
    pub fluent_aspect: AspectPath,
    pub action_aspect: AspectPath,
    pub m: usize,
    pub n: usize,
    pub derived_frame_axioms: usize,
    pub source_axioms: usize,
}

impl EconomyReport {
    pub fn new(fluent_aspect: AspectPath, action_aspect: AspectPath, m: usize, n: usize) -> Self {
        EconomyReport { fluent_aspect, action_aspect, m, n, derived_frame_axioms: m * n, source_axioms: m + n + 2 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FrameDerivation {
    pub schematic: Vec<SchematicAxiom>,
    pub axioms: Vec<FrameAxiom>,
    pub economy: Vec<EconomyReport>,
    pub errors: Vec<String>,
}

/// One way a rule can assign an aspect to a ground term: the path and the
/// guard instance that selects it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AspectOption {
    pub path: AspectPath,
    pub guard: Guard,
    pub vars: VarSorts,
}

/// All guard instances under which rules assign an aspect to `name(args)`.
/// Variables of positive literals are enumerated; builtins are decided;
/// negated literals are kept with their local variables.
pub fn aspect_options(
    domain: &Domain,
    target: RuleTarget,
    name: &str,
    args: &[Value],
) -> Result<Vec<AspectOption>, EngineError> {
    let mut out = Vec::new();
    let mut any_rule = false;
    for (_, rule) in domain.aspect_rules_for(target, name) {
        let Some(b0) = rule.head.match_args(args, &Binding::new()) else { continue };
        any_rule = true;
        for b in positive_bindings(domain, rule, &b0) {
            let mut lits = Vec::new();
            let mut ok = true;
            for lit in rule.guard.literals() {
                match lit {
                    Literal::Holds { negated: false, atom } => match atom.ground_fluent(&b) {
                        Some(p) if domain.fluent_fits(&p) => lits.push(Literal::holds(atom.substitute(&b))),
                        _ => ok = false,
                    },
                    Literal::Holds { negated: true, atom } => lits.push(Literal::not_holds(atom.substitute(&b))),
                    builtin => ok &= builtin.eval_builtin(&b).unwrap_or(false),
                }
            }
            if !ok {
                continue;
            }
            if let Some(path) = rule.aspect.instantiate(&b) {
                out.push(AspectOption { path, guard: Guard(lits), vars: rule.vars.clone() });
            }
        }
    }
    if !any_rule {
        return Err(EngineError::MissingAspect(format!(
            "{name}({})",
            args.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
        )));
    }
    Ok(out)
}

fn positive_bindings(domain: &Domain, rule: &AspectRule, b0: &Binding) -> Vec<Binding> {
    let mut out = vec![b0.clone()];
    for lit in rule.guard.literals() {
        if let Literal::Holds { negated: false, atom } = lit {
            out = out.iter().flat_map(|b| guard::extensions(domain, atom, &rule.vars, b)).collect();
        }
    }
    out
}

/// A ground guard instance that is not contradictory on its face.
fn consistent(guard: &Guard) -> bool {
    let lits = guard.literals();
    lits.iter().all(|pos| match pos {
        Literal::Holds { negated: false, atom: p } => {
            let args: Option<Vec<Value>> = p.args.iter().map(|t| match t {
                Term::Const(c) => Some(c.clone()),
                Term::Var(_) => None,
            }).collect();
            let Some(args) = args else { return true };
            !lits.iter().any(|neg| match neg {
                Literal::Holds { negated: true, atom: n } => {
                    n.name == p.name && n.match_args(&args, &Binding::new()).is_some()
                }
                _ => false,
            })
        }
        _ => true,
    })
}

/// Derives frame axioms for every ground action/fluent pair whose aspects
/// satisfy `d` under some consistent combination of guard instances.
pub fn derive_frame_axioms(domain: &Domain) -> FrameDerivation {
    let mut out = FrameDerivation { schematic: schematic_axioms(domain), ..Default::default() };
    let mut act_opts = Vec::new();
    let mut actions_by_aspect: BTreeMap<AspectPath, BTreeSet<GroundAction>> = BTreeMap::new();
    for a in domain.ground_actions() {
        match aspect_options(domain, RuleTarget::Action, &a.name, &a.args) {
            Ok(opts) => {
                for o in &opts {
                    actions_by_aspect.entry(o.path.clone()).or_default().insert(a.clone());
                }
                act_opts.push((a, opts));
            }
            Err(e) => out.errors.push(e.to_string()),
        }
    }
    let mut fluents_by_aspect: BTreeMap<AspectPath, BTreeSet<GroundFluent>> = BTreeMap::new();
    let mut errors = BTreeSet::new();
    for p in domain.ground_fluents() {
        let popts = match aspect_options(domain, RuleTarget::Fluent, &p.name, &p.args) {
            Ok(o) => o,
            Err(e) => {
                out.errors.push(e.to_string());
                continue;
            }
        };
        for o in &popts {
            fluents_by_aspect.entry(o.path.clone()).or_default().insert(p.clone());
        }
        for (a, aopts) in &act_opts {
            for po in &popts {
                for ao in aopts {
                    let guard = po.guard.and(&ao.guard);
                    if !consistent(&guard) {
                        continue;
                    }
                    match d_eval(&domain.disjointness, &po.path, &ao.path) {
                        Ok(true) => {
                            let mut vars = ao.vars.clone();
                            for (k, v) in &po.vars {
                                vars.entry(k.clone()).or_insert_with(|| v.clone());
                            }
                            out.axioms.push(FrameAxiom { action: a.clone(), fluent: p.clone(), guard, vars })
                        }
                        Ok(false) => {}
                        Err(e) => {
                            errors.insert(e.to_string());
                        }
                    }
                }
            }
        }
    }
    out.axioms.sort();
    out.axioms.dedup();
    for (alpha, fls) in &fluents_by_aspect {
        for (beta, acts) in &actions_by_aspect {
            if let Ok(true) = d_eval(&domain.disjointness, alpha, beta) {
                out.economy.push(EconomyReport::new(alpha.clone(), beta.clone(), fls.len(), acts.len()));
            }
        }
    }
    out.errors.extend(errors);
    out
}

const NAME_POOL: &[&str] = &["w", "v", "u", "t", "s", "r", "q", "p", "o", "n", "m", "k", "j", "i", "h", "g"];

fn rule_var_order(rule: &AspectRule) -> Vec<String> {
    let mut order: Vec<String> = Vec::new();
    let mut add = |v: &str| {
        if !order.iter().any(|o| o == v) {
            order.push(v.to_string());
        }
    };
    rule.head.vars().for_each(&mut add);
    for l in rule.guard.literals() {
        l.terms().into_iter().filter_map(Term::as_var).for_each(&mut add);
    }
    rule.aspect.vars().for_each(&mut add);
    order
}

fn term_is_set(t: &Term, sorts: &VarSorts) -> bool {
    match t {
        Term::Const(Value::Set(_)) => true,
        Term::Const(Value::Obj(_)) => false,
        Term::Var(v) => Domain::var_sort(sorts, v).is_some_and(ParamSort::is_set),
    }
}

/// Atoms a template term can denote.
fn term_atoms<'a>(domain: &'a Domain, t: &'a Term, sorts: &VarSorts) -> BTreeSet<&'a str> {
    match t {
        Term::Const(v) => v.members(),
        Term::Var(v) => Domain::var_sort(sorts, v)
            .and_then(|s| domain.sorts.iter().find(|(n, _)| n == s.sort_name()))
            .map(|(_, objs)| objs.iter().map(String::as_str).collect())
            .unwrap_or_default(),
    }
}

/// Literals stating that two template elements are disjoint; `None` when
/// they cannot be. Literals that hold for every value of their sorts are
/// dropped.
fn disjoint_literals(domain: &Domain, e1: &TemplateElem, e2: &TemplateElem, sorts: &VarSorts) -> Option<Vec<Literal>> {
    let mut lits = Vec::new();
    for u in e1.items() {
        for v in e2.items() {
            if let (Term::Const(x), Term::Const(y)) = (u, v) {
                if !x.members().is_disjoint(&y.members()) {
                    return None;
                }
                continue;
            }
            if term_atoms(domain, u, sorts).is_disjoint(&term_atoms(domain, v, sorts)) {
                continue;
            }
            let lit = match (term_is_set(u, sorts), term_is_set(v, sorts)) {
                (false, false) => Literal::Neq(u.clone(), v.clone()),
                (false, true) => Literal::NotIn(u.clone(), v.clone()),
                (true, false) => Literal::NotIn(v.clone(), u.clone()),
                (true, true) => Literal::Disjoint(u.clone(), v.clone()),
            };
            if let Literal::Neq(a, b) = &lit {
                if a == b {
                    return None;
                }
            }
            if !lits.contains(&lit) {
                lits.push(lit);
            }
        }
    }
    Some(lits)
}

/// Rule-level frame axioms for position-wise specifications (simple and
/// seq-diff): one axiom per fluent rule, action rule and position at which
/// the two paths may differ.
pub fn schematic_axioms(domain: &Domain) -> Vec<SchematicAxiom> {
    let simple = match domain.disjointness {
        DisjointnessSpec::SimpleInequality => true,
        DisjointnessSpec::SeqExistsDiff => false,
        _ => return Vec::new(),
    };
    let mut out = Vec::new();
    let fluent_rules = domain.aspect_rules.iter().filter(|r| r.target == RuleTarget::Fluent);
    for rf in fluent_rules {
        for ra in domain.aspect_rules.iter().filter(|r| r.target == RuleTarget::Action) {
            let taken: BTreeSet<String> = rule_var_order(ra).into_iter().collect();
            let mut pool = NAME_POOL.iter().map(|s| s.to_string()).chain((1..).map(|i| format!("w{i}")));
            let mut map = BTreeMap::new();
            for v in rule_var_order(rf).into_iter().rev() {
                let fresh = pool.by_ref().find(|c| !taken.contains(c)).expect("unbounded pool");
                map.insert(v, fresh);
            }
            let fluent = rf.head.rename(&map);
            let tf = rf.aspect.rename(&map);
            let gf = rf.guard.rename(&map);
            let mut sorts: VarSorts = ra.vars.clone();
            for (v, s) in &rf.vars {
                let bare = v.trim_start_matches(NEG_LOCAL);
                if let Some(new) = map.get(bare) {
                    let key = if v.starts_with(NEG_LOCAL) { format!("{NEG_LOCAL}{new}") } else { new.clone() };
                    sorts.insert(key, s.clone());
                }
            }
            if simple && (tf.0.len() != 1 || ra.aspect.0.len() != 1) {
                continue;
            }
            let per_position: Vec<Vec<Literal>> = tf
                .0
                .iter()
                .zip(&ra.aspect.0)
                .filter_map(|(ef, ea)| disjoint_literals(domain, ef, ea, &sorts))
                .collect();
            // a position that always differs makes the others redundant
            let chosen: Vec<Vec<Literal>> = match per_position.iter().find(|l| l.is_empty()) {
                Some(_) => vec![Vec::new()],
                None => per_position,
            };
            for lits in chosen {
                let guard = Guard(lits).and(&gf).and(&ra.guard);
                out.push(SchematicAxiom { action: ra.head.clone(), fluent: fluent.clone(), guard });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoundnessViolation {
    pub action: GroundAction,
    pub fluent: GroundFluent,
    pub fluent_aspect: AspectPath,
    pub action_aspect: AspectPath,
    /// Fluents true in the offending state.
    pub state: Vec<GroundFluent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletenessGap {
    pub action: GroundAction,
    pub fluent: GroundFluent,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    pub mode: String,
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<SoundnessViolation>,
    pub completeness_gaps: Vec<CompletenessGap>,
    pub monotonicity: Option<MonotonicityReport>,
}

impl SoundnessReport {
    pub fn is_sound(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
pub enum SoundnessMode<'a> {
    /// Every truth assignment to the atoms an effect depends on, for effects
    /// with at most `max_atoms` such atoms.
    Exhaustive { max_atoms: usize },
    /// Every state reachable from `inits` in at most `depth` actions.
    Reachable { inits: &'a [WorldState], depth: usize },
}

fn guard_atoms(domain: &Domain, guard: &Guard, vars: &VarSorts, b: &Binding, out: &mut BTreeSet<GroundFluent>) {
    for lit in guard.literals() {
        if let Literal::Holds { atom, .. } = lit {
            for e in guard::extensions(domain, atom, vars, b) {
                if let Some(p) = atom.ground_fluent(&e) {
                    if domain.fluent_fits(&p) {
                        out.insert(p);
                    }
                }
            }
        }
    }
}

fn rule_atoms(domain: &Domain, target: RuleTarget, name: &str, args: &[Value], out: &mut BTreeSet<GroundFluent>) {
    for (_, r) in domain.aspect_rules_for(target, name) {
        if let Some(b) = r.head.match_args(args, &Binding::new()) {
            guard_atoms(domain, &r.guard, &r.vars, &b, out);
        }
    }
}

/// Checks that no effect changes a fluent the acting action is declared
/// disjoint from.
pub fn check_aspect_soundness(domain: &Domain, mode: SoundnessMode) -> SoundnessReport {
    let mut report = match mode {
        SoundnessMode::Exhaustive { max_atoms } => exhaustive_soundness(domain, max_atoms),
        SoundnessMode::Reachable { inits, depth } => reachable_soundness(domain, inits, depth),
    };
    report.completeness_gaps = completeness_gaps(domain);
    report.monotonicity = monotonicity_lint(domain);
    report
}

fn exhaustive_soundness(domain: &Domain, max_atoms: usize) -> SoundnessReport {
    let mut report = SoundnessReport { mode: "exhaustive".into(), ..Default::default() };
    for a in domain.ground_actions() {
        let mut candidates: BTreeMap<GroundFluent, Vec<(usize, Binding)>> = BTreeMap::new();
        for (i, e) in domain.effects.iter().enumerate() {
            if e.action.name != a.name {
                continue;
            }
            let Some(b0) = e.action.match_args(&a.args, &Binding::new()) else { continue };
            for b in guard::extensions(domain, &e.fluent, &e.vars, &b0) {
                if let Some(p) = e.fluent.ground_fluent(&b).filter(|p| domain.fluent_fits(p)) {
                    candidates.entry(p).or_default().push((i, b));
                }
            }
        }
        for (p, rules) in candidates {
            let mut atoms = BTreeSet::from([p.clone()]);
            for pre in domain.preconditions.iter().filter(|x| x.action.name == a.name) {
                if let Some(b) = pre.action.match_args(&a.args, &Binding::new()) {
                    guard_atoms(domain, &pre.guard, &pre.vars, &b, &mut atoms);
                }
            }
            rule_atoms(domain, RuleTarget::Action, &a.name, &a.args, &mut atoms);
            rule_atoms(domain, RuleTarget::Fluent, &p.name, &p.args, &mut atoms);
            for (i, b) in &rules {
                let e = &domain.effects[*i];
                guard_atoms(domain, &e.guard, &e.vars, b, &mut atoms);
            }
            if atoms.len() > max_atoms {
                report.skipped += 1;
                continue;
            }
            let atoms: Vec<GroundFluent> = atoms.into_iter().collect();
            for mask in 0u64..(1u64 << atoms.len()) {
                report.checked += 1;
                let val: BTreeSet<GroundFluent> = atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, f)| f.clone())
                    .collect();
                if let Some(v) = violation_in(domain, &val, &a, &p) {
                    report.violations.push(v);
                    break;
                }
            }
        }
    }
    report
}

fn violation_in(domain: &Domain, val: &BTreeSet<GroundFluent>, a: &GroundAction, p: &GroundFluent) -> Option<SoundnessViolation> {
    let beta = aspect_of_action(domain, val, a).ok()?;
    let alpha = aspect_of_fluent(domain, val, p).ok()?;
    if !preconditions_hold(domain, val, a) {
        return None;
    }
    let before = val.contains(p);
    let after = effects_of(domain, val, a).apply(p, Some(before));
    if after == Some(before) || !d_eval(&domain.disjointness, &alpha, &beta).unwrap_or(false) {
        return None;
    }
    Some(SoundnessViolation {
        action: a.clone(),
        fluent: p.clone(),
        fluent_aspect: alpha,
        action_aspect: beta,
        state: val.iter().cloned().collect(),
    })
}

/// Distinct states reachable from `inits` within `depth` actions.
pub fn reachable_states(domain: &Domain, inits: &[WorldState], depth: usize) -> Vec<WorldState> {
    let key = |s: &WorldState| (s.scope(), s.true_fluents());
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for s in inits {
        if seen.insert(key(s)) {
            queue.push_back((s.clone(), 0));
            out.push(s.clone());
        }
    }
    let actions = domain.ground_actions();
    while let Some((s, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for a in &actions {
            if let Ok(next) = progress(domain, &s, a) {
                if seen.insert(key(&next)) {
                    out.push(next.clone());
                    queue.push_back((next, d + 1));
                }
            }
        }
    }
    out
}

fn reachable_soundness(domain: &Domain, inits: &[WorldState], depth: usize) -> SoundnessReport {
    let mut report = SoundnessReport { mode: "reachable".into(), ..Default::default() };
    let fluents = domain.ground_fluents();
    for s in reachable_states(domain, inits, depth) {
        for a in domain.ground_actions() {
            if !applicable(domain, &s, &a) {
                continue;
            }
            let Ok(next) = progress(domain, &s, &a) else { continue };
            let Ok(beta) = aspect_of_action(domain, &s, &a) else { continue };
            for p in &fluents {
                let Ok(alpha) = aspect_of_fluent(domain, &s, p) else { continue };
                report.checked += 1;
                if d_eval(&domain.disjointness, &alpha, &beta).unwrap_or(false) && s.value(p) != next.value(p) {
                    report.violations.push(SoundnessViolation {
                        action: a.clone(),
                        fluent: p.clone(),
                        fluent_aspect: alpha,
                        action_aspect: beta.clone(),
                        state: s.true_fluents().into_iter().collect(),
                    });
                }
            }
        }
    }
    report
}

/// Does some effect rule of `a` name `p`?
pub fn effect_mentions(domain: &Domain, a: &GroundAction, p: &GroundFluent) -> bool {
    domain.effects.iter().any(|e| {
        e.action.name == a.name
            && e.fluent.name == p.name
            && e.action
                .match_args(&a.args, &Binding::new())
                .and_then(|b| e.fluent.match_args(&p.args, &b))
                .is_some()
    })
}

/// Explicit frame declarations matching `(a, p)` whose guard holds in `val`.
pub fn frame_decl_applies(domain: &Domain, val: &dyn Valuation, a: &GroundAction, p: &GroundFluent) -> bool {
    domain.frames.iter().any(|f| {
        f.action.name == a.name
            && f.fluent.name == p.name
            && f.action
                .match_args(&a.args, &Binding::new())
                .and_then(|b| f.fluent.match_args(&p.args, &b))
                .is_some_and(|b| guard::satisfiable(domain, &f.guard, &f.vars, &b, val))
    })
}

fn frame_decl_mentions(domain: &Domain, a: &GroundAction, p: &GroundFluent) -> bool {
    domain.frames.iter().any(|f| {
        f.action.name == a.name
            && f.fluent.name == p.name
            && f.action
                .match_args(&a.args, &Binding::new())
                .and_then(|b| f.fluent.match_args(&p.args, &b))
                .is_some()
    })
}

/// Pairs that may intersect but for which neither an effect rule nor a frame
/// declaration says what happens; regression cannot decide them.
pub fn completeness_gaps(domain: &Domain) -> Vec<CompletenessGap> {
    let mut gaps = Vec::new();
    let act_opts: Vec<(GroundAction, Vec<AspectOption>)> = domain
        .ground_actions()
        .into_iter()
        .filter_map(|a| aspect_options(domain, RuleTarget::Action, &a.name, &a.args).ok().map(|o| (a, o)))
        .collect();
    for p in domain.ground_fluents() {
        let Ok(popts) = aspect_options(domain, RuleTarget::Fluent, &p.name, &p.args) else { continue };
        for (a, aopts) in &act_opts {
            if effect_mentions(domain, a, &p) || frame_decl_mentions(domain, a, &p) {
                continue;
            }
            let may_intersect = popts.iter().any(|po| {
                aopts.iter().any(|ao| {
                    consistent(&po.guard.and(&ao.guard)) && !d_eval(&domain.disjointness, &po.path, &ao.path).unwrap_or(false)
                })
            });
            if may_intersect {
                gaps.push(CompletenessGap { action: a.clone(), fluent: p.clone() });
            }
        }
    }
    gaps
}

fn monotonicity_lint(domain: &Domain) -> Option<MonotonicityReport> {
    let collect = |target: RuleTarget, names: Vec<(String, Vec<Value>)>| -> BTreeSet<AspectPath> {
        names
            .into_iter()
            .filter_map(|(n, args)| aspect_options(domain, target, &n, &args).ok())
            .flatten()
            .map(|o| o.path)
            .collect()
    };
    let alphas = collect(RuleTarget::Fluent, domain.ground_fluents().into_iter().map(|p| (p.name, p.args)).collect());
    let betas = collect(RuleTarget::Action, domain.ground_actions().into_iter().map(|a| (a.name, a.args)).collect());
    let samples: Vec<(AspectPath, AspectPath)> =
        alphas.iter().flat_map(|a| betas.iter().map(move |b| (a.clone(), b.clone()))).collect();
    check_monotonicity(&domain.disjointness, &samples).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn economy_arithmetic() {
        let r = EconomyReport::new(AspectPath::atoms(["alpha"]), AspectPath::atoms(["beta"]), 5, 7);
        assert_eq!((r.derived_frame_axioms, r.source_axioms), (35, 14));
    }

    #[test]
    fn contradictory_guard_instances_rejected() {
        let on = |a: &str, b: Term| Pattern::new("on", vec![Term::Const(Value::obj(a)), b]);
        let g = Guard(vec![
            Literal::holds(on("a", Term::Const(Value::obj("b")))),
            Literal::not_holds(on("a", Term::var("z"))),
        ]);
        assert!(!consistent(&g));
        let g = Guard(vec![
            Literal::holds(on("a", Term::Const(Value::obj("b")))),
            Literal::not_holds(on("c", Term::var("z"))),
        ]);
        assert!(consistent(&g));
    }
}
