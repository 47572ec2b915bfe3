//! Domain descriptions: schemas, rule patterns, guards and the load-time
//! checks that make aspect assignment well defined.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::aspect::{AspectElem, AspectPath, GroundAction, GroundFluent, Value};
use crate::disjoint::DisjointnessSpec;
use crate::error::EngineError;
use crate::guard::{self, Binding, Valuation};

/// Largest sort that may be used as a set-valued parameter.
pub const MAX_SET_SORT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamSort {
    Obj(String),
    SetOf(String),
}

impl ParamSort {
    pub fn sort_name(&self) -> &str {
        match self {
            ParamSort::Obj(s) | ParamSort::SetOf(s) => s,
        }
    }

    pub fn is_set(&self) -> bool {
        matches!(self, ParamSort::SetOf(_))
    }
}

impl fmt::Display for ParamSort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamSort::Obj(s) => f.write_str(s),
            ParamSort::SetOf(s) => write!(f, "{{{s}}}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub params: Vec<ParamSort>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(Value),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }

    pub fn eval<'a>(&'a self, binding: &'a Binding) -> Option<&'a Value> {
        match self {
            Term::Var(v) => binding.get(v),
            Term::Const(c) => Some(c),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

/// `name(arg, ...)` where each argument is a variable or a constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    pub name: String,
    pub args: Vec<Term>,
}

impl Pattern {
    pub fn new(name: impl Into<String>, args: Vec<Term>) -> Self {
        Pattern { name: name.into(), args }
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(Term::as_var)
    }

    /// Extends `binding` so that the pattern matches `args`.
    pub fn match_args(&self, args: &[Value], binding: &Binding) -> Option<Binding> {
        if args.len() != self.args.len() {
            return None;
        }
        let mut out = binding.clone();
        for (t, v) in self.args.iter().zip(args) {
            match t {
                Term::Const(c) => {
                    if c != v {
                        return None;
                    }
                }
                Term::Var(x) => match out.get(x) {
                    Some(bound) if bound != v => return None,
                    Some(_) => {}
                    None => {
                        out.insert(x.clone(), v.clone());
                    }
                },
            }
        }
        Some(out)
    }

    /// Ground arguments under `binding`; `None` if a variable is unbound.
    pub fn ground_args(&self, binding: &Binding) -> Option<Vec<Value>> {
        self.args.iter().map(|t| t.eval(binding).cloned()).collect()
    }

    pub fn ground_fluent(&self, binding: &Binding) -> Option<GroundFluent> {
        Some(GroundFluent::new(self.name.clone(), self.ground_args(binding)?))
    }

    pub fn ground_action(&self, binding: &Binding) -> Option<GroundAction> {
        Some(GroundAction::new(self.name.clone(), self.ground_args(binding)?))
    }

    /// Replaces bound variables by their values.
    pub fn substitute(&self, binding: &Binding) -> Pattern {
        Pattern {
            name: self.name.clone(),
            args: self
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => binding.get(v).map(|c| Term::Const(c.clone())).unwrap_or_else(|| t.clone()),
                    c => c.clone(),
                })
                .collect(),
        }
    }

    pub fn rename(&self, map: &BTreeMap<String, String>) -> Pattern {
        Pattern {
            name: self.name.clone(),
            args: self.args.iter().map(|t| rename_term(t, map)).collect(),
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

pub(crate) fn rename_term(t: &Term, map: &BTreeMap<String, String>) -> Term {
    match t {
        Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
        c => c.clone(),
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A guard literal. Variables that first occur inside a negated atom are
/// existential within the negation: `not on(x,z)` reads as "x is on nothing".
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Holds { negated: bool, atom: Pattern },
    Eq(Term, Term),
    Neq(Term, Term),
    In(Term, Term),
    NotIn(Term, Term),
    Disjoint(Term, Term),
}

impl Literal {
    pub fn holds(atom: Pattern) -> Self {
        Literal::Holds { negated: false, atom }
    }

    pub fn not_holds(atom: Pattern) -> Self {
        Literal::Holds { negated: true, atom }
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Literal::Holds { atom, .. } => atom.args.iter().collect(),
            Literal::Eq(a, b)
            | Literal::Neq(a, b)
            | Literal::In(a, b)
            | Literal::NotIn(a, b)
            | Literal::Disjoint(a, b) => vec![a, b],
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, Literal::Holds { .. })
    }

    pub fn rename(&self, map: &BTreeMap<String, String>) -> Literal {
        let r = |t: &Term| rename_term(t, map);
        match self {
            Literal::Holds { negated, atom } => Literal::Holds {
                negated: *negated,
                atom: atom.rename(map),
            },
            Literal::Eq(a, b) => Literal::Eq(r(a), r(b)),
            Literal::Neq(a, b) => Literal::Neq(r(a), r(b)),
            Literal::In(a, b) => Literal::In(r(a), r(b)),
            Literal::NotIn(a, b) => Literal::NotIn(r(a), r(b)),
            Literal::Disjoint(a, b) => Literal::Disjoint(r(a), r(b)),
        }
    }

    /// Truth of a builtin literal on bound values.
    pub fn eval_builtin(&self, binding: &Binding) -> Option<bool> {
        fn pair<'a>(a: &'a Term, b: &'a Term, binding: &'a Binding) -> Option<(&'a Value, &'a Value)> {
            Some((a.eval(binding)?, b.eval(binding)?))
        }
        Some(match self {
            Literal::Holds { .. } => return None,
            Literal::Eq(a, b) => {
                let (x, y) = pair(a, b, binding)?;
                x == y
            }
            Literal::Neq(a, b) => {
                let (x, y) = pair(a, b, binding)?;
                x != y
            }
            Literal::In(a, b) => {
                let (x, y) = pair(a, b, binding)?;
                x.members().is_subset(&y.members())
            }
            Literal::NotIn(a, b) | Literal::Disjoint(a, b) => {
                let (x, y) = pair(a, b, binding)?;
                x.members().is_disjoint(&y.members())
            }
        })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Holds { negated: false, atom } => write!(f, "{atom}"),
            Literal::Holds { negated: true, atom } => write!(f, "not {atom}"),
            Literal::Eq(a, b) => write!(f, "{a} = {b}"),
            Literal::Neq(a, b) => write!(f, "{a} != {b}"),
            Literal::In(a, b) => write!(f, "{a} in {b}"),
            Literal::NotIn(a, b) => write!(f, "{a} notin {b}"),
            Literal::Disjoint(a, b) => write!(f, "{a} disjoint {b}"),
        }
    }
}

/// A conjunction of literals; empty means "always".
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Guard(pub Vec<Literal>);

impl Guard {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn rename(&self, map: &BTreeMap<String, String>) -> Guard {
        Guard(self.0.iter().map(|l| l.rename(map)).collect())
    }

    pub fn and(&self, other: &Guard) -> Guard {
        let mut lits = self.0.clone();
        for l in &other.0 {
            if !lits.contains(l) {
                lits.push(l.clone());
            }
        }
        Guard(lits)
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Serialize for Guard {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TemplateElem {
    Atom(Term),
    Set(Vec<Term>),
}

impl TemplateElem {
    pub fn items(&self) -> &[Term] {
        match self {
            TemplateElem::Atom(t) => std::slice::from_ref(t),
            TemplateElem::Set(ts) => ts,
        }
    }

    fn rename(&self, map: &BTreeMap<String, String>) -> TemplateElem {
        match self {
            TemplateElem::Atom(t) => TemplateElem::Atom(rename_term(t, map)),
            TemplateElem::Set(ts) => TemplateElem::Set(ts.iter().map(|t| rename_term(t, map)).collect()),
        }
    }
}

/// Aspect path with variables, instantiated per ground fluent or action.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AspectTemplate(pub Vec<TemplateElem>);

impl AspectTemplate {
    pub fn instantiate(&self, binding: &Binding) -> Option<AspectPath> {
        let mut path = AspectPath::root();
        for elem in &self.0 {
            path.push(match elem {
                TemplateElem::Atom(t) => match t.eval(binding)? {
                    Value::Obj(o) => AspectElem::atom(o.clone()),
                    Value::Set(s) => AspectElem::set(s.iter().cloned())?,
                },
                TemplateElem::Set(items) => {
                    let mut members = BTreeSet::new();
                    for t in items {
                        members.extend(t.eval(binding)?.members().into_iter().map(str::to_string));
                    }
                    AspectElem::set(members)?
                }
            });
        }
        Some(path)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.0.iter().flat_map(|e| e.items().iter().filter_map(Term::as_var))
    }

    pub fn rename(&self, map: &BTreeMap<String, String>) -> AspectTemplate {
        AspectTemplate(self.0.iter().map(|e| e.rename(map)).collect())
    }
}

impl fmt::Display for AspectTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match e {
                TemplateElem::Atom(t) => write!(f, "{t}")?,
                TemplateElem::Set(ts) => {
                    f.write_str("{")?;
                    for (j, t) in ts.iter().enumerate() {
                        if j > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{t}")?;
                    }
                    f.write_str("}")?;
                }
            }
        }
        f.write_str(")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleTarget {
    Fluent,
    Action,
}

pub type VarSorts = BTreeMap<String, ParamSort>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AspectRule {
    pub target: RuleTarget,
    pub head: Pattern,
    pub aspect: AspectTemplate,
    pub guard: Guard,
    pub vars: VarSorts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EffectKind {
    Add,
    Del,
}

impl fmt::Display for EffectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EffectKind::Add => "add",
            EffectKind::Del => "del",
        })
    }
}

/// Conditional add/delete effect. Fluent variables bound by neither the
/// action nor the guard range over their sort.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectRule {
    pub action: Pattern,
    pub kind: EffectKind,
    pub fluent: Pattern,
    pub guard: Guard,
    pub vars: VarSorts,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Precondition {
    pub action: Pattern,
    pub guard: Guard,
    pub vars: VarSorts,
}

/// Explicit frame axiom for an intersecting action/fluent pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameDecl {
    pub action: Pattern,
    pub fluent: Pattern,
    pub guard: Guard,
    pub vars: VarSorts,
}

/// Which declaration a load issue refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeclRef {
    Header,
    Sort(usize),
    Fluent(usize),
    Action(usize),
    Aspect(usize),
    Effect(usize),
    Pre(usize),
    Frame(usize),
    Disjoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadIssue {
    pub at: DeclRef,
    pub message: String,
    pub hint: Option<String>,
}

impl LoadIssue {
    fn new(at: DeclRef, message: impl Into<String>) -> Self {
        LoadIssue { at, message: message.into(), hint: None }
    }

    fn hint(mut self, hint: impl Into<String>) -> Self {
        self.hint = Some(hint.into());
        self
    }
}

/// The declarations of a domain before load-time checking.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DomainParts {
    pub name: String,
    pub sorts: Vec<(String, Vec<String>)>,
    pub fluents: Vec<Schema>,
    pub actions: Vec<Schema>,
    pub aspect_rules: Vec<(RuleTarget, Pattern, AspectTemplate, Guard)>,
    pub effects: Vec<(Pattern, EffectKind, Pattern, Guard)>,
    pub preconditions: Vec<(Pattern, Guard)>,
    pub frames: Vec<(Pattern, Pattern, Guard)>,
    pub disjointness: Option<DisjointnessSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    pub sorts: Vec<(String, Vec<String>)>,
    pub fluents: Vec<Schema>,
    pub actions: Vec<Schema>,
    pub aspect_rules: Vec<AspectRule>,
    pub effects: Vec<EffectRule>,
    pub preconditions: Vec<Precondition>,
    pub frames: Vec<FrameDecl>,
    pub disjointness: DisjointnessSpec,
    universes: BTreeMap<ParamSort, Vec<Value>>,
}

impl Domain {
    /// Checks the declarations and builds the domain. All problems are
    /// reported together.
    pub fn assemble(parts: DomainParts) -> Result<Domain, Vec<LoadIssue>> {
        let mut issues = Vec::new();
        let DomainParts {
            name,
            sorts,
            fluents,
            actions,
            aspect_rules,
            effects,
            preconditions,
            frames,
            disjointness,
        } = parts;

        let mut seen_sorts = BTreeSet::new();
        for (i, (s, objs)) in sorts.iter().enumerate() {
            if !seen_sorts.insert(s.clone()) {
                issues.push(LoadIssue::new(DeclRef::Sort(i), format!("sort `{s}` declared twice")));
            }
            if objs.is_empty() {
                issues.push(LoadIssue::new(DeclRef::Sort(i), format!("sort `{s}` has no objects")));
            }
        }

        let mut universes = BTreeMap::new();
        let mut schema_names = BTreeMap::new();
        for (i, schema) in fluents.iter().enumerate() {
            if schema_names.insert(schema.name.clone(), RuleTarget::Fluent).is_some() {
                issues.push(LoadIssue::new(DeclRef::Fluent(i), format!("`{}` declared twice", schema.name)));
            }
        }
        for (i, schema) in actions.iter().enumerate() {
            if schema_names.insert(schema.name.clone(), RuleTarget::Action).is_some() {
                issues.push(LoadIssue::new(DeclRef::Action(i), format!("`{}` declared twice", schema.name)));
            }
        }
        let schema_decls = fluents
            .iter()
            .enumerate()
            .map(|(i, s)| (s, DeclRef::Fluent(i)))
            .chain(actions.iter().enumerate().map(|(i, s)| (s, DeclRef::Action(i))));
        for (schema, at) in schema_decls {
            for p in &schema.params {
                match sorts.iter().find(|(s, _)| s == p.sort_name()) {
                    None => issues.push(
                        LoadIssue::new(at, format!("unknown sort `{}` in `{}`", p.sort_name(), schema.name))
                            .hint("declare it with `objects <sort>: ...`"),
                    ),
                    Some((_, objs)) => {
                        let values = match p {
                            ParamSort::Obj(_) => objs.iter().cloned().map(Value::Obj).collect(),
                            ParamSort::SetOf(_) if objs.len() > MAX_SET_SORT => {
                                issues.push(LoadIssue::new(
                                    at,
                                    format!("set sort `{p}` has more than {MAX_SET_SORT} objects"),
                                ));
                                Vec::new()
                            }
                            ParamSort::SetOf(_) => nonempty_subsets(objs),
                        };
                        universes.insert(p.clone(), values);
                    }
                }
            }
        }

        let mut domain = Domain {
            name,
            sorts,
            fluents,
            actions,
            aspect_rules: Vec::new(),
            effects: Vec::new(),
            preconditions: Vec::new(),
            frames: Vec::new(),
            disjointness: disjointness.unwrap_or(DisjointnessSpec::SeqExistsDiff),
            universes,
        };
        if domain.fluents.is_empty() && domain.actions.is_empty() {
            issues.push(LoadIssue::new(DeclRef::Header, "domain declares no fluents or actions"));
        }

        for (i, (target, head, aspect, guard)) in aspect_rules.into_iter().enumerate() {
            let at = DeclRef::Aspect(i);
            let mut vars = VarSorts::new();
            domain.check_pattern(&head, Some(target), at, &mut vars, &mut issues);
            domain.check_guard(&guard, at, &mut vars, &mut issues);
            for v in aspect.vars() {
                if !vars.contains_key(v) {
                    issues.push(LoadIssue::new(at, format!("aspect variable `{v}` is not bound")));
                }
            }
            domain.aspect_rules.push(AspectRule { target, head, aspect, guard, vars });
        }
        for (i, (action, kind, fluent, guard)) in effects.into_iter().enumerate() {
            let at = DeclRef::Effect(i);
            let mut vars = VarSorts::new();
            domain.check_pattern(&action, Some(RuleTarget::Action), at, &mut vars, &mut issues);
            domain.check_pattern(&fluent, Some(RuleTarget::Fluent), at, &mut vars, &mut issues);
            domain.check_guard(&guard, at, &mut vars, &mut issues);
            domain.effects.push(EffectRule { action, kind, fluent, guard, vars });
        }
        for (i, (action, guard)) in preconditions.into_iter().enumerate() {
            let at = DeclRef::Pre(i);
            let mut vars = VarSorts::new();
            domain.check_pattern(&action, Some(RuleTarget::Action), at, &mut vars, &mut issues);
            domain.check_guard(&guard, at, &mut vars, &mut issues);
            domain.preconditions.push(Precondition { action, guard, vars });
        }
        for (i, (action, fluent, guard)) in frames.into_iter().enumerate() {
            let at = DeclRef::Frame(i);
            let mut vars = VarSorts::new();
            domain.check_pattern(&action, Some(RuleTarget::Action), at, &mut vars, &mut issues);
            domain.check_pattern(&fluent, Some(RuleTarget::Fluent), at, &mut vars, &mut issues);
            domain.check_guard(&guard, at, &mut vars, &mut issues);
            domain.frames.push(FrameDecl { action, fluent, guard, vars });
        }

        for (i, schema) in domain.fluents.iter().enumerate() {
            if !domain.aspect_rules.iter().any(|r| r.head.name == schema.name) {
                issues.push(
                    LoadIssue::new(DeclRef::Fluent(i), format!("fluent `{}` has no aspect rule", schema.name))
                        .hint(format!("add `aspect {}(...) (...)`", schema.name)),
                );
            }
        }
        for (i, schema) in domain.actions.iter().enumerate() {
            if !domain.aspect_rules.iter().any(|r| r.head.name == schema.name) {
                issues.push(
                    LoadIssue::new(DeclRef::Action(i), format!("action `{}` has no aspect rule", schema.name))
                        .hint(format!("add `aspect {}(...) (...)`", schema.name)),
                );
            }
        }
        for j in 0..domain.aspect_rules.len() {
            for i in 0..j {
                let (a, b) = (&domain.aspect_rules[i], &domain.aspect_rules[j]);
                if a.head.name == b.head.name && !guards_exclusive(a, b) {
                    issues.push(
                        LoadIssue::new(
                            DeclRef::Aspect(j),
                            format!(
                                "aspect rules for `{}` may both apply (overlaps rule {})",
                                a.head.name,
                                i + 1
                            ),
                        )
                        .hint("make the guards mutually exclusive, e.g. `if p(x)` and `if not p(x)`"),
                    );
                }
            }
        }

        if issues.is_empty() {
            Ok(domain)
        } else {
            Err(issues)
        }
    }

    fn check_pattern(
        &self,
        pat: &Pattern,
        expect: Option<RuleTarget>,
        at: DeclRef,
        vars: &mut VarSorts,
        issues: &mut Vec<LoadIssue>,
    ) {
        let Some((kind, schema)) = self.schema(&pat.name) else {
            issues.push(LoadIssue::new(at, format!("unknown fluent or action `{}`", pat.name)));
            return;
        };
        if let Some(expect) = expect {
            if expect != kind {
                let want = if expect == RuleTarget::Fluent { "fluent" } else { "action" };
                issues.push(LoadIssue::new(at, format!("`{}` is not a {want}", pat.name)));
                return;
            }
        }
        if schema.params.len() != pat.args.len() {
            issues.push(LoadIssue::new(
                at,
                format!(
                    "`{}` expects {} argument(s), got {}",
                    pat.name,
                    schema.params.len(),
                    pat.args.len()
                ),
            ));
            return;
        }
        for (t, sort) in pat.args.iter().zip(&schema.params) {
            match t {
                Term::Const(c) => {
                    if !self.universe(sort).contains(c) {
                        issues.push(LoadIssue::new(at, format!("`{c}` is not in sort `{sort}`")));
                    }
                }
                Term::Var(v) => match vars.get(v) {
                    Some(prev) if prev.is_set() != sort.is_set() => issues.push(LoadIssue::new(
                        at,
                        format!("variable `{v}` used both as an object and as a set"),
                    )),
                    Some(_) => {}
                    None => {
                        vars.insert(v.clone(), sort.clone());
                    }
                },
            }
        }
    }

    fn check_guard(&self, guard: &Guard, at: DeclRef, vars: &mut VarSorts, issues: &mut Vec<LoadIssue>) {
        for lit in guard.literals() {
            if let Literal::Holds { negated: false, atom } = lit {
                self.check_pattern(atom, Some(RuleTarget::Fluent), at, vars, issues);
            }
        }
        for lit in guard.literals() {
            match lit {
                Literal::Holds { negated: true, atom } => {
                    // variables first seen here stay local to the negation
                    let mut local = vars.clone();
                    self.check_pattern(atom, Some(RuleTarget::Fluent), at, &mut local, issues);
                    for (v, s) in local {
                        vars.entry(format!("{NEG_LOCAL}{v}")).or_insert(s);
                    }
                }
                Literal::Holds { .. } => {}
                builtin => {
                    for t in builtin.terms() {
                        if let Term::Var(v) = t {
                            if !vars.contains_key(v) {
                                issues.push(
                                    LoadIssue::new(at, format!("variable `{v}` in `{builtin}` is not bound"))
                                        .hint("bind it in the head or in a positive literal"),
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn schema(&self, name: &str) -> Option<(RuleTarget, &Schema)> {
        if let Some(s) = self.fluents.iter().find(|s| s.name == name) {
            return Some((RuleTarget::Fluent, s));
        }
        self.actions
            .iter()
            .find(|s| s.name == name)
            .map(|s| (RuleTarget::Action, s))
    }

    pub fn fluent_schema(&self, name: &str) -> Option<&Schema> {
        self.fluents.iter().find(|s| s.name == name)
    }

    pub fn action_schema(&self, name: &str) -> Option<&Schema> {
        self.actions.iter().find(|s| s.name == name)
    }

    pub fn universe(&self, sort: &ParamSort) -> &[Value] {
        self.universes.get(sort).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_object(&self, name: &str) -> bool {
        self.sorts.iter().any(|(_, objs)| objs.iter().any(|o| o == name))
    }

    /// Sort of a variable in a rule; negation-local variables are looked up
    /// under their internal name.
    pub(crate) fn var_sort<'a>(vars: &'a VarSorts, v: &str) -> Option<&'a ParamSort> {
        vars.get(v).or_else(|| vars.get(&format!("{NEG_LOCAL}{v}")))
    }

    fn args_fit(&self, schema: &Schema, args: &[Value]) -> bool {
        schema.params.len() == args.len()
            && schema.params.iter().zip(args).all(|(s, v)| self.universe(s).contains(v))
    }

    /// Arity and sort check for a ground fluent.
    pub fn check_fluent(&self, p: &GroundFluent) -> Result<(), EngineError> {
        let schema = self
            .fluent_schema(&p.name)
            .ok_or_else(|| EngineError::UnknownSchema(p.name.clone()))?;
        self.check_args(schema, &p.args)
    }

    pub fn check_action(&self, a: &GroundAction) -> Result<(), EngineError> {
        let schema = self
            .action_schema(&a.name)
            .ok_or_else(|| EngineError::UnknownSchema(a.name.clone()))?;
        self.check_args(schema, &a.args)
    }

    fn check_args(&self, schema: &Schema, args: &[Value]) -> Result<(), EngineError> {
        if schema.params.len() != args.len() {
            return Err(EngineError::Arity {
                name: schema.name.clone(),
                expected: schema.params.len(),
                got: args.len(),
            });
        }
        for (s, v) in schema.params.iter().zip(args) {
            if !self.universe(s).contains(v) {
                return Err(EngineError::Sort { name: schema.name.clone(), value: v.to_string() });
            }
        }
        Ok(())
    }

    pub fn fluent_fits(&self, p: &GroundFluent) -> bool {
        self.fluent_schema(&p.name).is_some_and(|s| self.args_fit(s, &p.args))
    }

    fn ground_all(&self, schema: &Schema) -> Vec<Vec<Value>> {
        let mut out: Vec<Vec<Value>> = vec![Vec::new()];
        for p in &schema.params {
            let values = self.universe(p);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |v| {
                        let mut next = prefix.clone();
                        next.push(v.clone());
                        next
                    })
                })
                .collect();
        }
        out
    }

    pub fn ground_fluents(&self) -> Vec<GroundFluent> {
        self.fluents
            .iter()
            .flat_map(|s| self.ground_all(s).into_iter().map(|args| GroundFluent::new(s.name.clone(), args)))
            .collect()
    }

    pub fn ground_actions(&self) -> Vec<GroundAction> {
        self.actions
            .iter()
            .flat_map(|s| self.ground_all(s).into_iter().map(|args| GroundAction::new(s.name.clone(), args)))
            .collect()
    }

    pub fn aspect_rules_for(&self, target: RuleTarget, name: &str) -> impl Iterator<Item = (usize, &AspectRule)> {
        let name = name.to_string();
        self.aspect_rules
            .iter()
            .enumerate()
            .filter(move |(_, r)| r.target == target && r.head.name == name)
    }

    /// Resolves the aspect of a ground fluent or action against `val`.
    pub fn resolve_aspect(
        &self,
        target: RuleTarget,
        name: &str,
        args: &[Value],
        val: &dyn Valuation,
    ) -> Result<ResolvedAspect, EngineError> {
        let term = format!(
            "{name}({})",
            args.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
        );
        let mut found: Vec<ResolvedAspect> = Vec::new();
        for (idx, rule) in self.aspect_rules_for(target, name) {
            let Some(b0) = rule.head.match_args(args, &Binding::new()) else {
                continue;
            };
            for b in guard::solve(self, &rule.guard, &rule.vars, &b0, val) {
                if let Some(path) = rule.aspect.instantiate(&b) {
                    if !found.iter().any(|f| f.path == path) {
                        found.push(ResolvedAspect { path, rule: idx, binding: b });
                    }
                }
            }
        }
        match found.len() {
            0 => Err(EngineError::MissingAspect(term)),
            1 => Ok(found.pop().expect("one candidate")),
            _ => Err(EngineError::AmbiguousAspect {
                term,
                candidates: found.into_iter().map(|f| f.path).collect(),
            }),
        }
    }

    /// The same domain with every sort restricted to `objects`.
    pub fn restrict_objects(&self, objects: &BTreeSet<String>) -> Result<Domain, Vec<LoadIssue>> {
        let mut parts = self.to_parts();
        for (_, objs) in parts.sorts.iter_mut() {
            objs.retain(|o| objects.contains(o));
        }
        Domain::assemble(parts)
    }

    pub fn to_parts(&self) -> DomainParts {
        DomainParts {
            name: self.name.clone(),
            sorts: self.sorts.clone(),
            fluents: self.fluents.clone(),
            actions: self.actions.clone(),
            aspect_rules: self
                .aspect_rules
                .iter()
                .map(|r| (r.target, r.head.clone(), r.aspect.clone(), r.guard.clone()))
                .collect(),
            effects: self
                .effects
                .iter()
                .map(|e| (e.action.clone(), e.kind, e.fluent.clone(), e.guard.clone()))
                .collect(),
            preconditions: self.preconditions.iter().map(|p| (p.action.clone(), p.guard.clone())).collect(),
            frames: self
                .frames
                .iter()
                .map(|f| (f.action.clone(), f.fluent.clone(), f.guard.clone()))
                .collect(),
            disjointness: Some(self.disjointness.clone()),
        }
    }
}

pub(crate) const NEG_LOCAL: &str = "~";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedAspect {
    pub path: AspectPath,
    pub rule: usize,
    pub binding: Binding,
}

fn nonempty_subsets(objs: &[String]) -> Vec<Value> {
    let n = objs.len();
    (1u32..(1 << n))
        .map(|mask| Value::Set((0..n).filter(|i| mask & (1 << i) != 0).map(|i| objs[i].clone()).collect()))
        .collect()
}

/// Conservative syntactic test that two aspect rules for one schema never
/// apply to the same ground term in the same state.
fn guards_exclusive(a: &AspectRule, b: &AspectRule) -> bool {
    // rename b apart
    let ren: BTreeMap<String, String> = b
        .vars
        .keys()
        .map(|v| v.trim_start_matches(NEG_LOCAL).to_string())
        .chain(b.guard.literals().iter().flat_map(|l| l.terms()).filter_map(|t| t.as_var().map(str::to_string)))
        .map(|v| (v.clone(), format!("{v}'")))
        .collect();
    let bh = b.head.rename(&ren);
    let bg = b.guard.rename(&ren);

    let mut subst: BTreeMap<String, Term> = BTreeMap::new();
    for (x, y) in a.head.args.iter().zip(&bh.args) {
        if !unify(x, y, &mut subst) {
            return true;
        }
    }
    let a_bound = bound_vars(&a.head, &a.guard);
    let b_bound = bound_vars(&bh, &bg);
    let apply = |t: &Term, subst: &BTreeMap<String, Term>| resolve(t, subst);

    let complementary = |pos: &Pattern, neg: &Pattern, neg_bound: &BTreeSet<String>| {
        pos.name == neg.name
            && pos.args.iter().zip(&neg.args).all(|(p, n)| match n {
                Term::Var(v) if !neg_bound.contains(v) => true,
                _ => apply(p, &subst) == apply(n, &subst),
            })
    };
    for la in a.guard.literals() {
        for lb in bg.literals() {
            let hit = match (la, lb) {
                (Literal::Holds { negated: false, atom: p }, Literal::Holds { negated: true, atom: n }) => {
                    complementary(p, n, &b_bound)
                }
                (Literal::Holds { negated: true, atom: n }, Literal::Holds { negated: false, atom: p }) => {
                    complementary(p, n, &a_bound)
                }
                (Literal::Eq(x1, y1), Literal::Neq(x2, y2))
                | (Literal::Neq(x1, y1), Literal::Eq(x2, y2))
                | (Literal::In(x1, y1), Literal::NotIn(x2, y2))
                | (Literal::NotIn(x1, y1), Literal::In(x2, y2)) => {
                    let (x1, y1, x2, y2) = (apply(x1, &subst), apply(y1, &subst), apply(x2, &subst), apply(y2, &subst));
                    let symmetric = matches!(la, Literal::Eq(..) | Literal::Neq(..));
                    (x1 == x2 && y1 == y2) || (symmetric && x1 == y2 && y1 == x2)
                }
                _ => false,
            };
            if hit {
                return true;
            }
        }
    }
    false
}

fn bound_vars(head: &Pattern, guard: &Guard) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = head.vars().map(str::to_string).collect();
    for l in guard.literals() {
        if let Literal::Holds { negated: false, atom } = l {
            out.extend(atom.vars().map(str::to_string));
        }
    }
    out
}

fn resolve(t: &Term, subst: &BTreeMap<String, Term>) -> Term {
    let mut cur = t.clone();
    while let Term::Var(v) = &cur {
        match subst.get(v) {
            Some(next) => cur = next.clone(),
            None => break,
        }
    }
    cur
}

fn unify(x: &Term, y: &Term, subst: &mut BTreeMap<String, Term>) -> bool {
    let (x, y) = (resolve(x, subst), resolve(y, subst));
    match (&x, &y) {
        _ if x == y => true,
        (Term::Var(v), other) | (other, Term::Var(v)) => {
            subst.insert(v.clone(), other.clone());
            true
        }
        _ => false,
    }
}
