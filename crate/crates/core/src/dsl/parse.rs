use std::collections::{BTreeMap, BTreeSet};

use super::lex::{lex_line, Cursor, Token};
use super::{ParseDiagnostic, Parsed, SourceSpan};
use crate::aspect::{AspectElem, AspectPath, GroundAction, GroundFluent, Value};
use crate::disjoint::{Commutation, DisjointnessSpec};
use crate::domain::{
    AspectTemplate, DeclRef, Domain, DomainParts, EffectKind, Guard, Literal, ParamSort, Pattern, RuleTarget, Schema,
    TemplateElem, Term,
};
use crate::error::EngineError;
use crate::state::WorldState;

struct Line {
    no: usize,
    len: usize,
    toks: Vec<Token>,
}

fn lex_all(file: &str, text: &str, diags: &mut Vec<ParseDiagnostic>) -> Vec<Line> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        match lex_line(file, i + 1, raw) {
            Ok(toks) if toks.is_empty() => {}
            Ok(toks) => lines.push(Line { no: i + 1, len: raw.chars().count(), toks }),
            Err(d) => diags.push(d),
        }
    }
    lines
}

const KEYWORDS: &str = "domain, objects, fluent, action, aspect, effect, pre, frame, disjoint";

/// Symbols known while parsing rules.
struct Ctx {
    objects: BTreeSet<String>,
    fluents: BTreeSet<String>,
    actions: BTreeSet<String>,
}

impl Ctx {
    fn term_from_ident(&self, name: &str) -> Term {
        if self.objects.contains(name) {
            Term::Const(Value::obj(name))
        } else {
            Term::Var(name.to_string())
        }
    }
}

fn parse_params(cur: &mut Cursor) -> Result<Vec<ParamSort>, ParseDiagnostic> {
    let mut params = Vec::new();
    if !cur.eat_sym("(") {
        return Ok(params);
    }
    if cur.eat_sym(")") {
        return Ok(params);
    }
    loop {
        if cur.eat_sym("{") {
            let s = cur.expect_ident("a sort name")?;
            cur.expect_sym("}")?;
            params.push(ParamSort::SetOf(s.text().to_string()));
        } else {
            let s = cur.expect_ident("a sort name")?;
            params.push(ParamSort::Obj(s.text().to_string()));
        }
        if cur.eat_sym(")") {
            return Ok(params);
        }
        cur.expect_sym(",")?;
    }
}

fn parse_set_const(cur: &mut Cursor, objects: Option<&BTreeSet<String>>) -> Result<BTreeSet<String>, ParseDiagnostic> {
    let mut members = BTreeSet::new();
    if cur.eat_sym("}") {
        return Err(cur.error("set constants must be nonempty"));
    }
    loop {
        let t = cur.expect_ident("an object name")?;
        if let Some(objects) = objects {
            if !objects.contains(t.text()) {
                return Err(ParseDiagnostic::error(cur.span_of(t), format!("`{}` is not a declared object", t.text()))
                    .with_hint("set constants may only list objects"));
            }
        }
        members.insert(t.text().to_string());
        if cur.eat_sym("}") {
            return Ok(members);
        }
        cur.expect_sym(",")?;
    }
}

fn parse_term(cur: &mut Cursor, ctx: &Ctx) -> Result<Term, ParseDiagnostic> {
    if cur.eat_sym("{") {
        return Ok(Term::Const(Value::Set(parse_set_const(cur, Some(&ctx.objects))?)));
    }
    let t = cur.expect_ident("a variable or object")?;
    Ok(ctx.term_from_ident(t.text()))
}

fn parse_pattern(cur: &mut Cursor, ctx: &Ctx) -> Result<Pattern, ParseDiagnostic> {
    let name = cur.expect_ident("a fluent or action name")?;
    let mut args = Vec::new();
    if cur.eat_sym("(") && !cur.eat_sym(")") {
        loop {
            args.push(parse_term(cur, ctx)?);
            if cur.eat_sym(")") {
                break;
            }
            cur.expect_sym(",")?;
        }
    }
    Ok(Pattern::new(name.text(), args))
}

fn parse_literal(cur: &mut Cursor, ctx: &Ctx) -> Result<Literal, ParseDiagnostic> {
    if cur.eat_keyword("not") || cur.eat_sym("!") {
        return Ok(Literal::not_holds(parse_pattern(cur, ctx)?));
    }
    let first = cur.peek().ok_or_else(|| cur.error("expected a literal before end of line"))?;
    let next = cur.peek_at(1);
    let is_atom = match first.ident() {
        Some(name) => {
            next.is_some_and(|n| n.is_sym("("))
                || (ctx.fluents.contains(name)
                    && !next.is_some_and(|n| {
                        n.is_sym("=") || n.is_sym("!=") || matches!(n.ident(), Some("in" | "notin" | "disjoint"))
                    }))
        }
        None => false,
    };
    if is_atom {
        return Ok(Literal::holds(parse_pattern(cur, ctx)?));
    }
    let lhs = parse_term(cur, ctx)?;
    let op = cur.next().ok_or_else(|| cur.error("expected `=`, `!=`, `in`, `notin` or `disjoint`"))?;
    let rhs = parse_term(cur, ctx)?;
    match op.text() {
        "=" => Ok(Literal::Eq(lhs, rhs)),
        "!=" => Ok(Literal::Neq(lhs, rhs)),
        "in" => Ok(Literal::In(lhs, rhs)),
        "notin" => Ok(Literal::NotIn(lhs, rhs)),
        "disjoint" => Ok(Literal::Disjoint(lhs, rhs)),
        other => Err(ParseDiagnostic::error(cur.span_of(op), format!("unknown operator `{other}`"))
            .with_hint("use `=`, `!=`, `in`, `notin` or `disjoint`")),
    }
}

fn parse_guard(cur: &mut Cursor, ctx: &Ctx) -> Result<Guard, ParseDiagnostic> {
    let mut lits = vec![parse_literal(cur, ctx)?];
    while cur.eat_sym("&") {
        lits.push(parse_literal(cur, ctx)?);
    }
    Ok(Guard(lits))
}

fn parse_opt_guard(cur: &mut Cursor, ctx: &Ctx) -> Result<Guard, ParseDiagnostic> {
    if cur.eat_keyword("if") {
        parse_guard(cur, ctx)
    } else {
        Ok(Guard::default())
    }
}

enum RawElem {
    Name(String),
    Set(Vec<String>),
}

fn parse_raw_path(cur: &mut Cursor) -> Result<Vec<RawElem>, ParseDiagnostic> {
    cur.expect_sym("(")?;
    let mut elems = Vec::new();
    if cur.eat_sym(")") {
        return Ok(elems);
    }
    loop {
        if cur.eat_sym("{") {
            let mut items = Vec::new();
            loop {
                items.push(cur.expect_ident("an aspect atom")?.text().to_string());
                if cur.eat_sym("}") {
                    break;
                }
                cur.expect_sym(",")?;
            }
            elems.push(RawElem::Set(items));
        } else {
            elems.push(RawElem::Name(cur.expect_ident("an aspect atom")?.text().to_string()));
        }
        if cur.eat_sym(")") {
            return Ok(elems);
        }
        cur.expect_sym(",")?;
    }
}

/// A ground aspect path such as `(computer,display,{p1,p2})`.
pub fn aspect_path_at(cur: &mut Cursor) -> Result<AspectPath, ParseDiagnostic> {
    let raw = parse_raw_path(cur)?;
    Ok(AspectPath::new(
        raw.into_iter()
            .map(|e| match e {
                RawElem::Name(n) => AspectElem::atom(n),
                RawElem::Set(items) => AspectElem::set(items).expect("parser yields nonempty sets"),
            })
            .collect(),
    ))
}

fn bound_names(head: &Pattern, guard: &Guard) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = head.vars().map(str::to_string).collect();
    for l in guard.literals() {
        for t in l.terms() {
            if let Some(v) = t.as_var() {
                out.insert(v.to_string());
            }
        }
    }
    out
}

fn template(raw: Vec<RawElem>, bound: &BTreeSet<String>) -> AspectTemplate {
    let term = |n: String| {
        if bound.contains(&n) {
            Term::Var(n)
        } else {
            Term::Const(Value::Obj(n))
        }
    };
    AspectTemplate(
        raw.into_iter()
            .map(|e| match e {
                RawElem::Name(n) => TemplateElem::Atom(term(n)),
                RawElem::Set(items) => TemplateElem::Set(items.into_iter().map(term).collect()),
            })
            .collect(),
    )
}

/// A disjointness specification such as `seq-diff` or `commutative(all)`.
pub fn disjointness_at(cur: &mut Cursor) -> Result<DisjointnessSpec, ParseDiagnostic> {
    let kind = cur.expect_ident("a disjointness specification")?;
    match kind.text() {
        "seq-diff" => Ok(DisjointnessSpec::SeqExistsDiff),
        "simple" => Ok(DisjointnessSpec::SimpleInequality),
        "commutative" => {
            cur.expect_sym("(")?;
            if cur.eat_keyword("all") {
                cur.expect_sym(")")?;
                return Ok(DisjointnessSpec::CommutativeCanonical(Commutation::All));
            }
            let mut pairs = Vec::new();
            loop {
                cur.expect_sym("{")?;
                let a = cur.expect_ident("an aspect atom")?.text().to_string();
                cur.expect_sym(",")?;
                let b = cur.expect_ident("an aspect atom")?.text().to_string();
                cur.expect_sym("}")?;
                pairs.push((a, b));
                if cur.eat_sym(")") {
                    break;
                }
                cur.expect_sym(",")?;
            }
            Ok(DisjointnessSpec::CommutativeCanonical(Commutation::pairs(pairs)))
        }
        "table" => {
            cur.expect_sym("{")?;
            let mut pairs = BTreeSet::new();
            if !cur.eat_sym("}") {
                loop {
                    let a = aspect_path_at(cur)?;
                    let b = aspect_path_at(cur)?;
                    pairs.insert((a, b));
                    if cur.eat_sym("}") {
                        break;
                    }
                    cur.expect_sym(";")?;
                }
            }
            Ok(DisjointnessSpec::ExplicitTable(pairs))
        }
        other => Err(ParseDiagnostic::error(cur.span_of(kind), format!("unknown disjointness specification `{other}`"))
            .with_hint("use seq-diff, simple, commutative(all), commutative({a,b}, ...) or table { ... }")),
    }
}

/// Parses a domain file and runs the load-time checks.
pub fn parse_domain(file: &str, text: &str) -> Result<Parsed<Domain>, Vec<ParseDiagnostic>> {
    let mut diags = Vec::new();
    let lines = lex_all(file, text, &mut diags);
    if lines.is_empty() && diags.is_empty() {
        return Err(vec![ParseDiagnostic::error(SourceSpan::new(file, 1, 1, 1), "empty domain file")
            .with_hint("start with `domain <name>`")]);
    }

    let mut parts = DomainParts::default();
    let mut header_line = None;
    let mut decl_lines: BTreeMap<&'static str, Vec<usize>> = BTreeMap::new();
    let mut line_lens = BTreeMap::new();
    let mut deferred = Vec::new();

    for (idx, line) in lines.iter().enumerate() {
        line_lens.insert(line.no, line.len);
        let mut cur = Cursor::new(file, line.no, line.len, &line.toks);
        let kw = cur.next().expect("nonempty line");
        let Some(word) = kw.ident() else {
            diags.push(
                ParseDiagnostic::error(cur.span_of(kw), format!("unexpected `{}`", kw.text()))
                    .with_hint(format!("declarations start with one of: {KEYWORDS}")),
            );
            continue;
        };
        if header_line.is_none() && word != "domain" {
            diags.push(
                ParseDiagnostic::error(cur.span_of(kw), "expected `domain <name>` as the first declaration")
                    .with_hint("add a header line such as `domain blocks`"),
            );
            header_line = Some(0);
        }
        let res: Result<(), ParseDiagnostic> = (|| {
            match word {
                "domain" => {
                    if header_line.is_some_and(|l| l != 0) {
                        return Err(ParseDiagnostic::error(cur.span_of(kw), "duplicate `domain` header"));
                    }
                    parts.name = cur.expect_ident("a domain name")?.text().to_string();
                    header_line = Some(line.no);
                }
                "objects" => {
                    let sort = cur.expect_ident("a sort name")?.text().to_string();
                    cur.expect_sym(":")?;
                    let mut objs = Vec::new();
                    loop {
                        objs.push(cur.expect_ident("an object name")?.text().to_string());
                        if cur.at_end() {
                            break;
                        }
                        cur.expect_sym(",")?;
                    }
                    parts.sorts.push((sort, objs));
                    decl_lines.entry("sort").or_default().push(line.no);
                }
                "fluent" | "action" => {
                    let name = cur.expect_ident("a name")?.text().to_string();
                    let params = parse_params(&mut cur)?;
                    let schema = Schema { name, params };
                    if word == "fluent" {
                        parts.fluents.push(schema);
                    } else {
                        parts.actions.push(schema);
                    }
                    decl_lines.entry(if word == "fluent" { "fluent" } else { "action" }).or_default().push(line.no);
                }
                "aspect" | "effect" | "pre" | "frame" | "disjoint" => {
                    deferred.push(idx);
                    return Ok(());
                }
                other => {
                    return Err(ParseDiagnostic::error(cur.span_of(kw), format!("unknown declaration `{other}`"))
                        .with_hint(format!("declarations start with one of: {KEYWORDS}")))
                }
            }
            cur.expect_end()
        })();
        if let Err(d) = res {
            diags.push(d);
        }
    }

    let ctx = Ctx {
        objects: parts.sorts.iter().flat_map(|(_, o)| o.iter().cloned()).collect(),
        fluents: parts.fluents.iter().map(|s| s.name.clone()).collect(),
        actions: parts.actions.iter().map(|s| s.name.clone()).collect(),
    };
    let mut disjoint_line = None;
    for idx in deferred {
        let line = &lines[idx];
        let mut cur = Cursor::new(file, line.no, line.len, &line.toks);
        let kw = cur.next().expect("nonempty line");
        let res: Result<(), ParseDiagnostic> = (|| {
            match kw.text() {
                "aspect" => {
                    let head_tok = cur.peek();
                    let head = parse_pattern(&mut cur, &ctx)?;
                    let target = if ctx.fluents.contains(&head.name) {
                        RuleTarget::Fluent
                    } else if ctx.actions.contains(&head.name) {
                        RuleTarget::Action
                    } else {
                        let span = head_tok.map(|t| cur.span_of(t)).unwrap_or_else(|| cur.here());
                        return Err(ParseDiagnostic::error(span, format!("unknown fluent or action `{}`", head.name)));
                    };
                    let raw = parse_raw_path(&mut cur)?;
                    let guard = parse_opt_guard(&mut cur, &ctx)?;
                    let bound = bound_names(&head, &guard);
                    parts.aspect_rules.push((target, head, template(raw, &bound), guard));
                    decl_lines.entry("aspect").or_default().push(line.no);
                }
                "effect" => {
                    let action = parse_pattern(&mut cur, &ctx)?;
                    let kind = match cur.next().and_then(Token::ident) {
                        Some("add") => EffectKind::Add,
                        Some("del") => EffectKind::Del,
                        _ => return Err(cur.error("expected `add` or `del`")),
                    };
                    let fluent = parse_pattern(&mut cur, &ctx)?;
                    let guard = parse_opt_guard(&mut cur, &ctx)?;
                    parts.effects.push((action, kind, fluent, guard));
                    decl_lines.entry("effect").or_default().push(line.no);
                }
                "pre" => {
                    let action = parse_pattern(&mut cur, &ctx)?;
                    cur.eat_keyword("if");
                    let guard = parse_guard(&mut cur, &ctx)?;
                    parts.preconditions.push((action, guard));
                    decl_lines.entry("pre").or_default().push(line.no);
                }
                "frame" => {
                    let action = parse_pattern(&mut cur, &ctx)?;
                    let fluent = parse_pattern(&mut cur, &ctx)?;
                    let guard = parse_opt_guard(&mut cur, &ctx)?;
                    parts.frames.push((action, fluent, guard));
                    decl_lines.entry("frame").or_default().push(line.no);
                }
                _ => {
                    cur.expect_keyword("by")?;
                    if disjoint_line.is_some() {
                        return Err(ParseDiagnostic::error(cur.span_of(kw), "disjointness declared twice"));
                    }
                    parts.disjointness = Some(disjointness_at(&mut cur)?);
                    disjoint_line = Some(line.no);
                }
            }
            cur.expect_end()
        })();
        if let Err(d) = res {
            diags.push(d);
        }
    }

    let mut warnings = Vec::new();
    let header = header_line.filter(|l| *l != 0).unwrap_or(1);
    if header_line.is_none() {
        diags.push(ParseDiagnostic::error(SourceSpan::new(file, 1, 1, 1), "missing `domain <name>` header"));
    }
    if parts.disjointness.is_none() {
        warnings.push(
            ParseDiagnostic::warning(SourceSpan::new(file, header, 1, 1), "no `disjoint by` declaration; using seq-diff")
                .with_hint("add `disjoint by seq-diff` to make this explicit"),
        );
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    let line_span = |no: usize| SourceSpan::new(file, no, 1, line_lens.get(&no).copied().unwrap_or(1));
    let nth = |kind: &str, i: usize| decl_lines.get(kind).and_then(|v| v.get(i)).copied().unwrap_or(header);
    match Domain::assemble(parts) {
        Ok(domain) => Ok(Parsed { value: domain, warnings }),
        Err(issues) => Err(issues
            .into_iter()
            .map(|issue| {
                let no = match issue.at {
                    DeclRef::Header => header,
                    DeclRef::Sort(i) => nth("sort", i),
                    DeclRef::Fluent(i) => nth("fluent", i),
                    DeclRef::Action(i) => nth("action", i),
                    DeclRef::Aspect(i) => nth("aspect", i),
                    DeclRef::Effect(i) => nth("effect", i),
                    DeclRef::Pre(i) => nth("pre", i),
                    DeclRef::Frame(i) => nth("frame", i),
                    DeclRef::Disjoint => disjoint_line.unwrap_or(header),
                };
                let d = ParseDiagnostic::error(line_span(no), issue.message);
                match issue.hint {
                    Some(h) => d.with_hint(h),
                    None => d,
                }
            })
            .collect()),
    }
}

fn parse_value(cur: &mut Cursor) -> Result<Value, ParseDiagnostic> {
    if cur.eat_sym("{") {
        return Ok(Value::Set(parse_set_const(cur, None)?));
    }
    Ok(Value::obj(cur.expect_ident("an object")?.text()))
}

fn parse_ground(cur: &mut Cursor) -> Result<(String, Vec<Value>), ParseDiagnostic> {
    let name = cur.expect_ident("a fluent or action name")?.text().to_string();
    let mut args = Vec::new();
    if cur.eat_sym("(") && !cur.eat_sym(")") {
        loop {
            args.push(parse_value(cur)?);
            if cur.eat_sym(")") {
                break;
            }
            cur.expect_sym(",")?;
        }
    }
    Ok((name, args))
}

fn engine_diag(span: SourceSpan, e: EngineError) -> ParseDiagnostic {
    ParseDiagnostic::error(span, e.to_string())
}

fn ground_fluent_at(domain: &Domain, cur: &mut Cursor) -> Result<GroundFluent, ParseDiagnostic> {
    let start = cur.here();
    let (name, args) = parse_ground(cur)?;
    let p = GroundFluent::new(name, args);
    domain.check_fluent(&p).map_err(|e| engine_diag(start, e))?;
    Ok(p)
}

fn ground_action_at(domain: &Domain, cur: &mut Cursor) -> Result<GroundAction, ParseDiagnostic> {
    let start = cur.here();
    let (name, args) = parse_ground(cur)?;
    let a = GroundAction::new(name, args);
    domain.check_action(&a).map_err(|e| engine_diag(start, e))?;
    Ok(a)
}

fn single_line<T>(
    text: &str,
    f: impl FnOnce(&mut Cursor) -> Result<T, ParseDiagnostic>,
) -> Result<T, ParseDiagnostic> {
    let toks = lex_line("<arg>", 1, text)?;
    let mut cur = Cursor::new("<arg>", 1, text.chars().count(), &toks);
    let v = f(&mut cur)?;
    cur.expect_end()?;
    Ok(v)
}

/// A ground fluent such as `clear(c)`, checked against the domain.
pub fn parse_ground_fluent(domain: &Domain, text: &str) -> Result<GroundFluent, ParseDiagnostic> {
    single_line(text, |cur| ground_fluent_at(domain, cur))
}

pub fn parse_ground_action(domain: &Domain, text: &str) -> Result<GroundAction, ParseDiagnostic> {
    single_line(text, |cur| ground_action_at(domain, cur))
}

fn actions_at(domain: &Domain, cur: &mut Cursor, stop: Option<&str>) -> Result<Vec<GroundAction>, ParseDiagnostic> {
    let mut acts = Vec::new();
    loop {
        if cur.at_end() || stop.is_some_and(|s| cur.peek().is_some_and(|t| t.is_sym(s))) {
            return Ok(acts);
        }
        acts.push(ground_action_at(domain, cur)?);
        if !cur.eat_sym(";") {
            return Ok(acts);
        }
    }
}

/// A `;`-separated action sequence; empty text is the empty sequence.
pub fn parse_actions(domain: &Domain, text: &str) -> Result<Vec<GroundAction>, ParseDiagnostic> {
    single_line(text, |cur| actions_at(domain, cur, None))
}

/// Initial-state description: true fluents plus optional `scope` lines that
/// limit the modeled portion of the world.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StateSpec {
    pub trues: BTreeSet<GroundFluent>,
    pub scope: Vec<AspectPath>,
}

impl StateSpec {
    pub fn build(&self, domain: &Domain) -> Result<WorldState, EngineError> {
        WorldState::from_true_set(domain, &self.trues, &self.scope)
    }
}

fn state_items(domain: &Domain, cur: &mut Cursor, spec: &mut StateSpec, sep: Option<&str>) -> Result<(), ParseDiagnostic> {
    while !cur.at_end() {
        if cur.eat_keyword("scope") {
            spec.scope.push(aspect_path_at(cur)?);
        } else {
            spec.trues.insert(ground_fluent_at(domain, cur)?);
        }
        if let Some(sep) = sep {
            if !cur.at_end() {
                cur.expect_sym(sep)?;
            }
        }
    }
    Ok(())
}

/// Parses a state file: one true fluent per line (several may share a line)
/// and `scope (path)` lines.
pub fn parse_state(domain: &Domain, file: &str, text: &str) -> Result<StateSpec, Vec<ParseDiagnostic>> {
    let mut diags = Vec::new();
    let lines = lex_all(file, text, &mut diags);
    let mut spec = StateSpec::default();
    for line in &lines {
        let mut cur = Cursor::new(file, line.no, line.len, &line.toks);
        if let Err(d) = state_items(domain, &mut cur, &mut spec, None) {
            diags.push(d);
        }
    }
    if diags.is_empty() {
        Ok(spec)
    } else {
        Err(diags)
    }
}

/// Query workload: named states, explicit queries and seeded random batches.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WorkloadSpec {
    pub states: BTreeMap<String, StateSpec>,
    pub queries: Vec<(String, Vec<GroundAction>, GroundFluent)>,
    pub random: Vec<RandomBatch>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomBatch {
    pub state: String,
    pub count: usize,
    pub depth: usize,
    pub seed: u64,
}

fn number(cur: &mut Cursor, what: &str) -> Result<u64, ParseDiagnostic> {
    let t = cur.expect_ident(what)?;
    t.text()
        .parse()
        .map_err(|_| ParseDiagnostic::error(cur.span_of(t), format!("expected {what}, found `{}`", t.text())))
}

/// Workload lines:
/// `state NAME: f1; f2; scope (path)`,
/// `query NAME: a1; a2 ? fluent`,
/// `random COUNT from NAME depth D seed S`.
pub fn parse_workload(domain: &Domain, file: &str, text: &str) -> Result<WorkloadSpec, Vec<ParseDiagnostic>> {
    let mut diags = Vec::new();
    let lines = lex_all(file, text, &mut diags);
    let mut w = WorkloadSpec::default();
    for line in &lines {
        let mut cur = Cursor::new(file, line.no, line.len, &line.toks);
        let res: Result<(), ParseDiagnostic> = (|| {
            let kw = cur.expect_ident("`state`, `query` or `random`")?;
            match kw.text() {
                "state" => {
                    let name = cur.expect_ident("a state name")?.text().to_string();
                    cur.expect_sym(":")?;
                    let mut spec = StateSpec::default();
                    state_items(domain, &mut cur, &mut spec, Some(";"))?;
                    w.states.insert(name, spec);
                }
                "query" => {
                    let name_tok = cur.expect_ident("a state name")?;
                    if !w.states.contains_key(name_tok.text()) {
                        return Err(ParseDiagnostic::error(cur.span_of(name_tok), format!("unknown state `{}`", name_tok.text())));
                    }
                    cur.expect_sym(":")?;
                    let acts = actions_at(domain, &mut cur, Some("?"))?;
                    cur.expect_sym("?")?;
                    let p = ground_fluent_at(domain, &mut cur)?;
                    w.queries.push((name_tok.text().to_string(), acts, p));
                }
                "random" => {
                    let count = number(&mut cur, "a query count")? as usize;
                    cur.expect_keyword("from")?;
                    let name_tok = cur.expect_ident("a state name")?;
                    if !w.states.contains_key(name_tok.text()) {
                        return Err(ParseDiagnostic::error(cur.span_of(name_tok), format!("unknown state `{}`", name_tok.text())));
                    }
                    cur.expect_keyword("depth")?;
                    let depth = number(&mut cur, "a depth")? as usize;
                    cur.expect_keyword("seed")?;
                    let seed = number(&mut cur, "a seed")?;
                    w.random.push(RandomBatch { state: name_tok.text().to_string(), count, depth, seed });
                }
                other => {
                    return Err(ParseDiagnostic::error(cur.span_of(kw), format!("unknown workload line `{other}`"))
                        .with_hint("use `state`, `query` or `random`"))
                }
            }
            cur.expect_end()
        })();
        if let Err(d) = res {
            diags.push(d);
        }
    }
    if diags.is_empty() {
        Ok(w)
    } else {
        Err(diags)
    }
}
