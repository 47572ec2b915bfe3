//! Line-oriented model files.
//!
//! ```text
//! model heater
//! situation b0 b1 on off
//! atom r1 r4
//! rel r4 b0 off
//! fun r4
//! act paint b0 -> b1
//! action paint (r1)
//! fluent heated (r4)
//! val heated b1
//! witness heated rel-exists on
//! witness good coll-fun f1 : f1_good
//! dpair (r4) (r1)
//! disjoint by seq-diff
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use aspect_core::dsl::lex::{lex_line, Cursor, Token};
use aspect_core::dsl::{aspect_path_at, disjointness_at, ParseDiagnostic, SourceSpan};
use aspect_core::{AspectPath, DisjointnessSpec};

use crate::formalism::Formalism;
use crate::model::{FiniteModel, Mask, ModelError, Witness, MAX_SITUATIONS};

#[derive(Default)]
struct Pending {
    map: BTreeMap<usize, usize>,
    aspect: Option<AspectPath>,
    line: usize,
}

struct Builder<'f> {
    file: &'f str,
    name: Option<String>,
    situations: Vec<String>,
    atoms: Vec<String>,
    rels: Vec<(String, usize, Vec<usize>)>,
    fun_lines: Vec<(String, SourceSpan)>,
    actions: Vec<(String, Pending)>,
    fluents: Vec<(String, AspectPath, Mask, usize)>,
    vals: Vec<(String, Vec<usize>, SourceSpan)>,
    witnesses: Vec<(String, Formalism, Option<String>, Vec<usize>, SourceSpan)>,
    table: BTreeSet<(AspectPath, AspectPath)>,
    spec: Option<DisjointnessSpec>,
}

fn situation_at(b: &Builder, cur: &mut Cursor) -> Result<usize, ParseDiagnostic> {
    let t = cur.expect_ident("a situation")?;
    b.situations
        .iter()
        .position(|s| s == t.text())
        .ok_or_else(|| ParseDiagnostic::error(cur.span_of(t), format!("unknown situation `{}`", t.text()))
            .with_hint("declare it on a `situation` line first"))
}

fn situations_rest(b: &Builder, cur: &mut Cursor) -> Result<Vec<usize>, ParseDiagnostic> {
    let mut out = Vec::new();
    while !cur.at_end() {
        out.push(situation_at(b, cur)?);
        cur.eat_sym(",");
    }
    Ok(out)
}

fn action_slot<'a>(actions: &'a mut Vec<(String, Pending)>, name: &str, line: usize) -> &'a mut Pending {
    let i = match actions.iter().position(|(n, _)| n == name) {
        Some(i) => i,
        None => {
            actions.push((name.to_string(), Pending { line, ..Pending::default() }));
            actions.len() - 1
        }
    };
    &mut actions[i].1
}

fn line(b: &mut Builder, cur: &mut Cursor, kw: &Token) -> Result<(), ParseDiagnostic> {
    let word = kw.text();
    if word != "model" && b.name.is_none() {
        return Err(ParseDiagnostic::error(cur.span_of(kw), "expected `model <name>` as the first line"));
    }
    match word {
        "model" => {
            if b.name.is_some() {
                return Err(ParseDiagnostic::error(cur.span_of(kw), "duplicate `model` header"));
            }
            b.name = Some(cur.expect_ident("a model name")?.text().to_string());
        }
        "situation" => {
            while !cur.at_end() {
                let t = cur.expect_ident("a situation name")?;
                if b.situations.iter().any(|s| s == t.text()) {
                    return Err(ParseDiagnostic::error(cur.span_of(t), format!("duplicate situation `{}`", t.text())));
                }
                if b.situations.len() == MAX_SITUATIONS {
                    return Err(ParseDiagnostic::error(cur.span_of(t), format!("more than {MAX_SITUATIONS} situations")));
                }
                b.situations.push(t.text().to_string());
                cur.eat_sym(",");
            }
        }
        "atom" => {
            while !cur.at_end() {
                b.atoms.push(cur.expect_ident("an aspect atom")?.text().to_string());
                cur.eat_sym(",");
            }
        }
        "rel" => {
            let atom = cur.expect_ident("an aspect atom")?.text().to_string();
            let s = situation_at(b, cur)?;
            let ts = situations_rest(b, cur)?;
            if ts.is_empty() {
                return Err(cur.error("expected at least one target situation"));
            }
            b.rels.push((atom, s, ts));
        }
        "fun" => {
            let t = cur.expect_ident("an aspect atom")?;
            b.fun_lines.push((t.text().to_string(), cur.span_of(t)));
        }
        "act" => {
            let name = cur.expect_ident("an action name")?.text().to_string();
            let s_tok = cur.peek();
            let s = situation_at(b, cur)?;
            cur.expect_sym("->")?;
            let t = situation_at(b, cur)?;
            let no = kw.line;
            let slot = action_slot(&mut b.actions, &name, no);
            if slot.map.insert(s, t).is_some_and(|old| old != t) {
                let span = s_tok.map(|tok| cur.span_of(tok)).unwrap_or_else(|| cur.here());
                return Err(ParseDiagnostic::error(span, format!("`{name}` already maps `{}` elsewhere", b.situations[s])));
            }
        }
        "action" => {
            let name_tok = cur.expect_ident("an action name")?;
            let path = aspect_path_at(cur)?;
            let slot = action_slot(&mut b.actions, name_tok.text(), kw.line);
            if slot.aspect.is_some() {
                return Err(ParseDiagnostic::error(cur.span_of(name_tok), format!("duplicate action `{}`", name_tok.text())));
            }
            slot.aspect = Some(path);
            slot.line = kw.line;
        }
        "fluent" => {
            let name_tok = cur.expect_ident("a fluent name")?;
            if b.fluents.iter().any(|f| f.0 == name_tok.text()) {
                return Err(ParseDiagnostic::error(cur.span_of(name_tok), format!("duplicate fluent `{}`", name_tok.text())));
            }
            let path = aspect_path_at(cur)?;
            b.fluents.push((name_tok.text().to_string(), path, 0, kw.line));
        }
        "val" => {
            let t = cur.expect_ident("a fluent name")?;
            let span = cur.span_of(t);
            let ss = situations_rest(b, cur)?;
            b.vals.push((t.text().to_string(), ss, span));
        }
        "witness" => {
            let t = cur.expect_ident("a fluent name")?;
            let span = cur.span_of(t);
            let ft = cur.expect_ident("a formalism")?;
            let f: Formalism = ft.text().parse().map_err(|e| ParseDiagnostic::error(cur.span_of(ft), format!("{e}")))?;
            let elem = if cur.peek_at(1).is_some_and(|t| t.is_sym(":")) {
                let x = cur.expect_ident("an element")?.text().to_string();
                cur.expect_sym(":")?;
                Some(x)
            } else {
                None
            };
            if f.is_collective() != elem.is_some() {
                let what = if f.is_collective() { "collective witnesses are written `x : s...`" } else { "only collective witnesses name an element" };
                return Err(ParseDiagnostic::error(span, what));
            }
            let ss = situations_rest(b, cur)?;
            b.witnesses.push((t.text().to_string(), f, elem, ss, span));
        }
        "dpair" => {
            let a = aspect_path_at(cur)?;
            let c = aspect_path_at(cur)?;
            b.table.insert((a, c));
        }
        "disjoint" => {
            cur.expect_keyword("by")?;
            if b.spec.is_some() {
                return Err(ParseDiagnostic::error(cur.span_of(kw), "duplicate `disjoint by` declaration"));
            }
            b.spec = Some(disjointness_at(cur)?);
        }
        other => {
            return Err(ParseDiagnostic::error(cur.span_of(kw), format!("unknown declaration `{other}`")).with_hint(
                "use model, situation, atom, rel, fun, act, action, fluent, val, witness, dpair or disjoint",
            ))
        }
    }
    cur.expect_end()
}

fn line_span(file: &str, no: usize) -> SourceSpan {
    SourceSpan::new(file, no, 1, 1)
}

fn finish(mut b: Builder) -> Result<FiniteModel, Vec<ParseDiagnostic>> {
    let file = b.file;
    let mut diags = Vec::new();
    let Some(name) = b.name.take() else {
        return Err(vec![ParseDiagnostic::error(line_span(file, 1), "empty model file").with_hint("start with `model <name>`")]);
    };
    let mut m = match FiniteModel::new(name, std::mem::take(&mut b.situations)) {
        Ok(m) => m,
        Err(e) => return Err(vec![ParseDiagnostic::error(line_span(file, 1), e.to_string())]),
    };
    for atom in &b.atoms {
        m.ensure_atom(atom);
    }
    for (atom, s, ts) in &b.rels {
        let i = m.ensure_atom(atom);
        for &t in ts {
            m.rels[i][*s] |= 1 << t;
        }
    }
    let n = m.n();
    for (name, p) in &b.actions {
        let Some(aspect) = p.aspect.clone() else {
            diags.push(ParseDiagnostic::error(line_span(file, p.line), format!("action `{name}` has no aspect"))
                .with_hint(format!("add `action {name} (...)`")));
            continue;
        };
        if let Some(s) = (0..n).find(|s| !p.map.contains_key(s)) {
            let e = ModelError::Totality { action: name.clone(), situation: m.situations[s].clone() };
            diags.push(ParseDiagnostic::error(line_span(file, p.line), e.to_string())
                .with_hint(format!("add `act {name} {} -> ...`", m.situations[s])));
            continue;
        }
        m.add_action(name, p.map.values().copied().collect(), aspect);
    }
    for (name, path, val, _) in &b.fluents {
        m.add_fluent(name, *val, path.clone());
    }
    for (atom, span) in &b.fun_lines {
        let i = m.ensure_atom(atom);
        m.functional[i] = true;
        if let Err(e) = m.check_function(i) {
            diags.push(ParseDiagnostic::error(span.clone(), e.to_string()));
        }
    }
    for (f, ss, span) in &b.vals {
        match m.fluents.iter_mut().find(|x| &x.name == f) {
            Some(fl) => fl.val |= ss.iter().fold(0, |acc, s| acc | 1 << s),
            None => diags.push(ParseDiagnostic::error(span.clone(), format!("unknown fluent `{f}`"))),
        }
    }
    for (f, form, elem, ss, span) in &b.witnesses {
        if m.fluent(f).is_none() {
            diags.push(ParseDiagnostic::error(span.clone(), format!("unknown fluent `{f}`")));
            continue;
        }
        let q: Mask = ss.iter().fold(0, |acc, s| acc | 1 << s);
        let key = (f.clone(), *form);
        match elem {
            None => {
                m.witnesses.insert(key, Witness::Plain(q));
            }
            Some(x) => {
                let entry = m.witnesses.entry(key).or_insert_with(|| Witness::PerElement(BTreeMap::new()));
                if let Witness::PerElement(map) = entry {
                    *map.entry(x.clone()).or_insert(0) |= q;
                }
            }
        }
    }
    m.disjointness = match (b.spec.take(), b.table.is_empty()) {
        (Some(DisjointnessSpec::ExplicitTable(mut t)), _) => {
            t.extend(std::mem::take(&mut b.table));
            DisjointnessSpec::ExplicitTable(t)
        }
        (Some(spec), true) => spec,
        (Some(_), false) => {
            diags.push(ParseDiagnostic::error(line_span(file, 1), "`dpair` lines need `disjoint by table {}` or no `disjoint` line"));
            DisjointnessSpec::SeqExistsDiff
        }
        (None, false) => DisjointnessSpec::ExplicitTable(std::mem::take(&mut b.table)),
        (None, true) => DisjointnessSpec::SeqExistsDiff,
    };
    if diags.is_empty() {
        Ok(m)
    } else {
        Err(diags)
    }
}

/// Parses a model file; all errors carry spans.
pub fn parse_model(file: &str, text: &str) -> Result<FiniteModel, Vec<ParseDiagnostic>> {
    let mut b = Builder {
        file,
        name: None,
        situations: Vec::new(),
        atoms: Vec::new(),
        rels: Vec::new(),
        fun_lines: Vec::new(),
        actions: Vec::new(),
        fluents: Vec::new(),
        vals: Vec::new(),
        witnesses: Vec::new(),
        table: BTreeSet::new(),
        spec: None,
    };
    let mut diags = Vec::new();
    for (i, text) in text.lines().enumerate() {
        let no = i + 1;
        let toks = match lex_line(file, no, text) {
            Ok(t) => t,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(file, no, text.chars().count(), &toks);
        let kw = cur.next().expect("nonempty");
        if kw.ident().is_none() {
            diags.push(ParseDiagnostic::error(cur.span_of(kw), format!("unexpected `{}`", kw.text())));
            continue;
        }
        if let Err(d) = line(&mut b, &mut cur, kw) {
            diags.push(d);
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    finish(b)
}

/// Canonical text form; parsing it yields an equal model.
pub fn unparse_model(m: &FiniteModel) -> String {
    let mut out = String::new();
    let names = |mask: Mask| m.names(mask).join(" ");
    let _ = writeln!(out, "model {}", m.name);
    let _ = writeln!(out, "situation {}", m.situations.join(" "));
    if !m.atoms.is_empty() {
        let _ = writeln!(out, "atom {}", m.atoms.join(" "));
    }
    for (i, atom) in m.atoms.iter().enumerate() {
        for (s, &row) in m.rels[i].iter().enumerate() {
            if row != 0 {
                let _ = writeln!(out, "rel {atom} {} {}", m.situations[s], names(row));
            }
        }
        if m.functional[i] {
            let _ = writeln!(out, "fun {atom}");
        }
    }
    for a in &m.actions {
        let _ = writeln!(out, "action {} {}", a.name, a.aspect);
        for (s, &t) in a.map.iter().enumerate() {
            let _ = writeln!(out, "act {} {} -> {}", a.name, m.situations[s], m.situations[t]);
        }
    }
    for f in &m.fluents {
        let _ = writeln!(out, "fluent {} {}", f.name, f.aspect);
        if f.val != 0 {
            let _ = writeln!(out, "val {} {}", f.name, names(f.val));
        }
    }
    for ((f, form), w) in &m.witnesses {
        match w {
            Witness::Plain(q) => {
                let _ = writeln!(out, "witness {f} {form} {}", names(*q));
            }
            Witness::PerElement(map) => {
                for (x, q) in map {
                    let _ = writeln!(out, "witness {f} {form} {x} : {}", names(*q));
                }
            }
        }
    }
    let _ = writeln!(out, "disjoint by {}", m.disjointness);
    out
}
