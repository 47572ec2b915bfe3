use std::fmt::Write;

use crate::domain::{Domain, Schema};

fn schema_line(kw: &str, s: &Schema) -> String {
    let params: Vec<String> = s.params.iter().map(|p| p.to_string()).collect();
    format!("{kw} {}({})", s.name, params.join(", "))
}

fn with_guard(mut line: String, guard: &crate::domain::Guard, kw: &str) -> String {
    if !guard.is_empty() {
        if !kw.is_empty() {
            line.push(' ');
            line.push_str(kw);
        }
        let _ = write!(line, " {guard}");
    }
    line
}

/// Canonical text of a domain; parsing it yields an equal domain.
pub fn unparse_domain(d: &Domain) -> String {
    let mut lines = vec![format!("domain {}", d.name)];
    for (sort, objs) in &d.sorts {
        lines.push(format!("objects {sort}: {}", objs.join(", ")));
    }
    lines.extend(d.fluents.iter().map(|s| schema_line("fluent", s)));
    lines.extend(d.actions.iter().map(|s| schema_line("action", s)));
    for r in &d.aspect_rules {
        lines.push(with_guard(format!("aspect {} {}", r.head, r.aspect), &r.guard, "if"));
    }
    for p in &d.preconditions {
        lines.push(with_guard(format!("pre {}", p.action), &p.guard, ""));
    }
    for e in &d.effects {
        lines.push(with_guard(format!("effect {} {} {}", e.action, e.kind, e.fluent), &e.guard, "if"));
    }
    for f in &d.frames {
        lines.push(with_guard(format!("frame {} {}", f.action, f.fluent), &f.guard, "if"));
    }
    lines.push(format!("disjoint by {}", d.disjointness));
    let mut out = lines.join("\n");
    out.push('\n');
    out
}
