mod common;

use aspect_core::dsl::{parse_domain, parse_state, parse_workload, unparse_domain, Severity};
use aspect_core::workload::expand_workload;
use common::*;

#[test]
fn fixtures_round_trip() {
    for name in DOMAINS {
        let d = domain(name);
        let text = unparse_domain(&d);
        let again = parse_domain("unparsed", &text).unwrap_or_else(|e| panic!("{name}: {e:?}\n{text}"));
        assert_eq!(again.value, d, "{name}");
        assert_eq!(unparse_domain(&again.value), text, "{name}");
    }
}

#[test]
fn parsing_is_deterministic() {
    for name in DOMAINS {
        let text = read_fixture(name);
        assert_eq!(parse_domain(name, &text).unwrap().value, parse_domain(name, &text).unwrap().value);
    }
}

#[test]
fn empty_file_is_an_error() {
    let errs = parse_domain("empty.dom", "").unwrap_err();
    assert_eq!(errs.len(), 1);
    assert!(errs[0].message.contains("empty domain"));
    let errs = parse_domain("empty.dom", "# nothing here\n\n").unwrap_err();
    assert!(errs[0].message.contains("empty domain"));
}

#[test]
fn overlapping_aspect_rules_are_rejected() {
    let text = "domain d\nobjects o: a, b\nfluent on(o,o)\naspect on(x,y) (y)\naspect on(x,y) (x)\ndisjoint by seq-diff\n";
    let errs = parse_domain("overlap.dom", text).unwrap_err();
    assert!(errs.iter().any(|e| e.severity == Severity::Error && e.message.contains("may both apply")), "{errs:?}");
    assert!(errs.iter().any(|e| e.span.line == 5));
}

#[test]
fn exclusive_guards_are_accepted() {
    let d = domain("blocks_nosupport.dom");
    assert_eq!(d.aspect_rules.iter().filter(|r| r.head.name == "move").count(), 2);
}

#[test]
fn errors_carry_spans() {
    let cases = [
        ("domain d\nfluent p(thing)\n", 2),
        ("domain d\nobjects o: a\nfluent p(o)\naspect p(x) (x)\naspect q(x) (x)\n", 5),
        ("domain d\nobjects o: a\nfluent p(o)\naspect p(x) (x\n", 4),
        ("domain d\nobjects o: a\nfluent p(o, o)\naspect p(x) (x)\n", 4),
        ("nonsense\n", 1),
    ];
    for (text, line) in cases {
        let errs = parse_domain("bad.dom", text).unwrap_err();
        assert!(!errs.is_empty());
        assert!(errs.iter().all(|e| e.span.line >= 1 && e.span.col >= 1), "{errs:?}");
        assert!(errs.iter().any(|e| e.span.line == line), "{text}: {errs:?}");
    }
}

#[test]
fn missing_disjointness_defaults_with_a_warning() {
    let text = "domain d\nobjects o: a\nfluent p(o)\naspect p(x) (x)\n";
    let parsed = parse_domain("d.dom", text).unwrap();
    assert_eq!(parsed.warnings.len(), 1);
    assert_eq!(parsed.value.disjointness.to_string(), "seq-diff");
}

#[test]
fn state_files_parse() {
    let d = domain("display.dom");
    let spec = parse_state(&d, "display_part.init", &read_fixture("display_part.init")).unwrap();
    assert_eq!(spec.scope.len(), 1);
    assert_eq!(spec.trues.len(), 2);
    assert!(parse_state(&d, "x", "pixel_lit(p9)\n").is_err());
}

#[test]
fn workload_file_expands() {
    let d = domain("blocks.dom");
    let spec = parse_workload(&d, "blocks.workload", &read_fixture("blocks.workload")).unwrap();
    assert_eq!(spec.queries.len(), 5);
    let queries = expand_workload(&d, &spec).unwrap();
    assert_eq!(queries.len(), 45);
    assert_eq!(expand_workload(&d, &spec).unwrap().iter().map(|q| &q.acts).collect::<Vec<_>>(),
        queries.iter().map(|q| &q.acts).collect::<Vec<_>>());
}
