mod common;

use aspect_core::DisjointnessSpec;
use aspect_validator::premises::AxiomKind;
use aspect_validator::{check_noninterference, check_premises, parse_model, unparse_model, verify_theorem, Formalism, ModelError, Verdict};
use common::{model, model_text, MODELS};

#[test]
fn worked_models_pass() {
    for (name, f) in [
        ("heater", Formalism::RelExists),
        ("heater_small", Formalism::RelExists),
        ("heater_all", Formalism::RelForall),
        ("university", Formalism::CollRelExists),
        ("university", Formalism::CollFun),
    ] {
        let r = verify_theorem(f, &model(name)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{name} {f}: {:?}", r.premises.violated().collect::<Vec<_>>());
        assert!(r.conclusion.pairs > 0, "{name} {f} checks at least one disjoint pair");
    }
}

#[test]
fn stored_witnesses_are_used() {
    let r = check_premises(&model("heater"), Formalism::RelExists).unwrap();
    let heated = r.checks.iter().find(|c| c.subject.starts_with("heated")).unwrap();
    assert_eq!(heated.witness.as_deref(), Some("q = {r4_on} (stored)"));
}

#[test]
fn heater_switching_action_violates_persistence() {
    let mut m = model("heater");
    let paint = m.actions.iter_mut().find(|a| a.name == "paint_r1").unwrap();
    let b11 = m.situations.iter().position(|s| s == "b11").unwrap();
    paint.map[0] = b11; // b00 now also turns the heater on
    let r = check_premises(&m, Formalism::RelExists).unwrap();
    let bad: Vec<_> = r.violated().collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0].kind, AxiomKind::Persistence);
    assert_eq!(bad[0].witness.as_deref(), Some("R(r4)(b00,r4_off) holds but R(r4)(b11,r4_off) fails"));
    let c = check_noninterference(&m).unwrap();
    assert_eq!(c.counterexamples.len(), 1);
    assert_eq!(c.counterexamples[0].situation, "b00");
    assert_eq!(verify_theorem(Formalism::RelExists, &m).unwrap().verdict, Verdict::Vacuous);
}

#[test]
fn functional_formalism_rejects_relations() {
    match verify_theorem(Formalism::Fun, &model("heater_all")) {
        Err(ModelError::NotFunctional { rel, .. }) => assert_eq!(rel, "r1"),
        other => panic!("expected a functionality error, got {other:?}"),
    }
}

#[test]
fn simple_formalisms_need_length_one_aspects() {
    let text = "model m\nsituation s\naction a (x,y)\nact a s -> s\nfluent p (x)\n";
    let m = parse_model("m", text).unwrap();
    assert!(matches!(check_premises(&m, Formalism::RelExists), Err(ModelError::Shape { .. })));
    assert!(check_premises(&m, Formalism::SeqRelExists).is_ok());
}

#[test]
fn collective_formalisms_need_set_aspects() {
    let text = "model m\nsituation s\naction a (x,y)\nact a s -> s\nfluent p ({x})\n";
    let m = parse_model("m", text).unwrap();
    assert!(matches!(check_premises(&m, Formalism::CollRelForall), Err(ModelError::Shape { .. })));
}

#[test]
fn empty_table_is_vacuously_clean() {
    let mut m = model("heater");
    m.disjointness = DisjointnessSpec::ExplicitTable(Default::default());
    let r = check_noninterference(&m).unwrap();
    assert_eq!(r.pairs, 0);
    assert!(r.is_clean());
}

#[test]
fn university_enrollment_keeps_superiority() {
    let m = model("university");
    let r = check_premises(&m, Formalism::CollRelExists).unwrap();
    // enroll touches u1 and u2 and leaves f1 and f2 alone
    let subjects: Vec<&str> = r.checks.iter().filter(|c| c.kind == AxiomKind::Persistence).map(|c| c.subject.as_str()).collect();
    assert!(subjects.contains(&"enroll : ({u1,u2}), element f1"));
    assert!(!subjects.iter().any(|s| s.starts_with("enroll") && s.ends_with("u1")));
    // promoting f1 does interfere, and is not asked to persist f1
    assert!(!subjects.contains(&"promote_f1 : ({f1}), element f1"));
}

#[test]
fn round_trip_is_a_fixpoint() {
    for name in MODELS {
        let m = model(name);
        let text = unparse_model(&m);
        let again = parse_model("again", &text).unwrap();
        assert_eq!(again, m, "{name}");
        assert_eq!(unparse_model(&again), text);
    }
}

#[test]
fn parsing_is_deterministic() {
    for name in MODELS {
        assert_eq!(parse_model("a", &model_text(name)).unwrap(), parse_model("a", &model_text(name)).unwrap());
    }
}

#[test]
fn missing_successor_is_a_totality_error() {
    let text = "model m\nsituation s t\naction a (x)\nact a s -> t\n";
    let d = parse_model("m.model", text).unwrap_err();
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].span.line, 3);
    assert!(d[0].message.contains("no successor for situation `t`"), "{}", d[0].message);
}

#[test]
fn one_to_many_functional_relation_is_rejected() {
    let text = "model m\nsituation s t\nrel x s s t\nrel x t t\nfun x\n";
    let d = parse_model("m.model", text).unwrap_err();
    assert_eq!((d[0].span.line, d[0].span.col), (5, 5));
    assert!(d[0].message.contains("not a function at situation `s`"));
}

#[test]
fn unknown_situation_is_spanned() {
    let text = "model m\nsituation s\nrel x s nowhere\n";
    let d = parse_model("m.model", text).unwrap_err();
    assert_eq!((d[0].span.line, d[0].span.col, d[0].span.len), (3, 9, 7));
}

#[test]
fn every_rejection_has_an_error() {
    for text in ["", "situation s", "model m\nbogus line", "model m\nsituation s\nwitness p rel-exists s", "model m\nsituation s\nwitness p nope s"] {
        let d = parse_model("m.model", text).unwrap_err();
        assert!(!d.is_empty(), "{text:?}");
    }
}

#[test]
fn dpair_lines_build_a_table() {
    let text = "model m\nsituation s\ndpair (x) (y)\ndpair (y) (x)\n";
    let m = parse_model("m", text).unwrap();
    match &m.disjointness {
        DisjointnessSpec::ExplicitTable(t) => assert_eq!(t.len(), 2),
        other => panic!("{other:?}"),
    }
    assert_eq!(parse_model("m", &unparse_model(&m)).unwrap(), m);
}
