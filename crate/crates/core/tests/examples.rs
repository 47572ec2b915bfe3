mod common;

use aspect_core::engine::{aspect_of_action, aspect_of_fluent, intersects, progress};
use aspect_core::reiter::{compile_ssa, ssa_query};
use aspect_core::regress::{persistence_proof, regress_query, ProofMode};
use aspect_core::trace::{Answer, StepKind};
use aspect_core::{eval_fluent, AspectElem, AspectPath, EngineError};
use common::*;

fn path(s: &[&str]) -> AspectPath {
    AspectPath::atoms(s.iter().copied())
}

#[test]
fn blocks_file_loads_with_expected_shape() {
    let d = domain("blocks.dom");
    assert_eq!(d.fluents.len(), 2);
    assert_eq!(d.actions.len(), 1);
    assert_eq!(d.aspect_rules.len(), 3);
    assert_eq!(domain("blocks_nosupport.dom").aspect_rules.len(), 4);
}

#[test]
fn blocks_aspects() {
    let d = domain("blocks.dom");
    let s = init(&d, "blocks.init");
    assert_eq!(aspect_of_fluent(&d, &s, &fluent(&d, "on(a,b)")).unwrap(), path(&["b"]));
    assert_eq!(aspect_of_fluent(&d, &s, &fluent(&d, "clear(c)")).unwrap(), path(&["c"]));
    let t = init(&d, "blocks_tower.init");
    // a sits on b in the tower
    let beta = aspect_of_action(&d, &t, &action(&d, "move(a,c)")).unwrap();
    assert_eq!(beta, AspectPath::new(vec![AspectElem::set(["b", "c"]).unwrap()]));
}

#[test]
fn blocks_intersection() {
    let d = domain("blocks.dom");
    let t = init(&d, "blocks_tower.init");
    // move(a,floor) with on(a,b): aspect {floor,b}
    let mv = action(&d, "move(a,floor)");
    assert!(!intersects(&d, &t, &mv, &fluent(&d, "clear(c)")).unwrap());
    assert!(intersects(&d, &t, &mv, &fluent(&d, "clear(b)")).unwrap());
    assert!(intersects(&d, &t, &mv, &fluent(&d, "clear(floor)")).unwrap());
}

#[test]
fn blocks_progress_and_inapplicable() {
    let d = domain("blocks.dom");
    let s = init(&d, "blocks.init");
    let s1 = progress(&d, &s, &action(&d, "move(a,b)")).unwrap();
    assert_eq!(eval_fluent(&d, &s1, &fluent(&d, "on(a,b)")).unwrap(), Some(true));
    assert_eq!(eval_fluent(&d, &s1, &fluent(&d, "on(a,floor)")).unwrap(), Some(false));
    assert_eq!(eval_fluent(&d, &s1, &fluent(&d, "clear(b)")).unwrap(), Some(false));
    assert_eq!(eval_fluent(&d, &s1, &fluent(&d, "clear(c)")).unwrap(), Some(true));
    let err = progress(&d, &s1, &action(&d, "move(c,b)")).unwrap_err();
    assert!(matches!(err, EngineError::Inapplicable { .. }));
}

#[test]
fn rooms_clear_has_room_then_support() {
    let d = domain("rooms.dom");
    let s = init(&d, "rooms.init");
    assert_eq!(aspect_of_fluent(&d, &s, &fluent(&d, "clear(b)")).unwrap(), path(&["r2", "c"]));
    assert_eq!(aspect_of_fluent(&d, &s, &fluent(&d, "clear(t3)")).unwrap(), path(&["r3", "t3"]));
    assert_eq!(aspect_of_fluent(&d, &s, &fluent(&d, "loc(a,r1)")).unwrap(), path(&["r1"]));
}

#[test]
fn rooms_carry_rehomes_fluents() {
    let d = domain("rooms.dom");
    let s = init(&d, "rooms.init");
    let s1 = progress(&d, &s, &action(&d, "carry(b,t3)")).unwrap();
    assert_eq!(aspect_of_fluent(&d, &s1, &fluent(&d, "clear(b)")).unwrap(), path(&["r3", "t3"]));
    assert_eq!(eval_fluent(&d, &s1, &fluent(&d, "clear(c)")).unwrap(), Some(true));
    assert_eq!(eval_fluent(&d, &s1, &fluent(&d, "loc(b,r3)")).unwrap(), Some(true));
    assert_eq!(eval_fluent(&d, &s1, &fluent(&d, "loc(b,r2)")).unwrap(), Some(false));
    // r1 is untouched by a carry between r2 and r3
    let q = fluent(&d, "clear(a)");
    assert!(!intersects(&d, &s, &action(&d, "carry(b,t3)"), &q).unwrap());
}

#[test]
fn display_aspects() {
    let d = domain("display.dom");
    let s = init(&d, "display.init");
    let set12 = action(&d, "set_pixels({p1,p2})");
    let expected = AspectPath::new(vec![
        AspectElem::atom("computer"),
        AspectElem::atom("display"),
        AspectElem::set(["p1", "p2"]).unwrap(),
    ]);
    assert_eq!(aspect_of_action(&d, &s, &set12).unwrap(), expected);
    assert_eq!(aspect_of_action(&d, &s, &action(&d, "meteorite_hit()")).unwrap(), AspectPath::root());
    assert!(!intersects(&d, &s, &action(&d, "set_pixels({p1})"), &fluent(&d, "pixel_lit(p2)")).unwrap());
    assert!(!intersects(&d, &s, &action(&d, "write_mem({m1})"), &fluent(&d, "pixel_lit(p1)")).unwrap());
    assert!(intersects(&d, &s, &set12, &fluent(&d, "pixel_lit(p2)")).unwrap());
}

#[test]
fn partial_state_leaves_outside_fluents_undefined() {
    let d = domain("display.dom");
    let s = init(&d, "display_part.init");
    assert_eq!(eval_fluent(&d, &s, &fluent(&d, "heater_on(h1)")).unwrap(), None);
    assert_eq!(eval_fluent(&d, &s, &fluent(&d, "pixel_lit(p2)")).unwrap(), Some(true));
    assert_eq!(eval_fluent(&d, &s, &fluent(&d, "pixel_lit(p1)")).unwrap(), Some(false));
    let err = progress(&d, &s, &action(&d, "meteorite_hit()")).unwrap_err();
    assert!(matches!(err, EngineError::UndefinedAction(_)));
    assert!(progress(&d, &s, &action(&d, "set_pixels({p1,p3})")).is_ok());
}

#[test]
fn regression_crosses_disjoint_action_with_one_d_evaluation() {
    let d = domain("blocks.dom");
    let s = init(&d, "blocks.init");
    let (ans, trace) = regress_query(&d, &s, &actions(&d, "move(a,b)"), &fluent(&d, "clear(c)")).unwrap();
    assert_eq!(ans, Answer::True);
    assert_eq!(trace.count(StepKind::DEvaluation), 1);
}

#[test]
fn regression_over_empty_sequence_is_a_lookup() {
    let d = domain("blocks.dom");
    let s = init(&d, "blocks.init");
    let (ans, trace) = regress_query(&d, &s, &[], &fluent(&d, "on(b,floor)")).unwrap();
    assert_eq!(ans, Answer::True);
    assert_eq!(trace.len(), 1);
}

#[test]
fn repeated_pixel_writes_cost_one_d_evaluation_each() {
    let d = domain("display.dom");
    let s = init(&d, "display.init");
    let p = fluent(&d, "pixel_lit(p2)");
    for k in 0..5 {
        let acts = vec![action(&d, "set_pixels({p1})"); k];
        let (ans, trace) = regress_query(&d, &s, &acts, &p).unwrap();
        assert_eq!(ans, Answer::True);
        assert_eq!(trace.count(StepKind::DEvaluation), k);
    }
}

#[test]
fn regression_reports_inapplicable_step() {
    let d = domain("blocks.dom");
    let s = init(&d, "blocks.init");
    let err = regress_query(&d, &s, &actions(&d, "move(a,b); move(c,b)"), &fluent(&d, "clear(c)")).unwrap_err();
    assert_eq!(err, EngineError::Inapplicable { action: action(&d, "move(c,b)"), step: Some(1) });
}

#[test]
fn persistence_proofs() {
    let d = domain("blocks.dom");
    let s = init(&d, "blocks.init");
    let mv = action(&d, "move(a,b)");
    let trace = persistence_proof(&d, &s, &mv, &fluent(&d, "clear(c)"), ProofMode::Aspect).unwrap();
    assert_eq!(trace.len(), 4);
    let derived = aspect_core::frame::derive_frame_axioms(&d).axioms;
    let classical = persistence_proof(&d, &s, &mv, &fluent(&d, "clear(c)"), ProofMode::Classical(&derived)).unwrap();
    assert_eq!(classical.len(), 1);
    let err = persistence_proof(&d, &s, &mv, &fluent(&d, "clear(b)"), ProofMode::Aspect).unwrap_err();
    assert!(matches!(err, EngineError::NoProof { .. }));
}

#[test]
fn ssa_shapes() {
    let d = domain("blocks.dom");
    let ssas = compile_ssa(&d, None);
    assert_eq!(ssas.axioms.len(), 2);
    let clear = ssas.get("clear").unwrap();
    assert_eq!(clear.gamma_minus.len(), 1);
    assert_eq!(clear.gamma_minus[0].fluent.to_string(), "clear(y)");
    assert_eq!(clear.gamma_plus.len(), 1);
    assert_eq!(clear.gamma_plus[0].fluent.to_string(), "clear(z)");
    let e = domain("economy.dom");
    let ssas = compile_ssa(&e, None);
    assert_eq!(ssas.axioms.len(), 5);
    assert!(ssas.axioms.iter().all(|a| a.gamma_plus.is_empty() && a.gamma_minus.is_empty()));
}

#[test]
fn ssa_query_examples() {
    let d = domain("blocks.dom");
    let s = init(&d, "blocks.init");
    let ssas = compile_ssa(&d, None);
    let (ans, trace) = ssa_query(&d, &ssas, &s, &actions(&d, "move(a,b)"), &fluent(&d, "clear(c)")).unwrap();
    assert_eq!(ans, Answer::True);
    assert_eq!(trace.count(StepKind::EqualityCheck), ssas.get("clear").unwrap().gamma_minus.len());
    let (ans, trace) = ssa_query(&d, &ssas, &s, &[], &fluent(&d, "clear(c)")).unwrap();
    assert_eq!((ans, trace.len()), (Answer::True, 1));
    // made true by the last action whatever the initial value
    let (ans, _) = ssa_query(&d, &ssas, &s, &actions(&d, "move(a,b)"), &fluent(&d, "on(a,b)")).unwrap();
    assert_eq!(ans, Answer::True);
}

#[test]
fn ssa_restricted_to_some_actions_is_insufficient_elsewhere() {
    let d = domain("display.dom");
    let s = init(&d, "display.init");
    let only: std::collections::BTreeSet<String> = ["set_pixels".to_string()].into();
    let ssas = compile_ssa(&d, Some(&only));
    let p = fluent(&d, "pixel_lit(p1)");
    let (ans, _) = ssa_query(&d, &ssas, &s, &actions(&d, "set_pixels({p1})"), &p).unwrap();
    assert_eq!(ans, Answer::True);
    let (ans, _) = ssa_query(&d, &ssas, &s, &actions(&d, "open(window)"), &p).unwrap();
    assert_eq!(ans, Answer::InsufficientAxioms);
}
