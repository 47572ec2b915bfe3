use aspect_core::{AspectPath, Commutation, DisjointnessSpec};
use aspect_validator::commute::mesh_model;
use aspect_validator::premises::AxiomKind;
use aspect_validator::search::{plant, planted_violations, search_counterexample, SearchBounds};
use aspect_validator::{check_premises, reproduce_commutative_pitfall, verify_theorem, Formalism, Verdict};

fn small() -> SearchBounds {
    SearchBounds { max_situations: 6, exhaustive_up_to: 2, samples: 400, seed: 11, ..SearchBounds::default() }
}

#[test]
fn small_search_is_clean_for_every_formalism() {
    for f in Formalism::ALL {
        let r = search_counterexample(f, small());
        assert!(r.is_clean(), "{f}: {:?} {:?}", r.mismatches.first(), r.counterexample);
        assert!(r.exhaustive.satisfying > 0, "{f} enumerates premise-satisfying models");
        assert!(r.random.satisfying > 0, "{f} samples premise-satisfying models");
        assert!(r.random.satisfying < r.random.models, "{f} samples some vacuous models");
    }
}

#[test]
fn exhaustive_simple_relational_up_to_three() {
    for f in [Formalism::RelExists, Formalism::Fun, Formalism::ModalBox] {
        let r = search_counterexample(f, SearchBounds { max_situations: 3, samples: 0, ..SearchBounds::default() });
        assert!(r.is_clean(), "{f}");
        assert_eq!(r.random.models, 0);
        assert!(r.cross_checked > 0);
    }
}

#[test]
fn search_is_reproducible() {
    let a = search_counterexample(Formalism::SeqFun, small());
    let b = search_counterexample(Formalism::SeqFun, small());
    assert_eq!(a, b);
}

#[test]
fn planted_violations_are_detected() {
    for f in Formalism::ALL {
        let plants = planted_violations(f, 7);
        assert_eq!(plants.len(), 2);
        for p in plants {
            assert!(p.detected, "{f} {:?}\n{}", p.axiom, p.model);
        }
    }
}

#[test]
fn planting_breaks_the_target_axiom() {
    let base = mesh_model(DisjointnessSpec::CommutativeCanonical(Commutation::All));
    let f = Formalism::SeqRelExists;
    assert_eq!(verify_theorem(f, &base).unwrap().verdict, Verdict::Pass);
    let m = plant(f, &base, AxiomKind::Factoring);
    let r = check_premises(&m, f).unwrap();
    assert!(r.violates(AxiomKind::Factoring));
    let m = plant(f, &base, AxiomKind::Persistence);
    let r = check_premises(&m, f).unwrap();
    assert!(r.violates(AxiomKind::Persistence) && !r.violates(AxiomKind::Factoring));
}

#[test]
fn pitfall_both_halves_hold() {
    let r = reproduce_commutative_pitfall(1);
    assert!(r.naive.holds(), "{:?}", r.naive.failures);
    assert!(r.naive.relational.iter().all(|c| c.premise_satisfying > 0));
    assert!(r.naive.functional.premise_satisfying > 0 && r.naive.sampled.premise_satisfying > 0);
    let c = &r.canonical;
    assert!(c.commutative && c.premises_hold && !c.d_01_10);
    assert_eq!(c.changed_at, Some(("w0".to_string(), "w1".to_string())));
    assert_eq!(c.naive_verdict, Verdict::Vacuous);
    assert!(!c.premises_with_length_one_fluent);
}

#[test]
fn naive_d_rejects_the_mesh_through_the_swapped_path() {
    let m = mesh_model(DisjointnessSpec::SeqExistsDiff);
    let r = check_premises(&m, Formalism::SeqRelExists).unwrap();
    let bad: Vec<_> = r.violated().map(|c| c.subject.clone()).collect();
    assert_eq!(bad, vec![format!("a : (0,1), aspect {}", AspectPath::atoms(["1", "0"]))]);
}
