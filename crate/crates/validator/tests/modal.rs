use aspect_core::AspectPath;
use aspect_validator::modal::valid;
use aspect_validator::semantics::{compose_all, factor_exists, factor_forall};
use aspect_validator::{check_commutativity, check_premises, extension, modal_eval, FiniteModel, Formalism, ModalFormula, Mask};
use proptest::prelude::*;

fn path(atoms: &[&str]) -> AspectPath {
    AspectPath::atoms(atoms.iter().copied())
}

/// A random model over `n` situations with atoms `x` and `y`, one action
/// and one fluent at `fluent`.
fn arb_model(max_n: usize, fluent: &'static [&'static str], action: &'static [&'static str]) -> impl Strategy<Value = FiniteModel> {
    (1..=max_n).prop_flat_map(move |n| {
        let rows = prop::collection::vec(0..(1u64 << n), n);
        (rows.clone(), rows, prop::collection::vec(0..n, n), 0..(1u64 << n)).prop_map(move |(x, y, map, val)| {
            let mut m = FiniteModel::numbered("arb", n).unwrap();
            m.set_relation("x", x);
            m.set_relation("y", y);
            m.add_action("a", map, path(action));
            m.add_fluent("p", val, path(fluent));
            m
        })
    })
}

fn subsets(n: usize) -> impl Iterator<Item = Mask> {
    0..1u64 << n
}

#[test]
fn necessity_of_top_holds_everywhere() {
    let mut m = FiniteModel::numbered("m", 3).unwrap();
    m.set_relation("x", vec![0b110, 0, 0b001]);
    let f = ModalFormula::necessarily(path(&["x"]), ModalFormula::Top);
    assert!((0..3).all(|w| modal_eval(&m, w, &f).unwrap()));
}

#[test]
fn possibility_finds_the_successor() {
    let mut m = FiniteModel::numbered("m", 2).unwrap();
    m.set_relation("x", vec![0b10, 0b10]);
    m.add_fluent("p", 0b10, path(&["x"]));
    let f = ModalFormula::possibly(path(&["x"]), ModalFormula::fluent("p"));
    assert!(modal_eval(&m, 0, &f).unwrap());
}

#[test]
fn world_out_of_range_is_an_error() {
    let m = FiniteModel::numbered("m", 2).unwrap();
    assert!(modal_eval(&m, 5, &ModalFormula::Top).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // (X ⊃ Y) ⊃ ([a]X ⊃ [a]Y), and the same for [x] and <x>, over all X, Y.
    #[test]
    fn monotonicity_rules(m in arb_model(4, &["x"], &["y"])) {
        let n = m.n();
        for x in subsets(n) {
            for y in subsets(n) {
                let (fx, fy) = (ModalFormula::Worlds(x), ModalFormula::Worlds(y));
                if !valid(&m, &fx.clone().implies(fy.clone())).unwrap() {
                    continue;
                }
                for wrap in [
                    |f: ModalFormula| ModalFormula::after("a", f),
                    |f: ModalFormula| ModalFormula::necessarily(AspectPath::atoms(["x"]), f),
                    |f: ModalFormula| ModalFormula::possibly(AspectPath::atoms(["x"]), f),
                ] {
                    prop_assert!(valid(&m, &wrap(fx.clone()).implies(wrap(fy.clone()))).unwrap());
                }
            }
        }
    }

    #[test]
    fn modal_box_agrees_with_universal_relations(m in arb_model(4, &["x"], &["y"])) {
        let modal = check_premises(&m, Formalism::ModalBox).unwrap().holds();
        let rel = check_premises(&m, Formalism::RelForall).unwrap().holds();
        prop_assert_eq!(modal, rel);
    }

    #[test]
    fn modal_diamond_agrees_with_existential_relations(m in arb_model(4, &["x"], &["y"])) {
        let modal = check_premises(&m, Formalism::ModalDiamond).unwrap().holds();
        let rel = check_premises(&m, Formalism::RelExists).unwrap().holds();
        prop_assert_eq!(modal, rel);
    }

    #[test]
    fn sequential_modal_agrees_with_composition(m in arb_model(4, &["x", "y"], &["y", "x"])) {
        prop_assert_eq!(
            check_premises(&m, Formalism::SeqModalBox).unwrap().holds(),
            check_premises(&m, Formalism::SeqRelForall).unwrap().holds()
        );
        prop_assert_eq!(
            check_premises(&m, Formalism::SeqModalDiamond).unwrap().holds(),
            check_premises(&m, Formalism::SeqRelExists).unwrap().holds()
        );
    }

    // [x][y][x]X equals the universal image of the composed relation.
    #[test]
    fn nested_operators_match_composed_relations(m in arb_model(5, &["x"], &["y"]), x in 0..32u64) {
        let n = m.n();
        let x = x & ((1 << n) - 1);
        let seq = path(&["x", "y", "x"]);
        let rows = compose_all(n, &[m.rels[0].as_slice(), m.rels[1].as_slice(), m.rels[0].as_slice()]);
        let boxed = extension(&m, &ModalFormula::necessarily(seq.clone(), ModalFormula::Worlds(x))).unwrap();
        let dia = extension(&m, &ModalFormula::possibly(seq, ModalFormula::Worlds(x))).unwrap();
        prop_assert_eq!(boxed, factor_forall(&rows, x));
        prop_assert_eq!(dia, factor_exists(&rows, x));
    }

    // Aspect assignments do not depend on the situation, so p:α survives
    // every action: the fluent keeps its aspect in every successor model.
    #[test]
    fn aspects_are_preserved(m in arb_model(4, &["x"], &["y"])) {
        for f in [Formalism::ModalBox, Formalism::ModalDiamond] {
            let r = check_premises(&m, f).unwrap();
            prop_assert!(r.checks.iter().any(|c| c.kind == aspect_validator::AxiomKind::Preservation && c.holds));
        }
    }
}

fn grid() -> FiniteModel {
    // positions (i,j) with i,j in 0..3; x and y step along one axis, stopping at the edge
    let mut m = FiniteModel::new("grid", (0..9).map(|k| format!("g{}{}", k / 3, k % 3)).collect()).unwrap();
    let step = |axis: usize| -> Vec<Mask> {
        (0..9)
            .map(|k| {
                let (mut i, mut j) = (k / 3, k % 3);
                if axis == 0 { i = (i + 1).min(2) } else { j = (j + 1).min(2) }
                1u64 << (i * 3 + j)
            })
            .collect()
    };
    m.set_relation("x", step(0));
    m.set_relation("y", step(1));
    m
}

#[test]
fn grid_commutes() {
    let r = check_commutativity(&grid());
    assert_eq!(r.pairs_checked, 1);
    assert!(r.holds());
}

#[test]
fn binary_tree_does_not_commute() {
    // node k has children 2k+1 (x) and 2k+2 (y); leaves loop
    let n = 15;
    let mut m = FiniteModel::numbered("tree", n).unwrap();
    let child = |off: usize| (0..n).map(|k| if 2 * k + off < n { 1u64 << (2 * k + off) } else { 1u64 << k }).collect();
    m.set_relation("x", child(1));
    m.set_relation("y", child(2));
    let r = check_commutativity(&m);
    assert!(!r.holds());
    let v = &r.violations[0];
    assert_eq!((v.first.as_str(), v.second.as_str(), v.situation.as_str()), ("x", "y", "s0"));
}

#[test]
fn single_aspect_commutes_vacuously() {
    let mut m = FiniteModel::numbered("one", 3).unwrap();
    m.set_relation("x", vec![0b010, 0b100, 0b001]);
    let r = check_commutativity(&m);
    assert_eq!(r.pairs_checked, 0);
    assert!(r.holds());
}
