//! The non-interference predicate `d` over aspect paths.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::aspect::{AspectAtom, AspectElem, AspectPath};
use crate::error::SpecError;

/// Which atoms may be swapped when adjacent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Commutation {
    All,
    /// Unordered pairs, stored with the smaller atom first.
    Pairs(BTreeSet<(AspectAtom, AspectAtom)>),
}

impl Commutation {
    pub fn pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        Commutation::Pairs(
            pairs
                .into_iter()
                .map(|(a, b)| {
                    let (a, b) = (AspectAtom::new(a), AspectAtom::new(b));
                    if a <= b {
                        (a, b)
                    } else {
                        (b, a)
                    }
                })
                .collect(),
        )
    }

    fn commutes(&self, x: &AspectElem, y: &AspectElem) -> bool {
        match (self, x, y) {
            (_, AspectElem::Atom(a), AspectElem::Atom(b)) if a == b => false,
            (Commutation::All, AspectElem::Atom(_), AspectElem::Atom(_)) => true,
            (Commutation::Pairs(set), AspectElem::Atom(a), AspectElem::Atom(b)) => {
                let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
                set.contains(&key)
            }
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DisjointnessSpec {
    SimpleInequality,
    SeqExistsDiff,
    CommutativeCanonical(Commutation),
    /// Directed pairs: (fluent aspect, action aspect).
    ExplicitTable(BTreeSet<(AspectPath, AspectPath)>),
}

impl fmt::Display for DisjointnessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DisjointnessSpec::SimpleInequality => f.write_str("simple"),
            DisjointnessSpec::SeqExistsDiff => f.write_str("seq-diff"),
            DisjointnessSpec::CommutativeCanonical(Commutation::All) => f.write_str("commutative(all)"),
            DisjointnessSpec::CommutativeCanonical(Commutation::Pairs(pairs)) => {
                f.write_str("commutative(")?;
                for (i, (a, b)) in pairs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{{{a},{b}}}")?;
                }
                f.write_str(")")
            }
            DisjointnessSpec::ExplicitTable(pairs) => {
                f.write_str("table {")?;
                for (i, (a, b)) in pairs.iter().enumerate() {
                    f.write_str(if i > 0 { "; " } else { " " })?;
                    write!(f, "{a} {b}")?;
                }
                f.write_str(" }")
            }
        }
    }
}

/// Atom vs atom: inequality; atom vs set: non-membership; set vs set: empty
/// intersection.
pub fn elem_disjoint(e1: &AspectElem, e2: &AspectElem) -> bool {
    e1.members().is_disjoint(&e2.members())
}

fn exists_diff(a: &[AspectElem], b: &[AspectElem]) -> bool {
    a.iter().zip(b).any(|(x, y)| elem_disjoint(x, y))
}

/// `d(alpha, beta)`: may actions of aspect `beta` be ignored by fluents of
/// aspect `alpha`?
pub fn d_eval(spec: &DisjointnessSpec, alpha: &AspectPath, beta: &AspectPath) -> Result<bool, SpecError> {
    match spec {
        DisjointnessSpec::SimpleInequality => {
            if alpha.len() != 1 || beta.len() != 1 {
                return Err(SpecError::LengthViolation { fluent: alpha.clone(), action: beta.clone() });
            }
            Ok(elem_disjoint(&alpha.elems()[0], &beta.elems()[0]))
        }
        DisjointnessSpec::SeqExistsDiff => Ok(exists_diff(alpha.elems(), beta.elems())),
        DisjointnessSpec::CommutativeCanonical(c) => {
            let (ca, cb) = (canonicalize(alpha, c)?, canonicalize(beta, c)?);
            Ok(ca != cb && exists_diff(ca.elems(), cb.elems()))
        }
        DisjointnessSpec::ExplicitTable(pairs) => Ok(pairs.contains(&(alpha.clone(), beta.clone()))),
    }
}

/// Lexicographically least path reachable by swapping adjacent commuting
/// atoms. Under `All` this is the sorted path.
pub fn canonicalize(alpha: &AspectPath, c: &Commutation) -> Result<AspectPath, SpecError> {
    if let Commutation::All = c {
        if let Some(e) = alpha.elems().iter().find(|e| matches!(e, AspectElem::Set(_))) {
            return Err(SpecError::SetUnderCommutation(e.to_string()));
        }
        let mut elems = alpha.elems().to_vec();
        elems.sort();
        return Ok(AspectPath::new(elems));
    }
    // repeatedly take the least element that can be moved to the front
    let mut rest: Vec<AspectElem> = alpha.elems().to_vec();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for j in 0..rest.len() {
            let movable = rest[..j].iter().all(|x| c.commutes(x, &rest[j]));
            if movable && best.map_or(true, |b| rest[j] < rest[b]) {
                best = Some(j);
            }
        }
        out.push(rest.remove(best.expect("the first element is always movable")));
    }
    Ok(AspectPath::new(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionSide {
    /// Extending the fluent path must keep `d`.
    Fluent,
    /// Extending the action path must keep `d`.
    Action,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityViolation {
    pub side: ExtensionSide,
    pub fluent: AspectPath,
    pub action: AspectPath,
    pub extended: AspectPath,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub checked: usize,
    pub violations: Vec<MonotonicityViolation>,
}

impl MonotonicityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Longest suffix tried when extending a sampled path.
pub const MAX_EXTENSION: usize = 2;

/// Checks that extending a disjoint pair keeps it disjoint. The fluent side
/// is checked for both sequential specs, the action side only for
/// `SeqExistsDiff`. Suffixes range over the elements seen in `samples`.
pub fn check_monotonicity(
    spec: &DisjointnessSpec,
    samples: &[(AspectPath, AspectPath)],
) -> Result<MonotonicityReport, SpecError> {
    let sides: &[ExtensionSide] = match spec {
        DisjointnessSpec::SeqExistsDiff => &[ExtensionSide::Fluent, ExtensionSide::Action],
        DisjointnessSpec::CommutativeCanonical(_) => &[ExtensionSide::Fluent],
        DisjointnessSpec::SimpleInequality => return Err(SpecError::NotApplicable("monotonicity")),
        DisjointnessSpec::ExplicitTable(_) => return Err(SpecError::NotApplicable("monotonicity")),
    };
    let alphabet: BTreeSet<AspectElem> = samples
        .iter()
        .flat_map(|(a, b)| a.elems().iter().chain(b.elems()).cloned())
        .filter(|e| !matches!((spec, e), (DisjointnessSpec::CommutativeCanonical(Commutation::All), AspectElem::Set(_))))
        .collect();
    let suffixes = all_paths(&alphabet.into_iter().collect::<Vec<_>>(), MAX_EXTENSION);

    let mut report = MonotonicityReport::default();
    for (alpha, beta) in samples {
        if !d_eval(spec, alpha, beta)? {
            continue;
        }
        for side in sides {
            for gamma in suffixes.iter().filter(|g| !g.is_empty()) {
                let (fl, ac) = match side {
                    ExtensionSide::Fluent => (alpha.concat(gamma), beta.clone()),
                    ExtensionSide::Action => (alpha.clone(), beta.concat(gamma)),
                };
                report.checked += 1;
                if !d_eval(spec, &fl, &ac)? {
                    report.violations.push(MonotonicityViolation {
                        side: *side,
                        fluent: alpha.clone(),
                        action: beta.clone(),
                        extended: if *side == ExtensionSide::Fluent { fl } else { ac },
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Every path over `alphabet` of length at most `max_len`, shortest first.
pub fn all_paths(alphabet: &[AspectElem], max_len: usize) -> Vec<AspectPath> {
    let mut out = vec![AspectPath::root()];
    let mut frontier = vec![AspectPath::root()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for e in alphabet {
                let mut q = p.clone();
                q.push(e.clone());
                next.push(q);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::VecDeque;

    fn p(atoms: &[&str]) -> AspectPath {
        AspectPath::atoms(atoms.iter().copied())
    }

    fn set(atoms: &[&str]) -> AspectElem {
        AspectElem::set(atoms.iter().copied()).unwrap()
    }

    /// Breadth-first search over swap-reachable sequences.
    fn bfs_canonical(alpha: &AspectPath, c: &Commutation) -> (AspectPath, BTreeSet<AspectPath>) {
        let mut seen = BTreeSet::from([alpha.clone()]);
        let mut queue = VecDeque::from([alpha.clone()]);
        while let Some(cur) = queue.pop_front() {
            let elems = cur.elems();
            for i in 0..elems.len().saturating_sub(1) {
                if c.commutes(&elems[i], &elems[i + 1]) {
                    let mut v = elems.to_vec();
                    v.swap(i, i + 1);
                    let next = AspectPath::new(v);
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        (seen.iter().next().unwrap().clone(), seen)
    }

    #[test]
    fn binary_tree_paths() {
        let spec = DisjointnessSpec::SeqExistsDiff;
        assert!(d_eval(&spec, &p(&["0", "1", "0"]), &p(&["1", "1"])).unwrap());
        assert!(!d_eval(&spec, &p(&["1", "1", "0"]), &p(&["1", "1"])).unwrap());
    }

    #[test]
    fn rooms_membership() {
        assert!(elem_disjoint(&AspectElem::atom("r3"), &set(&["r1", "r2"])));
        assert!(!elem_disjoint(&set(&["p1", "p2"]), &set(&["p2", "p3"])));
        assert!(!elem_disjoint(&AspectElem::atom("x"), &AspectElem::atom("x")));
    }

    #[test]
    fn display_and_memory_are_disjoint() {
        let fl = AspectPath::new(vec![AspectElem::atom("computer"), AspectElem::atom("display"), set(&["p1"])]);
        let ac = AspectPath::new(vec![AspectElem::atom("computer"), AspectElem::atom("memory"), set(&["m1"])]);
        assert!(d_eval(&DisjointnessSpec::SeqExistsDiff, &fl, &ac).unwrap());
    }

    #[test]
    fn overlapping_pixel_sets_intersect() {
        let fl = AspectPath::new(vec![AspectElem::atom("computer"), AspectElem::atom("display"), set(&["p1", "p2"])]);
        let ac = AspectPath::new(vec![AspectElem::atom("computer"), AspectElem::atom("display"), set(&["p2", "p3"])]);
        assert!(!d_eval(&DisjointnessSpec::SeqExistsDiff, &fl, &ac).unwrap());
    }

    #[test]
    fn commutative_pair_not_disjoint() {
        let spec = DisjointnessSpec::CommutativeCanonical(Commutation::All);
        assert!(!d_eval(&spec, &p(&["0", "1"]), &p(&["1", "0"])).unwrap());
        assert!(d_eval(&DisjointnessSpec::SeqExistsDiff, &p(&["0", "1"]), &p(&["1", "0"])).unwrap());
        assert!(d_eval(&spec, &p(&["0", "0"]), &p(&["1", "1"])).unwrap());
    }

    #[test]
    fn simple_needs_length_one() {
        let err = d_eval(&DisjointnessSpec::SimpleInequality, &p(&["a", "b"]), &p(&["c"])).unwrap_err();
        assert!(matches!(err, SpecError::LengthViolation { .. }));
        assert!(d_eval(&DisjointnessSpec::SimpleInequality, &p(&["a"]), &p(&["c"])).unwrap());
    }

    #[test]
    fn table_is_directed() {
        let spec = DisjointnessSpec::ExplicitTable(BTreeSet::from([(p(&["x"]), p(&["y"]))]));
        assert!(d_eval(&spec, &p(&["x"]), &p(&["y"])).unwrap());
        assert!(!d_eval(&spec, &p(&["y"]), &p(&["x"])).unwrap());
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canonicalize(&p(&["1", "0"]), &Commutation::All).unwrap(), p(&["0", "1"]));
        assert_eq!(canonicalize(&p(&["0", "1"]), &Commutation::All).unwrap(), p(&["0", "1"]));
        let ab = Commutation::pairs([("a", "b")]);
        let got = canonicalize(&p(&["b", "a", "c"]), &ab).unwrap();
        assert_eq!(got, bfs_canonical(&p(&["b", "a", "c"]), &ab).0);
        assert_eq!(got, p(&["a", "b", "c"]));
    }

    #[test]
    fn sets_rejected_under_all() {
        let alpha = AspectPath::new(vec![AspectElem::atom("a"), set(&["b", "c"])]);
        assert!(matches!(
            canonicalize(&alpha, &Commutation::All),
            Err(SpecError::SetUnderCommutation(_))
        ));
    }

    #[test]
    fn monotonicity_seq_diff_exhaustive() {
        let alphabet = [AspectElem::atom("0"), AspectElem::atom("1")];
        let paths = all_paths(&alphabet, 3);
        let samples: Vec<_> = paths
            .iter()
            .flat_map(|a| paths.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        let report = check_monotonicity(&DisjointnessSpec::SeqExistsDiff, &samples).unwrap();
        assert!(report.is_clean());
        assert!(report.checked > 0);
    }

    #[test]
    fn monotonicity_single_pair() {
        let report = check_monotonicity(&DisjointnessSpec::SeqExistsDiff, &[(p(&["0"]), p(&["1"]))]).unwrap();
        assert!(report.is_clean());
    }

    #[test]
    fn commutative_spec_breaks_fluent_extension() {
        let spec = DisjointnessSpec::CommutativeCanonical(Commutation::All);
        let report = check_monotonicity(&spec, &[(p(&["1"]), p(&["0", "1"]))]).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| v.extended == p(&["1", "0"])));
    }

    #[test]
    fn monotonicity_rejects_table() {
        let spec = DisjointnessSpec::ExplicitTable(BTreeSet::new());
        assert!(check_monotonicity(&spec, &[]).is_err());
    }

    fn arb_path() -> impl Strategy<Value = AspectPath> {
        prop::collection::vec(
            prop_oneof![
                (0u8..3).prop_map(|i| AspectElem::atom(i.to_string())),
                prop::collection::btree_set(0u8..3, 1..3)
                    .prop_map(|s| AspectElem::set(s.into_iter().map(|i| i.to_string())).unwrap()),
            ],
            0..5,
        )
        .prop_map(AspectPath::new)
    }

    fn arb_atom_path() -> impl Strategy<Value = AspectPath> {
        prop::collection::vec(0u8..4, 0..6).prop_map(|v| AspectPath::atoms(v.into_iter().map(|i| i.to_string())))
    }

    fn arb_commutation() -> impl Strategy<Value = Commutation> {
        prop::collection::vec((0u8..4, 0u8..4), 0..5)
            .prop_map(|v| Commutation::pairs(v.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.to_string(), b.to_string()))))
    }

    proptest! {
        #[test]
        fn seq_diff_irreflexive_and_symmetric(a in arb_path(), b in arb_path()) {
            let spec = DisjointnessSpec::SeqExistsDiff;
            prop_assert!(!d_eval(&spec, &a, &a).unwrap());
            prop_assert_eq!(d_eval(&spec, &a, &b).unwrap(), d_eval(&spec, &b, &a).unwrap());
        }

        #[test]
        fn elem_disjoint_symmetric(a in arb_path(), b in arb_path()) {
            for (x, y) in a.elems().iter().zip(b.elems()) {
                prop_assert_eq!(elem_disjoint(x, y), elem_disjoint(y, x));
            }
        }

        #[test]
        fn seq_diff_monotone(a in arb_path(), b in arb_path(), g in arb_path()) {
            let spec = DisjointnessSpec::SeqExistsDiff;
            if d_eval(&spec, &a, &b).unwrap() {
                prop_assert!(d_eval(&spec, &a.concat(&g), &b).unwrap());
                prop_assert!(d_eval(&spec, &a, &b.concat(&g)).unwrap());
            }
        }

        #[test]
        fn commutative_irreflexive(a in arb_atom_path(), c in arb_commutation()) {
            let spec = DisjointnessSpec::CommutativeCanonical(c);
            prop_assert!(!d_eval(&spec, &a, &a).unwrap());
        }

        #[test]
        fn canonical_matches_bfs(a in arb_atom_path(), c in arb_commutation()) {
            let got = canonicalize(&a, &c).unwrap();
            let (least, reachable) = bfs_canonical(&a, &c);
            prop_assert!(reachable.contains(&got));
            prop_assert_eq!(&got, &least);
            prop_assert_eq!(canonicalize(&got, &c).unwrap(), got.clone());
            let mut x = a.elems().to_vec();
            let mut y = got.elems().to_vec();
            x.sort();
            y.sort();
            prop_assert_eq!(x, y);
        }

        #[test]
        fn canonical_all_is_sorted(a in arb_atom_path()) {
            let got = canonicalize(&a, &Commutation::All).unwrap();
            prop_assert_eq!(&got, &bfs_canonical(&a, &Commutation::All).0);
        }
    }
}
