//! Relations as bitmask rows and the operations the formalisms are built
//! from: composition, factoring through a predicate, persistence under an
//! action, and canonical witnesses.

use crate::model::{full, members, Mask};

/// `rows[s]` is the successor set of `s`.
pub type Rows = Vec<Mask>;

pub fn identity(n: usize) -> Rows {
    (0..n).map(|s| 1 << s).collect()
}

/// Union of the rows of every situation in `m`.
pub fn image(rows: &[Mask], m: Mask) -> Mask {
    members(m).take_while(|&s| s < rows.len()).fold(0, |acc, s| acc | rows[s])
}

/// `R_{first,then}(s,t) = ∃u (R_first(s,u) ∧ R_then(u,t))`.
pub fn compose(first: &[Mask], then: &[Mask]) -> Rows {
    first.iter().map(|&m| image(then, m)).collect()
}

/// Composition along a sequence of relations; the empty sequence is the
/// identity.
pub fn compose_all(n: usize, rels: &[&[Mask]]) -> Rows {
    let mut out = identity(n);
    for r in rels {
        out = compose(&out, r);
    }
    out
}

/// `{s : ∃t (q(t) ∧ R(s,t))}`
pub fn factor_exists(rows: &[Mask], q: Mask) -> Mask {
    rows.iter().enumerate().filter(|(_, &r)| r & q != 0).fold(0, |acc, (s, _)| acc | 1 << s)
}

/// `{s : ∀t (R(s,t) ⊃ q(t))}`
pub fn factor_forall(rows: &[Mask], q: Mask) -> Mask {
    rows.iter().enumerate().filter(|(_, &r)| r & !q == 0).fold(0, |acc, (s, _)| acc | 1 << s)
}

/// `[a]X`: situations whose successor lies in `x`.
pub fn after(map: &[usize], x: Mask) -> Mask {
    map.iter().enumerate().filter(|(_, &t)| x >> t & 1 == 1).fold(0, |acc, (s, _)| acc | 1 << s)
}

/// First `(s, t)` with `R(s,t) ≢ R(a(s),t)`.
pub fn persistence_witness(rows: &[Mask], map: &[usize]) -> Option<(usize, usize)> {
    (0..rows.len()).find_map(|s| {
        let diff = rows[s] ^ rows[map[s]];
        (diff != 0).then(|| (s, diff.trailing_zeros() as usize))
    })
}

pub fn persists(rows: &[Mask], map: &[usize]) -> bool {
    (0..rows.len()).all(|s| rows[s] == rows[map[s]])
}

/// First situation where `val` and `val ∘ a` differ.
pub fn change_witness(val: Mask, map: &[usize]) -> Option<usize> {
    (0..map.len()).find(|&s| (val >> s & 1) != (val >> map[s] & 1))
}

/// The largest `q` with `factor_exists(rows, q) ⊆ p`; it works iff any `q`
/// does.
pub fn witness_exists(rows: &[Mask], p: Mask) -> Option<Mask> {
    let n = rows.len();
    let q = full(n) & !image(rows, full(n) & !p);
    (factor_exists(rows, q) == p).then_some(q)
}

/// The smallest `q` with `p ⊆ factor_forall(rows, q)`; it works iff any `q`
/// does.
pub fn witness_forall(rows: &[Mask], p: Mask) -> Option<Mask> {
    let q = image(rows, p);
    (factor_forall(rows, q) == p).then_some(q)
}

/// `{s : (∀x) ∃t (q_x(t) ∧ R_x(s,t))}`
pub fn coll_exists(n: usize, rows: &[&[Mask]], qs: &[Mask]) -> Mask {
    rows.iter().zip(qs).fold(full(n), |acc, (r, &q)| acc & factor_exists(r, q))
}

/// `{s : (∀x) ∀t (R_x(s,t) ⊃ q_x(t))}`
pub fn coll_forall(n: usize, rows: &[&[Mask]], qs: &[Mask]) -> Mask {
    rows.iter().zip(qs).fold(full(n), |acc, (r, &q)| acc & factor_forall(r, q))
}

/// Per-element minimal predicates; exact for the universal collective form.
pub fn witness_coll_forall(n: usize, rows: &[&[Mask]], p: Mask) -> Option<Vec<Mask>> {
    let qs: Vec<Mask> = rows.iter().map(|r| image(r, p)).collect();
    (coll_forall(n, rows, &qs) == p).then_some(qs)
}

/// Searches per-element predicates for the existential collective form.
/// Each `q_x` ranges over subsets of the image of `R_x`. Returns `Err` when
/// the product space exceeds `2^max_bits`.
pub fn witness_coll_exists(n: usize, rows: &[&[Mask]], p: Mask, max_bits: u32) -> Result<Option<Vec<Mask>>, ()> {
    let ranges: Vec<Mask> = rows.iter().map(|r| image(r, full(n))).collect();
    let bits: u32 = ranges.iter().map(|r| r.count_ones()).sum();
    if bits > max_bits {
        return Err(());
    }
    let mut qs = vec![0; rows.len()];
    Ok(search_coll(n, rows, p, &ranges, 0, &mut qs).then_some(qs))
}

fn search_coll(n: usize, rows: &[&[Mask]], p: Mask, ranges: &[Mask], i: usize, qs: &mut Vec<Mask>) -> bool {
    if i == rows.len() {
        return coll_exists(n, rows, qs) == p;
    }
    let range = ranges[i];
    // enumerate submasks of `range`, pruning when a true situation misses
    let mut sub = range;
    loop {
        if p & !factor_exists(rows[i], sub) == 0 {
            qs[i] = sub;
            if search_coll(n, rows, p, ranges, i + 1, qs) {
                return true;
            }
        }
        if sub == 0 {
            return false;
        }
        sub = (sub - 1) & range;
    }
}

/// Whether every row is a singleton.
pub fn is_function(rows: &[Mask]) -> bool {
    rows.iter().all(|r| r.count_ones() == 1)
}

/// Functional rows from a successor map.
pub fn from_map(map: &[usize]) -> Rows {
    map.iter().map(|&t| 1 << t).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rows_strategy(n: usize) -> impl Strategy<Value = Rows> {
        prop::collection::vec(0..(1u64 << n), n)
    }

    fn exhaustive(n: usize, f: impl Fn(Mask) -> Mask, p: Mask) -> bool {
        (0..1u64 << n).any(|q| f(q) == p)
    }

    proptest! {
        #[test]
        fn canonical_exists_matches_search(rows in rows_strategy(5), p in 0..32u64) {
            let found = witness_exists(&rows, p);
            prop_assert_eq!(found.is_some(), exhaustive(5, |q| factor_exists(&rows, q), p));
        }

        #[test]
        fn canonical_forall_matches_search(rows in rows_strategy(5), p in 0..32u64) {
            let found = witness_forall(&rows, p);
            prop_assert_eq!(found.is_some(), exhaustive(5, |q| factor_forall(&rows, q), p));
        }

        #[test]
        fn coll_forall_matches_search(r0 in rows_strategy(3), r1 in rows_strategy(3), p in 0..8u64) {
            let rows = [r0.as_slice(), r1.as_slice()];
            let brute = (0..8u64).any(|a| (0..8u64).any(|b| coll_forall(3, &rows, &[a, b]) == p));
            prop_assert_eq!(witness_coll_forall(3, &rows, p).is_some(), brute);
        }

        #[test]
        fn coll_exists_matches_search(r0 in rows_strategy(3), r1 in rows_strategy(3), p in 0..8u64) {
            let rows = [r0.as_slice(), r1.as_slice()];
            let brute = (0..8u64).any(|a| (0..8u64).any(|b| coll_exists(3, &rows, &[a, b]) == p));
            let found = witness_coll_exists(3, &rows, p, 20).unwrap();
            prop_assert_eq!(found.is_some(), brute);
            if let Some(qs) = found {
                prop_assert_eq!(coll_exists(3, &rows, &qs), p);
            }
        }

        #[test]
        fn composition_is_associative(a in rows_strategy(4), b in rows_strategy(4), c in rows_strategy(4)) {
            prop_assert_eq!(compose(&compose(&a, &b), &c), compose(&a, &compose(&b, &c)));
        }
    }

    #[test]
    fn identity_is_neutral() {
        let r = vec![0b011, 0b100, 0];
        assert_eq!(compose(&identity(3), &r), r);
        assert_eq!(compose(&r, &identity(3)), r);
    }

    #[test]
    fn persistence_reports_differing_target() {
        let rows = vec![0b01, 0b10];
        assert_eq!(persistence_witness(&rows, &[1, 1]), Some((0, 0)));
        assert_eq!(persistence_witness(&rows, &[0, 1]), None);
    }
}
