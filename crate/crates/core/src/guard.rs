//! Solving guards (conjunctions of literals) against a valuation.

use std::collections::{BTreeMap, BTreeSet};

use crate::aspect::{GroundFluent, Value};
use crate::domain::{Domain, Guard, Literal, Pattern, VarSorts};

pub type Binding = BTreeMap<String, Value>;

/// Read access to fluent truth values. `None` means undefined, which a guard
/// treats as "not known to hold".
pub trait Valuation {
    fn value(&self, p: &GroundFluent) -> Option<bool>;
}

/// Closed-world valuation: listed fluents are true, everything else false.
impl Valuation for BTreeSet<GroundFluent> {
    fn value(&self, p: &GroundFluent) -> Option<bool> {
        Some(self.contains(p))
    }
}

/// Explicit assignment; unlisted fluents are false.
impl Valuation for BTreeMap<GroundFluent, bool> {
    fn value(&self, p: &GroundFluent) -> Option<bool> {
        Some(self.get(p).copied().unwrap_or(false))
    }
}

/// All extensions of `binding` that satisfy `guard`. Variables of positive
/// literals are enumerated over their sorts; builtins need bound operands.
pub fn solve(domain: &Domain, guard: &Guard, vars: &VarSorts, binding: &Binding, val: &dyn Valuation) -> Vec<Binding> {
    let positives: Vec<&Pattern> = guard
        .literals()
        .iter()
        .filter_map(|l| match l {
            Literal::Holds { negated: false, atom } => Some(atom),
            _ => None,
        })
        .collect();
    let mut out = Vec::new();
    solve_rec(domain, guard, vars, &positives, binding.clone(), val, &mut out);
    out
}

/// Whether `guard` holds for some extension of `binding`.
pub fn satisfiable(domain: &Domain, guard: &Guard, vars: &VarSorts, binding: &Binding, val: &dyn Valuation) -> bool {
    !solve(domain, guard, vars, binding, val).is_empty()
}

fn solve_rec(
    domain: &Domain,
    guard: &Guard,
    vars: &VarSorts,
    positives: &[&Pattern],
    binding: Binding,
    val: &dyn Valuation,
    out: &mut Vec<Binding>,
) {
    let Some((first, rest)) = positives.split_first() else {
        if rest_holds(domain, guard, vars, &binding, val) {
            out.push(binding);
        }
        return;
    };
    for b in extensions(domain, first, vars, &binding) {
        let Some(p) = first.ground_fluent(&b) else { continue };
        if domain.fluent_fits(&p) && val.value(&p) == Some(true) {
            solve_rec(domain, guard, vars, rest, b, val, out);
        }
    }
}

fn rest_holds(domain: &Domain, guard: &Guard, vars: &VarSorts, binding: &Binding, val: &dyn Valuation) -> bool {
    guard.literals().iter().all(|lit| match lit {
        Literal::Holds { negated: false, .. } => true,
        Literal::Holds { negated: true, atom } => !extensions(domain, atom, vars, binding).into_iter().any(|b| {
            atom.ground_fluent(&b)
                .is_some_and(|p| domain.fluent_fits(&p) && val.value(&p) == Some(true))
        }),
        builtin => builtin.eval_builtin(binding).unwrap_or(false),
    })
}

/// Every way of binding the pattern's unbound variables over their sorts.
pub fn extensions(domain: &Domain, pat: &Pattern, vars: &VarSorts, binding: &Binding) -> Vec<Binding> {
    let mut out = vec![binding.clone()];
    let mut seen = BTreeSet::new();
    for v in pat.vars() {
        if binding.contains_key(v) || !seen.insert(v) {
            continue;
        }
        let Some(sort) = Domain::var_sort(vars, v) else {
            return Vec::new();
        };
        let universe = domain.universe(sort);
        out = out
            .into_iter()
            .flat_map(|b| {
                universe.iter().map(move |value| {
                    let mut next = b.clone();
                    next.insert(v.to_string(), value.clone());
                    next
                })
            })
            .collect();
    }
    out
}
