//! Premise axioms of each formalism, the non-interference conclusion, and the
//! combined theorem verdict.

use std::collections::BTreeMap;

use aspect_core::{d_eval, AspectPath};
use serde::Serialize;

use crate::formalism::{Factoring, Family, Formalism};
use crate::model::{full, FiniteModel, Mask, ModelError, Witness};
use crate::semantics::{
    after, change_witness, coll_exists, coll_forall, compose_all, factor_exists, factor_forall, is_function,
    persistence_witness, witness_coll_exists, witness_coll_forall, witness_exists, witness_forall,
};

/// Modal persistence ranges `X` over every subset up to this many situations.
pub const MODAL_SUBSET_LIMIT: usize = 12;

/// Collective existential witnesses are searched when the product space has
/// at most this many bits.
pub const COLL_SEARCH_BITS: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomKind {
    /// Actions leave the aspects they do not touch unchanged.
    Persistence,
    /// A fluent factors through its aspect.
    Factoring,
    /// Collective `d` agrees with empty intersection.
    Disjointness,
    /// Aspect assignments survive actions.
    Preservation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub kind: AxiomKind,
    pub axiom: String,
    pub subject: String,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PremiseReport {
    pub model: String,
    pub formalism: Formalism,
    pub checks: Vec<AxiomCheck>,
    pub notes: Vec<String>,
}

impl PremiseReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn violated(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn violates(&self, kind: AxiomKind) -> bool {
        self.violated().any(|c| c.kind == kind)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub fluent: String,
    pub action: String,
    pub situation: String,
    pub successor: String,
    pub before: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NoninterferenceReport {
    /// Disjoint (fluent, action) pairs examined.
    pub pairs: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl NoninterferenceReport {
    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Vacuous,
    Counterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub model: String,
    pub formalism: Formalism,
    pub verdict: Verdict,
    pub premises: PremiseReport,
    pub conclusion: NoninterferenceReport,
}

fn set_names(model: &FiniteModel, m: Mask) -> String {
    format!("{{{}}}", model.names(m).join(","))
}

/// Atom indices of a path whose elements are all single atoms.
fn atom_indices(model: &FiniteModel, path: &AspectPath) -> Result<Vec<usize>, ModelError> {
    path.elems()
        .iter()
        .map(|e| {
            let a = e.as_single().ok_or_else(|| ModelError::NotAtomic(path.to_string()))?;
            model.atom(a.name()).ok_or_else(|| ModelError::Unknown { kind: "aspect", name: a.name().to_string() })
        })
        .collect()
}

/// Atom indices of a one-element collective aspect.
fn element_indices(model: &FiniteModel, f: Formalism, path: &AspectPath) -> Result<Vec<usize>, ModelError> {
    if path.len() != 1 {
        return Err(ModelError::Shape { formalism: f, what: format!("a single set-valued aspect element, found {path}") });
    }
    path.elems()[0]
        .members()
        .into_iter()
        .map(|a| model.atom(a.name()).ok_or_else(|| ModelError::Unknown { kind: "aspect", name: a.name().to_string() }))
        .collect()
}

fn rows_of(model: &FiniteModel, atoms: &[usize]) -> Vec<Mask> {
    let rels: Vec<&[Mask]> = atoms.iter().map(|&i| model.rels[i].as_slice()).collect();
    compose_all(model.n(), &rels)
}

/// Every atom sequence of length `len`.
fn sequences(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..k).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

fn path_of(model: &FiniteModel, atoms: &[usize]) -> AspectPath {
    AspectPath::atoms(atoms.iter().map(|&i| model.atoms[i].clone()))
}

/// Lengths of the fluent aspects; persistence is required of every atom
/// sequence of these lengths.
fn levels(model: &FiniteModel) -> Vec<usize> {
    let mut out: Vec<usize> = model.fluents.iter().map(|f| f.aspect.len()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn check_shape(model: &FiniteModel, f: Formalism) -> Result<(), ModelError> {
    model.validate()?;
    let paths = model.fluents.iter().map(|p| &p.aspect).chain(model.actions.iter().map(|a| &a.aspect));
    for path in paths {
        if f.is_collective() {
            element_indices(model, f, path)?;
        } else {
            if !f.is_sequential() && path.len() != 1 {
                return Err(ModelError::Shape { formalism: f, what: format!("aspects of length 1, found {path}") });
            }
            atom_indices(model, path)?;
        }
    }
    if f.needs_functions() {
        for i in 0..model.atoms.len() {
            if !is_function(&model.rels[i]) {
                model.check_function(i)?;
            }
        }
    }
    Ok(())
}

/// `[γ]X` for each atom of `γ`, innermost last.
fn nested(model: &FiniteModel, atoms: &[usize], x: Mask, exists: bool) -> Mask {
    atoms.iter().rev().fold(x, |m, &a| {
        if exists {
            factor_exists(&model.rels[a], m)
        } else {
            factor_forall(&model.rels[a], m)
        }
    })
}

fn relational_persistence(model: &FiniteModel, f: Formalism, out: &mut Vec<AxiomCheck>) -> Result<(), ModelError> {
    let k = model.atoms.len();
    for act in &model.actions {
        for len in levels(model) {
            for gamma in sequences(k, len) {
                let gpath = path_of(model, &gamma);
                if !d_eval(&model.disjointness, &gpath, &act.aspect)? {
                    continue;
                }
                let subject = format!("{} : {}, aspect {gpath}", act.name, act.aspect);
                let witness = if f.family() == Family::Modal {
                    modal_persistence_witness(model, &gamma, &act.map, f.factoring() == Factoring::Exists)
                } else {
                    let rows = rows_of(model, &gamma);
                    persistence_witness(&rows, &act.map).map(|(s, t)| {
                        let (s2, nm) = (act.map[s], &model.situations);
                        if f.needs_functions() {
                            format!(
                                "f{gpath}({}) = {} but f{gpath}({}) = {}",
                                nm[s],
                                set_names(model, rows[s]),
                                nm[s2],
                                set_names(model, rows[s2])
                            )
                        } else {
                            let has = |m: Mask| if m >> t & 1 == 1 { "holds" } else { "fails" };
                            format!(
                                "R{gpath}({},{}) {} but R{gpath}({},{}) {}",
                                nm[s],
                                nm[t],
                                has(rows[s]),
                                nm[s2],
                                nm[t],
                                has(rows[s2])
                            )
                        }
                    })
                };
                out.push(AxiomCheck {
                    kind: AxiomKind::Persistence,
                    axiom: f.persistence_axiom().to_string(),
                    subject,
                    holds: witness.is_none(),
                    witness,
                });
            }
        }
    }
    Ok(())
}

/// Checks `[γ]X ≡ [a][γ]X` (or the diamond form) for every subset `X` on
/// small models, and for the successor sets themselves on larger ones; the
/// two agree because a difference between `R(s)` and `R(a(s))` is exposed by
/// one of those sets or a singleton.
fn modal_persistence_witness(model: &FiniteModel, gamma: &[usize], map: &[usize], exists: bool) -> Option<String> {
    let n = model.n();
    let candidates: Vec<Mask> = if n <= MODAL_SUBSET_LIMIT {
        (0..1u64 << n).collect()
    } else {
        let rows = rows_of(model, gamma);
        let mut v: Vec<Mask> = rows.clone();
        v.extend((0..n).map(|s| 1u64 << s));
        v.extend((0..n).map(|s| full(n) & !(1u64 << s)));
        v
    };
    for x in candidates {
        let inner = nested(model, gamma, x, exists);
        let outer = after(map, inner);
        if inner != outer {
            let s = (inner ^ outer).trailing_zeros() as usize;
            let op = if exists { "<>" } else { "[]" };
            return Some(format!("X = {} at {}: {op}X differs across the action", set_names(model, x), model.situations[s]));
        }
    }
    None
}

fn collective_persistence(model: &FiniteModel, f: Formalism, out: &mut Vec<AxiomCheck>) -> Result<(), ModelError> {
    for act in &model.actions {
        let beta = element_indices(model, f, &act.aspect)?;
        for x in (0..model.atoms.len()).filter(|x| !beta.contains(x)) {
            let rows = &model.rels[x];
            let witness = persistence_witness(rows, &act.map).map(|(s, _)| {
                let s2 = act.map[s];
                format!(
                    "{x}-successors of {} are {} but of {} are {}",
                    model.situations[s],
                    set_names(model, rows[s]),
                    model.situations[s2],
                    set_names(model, rows[s2]),
                    x = model.atoms[x]
                )
            });
            out.push(AxiomCheck {
                kind: AxiomKind::Persistence,
                axiom: f.persistence_axiom().to_string(),
                subject: format!("{} : {}, element {}", act.name, act.aspect, model.atoms[x]),
                holds: witness.is_none(),
                witness,
            });
        }
    }
    Ok(())
}

fn failing_pair(model: &FiniteModel, val: Mask, rows: &[Mask]) -> String {
    let n = model.n();
    for s in 0..n {
        for t in 0..n {
            if val >> s & 1 == 1 && val >> t & 1 == 0 && rows[s] == rows[t] {
                return format!(
                    "{} and {} share their aspect but disagree on the fluent",
                    model.situations[s], model.situations[t]
                );
            }
        }
    }
    "no predicate q satisfies the axiom".to_string()
}

fn relational_factoring(model: &FiniteModel, f: Formalism, out: &mut Vec<AxiomCheck>) -> Result<(), ModelError> {
    for p in &model.fluents {
        let atoms = atom_indices(model, &p.aspect)?;
        let rows = rows_of(model, &atoms);
        let exists = f.factoring() == Factoring::Exists;
        let apply = |q: Mask| -> Mask {
            match f.family() {
                Family::Modal => nested(model, &atoms, q, exists),
                _ if exists => factor_exists(&rows, q),
                _ => factor_forall(&rows, q),
            }
        };
        let stored = match model.witnesses.get(&(p.name.clone(), f)) {
            Some(Witness::Plain(q)) if apply(*q) == p.val => Some(*q),
            _ => None,
        };
        let (witness, holds) = match stored {
            Some(q) => (format!("q = {} (stored)", set_names(model, q)), true),
            None => {
                let canon = if exists { witness_exists(&rows, p.val) } else { witness_forall(&rows, p.val) };
                match canon {
                    Some(q) => (format!("q = {}", set_names(model, q)), true),
                    None => (failing_pair(model, p.val, &rows), false),
                }
            }
        };
        out.push(AxiomCheck {
            kind: AxiomKind::Factoring,
            axiom: f.factoring_axiom().to_string(),
            subject: format!("{} : {}", p.name, p.aspect),
            holds,
            witness: Some(witness),
        });
    }
    Ok(())
}

fn collective_factoring(model: &FiniteModel, f: Formalism, out: &mut Vec<AxiomCheck>) -> Result<(), ModelError> {
    let n = model.n();
    for p in &model.fluents {
        let elems = element_indices(model, f, &p.aspect)?;
        let rows: Vec<&[Mask]> = elems.iter().map(|&x| model.rels[x].as_slice()).collect();
        let exists = f.factoring() == Factoring::Exists;
        let apply = |qs: &[Mask]| if exists { coll_exists(n, &rows, qs) } else { coll_forall(n, &rows, qs) };
        let stored = match model.witnesses.get(&(p.name.clone(), f)) {
            Some(Witness::PerElement(map)) => {
                let qs: Option<Vec<Mask>> = elems.iter().map(|&x| map.get(&model.atoms[x]).copied()).collect();
                qs.filter(|qs| apply(qs) == p.val)
            }
            _ => None,
        };
        let describe = |qs: &[Mask]| {
            elems
                .iter()
                .zip(qs)
                .map(|(&x, &q)| format!("q_{} = {}", model.atoms[x], set_names(model, q)))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let (witness, holds) = match stored {
            Some(qs) => (format!("{} (stored)", describe(&qs)), true),
            None => {
                let found = if exists {
                    witness_coll_exists(n, &rows, p.val, COLL_SEARCH_BITS)
                        .map_err(|_| ModelError::MissingWitness { fluent: p.name.clone(), formalism: f })?
                } else {
                    witness_coll_forall(n, &rows, p.val)
                };
                match found {
                    Some(qs) => (describe(&qs), true),
                    None => ("no predicates q_x satisfy the axiom".to_string(), false),
                }
            }
        };
        out.push(AxiomCheck {
            kind: AxiomKind::Factoring,
            axiom: f.factoring_axiom().to_string(),
            subject: format!("{} : {}", p.name, p.aspect),
            holds,
            witness: Some(witness),
        });
    }
    Ok(())
}

fn collective_disjointness(model: &FiniteModel, f: Formalism, out: &mut Vec<AxiomCheck>) -> Result<(), ModelError> {
    for p in &model.fluents {
        for a in &model.actions {
            if !d_eval(&model.disjointness, &p.aspect, &a.aspect)? {
                continue;
            }
            let alpha = element_indices(model, f, &p.aspect)?;
            let beta = element_indices(model, f, &a.aspect)?;
            let shared: Vec<&str> = alpha.iter().filter(|x| beta.contains(x)).map(|&x| model.atoms[x].as_str()).collect();
            out.push(AxiomCheck {
                kind: AxiomKind::Disjointness,
                axiom: "d(a,b) only if a and b share no element".to_string(),
                subject: format!("{} : {}, {} : {}", p.name, p.aspect, a.name, a.aspect),
                holds: shared.is_empty(),
                witness: (!shared.is_empty()).then(|| format!("shared elements {}", shared.join(","))),
            });
        }
    }
    Ok(())
}

/// Checks every premise axiom of `f` over the whole model.
pub fn check_premises(model: &FiniteModel, f: Formalism) -> Result<PremiseReport, ModelError> {
    check_shape(model, f)?;
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    if f.is_collective() {
        collective_persistence(model, f, &mut checks)?;
        collective_factoring(model, f, &mut checks)?;
        collective_disjointness(model, f, &mut checks)?;
        notes.push("non-interference is read as: d(a,b) holds only when a and b share no element".to_string());
    } else {
        relational_persistence(model, f, &mut checks)?;
        relational_factoring(model, f, &mut checks)?;
        if f.family() == Family::Modal {
            checks.push(AxiomCheck {
                kind: AxiomKind::Preservation,
                axiom: "p:a -> [act](p:a)".to_string(),
                subject: "aspect assignments are fixed per fluent and action".to_string(),
                holds: true,
                witness: None,
            });
            if model.n() > MODAL_SUBSET_LIMIT {
                notes.push(format!(
                    "X ranges over successor sets and singletons, not all subsets, above {MODAL_SUBSET_LIMIT} situations"
                ));
            }
        }
    }
    Ok(PremiseReport { model: model.name.clone(), formalism: f, checks, notes })
}

/// For every fluent and action whose aspects are disjoint under the model's
/// `d`, checks `p(s) ≡ p(a(s))` at every situation.
pub fn check_noninterference(model: &FiniteModel) -> Result<NoninterferenceReport, ModelError> {
    model.validate()?;
    let mut report = NoninterferenceReport::default();
    for p in &model.fluents {
        for a in &model.actions {
            if !d_eval(&model.disjointness, &p.aspect, &a.aspect)? {
                continue;
            }
            report.pairs += 1;
            if let Some(s) = change_witness(p.val, &a.map) {
                report.counterexamples.push(Counterexample {
                    fluent: p.name.clone(),
                    action: a.name.clone(),
                    situation: model.situations[s].clone(),
                    successor: model.situations[a.map[s]].clone(),
                    before: p.val >> s & 1 == 1,
                });
            }
        }
    }
    Ok(report)
}

pub fn verify_theorem(f: Formalism, model: &FiniteModel) -> Result<TheoremReport, ModelError> {
    let premises = check_premises(model, f)?;
    let conclusion = check_noninterference(model)?;
    let verdict = match (premises.holds(), conclusion.is_clean()) {
        (false, _) => Verdict::Vacuous,
        (true, true) => Verdict::Pass,
        (true, false) => Verdict::Counterexample,
    };
    Ok(TheoremReport { model: model.name.clone(), formalism: f, verdict, premises, conclusion })
}

/// Stored witnesses as a per-element map keyed by atom name.
pub fn per_element(pairs: impl IntoIterator<Item = (String, Mask)>) -> Witness {
    Witness::PerElement(pairs.into_iter().collect::<BTreeMap<_, _>>())
}

/// The valuation a fluent of aspect `aspect` gets from witness `w` under `f`.
pub fn factor_value(model: &FiniteModel, f: Formalism, aspect: &AspectPath, w: &Witness) -> Result<Mask, ModelError> {
    let exists = f.factoring() == Factoring::Exists;
    match w {
        Witness::Plain(q) if !f.is_collective() => {
            let atoms = atom_indices(model, aspect)?;
            Ok(nested(model, &atoms, *q, exists))
        }
        Witness::PerElement(map) if f.is_collective() => {
            let elems = element_indices(model, f, aspect)?;
            let rows: Vec<&[Mask]> = elems.iter().map(|&x| model.rels[x].as_slice()).collect();
            let qs: Vec<Mask> = elems.iter().map(|&x| map.get(&model.atoms[x]).copied().unwrap_or(0)).collect();
            Ok(if exists { coll_exists(model.n(), &rows, &qs) } else { coll_forall(model.n(), &rows, &qs) })
        }
        _ => Err(ModelError::Shape { formalism: f, what: "a witness of the matching kind".to_string() }),
    }
}
