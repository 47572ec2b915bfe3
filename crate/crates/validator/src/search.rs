//! Counterexample search: exhaustive enumeration of small models, seeded
//! sampling of larger ones, and planted premise violations.

use std::collections::BTreeMap;

use aspect_core::{d_eval, AspectElem, AspectPath, DisjointnessSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::formalism::{Factoring, Family, Formalism};
use crate::model::{full, FiniteModel, Mask, Witness};
use crate::parse::unparse_model;
use crate::premises::{check_premises, factor_value, verify_theorem, AxiomKind, Verdict};
use crate::semantics::{after, coll_exists, coll_forall, compose_all, factor_exists, factor_forall, Rows};

/// Every this many enumerated candidates one is rebuilt as a model and run
/// through the general checker.
const CROSS_CHECK_EVERY: u64 = 7919;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub max_situations: usize,
    pub atoms: usize,
    pub actions: usize,
    /// Sizes up to this are enumerated exhaustively; larger ones sampled.
    pub exhaustive_up_to: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_situations: 8, atoms: 2, actions: 1, exhaustive_up_to: 3, samples: 10_000, seed: 0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PhaseStats {
    pub models: u64,
    /// Models satisfying every premise.
    pub satisfying: u64,
    pub counterexamples: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub formalism: Formalism,
    pub bounds: SearchBounds,
    pub exhaustive: PhaseStats,
    pub random: PhaseStats,
    pub cross_checked: u64,
    /// Candidates where the enumerator and the general checker disagree.
    pub mismatches: Vec<String>,
    /// First counterexample found, as a model file.
    pub counterexample: Option<String>,
}

impl SearchReport {
    pub fn is_clean(&self) -> bool {
        self.counterexample.is_none() && self.mismatches.is_empty()
    }
}

fn atom_name(i: usize) -> String {
    format!("x{i}")
}

/// Candidate aspects as atom-index sequences; collective aspects are one
/// set element, encoded by its member list.
fn candidate_paths(f: Formalism, k: usize, max_len: usize) -> Vec<Vec<usize>> {
    if f.is_collective() {
        return (1..1usize << k).map(|m| (0..k).filter(|i| m >> i & 1 == 1).collect()).collect();
    }
    let max_len = if f.is_sequential() { max_len } else { 1 };
    let mut out = Vec::new();
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..k).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn to_path(f: Formalism, p: &[usize]) -> AspectPath {
    if f.is_collective() {
        AspectPath::new(vec![AspectElem::set(p.iter().map(|&i| atom_name(i))).expect("nonempty")])
    } else {
        AspectPath::atoms(p.iter().map(|&i| atom_name(i)))
    }
}

fn d(f: Formalism, a: &[usize], b: &[usize]) -> bool {
    d_eval(&DisjointnessSpec::SeqExistsDiff, &to_path(f, a), &to_path(f, b)).expect("seq-diff is total")
}

/// Everything about a candidate except its relations and action.
struct Frame {
    paths: Vec<Vec<usize>>,
    /// `(fluent path, action path, constrained paths)`
    pairs: Vec<(usize, usize, Vec<usize>)>,
}

impl Frame {
    fn new(f: Formalism, k: usize, max_len: usize) -> Self {
        let paths = candidate_paths(f, k, max_len);
        let mut pairs = Vec::new();
        for (ai, a) in paths.iter().enumerate() {
            for (bi, b) in paths.iter().enumerate() {
                if !d(f, a, b) {
                    continue;
                }
                let constrained = if f.is_collective() {
                    (0..k).filter(|x| !b.contains(x)).collect()
                } else {
                    (0..paths.len()).filter(|&g| paths[g].len() == a.len() && d(f, &paths[g], b)).collect()
                };
                pairs.push((ai, bi, constrained));
            }
        }
        Frame { paths, pairs }
    }
}

/// Whether relation `g` (a path, or an element for collective formalisms)
/// is left alone by `map`.
fn persists(f: Formalism, rels: &[Rows], path_rows: &[Rows], paths: &[Vec<usize>], g: usize, map: &[usize]) -> bool {
    let n = map.len();
    match f.family() {
        Family::Collective => {
            let r = &rels[g];
            (0..n).all(|s| r[s] == r[map[s]])
        }
        Family::Modal => {
            let exists = f.factoring() == Factoring::Exists;
            (0..1u64 << n).all(|x| {
                let inner = nested(rels, &paths[g], x, exists);
                inner == after(map, inner)
            })
        }
        _ => {
            let r = &path_rows[g];
            (0..n).all(|s| r[s] == r[map[s]])
        }
    }
}

fn nested(rels: &[Rows], atoms: &[usize], x: Mask, exists: bool) -> Mask {
    atoms.iter().rev().fold(x, |m, &a| if exists { factor_exists(&rels[a], m) } else { factor_forall(&rels[a], m) })
}

/// Fluent valuation from per-element or plain witnesses.
fn value(f: Formalism, n: usize, rels: &[Rows], path_rows: &Rows, atoms: &[usize], qs: &[Mask]) -> Mask {
    let exists = f.factoring() == Factoring::Exists;
    match f.family() {
        Family::Collective => {
            let rows: Vec<&[Mask]> = atoms.iter().map(|&x| rels[x].as_slice()).collect();
            if exists {
                coll_exists(n, &rows, qs)
            } else {
                coll_forall(n, &rows, qs)
            }
        }
        Family::Modal => nested(rels, atoms, qs[0], exists),
        _ if exists => factor_exists(path_rows, qs[0]),
        _ => factor_forall(path_rows, qs[0]),
    }
}

struct Candidate<'a> {
    f: Formalism,
    rels: &'a [Rows],
    actions: Vec<(&'a [usize], AspectPath)>,
    fluents: Vec<(AspectPath, Mask, Witness)>,
}

fn build(c: &Candidate, name: &str) -> FiniteModel {
    let n = c.rels[0].len();
    let mut m = FiniteModel::numbered(name, n).expect("small");
    for (i, r) in c.rels.iter().enumerate() {
        let a = m.set_relation(&atom_name(i), r.clone());
        m.functional[a] = c.f.needs_functions();
    }
    for (i, (map, path)) in c.actions.iter().enumerate() {
        m.add_action(&format!("a{i}"), map.to_vec(), path.clone());
    }
    for (i, (path, val, w)) in c.fluents.iter().enumerate() {
        let pname = format!("p{i}");
        m.add_fluent(&pname, *val, path.clone());
        m.witnesses.insert((pname, c.f), w.clone());
    }
    m
}

fn witness_of(f: Formalism, atoms: &[usize], qs: &[Mask]) -> Witness {
    if f.is_collective() {
        Witness::PerElement(atoms.iter().zip(qs).map(|(&x, &q)| (atom_name(x), q)).collect::<BTreeMap<_, _>>())
    } else {
        Witness::Plain(qs[0])
    }
}

/// Calls `visit` with every relation table for `k` atoms over `n` situations.
fn for_each_relations(f: Formalism, n: usize, k: usize, mut visit: impl FnMut(&[Rows])) {
    let choices: Vec<Mask> = if f.needs_functions() { (0..n).map(|t| 1 << t).collect() } else { (0..1u64 << n).collect() };
    let cells = n * k;
    let c = choices.len();
    let total = c.pow(cells as u32);
    let mut rels: Vec<Rows> = vec![vec![0; n]; k];
    for code in 0..total {
        let mut rest = code;
        for cell in 0..cells {
            rels[cell / n][cell % n] = choices[rest % c];
            rest /= c;
        }
        visit(&rels);
    }
}

fn for_each_map(n: usize, mut visit: impl FnMut(&[usize])) {
    let total = n.pow(n as u32);
    let mut map = vec![0; n];
    for code in 0..total {
        let mut rest = code;
        for slot in map.iter_mut() {
            *slot = rest % n;
            rest /= n;
        }
        visit(&map);
    }
}

struct Tally<'r> {
    report: &'r mut SearchReport,
    counter: u64,
}

impl Tally<'_> {
    fn cross_check(&mut self, c: &Candidate, expected: Verdict) {
        self.report.cross_checked += 1;
        let m = build(c, "candidate");
        match verify_theorem(c.f, &m) {
            Ok(r) if r.verdict == expected => {}
            Ok(r) => self.report.mismatches.push(format!(
                "enumerator says {expected:?}, checker says {:?}:\n{}",
                r.verdict,
                unparse_model(&m)
            )),
            Err(e) => self.report.mismatches.push(format!("checker error {e}:\n{}", unparse_model(&m))),
        }
    }

    /// `count` candidates that all fail the persistence premise.
    fn vacuous<'a>(&mut self, count: u64, make: impl FnOnce() -> Candidate<'a>) {
        self.report.exhaustive.models += count;
        let before = self.counter / CROSS_CHECK_EVERY;
        self.counter += count;
        if self.counter / CROSS_CHECK_EVERY > before {
            self.cross_check(&make(), Verdict::Vacuous);
        }
    }

    fn satisfying<'a>(&mut self, conclusion: bool, make: impl FnOnce() -> Candidate<'a>) {
        let stats = &mut self.report.exhaustive;
        stats.models += 1;
        stats.satisfying += 1;
        self.counter += 1;
        if !conclusion {
            stats.counterexamples += 1;
            let c = make();
            if self.report.counterexample.is_none() {
                self.report.counterexample = Some(unparse_model(&build(&c, "counterexample")));
            }
        } else if self.counter % CROSS_CHECK_EVERY == 0 {
            self.cross_check(&make(), Verdict::Pass);
        }
    }
}

fn exhaustive(f: Formalism, bounds: &SearchBounds, report: &mut SearchReport) {
    let mut tally = Tally { report, counter: 0 };
    for k in 1..=bounds.atoms {
        let frame = Frame::new(f, k, 2);
        for n in 1..=bounds.exhaustive_up_to.min(bounds.max_situations) {
            let qspace = 1u64 << n;
            for_each_relations(f, n, k, |rels| {
                let path_rows: Vec<Rows> = if f.is_collective() {
                    Vec::new()
                } else {
                    frame
                        .paths
                        .iter()
                        .map(|p| compose_all(n, &p.iter().map(|&a| rels[a].as_slice()).collect::<Vec<_>>()))
                        .collect()
                };
                let n_units = if f.is_collective() { k } else { frame.paths.len() };
                for_each_map(n, |map| {
                    let persist: Vec<bool> =
                        (0..n_units).map(|g| persists(f, rels, &path_rows, &frame.paths, g, map)).collect();
                    for (ai, bi, constrained) in &frame.pairs {
                        let premise = constrained.iter().all(|&g| persist[g]);
                        let atoms = &frame.paths[*ai];
                        let elems = if f.is_collective() { atoms.len() } else { 1 };
                        let empty = Vec::new();
                        let prow = if f.is_collective() { &empty } else { &path_rows[*ai] };
                        let combos = qspace.pow(elems as u32);
                        let make = |qs: Vec<Mask>, val: Mask| Candidate {
                            f,
                            rels,
                            actions: vec![(map, to_path(f, &frame.paths[*bi]))],
                            fluents: vec![(to_path(f, atoms), val, witness_of(f, atoms, &qs))],
                        };
                        if !premise {
                            let qs = vec![0; elems];
                            tally.vacuous(combos, || make(qs.clone(), value(f, n, rels, prow, atoms, &qs)));
                            continue;
                        }
                        for code in 0..combos {
                            let qs: Vec<Mask> = (0..elems).map(|e| (code >> (e * n)) & (qspace - 1)).collect();
                            let val = value(f, n, rels, prow, atoms, &qs);
                            let conclusion = (0..n).all(|s| (val >> s & 1) == (val >> map[s] & 1));
                            tally.satisfying(conclusion, || make(qs, val));
                        }
                    }
                });
            });
        }
    }
}

/// Generated model: relations, actions and fluents with their witnesses.
struct Sample {
    rels: Vec<Rows>,
    actions: Vec<(Vec<usize>, Vec<usize>)>,
    fluents: Vec<(Vec<usize>, Vec<Mask>)>,
}

fn random_rels(f: Formalism, n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<Rows> {
    (0..k)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if f.needs_functions() {
                        1 << rng.gen_range(0..n)
                    } else {
                        (0..n).filter(|_| rng.gen_bool(0.35)).fold(0, |m, t| m | 1 << t)
                    }
                })
                .collect()
        })
        .collect()
}

/// Rows of every unit `constrained` refers to, per situation.
fn signature(f: Formalism, rels: &[Rows], units: &[Vec<usize>], s: usize) -> Vec<Mask> {
    units
        .iter()
        .map(|u| {
            if f.is_collective() {
                rels[u[0]][s]
            } else {
                let n = rels[0].len();
                compose_all(n, &u.iter().map(|&a| rels[a].as_slice()).collect::<Vec<_>>())[s]
            }
        })
        .collect()
}

/// A random model whose actions respect persistence by construction when
/// `satisfy` is set.
fn sample(f: Formalism, n: usize, rng: &mut ChaCha8Rng, satisfy: bool) -> Sample {
    let k = rng.gen_range(2..=3);
    let rels = random_rels(f, n, k, rng);
    let paths = candidate_paths(f, k, 3);
    let n_fluents = rng.gen_range(1..=2);
    let n_actions = rng.gen_range(1..=2);
    let pick = |rng: &mut ChaCha8Rng| paths[rng.gen_range(0..paths.len())].clone();
    let mut actions: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut fluents: Vec<(Vec<usize>, Vec<Mask>)> = Vec::new();
    // first fluent and action are chosen disjoint when possible
    let (mut a0, mut b0) = (pick(rng), pick(rng));
    for _ in 0..32 {
        if d(f, &a0, &b0) {
            break;
        }
        a0 = pick(rng);
        b0 = pick(rng);
    }
    for i in 0..n_fluents {
        let path = if i == 0 { a0.clone() } else { pick(rng) };
        let elems = if f.is_collective() { path.len() } else { 1 };
        let qs = (0..elems).map(|_| rng.gen_range(0..1u64 << n)).collect();
        fluents.push((path, qs));
    }
    let levels: Vec<usize> = {
        let mut l: Vec<usize> = fluents.iter().map(|(p, _)| p.len()).collect();
        l.sort_unstable();
        l.dedup();
        l
    };
    for i in 0..n_actions {
        let beta = if i == 0 { b0.clone() } else { pick(rng) };
        let map: Vec<usize> = if satisfy {
            let units: Vec<Vec<usize>> = if f.is_collective() {
                (0..k).filter(|x| !beta.contains(x)).map(|x| vec![x]).collect()
            } else {
                paths.iter().filter(|g| levels.contains(&g.len()) && d(f, g, &beta)).cloned().collect()
            };
            let sigs: Vec<Vec<Mask>> = (0..n).map(|s| signature(f, &rels, &units, s)).collect();
            (0..n)
                .map(|s| {
                    let same: Vec<usize> = (0..n).filter(|&t| sigs[t] == sigs[s]).collect();
                    same[rng.gen_range(0..same.len())]
                })
                .collect()
        } else {
            (0..n).map(|_| rng.gen_range(0..n)).collect()
        };
        actions.push((map, beta));
    }
    Sample { rels, actions, fluents }
}

fn sample_model(f: Formalism, s: &Sample, name: &str, random_values: Option<&mut ChaCha8Rng>) -> FiniteModel {
    let n = s.rels[0].len();
    let mut m = FiniteModel::numbered(name, n).expect("small");
    for (i, r) in s.rels.iter().enumerate() {
        let a = m.set_relation(&atom_name(i), r.clone());
        m.functional[a] = f.needs_functions();
    }
    for (i, (map, beta)) in s.actions.iter().enumerate() {
        m.add_action(&format!("a{i}"), map.clone(), to_path(f, beta));
    }
    let mut rng = random_values;
    for (i, (path, qs)) in s.fluents.iter().enumerate() {
        let pname = format!("p{i}");
        let aspect = to_path(f, path);
        let w = witness_of(f, path, qs);
        let val = match rng.as_deref_mut() {
            Some(r) => r.gen_range(0..1u64 << n),
            None => factor_value(&m, f, &aspect, &w).expect("generated shapes fit"),
        };
        m.add_fluent(&pname, val, aspect);
        m.witnesses.insert((pname, f), w);
    }
    m
}

fn random_phase(f: Formalism, bounds: &SearchBounds, report: &mut SearchReport) {
    let lo = bounds.exhaustive_up_to + 1;
    let hi = bounds.max_situations.min(crate::model::MAX_SITUATIONS);
    if lo > hi {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed ^ (f as u64) << 32);
    for i in 0..bounds.samples {
        let n = rng.gen_range(lo..=hi);
        let satisfy = i % 2 == 0;
        let s = sample(f, n, &mut rng, satisfy);
        let m = if satisfy {
            sample_model(f, &s, &format!("sample{i}"), None)
        } else {
            let mut vals = ChaCha8Rng::seed_from_u64(rng.gen());
            sample_model(f, &s, &format!("sample{i}"), Some(&mut vals))
        };
        report.random.models += 1;
        match verify_theorem(f, &m) {
            Ok(r) => match r.verdict {
                Verdict::Pass => report.random.satisfying += 1,
                Verdict::Vacuous => {}
                Verdict::Counterexample => {
                    report.random.satisfying += 1;
                    report.random.counterexamples += 1;
                    if report.counterexample.is_none() {
                        report.counterexample = Some(unparse_model(&m));
                    }
                }
            },
            Err(e) => report.mismatches.push(format!("checker error {e}:\n{}", unparse_model(&m))),
        }
    }
}

/// Enumerates every model within `exhaustive_up_to` situations and samples
/// `samples` larger ones, looking for a model where the premises hold and
/// non-interference fails.
pub fn search_counterexample(f: Formalism, bounds: SearchBounds) -> SearchReport {
    let mut report = SearchReport {
        formalism: f,
        bounds,
        exhaustive: PhaseStats::default(),
        random: PhaseStats::default(),
        cross_checked: 0,
        mismatches: Vec::new(),
        counterexample: None,
    };
    if bounds.actions > 0 {
        exhaustive(f, &bounds, &mut report);
        random_phase(f, &bounds, &mut report);
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlantResult {
    pub formalism: Formalism,
    pub axiom: AxiomKind,
    pub detected: bool,
    pub verdict: Verdict,
    pub model: String,
}

/// A premise-satisfying sample with a disjoint fluent/action pair.
fn passing_sample(f: Formalism, rng: &mut ChaCha8Rng) -> FiniteModel {
    loop {
        let s = sample(f, 5, rng, true);
        let m = sample_model(f, &s, "base", None);
        if let Ok(r) = verify_theorem(f, &m) {
            if r.verdict == Verdict::Pass && r.conclusion.pairs > 0 {
                return m;
            }
        }
    }
}

/// Adds a fresh situation `s_new` to a passing model so that one premise
/// fails there: for persistence its aspects are a self-loop that every
/// action leaves; for factoring it copies the aspects of `s0` with the
/// fluent negated.
pub fn plant(f: Formalism, base: &FiniteModel, axiom: AxiomKind) -> FiniteModel {
    let n = base.n();
    let mut situations = base.situations.clone();
    situations.push("s_new".to_string());
    let mut m = FiniteModel::new(format!("{}_{axiom:?}", base.name).to_lowercase(), situations).expect("small");
    for (i, atom) in base.atoms.iter().enumerate() {
        let mut rows = base.rels[i].clone();
        rows.push(match axiom {
            AxiomKind::Factoring => base.rels[i][0],
            _ => 1 << n,
        });
        let a = m.set_relation(atom, rows);
        m.functional[a] = base.functional[i];
    }
    for a in &base.actions {
        let mut map = a.map.clone();
        map.push(match axiom {
            AxiomKind::Factoring => a.map[0],
            _ => 0,
        });
        m.add_action(&a.name, map, a.aspect.clone());
    }
    for p in &base.fluents {
        m.add_fluent(&p.name, 0, p.aspect.clone());
    }
    m.witnesses = base.witnesses.clone();
    for (i, p) in base.fluents.iter().enumerate() {
        let val = match axiom {
            AxiomKind::Factoring => p.val | ((!p.val & 1) << n),
            _ => {
                let w = &base.witnesses[&(p.name.clone(), f)];
                factor_value(&m, f, &p.aspect, w).expect("same shapes")
            }
        };
        m.fluents[i].val = val & full(n + 1);
    }
    m
}

/// One planted violation per premise kind; each must be reported.
pub fn planted_violations(f: Formalism, seed: u64) -> Vec<PlantResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (f as u64) << 40);
    let base = passing_sample(f, &mut rng);
    [AxiomKind::Persistence, AxiomKind::Factoring]
        .into_iter()
        .map(|axiom| {
            let m = plant(f, &base, axiom);
            let premises = check_premises(&m, f);
            let verdict = verify_theorem(f, &m).map(|r| r.verdict).unwrap_or(Verdict::Vacuous);
            PlantResult {
                formalism: f,
                axiom,
                detected: premises.map(|r| r.violates(axiom)).unwrap_or(false) && verdict == Verdict::Vacuous,
                verdict,
                model: unparse_model(&m),
            }
        })
        .collect()
}
