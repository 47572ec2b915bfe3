//! The commutativity constraint on aspect relations, and the demonstration
//! that the naive `d` makes an action of aspect `(0,1)` effect-free once
//! relations commute.

use aspect_core::{d_eval, AspectPath, Commutation, DisjointnessSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::formalism::Formalism;
use crate::model::{FiniteModel, Mask, Witness};
use crate::parse::unparse_model;
use crate::premises::{check_premises, verify_theorem, Verdict};
use crate::semantics::{compose, factor_exists, persists};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommuteViolation {
    pub first: String,
    pub second: String,
    pub situation: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutativityReport {
    pub pairs_checked: usize,
    pub violations: Vec<CommuteViolation>,
}

impl CommutativityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `R_{x,y} = R_{y,x}` for every pair of distinct atoms. On functional
/// rows this is `f_{x,y} = f_{y,x}`, and it is equivalent to the modal forms
/// `[xy]X ≡ [yx]X` and `<xy>X ≡ <yx>X` over all `X`.
pub fn check_commutativity(model: &FiniteModel) -> CommutativityReport {
    let mut report = CommutativityReport { pairs_checked: 0, violations: Vec::new() };
    let k = model.atoms.len();
    for i in 0..k {
        for j in i + 1..k {
            report.pairs_checked += 1;
            let xy = compose(&model.rels[i], &model.rels[j]);
            let yx = compose(&model.rels[j], &model.rels[i]);
            if let Some(s) = (0..model.n()).find(|&s| xy[s] != yx[s]) {
                let t = (xy[s] ^ yx[s]).trailing_zeros() as usize;
                report.violations.push(CommuteViolation {
                    first: model.atoms[i].clone(),
                    second: model.atoms[j].clone(),
                    situation: model.situations[s].clone(),
                    target: model.situations[t].clone(),
                });
            }
        }
    }
    report
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub situations: usize,
    pub commutative_structures: u64,
    /// (structure, action) pairs satisfying every premise.
    pub premise_satisfying: u64,
    pub effect_free: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaiveHalf {
    /// Relational structures, every size up to 3.
    pub relational: Vec<Coverage>,
    /// Functional structures with 4 situations.
    pub functional: Coverage,
    /// Seeded relational structures with 4 situations.
    pub sampled: Coverage,
    pub failures: Vec<String>,
}

impl NaiveHalf {
    pub fn holds(&self) -> bool {
        let all = self.relational.iter().chain([&self.functional, &self.sampled]);
        self.failures.is_empty() && all.clone().all(|c| c.premise_satisfying == c.effect_free)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalHalf {
    pub model: String,
    pub commutative: bool,
    pub premises_hold: bool,
    pub fluent: String,
    pub action: String,
    /// Where the action changes the fluent.
    pub changed_at: Option<(String, String)>,
    /// Verdict for the same model under the naive `d`.
    pub naive_verdict: Verdict,
    /// Whether `d((0,1),(1,0))` holds under the canonical `d`.
    pub d_01_10: bool,
    /// Whether the premises still hold once a fluent of aspect `(1)` is
    /// added.
    pub premises_with_length_one_fluent: bool,
}

impl CanonicalHalf {
    pub fn holds(&self) -> bool {
        self.commutative && self.premises_hold && self.changed_at.is_some() && !self.d_01_10
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PitfallReport {
    pub seed: u64,
    pub naive: NaiveHalf,
    pub canonical: CanonicalHalf,
    pub notes: Vec<String>,
}

impl PitfallReport {
    pub fn holds(&self) -> bool {
        self.naive.holds() && self.canonical.holds()
    }
}

const LEVEL2: [[usize; 2]; 4] = [[0, 0], [0, 1], [1, 0], [1, 1]];

fn path2(p: [usize; 2]) -> AspectPath {
    AspectPath::atoms(p.iter().map(|i| i.to_string()))
}

/// Level-2 paths whose relations the premises force to persist under an
/// action of aspect `(0,1)`.
fn constrained(spec: &DisjointnessSpec) -> Vec<usize> {
    let beta = path2([0, 1]);
    (0..4).filter(|&g| d_eval(spec, &path2(LEVEL2[g]), &beta).expect("level-2 paths")).collect()
}

struct Structure {
    level: [Vec<Mask>; 4],
}

impl Structure {
    fn new(r0: &[Mask], r1: &[Mask]) -> Option<Self> {
        let r01 = compose(r0, r1);
        let r10 = compose(r1, r0);
        (r01 == r10).then(|| Structure { level: [compose(r0, r0), r01, r10, compose(r1, r1)] })
    }
}

/// Checks one structure and action; returns whether the premises held.
fn examine(st: &Structure, map: &[usize], cons: &[usize], cov: &mut Coverage, failures: &mut Vec<String>) {
    if !cons.iter().all(|&g| persists(&st.level[g], map)) {
        return;
    }
    cov.premise_satisfying += 1;
    let n = map.len();
    // every fluent factoring through any level-2 aspect, via every q
    let free = (0..4).all(|g| {
        (0..1u64 << n).all(|q| {
            let p = factor_exists(&st.level[g], q);
            (0..n).all(|s| (p >> s & 1) == (p >> map[s] & 1))
        })
    });
    if free {
        cov.effect_free += 1;
    } else if failures.len() < 5 {
        failures.push(format!("{n} situations, rows {:?}, action {map:?}", st.level));
    }
}

fn each_map(n: usize, mut f: impl FnMut(&[usize])) {
    let mut map = vec![0; n];
    for code in 0..n.pow(n as u32) {
        let mut rest = code;
        for slot in map.iter_mut() {
            *slot = rest % n;
            rest /= n;
        }
        f(&map);
    }
}

fn exhaustive_relational(n: usize, cons: &[usize], failures: &mut Vec<String>) -> Coverage {
    let mut cov = Coverage { situations: n, ..Coverage::default() };
    let rows = 1u64 << n;
    let total = rows.pow(n as u32);
    let decode = |code: u64| -> Vec<Mask> { (0..n).map(|s| (code / rows.pow(s as u32)) % rows).collect() };
    for c0 in 0..total {
        let r0 = decode(c0);
        for c1 in 0..total {
            let r1 = decode(c1);
            let Some(st) = Structure::new(&r0, &r1) else { continue };
            cov.commutative_structures += 1;
            each_map(n, |map| examine(&st, map, cons, &mut cov, failures));
        }
    }
    cov
}

fn exhaustive_functional(n: usize, cons: &[usize], failures: &mut Vec<String>) -> Coverage {
    let mut cov = Coverage { situations: n, ..Coverage::default() };
    let mut funcs = Vec::new();
    each_map(n, |m| funcs.push(m.iter().map(|&t| 1u64 << t).collect::<Vec<Mask>>()));
    for r0 in &funcs {
        for r1 in &funcs {
            let Some(st) = Structure::new(r0, r1) else { continue };
            cov.commutative_structures += 1;
            each_map(n, |map| examine(&st, map, cons, &mut cov, failures));
        }
    }
    cov
}

/// Commuting pairs drawn from a few families (random pairs that happen to
/// commute, powers and unions of one relation) with actions chosen to
/// respect the constrained relations half of the time.
fn sampled_relational(n: usize, cons: &[usize], seed: u64, structures: usize, failures: &mut Vec<String>) -> Coverage {
    let mut cov = Coverage { situations: n, ..Coverage::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_rows = |rng: &mut ChaCha8Rng, density: f64| -> Vec<Mask> {
        (0..n).map(|_| (0..n).filter(|_| rng.gen_bool(density)).fold(0, |m, t| m | 1 << t)).collect()
    };
    let mut found = 0;
    while found < structures {
        let r0 = random_rows(&mut rng, 0.3);
        let r1 = match rng.gen_range(0..4) {
            0 => random_rows(&mut rng, 0.3),
            1 => compose(&r0, &r0),
            2 => r0.iter().zip(compose(&r0, &r0)).map(|(a, b)| a | b).collect(),
            _ => (0..n).map(|s| r0[s] | 1 << s).collect(),
        };
        let Some(st) = Structure::new(&r0, &r1) else { continue };
        found += 1;
        cov.commutative_structures += 1;
        for i in 0..16 {
            let map: Vec<usize> = if i % 2 == 0 {
                (0..n)
                    .map(|s| {
                        let same: Vec<usize> =
                            (0..n).filter(|&t| cons.iter().all(|&g| st.level[g][t] == st.level[g][s])).collect();
                        same[rng.gen_range(0..same.len())]
                    })
                    .collect()
            } else {
                (0..n).map(|_| rng.gen_range(0..n)).collect()
            };
            examine(&st, &map, cons, &mut cov, failures);
        }
    }
    cov
}

/// Eleven situations over two functional aspects `0` and `1`: two roots
/// `w0`, `w1`, their children, shared grandchildren `c0`, `c1` reached by
/// either order, `d00`, `d11` reached by repeating an aspect, and a sink `z`.
/// The action moves `w0` to `w1`, so `R_(0,0)` and `R_(1,1)` persist while
/// `R_(0,1)` does not.
pub fn mesh_model(spec: DisjointnessSpec) -> FiniteModel {
    let names = ["w0", "w1", "x0", "x1", "y0", "y1", "c0", "c1", "d00", "d11", "z"];
    let mut m = FiniteModel::new("mesh", names.iter().map(|s| s.to_string()).collect()).expect("small");
    let ix = |s: &str| names.iter().position(|x| *x == s).expect("known");
    let mut f0 = vec![0; names.len()];
    let mut f1 = vec![0; names.len()];
    for b in 0..2 {
        f0[ix(&format!("w{b}"))] = ix(&format!("x{b}"));
        f1[ix(&format!("w{b}"))] = ix(&format!("y{b}"));
        f1[ix(&format!("x{b}"))] = ix(&format!("c{b}"));
        f0[ix(&format!("y{b}"))] = ix(&format!("c{b}"));
        f0[ix(&format!("x{b}"))] = ix("d00");
        f1[ix(&format!("y{b}"))] = ix("d11");
    }
    for s in ["c0", "c1", "d00", "d11", "z"] {
        f0[ix(s)] = ix("z");
        f1[ix(s)] = ix("z");
    }
    for (name, f) in [("0", &f0), ("1", &f1)] {
        let a = m.set_relation(name, f.iter().map(|&t| 1u64 << t).collect());
        m.functional[a] = true;
    }
    let mut act: Vec<usize> = (0..names.len()).collect();
    act[ix("w0")] = ix("w1");
    m.add_action("a", act, path2([0, 1]));
    let q: Mask = 1 << ix("c1");
    let p = factor_exists(&compose(&m.rels[0], &m.rels[1]), q);
    m.add_fluent("p", p, path2([0, 1]));
    m.witnesses.insert(("p".to_string(), Formalism::SeqRelExists), Witness::Plain(q));
    m.disjointness = spec;
    m
}

/// Runs both halves of the demonstration.
pub fn reproduce_commutative_pitfall(seed: u64) -> PitfallReport {
    let naive_spec = DisjointnessSpec::SeqExistsDiff;
    let canon_spec = DisjointnessSpec::CommutativeCanonical(Commutation::All);
    let cons = constrained(&naive_spec);
    let mut failures = Vec::new();
    let relational = (1..=3).map(|n| exhaustive_relational(n, &cons, &mut failures)).collect();
    let functional = exhaustive_functional(4, &cons, &mut failures);
    let sampled = sampled_relational(4, &cons, seed, 4000, &mut failures);
    let naive = NaiveHalf { relational, functional, sampled, failures };

    let f = Formalism::SeqRelExists;
    let m = mesh_model(canon_spec.clone());
    let premises_hold = check_premises(&m, f).map(|r| r.holds()).unwrap_or(false);
    let act = &m.actions[0];
    let p = &m.fluents[0];
    let changed_at = (0..m.n())
        .find(|&s| (p.val >> s & 1) != (p.val >> act.map[s] & 1))
        .map(|s| (m.situations[s].clone(), m.situations[act.map[s]].clone()));
    let naive_verdict = verify_theorem(f, &mesh_model(naive_spec)).map(|r| r.verdict).unwrap_or(Verdict::Vacuous);
    let mut mixed = m.clone();
    mixed.add_fluent("r", 0, AspectPath::atoms(["1"]));
    let premises_with_length_one_fluent = check_premises(&mixed, f).map(|r| r.holds()).unwrap_or(false);
    let canonical = CanonicalHalf {
        model: unparse_model(&m),
        commutative: check_commutativity(&m).holds(),
        premises_hold,
        fluent: format!("{} : {}", p.name, p.aspect),
        action: format!("{} : {}", act.name, act.aspect),
        changed_at,
        naive_verdict,
        d_01_10: d_eval(&canon_spec, &path2([0, 1]), &path2([1, 0])).expect("atoms only"),
        premises_with_length_one_fluent,
    };
    let notes = vec![
        "premises quantify over aspects of the fluent lengths present in the model".to_string(),
        "the canonical d still asserts d((1),(0,1)); with a fluent of aspect (1) present, persistence of R_(1) \
         forces R_(1,0) = R_(0,1) to persist and the witness model no longer satisfies the premises"
            .to_string(),
    ];
    PitfallReport { seed, naive, canonical, notes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_commutes() {
        assert!(check_commutativity(&mesh_model(DisjointnessSpec::SeqExistsDiff)).holds());
    }

    #[test]
    fn naive_constraint_covers_three_paths() {
        assert_eq!(constrained(&DisjointnessSpec::SeqExistsDiff), vec![0, 2, 3]);
        assert_eq!(constrained(&DisjointnessSpec::CommutativeCanonical(Commutation::All)), vec![0, 3]);
    }
}
