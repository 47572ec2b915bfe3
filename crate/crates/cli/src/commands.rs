use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use aspect_core::dsl::{parse_actions, parse_domain, parse_ground_fluent, parse_state, parse_workload, ParseDiagnostic};
use aspect_core::engine::progress_all;
use aspect_core::frame::{check_aspect_soundness, derive_frame_axioms, SoundnessMode};
use aspect_core::regress::regress_query;
use aspect_core::reiter::{compare_modes, compile_ssa, oracle_query, ssa_query};
use aspect_core::trace::{Answer, ProofTrace};
use aspect_core::workload::expand_workload;
use aspect_core::{Domain, EngineError, GroundAction, WorldState};
use aspect_validator::search::{planted_violations, PlantResult};
use aspect_validator::{
    parse_model, reproduce_commutative_pitfall, search_counterexample, verify_theorem, Formalism, SearchBounds,
    SearchReport, Verdict,
};

use crate::{Command, InputError, Outcome, QueryMode};

type Result<T> = std::result::Result<T, InputError>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn diagnostics(diags: &[ParseDiagnostic]) -> InputError {
    InputError(diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))
}

fn engine(e: EngineError) -> InputError {
    InputError(e.to_string())
}

fn load_domain(path: &Path, err: &mut dyn Write) -> Result<Domain> {
    let parsed = parse_domain(&path.display().to_string(), &read(path)?).map_err(|d| diagnostics(&d))?;
    for w in &parsed.warnings {
        let _ = writeln!(err, "{w}");
    }
    Ok(parsed.value)
}

fn load_state(domain: &Domain, dom_path: &Path, init: Option<&PathBuf>) -> Result<WorldState> {
    let path = init.cloned().unwrap_or_else(|| dom_path.with_extension("init"));
    let spec = parse_state(domain, &path.display().to_string(), &read(&path)?).map_err(|d| diagnostics(&d))?;
    spec.build(domain).map_err(engine)
}

fn load_actions(domain: &Domain, acts: &str) -> Result<Vec<GroundAction>> {
    if acts.trim().is_empty() {
        return Ok(Vec::new());
    }
    parse_actions(domain, acts).map_err(|d| diagnostics(&[d]))
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

pub fn dispatch(cmd: &Command, err: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Check { domain, init, depth } => check(domain, init.as_ref(), *depth, err),
        Command::Frames { domain, universe, ground } => frames(domain, universe.as_deref(), *ground, err),
        Command::Simulate { domain, init, acts } => simulate(domain, init.as_ref(), acts, err),
        Command::Query { domain, init, acts, fluent, mode } => query(domain, init.as_ref(), acts, fluent, *mode, err),
        Command::Compare { domain, workload } => compare(domain, workload, err),
        Command::Validate { model, formalism } => validate(model, *formalism),
        Command::Search { formalism, max_situations, seed, samples, exhaustive_up_to } => {
            let bounds = SearchBounds {
                max_situations: *max_situations,
                exhaustive_up_to: *exhaustive_up_to,
                samples: *samples,
                seed: *seed,
                ..SearchBounds::default()
            };
            Ok(search(*formalism, bounds))
        }
        Command::Pitfall { seed } => Ok(pitfall(*seed)),
    }
}

const GAPS_SHOWN: usize = 8;

fn check(path: &Path, init: Option<&PathBuf>, depth: usize, err: &mut dyn Write) -> Result<Outcome> {
    let d = load_domain(path, err)?;
    let report = match init {
        Some(_) => {
            let s = load_state(&d, path, init)?;
            check_aspect_soundness(&d, SoundnessMode::Reachable { inits: &[s], depth })
        }
        None => check_aspect_soundness(&d, SoundnessMode::Exhaustive { max_atoms: 16 }),
    };
    let mut t = String::new();
    let status = if report.is_sound() { "sound" } else { "UNSOUND" };
    let _ = writeln!(t, "domain {}: {status} ({} mode, {} checked, {} skipped)", d.name, report.mode, report.checked, report.skipped);
    for v in &report.violations {
        let _ = writeln!(
            t,
            "  violation: {} changes {} although d({}, {}) holds; state {{{}}}",
            v.action,
            v.fluent,
            v.fluent_aspect,
            v.action_aspect,
            join(&v.state, ", ")
        );
    }
    let gaps = &report.completeness_gaps;
    let _ = writeln!(t, "undecided pairs: {} (may intersect, no effect rule or frame declaration)", gaps.len());
    for g in gaps.iter().take(GAPS_SHOWN) {
        let _ = writeln!(t, "  {} / {}", g.action, g.fluent);
    }
    if gaps.len() > GAPS_SHOWN {
        let _ = writeln!(t, "  ... {} more", gaps.len() - GAPS_SHOWN);
    }
    match &report.monotonicity {
        Some(m) if m.is_clean() => {
            let _ = writeln!(t, "monotonicity: clean ({} pairs)", m.checked);
        }
        Some(m) => {
            let _ = writeln!(t, "monotonicity: {} warning(s)", m.violations.len());
            for v in &m.violations {
                let _ = writeln!(t, "  d({}, {}) holds but not after extending to {}", v.fluent, v.action, v.extended);
            }
        }
        None => {
            let _ = writeln!(t, "monotonicity: not applicable");
        }
    }
    Ok(Outcome { report: to_value(&report), text: t, finding: !report.is_sound(), seed: None })
}

fn frames(path: &Path, universe: Option<&[String]>, ground: bool, err: &mut dyn Write) -> Result<Outcome> {
    let mut d = load_domain(path, err)?;
    if let Some(objs) = universe {
        let keep: BTreeSet<String> = objs.iter().map(|s| s.trim().to_string()).collect();
        d = d.restrict_objects(&keep).map_err(|issues| {
            InputError(issues.iter().map(|i| format!("{}: {}", d.name, i.message)).collect::<Vec<_>>().join("\n"))
        })?;
    }
    let der = derive_frame_axioms(&d);
    let mut t = String::new();
    let _ = writeln!(t, "domain {}", d.name);
    let _ = writeln!(t, "disjoint by {}", d.disjointness);
    let _ = writeln!(t, "schematic frame axioms: {}", der.schematic.len());
    for ax in &der.schematic {
        let _ = writeln!(t, "  {ax}");
    }
    let _ = writeln!(t, "ground frame axioms: {}", der.axioms.len());
    if ground {
        for ax in &der.axioms {
            let _ = writeln!(t, "  {ax}");
        }
    }
    let derived: usize = der.economy.iter().map(|e| e.derived_frame_axioms).sum();
    let source: usize = der.economy.iter().map(|e| e.source_axioms).sum();
    let _ = writeln!(t, "economy: {derived} frame axioms from {source} aspect axioms");
    for e in &der.economy {
        let _ = writeln!(
            t,
            "  fluents {} x actions {}: m={} n={} derived={} source={}",
            e.fluent_aspect, e.action_aspect, e.m, e.n, e.derived_frame_axioms, e.source_axioms
        );
    }
    for e in &der.errors {
        let _ = writeln!(err, "warning: {e}");
    }
    Ok(Outcome { report: to_value(&der), text: t, finding: false, seed: None })
}

#[derive(Serialize)]
struct SimStep {
    action: Option<String>,
    true_fluents: Vec<String>,
    scope: Vec<String>,
}

fn simulate(path: &Path, init: Option<&PathBuf>, acts: &str, err: &mut dyn Write) -> Result<Outcome> {
    let d = load_domain(path, err)?;
    let s0 = load_state(&d, path, init)?;
    let acts = load_actions(&d, acts)?;
    let states = progress_all(&d, &s0, &acts).map_err(engine)?;
    let steps: Vec<SimStep> = states
        .iter()
        .enumerate()
        .map(|(i, s)| SimStep {
            action: i.checked_sub(1).map(|j| acts[j].to_string()),
            true_fluents: s.true_fluents().iter().map(|p| p.to_string()).collect(),
            scope: s.scope().iter().map(|p| p.to_string()).collect(),
        })
        .collect();
    let mut t = String::new();
    for s in &steps {
        let label = s.action.as_deref().unwrap_or("initial");
        let _ = writeln!(t, "{label}: {}", s.true_fluents.join(" "));
    }
    Ok(Outcome { report: to_value(&steps), text: t, finding: false, seed: None })
}

#[derive(Serialize)]
struct QueryReport {
    mode: &'static str,
    acts: Vec<String>,
    fluent: String,
    answer: Answer,
    trace: ProofTrace,
}

fn query(path: &Path, init: Option<&PathBuf>, acts: &str, fluent: &str, mode: QueryMode, err: &mut dyn Write) -> Result<Outcome> {
    let d = load_domain(path, err)?;
    let s0 = load_state(&d, path, init)?;
    let acts = load_actions(&d, acts)?;
    let p = parse_ground_fluent(&d, fluent).map_err(|e| diagnostics(&[e]))?;
    let (mode_name, (answer, trace)) = match mode {
        QueryMode::Aspect => ("aspect", regress_query(&d, &s0, &acts, &p).map_err(engine)?),
        QueryMode::Ssa => ("ssa", ssa_query(&d, &compile_ssa(&d, None), &s0, &acts, &p).map_err(engine)?),
        QueryMode::Oracle => ("oracle", (oracle_query(&d, &s0, &acts, &p).map_err(engine)?, ProofTrace::default())),
    };
    let report = QueryReport { mode: mode_name, acts: acts.iter().map(|a| a.to_string()).collect(), fluent: p.to_string(), answer, trace };
    let mut t = format!("{answer}\n");
    if !report.trace.is_empty() {
        let _ = write!(t, "{}", report.trace);
    }
    Ok(Outcome { report: to_value(&report), text: t, finding: false, seed: None })
}

fn compare(path: &Path, workload: &Path, err: &mut dyn Write) -> Result<Outcome> {
    let d = load_domain(path, err)?;
    let spec = parse_workload(&d, &workload.display().to_string(), &read(workload)?).map_err(|e| diagnostics(&e))?;
    let queries = expand_workload(&d, &spec).map_err(engine)?;
    let report = match compare_modes(&d, &queries) {
        Ok(r) => r,
        Err(e @ EngineError::CrossMode { .. }) => {
            let _ = writeln!(err, "{e}");
            let text = format!("disagreement: {e}\n");
            let report = serde_json::json!({ "disagreement": e.to_string() });
            return Ok(Outcome { report, text, finding: true, seed: None });
        }
        Err(e) => return Err(engine(e)),
    };
    let mut t = String::new();
    let c = &report.counts;
    let _ = writeln!(t, "axioms: classical {} frame, aspect {}, ssa {}", c.classical, c.aspect, c.ssa);
    let _ = writeln!(t, "queries: {} run, {} defined in every mode, {} agree", report.queries.len(), report.defined, report.agreed);
    let (at, st): (usize, usize) = report.queries.iter().fold((0, 0), |(a, s), q| (a + q.aspect_trace, s + q.ssa_trace));
    let _ = writeln!(t, "trace steps: aspect {at}, ssa {st}");
    let persist: Vec<_> = report.queries.iter().filter_map(|q| q.persistence.map(|p| (q, p))).collect();
    if !persist.is_empty() {
        let _ = writeln!(t, "single-step persistence proofs:");
        for (q, (a, s)) in persist {
            let _ = writeln!(t, "  {} after {}: aspect {a}, ssa {s}", q.fluent, join(&q.acts, "; "));
        }
    }
    let finding = !report.all_agree();
    Ok(Outcome { report: to_value(&report), text: t, finding, seed: None })
}

fn validate(path: &Path, f: Formalism) -> Result<Outcome> {
    let model = parse_model(&path.display().to_string(), &read(path)?).map_err(|d| diagnostics(&d))?;
    let r = verify_theorem(f, &model).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let mut t = String::new();
    let verdict = to_value(&r.verdict);
    let _ = writeln!(t, "model {}, formalism {f}: {}", r.model, verdict.as_str().unwrap_or_default());
    let bad: Vec<_> = r.premises.violated().collect();
    let _ = writeln!(t, "premises: {} checked, {} violated", r.premises.checks.len(), bad.len());
    for c in bad {
        let kind = to_value(&c.kind);
        let _ = writeln!(t, "  [{}] {} for {}", kind.as_str().unwrap_or_default(), c.axiom, c.subject);
        if let Some(w) = &c.witness {
            let _ = writeln!(t, "    {w}");
        }
    }
    for n in &r.premises.notes {
        let _ = writeln!(t, "  note: {n}");
    }
    let _ = writeln!(t, "conclusion: {} disjoint pairs, {} counterexamples", r.conclusion.pairs, r.conclusion.counterexamples.len());
    for c in &r.conclusion.counterexamples {
        let _ = writeln!(t, "  {} changes {} from {} to {} (was {})", c.action, c.fluent, c.situation, c.successor, c.before);
    }
    let finding = r.verdict == Verdict::Counterexample;
    Ok(Outcome { report: to_value(&r), text: t, finding, seed: None })
}

#[derive(Serialize)]
struct SearchOutput {
    search: SearchReport,
    planted: Vec<PlantResult>,
}

fn search(f: Formalism, bounds: SearchBounds) -> Outcome {
    let search = search_counterexample(f, bounds);
    let planted = planted_violations(f, bounds.seed);
    let mut t = String::new();
    let status = if search.is_clean() { "no counterexample" } else { "COUNTEREXAMPLE" };
    let _ = writeln!(t, "search {f}: {status}");
    for (name, p) in [("exhaustive", &search.exhaustive), ("random", &search.random)] {
        let _ = writeln!(t, "  {name}: {} models, {} premise-satisfying, {} counterexamples", p.models, p.satisfying, p.counterexamples);
    }
    let _ = writeln!(t, "  cross-checked: {}, mismatches: {}", search.cross_checked, search.mismatches.len());
    for m in &search.mismatches {
        let _ = writeln!(t, "  mismatch: {m}");
    }
    if let Some(m) = &search.counterexample {
        let _ = writeln!(t, "counterexample model:\n{m}");
    }
    for p in &planted {
        let kind = to_value(&p.axiom);
        let _ = writeln!(
            t,
            "  planted {} violation: {}",
            kind.as_str().unwrap_or_default(),
            if p.detected { "detected" } else { "MISSED" }
        );
    }
    let finding = !search.is_clean() || planted.iter().any(|p| !p.detected);
    let seed = Some(bounds.seed);
    let out = SearchOutput { search, planted };
    Outcome { report: to_value(&out), text: t, finding, seed }
}

fn pitfall(seed: u64) -> Outcome {
    let r = reproduce_commutative_pitfall(seed);
    let yes = |b: bool| if b { "holds" } else { "FAILS" };
    let mut t = String::new();
    let _ = writeln!(t, "naive seq-diff under commutativity: {}", yes(r.naive.holds()));
    let rows = r.naive.relational.iter().map(|c| (format!("|S|={} relational", c.situations), c));
    let rows = rows.chain([
        (format!("|S|={} functional", r.naive.functional.situations), &r.naive.functional),
        (format!("|S|={} sampled", r.naive.sampled.situations), &r.naive.sampled),
    ]);
    for (label, c) in rows {
        let _ = writeln!(
            t,
            "  {label}: {} commutative structures, {} premise-satisfying, {} effect-free",
            c.commutative_structures, c.premise_satisfying, c.effect_free
        );
    }
    for f in &r.naive.failures {
        let _ = writeln!(t, "  failure: {f}");
    }
    let c = &r.canonical;
    let _ = writeln!(t, "canonical commutative d: {}", yes(c.holds()));
    let _ = writeln!(t, "  commutative: {}, premises hold: {}, d((0,1),(1,0)): {}", c.commutative, c.premises_hold, c.d_01_10);
    if let Some((from, to)) = &c.changed_at {
        let _ = writeln!(t, "  {} changes {} from {from} to {to}", c.action, c.fluent);
    }
    let verdict = to_value(&c.naive_verdict);
    let _ = writeln!(t, "  same model under naive d: {}", verdict.as_str().unwrap_or_default());
    for n in &r.notes {
        let _ = writeln!(t, "note: {n}");
    }
    Outcome { report: to_value(&r), text: t, finding: !r.holds(), seed: Some(seed) }
}
