//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use aspect_cli::run;
use aspect_core::dsl::{parse_domain, parse_state, unparse_domain};
use aspect_core::engine::{aspect_of_action, aspect_of_fluent, intersects, progress};
use aspect_core::frame::{reachable_states, EconomyReport};
use aspect_core::regress::{persistence_proof, ProofMode};
use aspect_core::reiter::{compare_modes, compile_ssa, Query};
use aspect_core::workload::random_queries;
use aspect_core::{d_eval, eval_fluent, AspectPath, DisjointnessSpec, Domain, WorldState};
use aspect_validator::search::{planted_violations, search_counterexample, SearchBounds};
use aspect_validator::{parse_model, unparse_model, verify_theorem, Formalism, Verdict};

const SCENARIOS: [(&str, &[&str]); 4] = [
    ("blocks.dom", &["blocks.init", "blocks_tower.init"]),
    ("blocks_nosupport.dom", &["blocks.init"]),
    ("rooms.dom", &["rooms.init"]),
    ("display.dom", &["display.init", "display_part.init"]),
];
const DOMAINS: [&str; 5] = ["blocks.dom", "blocks_nosupport.dom", "rooms.dom", "display.dom", "economy.dom"];
const MODELS: [&str; 4] = ["heater.model", "heater_small.model", "heater_all.model", "university.model"];

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn domain(name: &str) -> Domain {
    parse_domain(name, &read(name)).unwrap_or_else(|e| panic!("{name}: {e:?}")).value
}

fn init(d: &Domain, name: &str) -> WorldState {
    parse_state(d, name, &read(name)).unwrap().build(d).unwrap()
}

fn cli(args: &[&str]) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("aspectsc").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn path(xs: &[&str]) -> AspectPath {
    AspectPath::atoms(xs.iter().copied())
}

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

fn blocks_frames() -> Result<String, String> {
    let start = Instant::now();
    let dom = fixture("blocks.dom").display().to_string();
    let (code, out) = cli(&["frames", &dom]);
    ensure(code == 0, format!("exit {code}"))?;
    ensure(out == read("golden/frames_blocks.txt"), "output differs from the golden file")?;
    for want in [
        "frame move(x,y) on(v,w) if w != y & w != z & on(x,z)",
        "frame move(x,y) clear(w) if w != y & w != z & on(x,z)",
    ] {
        ensure(out.contains(want), format!("missing `{want}`"))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok("golden listing matches, guards w != y, w != z, on(x,z)".into())
}

fn tree_disjointness() -> Result<String, String> {
    let spec = DisjointnessSpec::SeqExistsDiff;
    let a = d_eval(&spec, &path(&["0", "1", "0"]), &path(&["1", "1"])).map_err(|e| e.to_string())?;
    let b = d_eval(&spec, &path(&["1", "1", "0"]), &path(&["1", "1"])).map_err(|e| e.to_string())?;
    ensure(a && !b, format!("d((0,1,0),(1,1)) = {a}, d((1,1,0),(1,1)) = {b}"))?;
    Ok("d((0,1,0),(1,1)) = true, d((1,1,0),(1,1)) = false".into())
}

fn economy() -> Result<String, String> {
    let d = domain("economy.dom");
    let der = aspect_core::frame::derive_frame_axioms(&d);
    let e: &EconomyReport = match der.economy.as_slice() {
        [e] => e,
        other => return Err(format!("{} economy groups", other.len())),
    };
    ensure((e.m, e.n, e.derived_frame_axioms, e.source_axioms) == (5, 7, 35, 14), format!("{e:?}"))?;
    ensure(der.axioms.len() == 35, format!("{} ground axioms", der.axioms.len()))?;
    let ssas = compile_ssa(&d, None);
    ensure(ssas.axioms.len() == 5, format!("{} SSAs", ssas.axioms.len()))?;
    Ok("35 frame axioms from 14 aspect axioms, 5 SSAs".into())
}

fn soundness_sweep() -> Result<String, String> {
    let start = Instant::now();
    let mut pairs = 0usize;
    for (dom, inits) in SCENARIOS {
        let d = domain(dom);
        let states: Vec<WorldState> = inits.iter().map(|i| init(&d, i)).collect();
        let fluents = d.ground_fluents();
        for s in reachable_states(&d, &states, 4) {
            for a in d.ground_actions() {
                let Ok(next) = progress(&d, &s, &a) else { continue };
                if aspect_of_action(&d, &s, &a).is_err() {
                    continue;
                }
                for p in &fluents {
                    if aspect_of_fluent(&d, &s, p).is_err() || intersects(&d, &s, &a, p).map_err(|e| e.to_string())? {
                        continue;
                    }
                    pairs += 1;
                    let (before, after) = (eval_fluent(&d, &s, p), eval_fluent(&d, &next, p));
                    ensure(before == after, format!("{dom}: {a} changes {p}"))?;
                }
            }
        }
    }
    ensure(pairs > 0, "no disjoint pairs examined")?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("{pairs} disjoint pairs, 0 violations"))
}

fn mode_equivalence() -> Result<String, String> {
    let start = Instant::now();
    let (mut total, mut defined) = (0, 0);
    for (i, (dom, inits)) in SCENARIOS.iter().enumerate() {
        let d = domain(dom);
        let mut queries: Vec<Query> = Vec::new();
        for (j, name) in inits.iter().enumerate() {
            let share = 500 / inits.len() + usize::from(j < 500 % inits.len());
            let seed = 100 * i as u64 + j as u64;
            queries.extend(random_queries(&d, &init(&d, name), share, 4, seed).map_err(|e| e.to_string())?);
        }
        ensure(queries.len() == 500, format!("{dom}: {} queries", queries.len()))?;
        let r = compare_modes(&d, &queries).map_err(|e| format!("{dom}: {e}"))?;
        ensure(r.all_agree(), format!("{dom}: disagreement"))?;
        total += r.queries.len();
        defined += r.defined;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{total} queries, {defined} defined in every mode, 0 disagreements"))
}

fn theorem_search() -> Result<String, String> {
    let start = Instant::now();
    let (mut exhaustive, mut random, mut plants) = (0u64, 0u64, 0);
    for f in Formalism::ALL {
        let r = search_counterexample(f, SearchBounds { seed: 2024, ..SearchBounds::default() });
        ensure(r.is_clean(), format!("{f}: {:?} {:?}", r.counterexample, r.mismatches.first()))?;
        ensure(r.random.models >= 10_000, format!("{f}: {} random models", r.random.models))?;
        exhaustive += r.exhaustive.models;
        random += r.random.models;
        for p in planted_violations(f, 2024) {
            ensure(p.detected, format!("{f}: planted {:?} violation missed", p.axiom))?;
            plants += 1;
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("13 formalisms, {exhaustive} exhaustive + {random} random models, {plants}/{plants} plants detected"))
}

fn worked_models() -> Result<String, String> {
    let cases = [
        ("heater.model", Formalism::RelExists),
        ("heater_all.model", Formalism::RelForall),
        ("university.model", Formalism::CollRelExists),
        ("university.model", Formalism::CollFun),
    ];
    for (name, f) in cases {
        let m = parse_model(name, &read(&format!("models/{name}"))).map_err(|e| format!("{name}: {e:?}"))?;
        let r = verify_theorem(f, &m).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.verdict == Verdict::Pass, format!("{name} under {f}: {:?}", r.verdict))?;
    }
    Ok("heater rel-exists, heater_all rel-forall, university coll-rel-exists and coll-fun: pass".into())
}

fn pitfall() -> Result<String, String> {
    let start = Instant::now();
    let (code, out) = cli(&["pitfall", "--report", "json"]);
    ensure(code == 0, format!("exit {code}"))?;
    let v: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let naive = &v["report"]["naive"];
    let sizes: Vec<_> = naive["relational"].as_array().unwrap().iter().chain([&naive["functional"], &naive["sampled"]]).collect();
    for c in &sizes {
        ensure(c["premise_satisfying"] == c["effect_free"], format!("naive half fails at {c}"))?;
    }
    let canon = &v["report"]["canonical"];
    ensure(canon["premises_hold"] == true && !canon["changed_at"].is_null(), "no canonical witness")?;
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "naive: every premise-satisfying model effect-free at |S| <= 4; canonical witness changes {} at {}",
        canon["fluent"].as_str().unwrap_or_default(),
        canon["changed_at"]
    ))
}

fn trace_economy() -> Result<String, String> {
    let (mut held, mut absent) = (0, 0);
    for (dom, inits) in SCENARIOS {
        let d = domain(dom);
        let ssas = compile_ssa(&d, None);
        let states: Vec<WorldState> = inits.iter().map(|i| init(&d, i)).collect();
        let mut queries = Vec::new();
        let mut before = Vec::new();
        for s in reachable_states(&d, &states, 1) {
            for a in aspect_core::engine::applicable_actions(&d, &s) {
                for (p, v, _) in s.entries() {
                    if persistence_proof(&d, &s, &a, p, ProofMode::Aspect).is_ok() {
                        queries.push(Query { init: s.clone(), acts: vec![a.clone()], fluent: p.clone() });
                        before.push(v);
                    }
                }
            }
        }
        let r = compare_modes(&d, &queries).map_err(|e| format!("{dom}: {e}"))?;
        for (q, v) in r.queries.iter().zip(before) {
            let ax = ssas.get(&q.fluent.name).ok_or(format!("{dom}: no axiom for {}", q.fluent))?;
            // a true fluent survives by ruling out every gamma- entry, a false one every gamma+ entry
            let checked = if v { ax.gamma_minus.len() } else { ax.gamma_plus.len() };
            let Some((aspect, ssa)) = q.persistence else { return Err(format!("{dom}: no proof for {}", q.fluent)) };
            ensure(
                aspect == 4 && ssa == 1 + checked,
                format!("{dom}: {} = {v} after {}: aspect {aspect}, ssa {ssa}, expected 1 + {checked}", q.fluent, q.acts[0]),
            )?;
            if v {
                held += 1;
            } else {
                absent += 1;
            }
        }
    }
    ensure(held > 0 && absent > 0, "too few persistence queries")?;
    Ok(format!("{held} true and {absent} false persisting fluents: aspect 4 steps, ssa 1 + |gamma-| (true) or 1 + |gamma+| (false)"))
}

fn round_trip() -> Result<String, String> {
    for name in DOMAINS {
        let d = domain(name);
        let text = unparse_domain(&d);
        let again = parse_domain(name, &text).map_err(|e| format!("{name}: {e:?}"))?.value;
        ensure(again == d && unparse_domain(&again) == text, format!("{name}: not a fixpoint"))?;
    }
    for name in MODELS {
        let m = parse_model(name, &read(&format!("models/{name}"))).map_err(|e| format!("{name}: {e:?}"))?;
        let text = unparse_model(&m);
        let again = parse_model(name, &text).map_err(|e| format!("{name}: {e:?}"))?;
        ensure(again == m && unparse_model(&again) == text, format!("{name}: not a fixpoint"))?;
    }
    let (dom, workload) = (fixture("blocks.dom").display().to_string(), fixture("blocks.workload").display().to_string());
    let runs: [&[&str]; 3] = [
        &["pitfall", "--seed", "3", "--report", "json"],
        &["search", "coll-rel-exists", "--seed", "3", "--samples", "500", "--report", "json"],
        &["compare", &dom, "--workload", &workload, "--report", "json"],
    ];
    for args in runs {
        let (a, b) = (cli(args), cli(args));
        ensure(a.0 == 0 && a == b, format!("{} differs between runs", args[0]))?;
    }
    Ok(format!("{} domains and {} models round-trip; JSON reports byte-identical", DOMAINS.len(), MODELS.len()))
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("blocks-world frame axioms", blocks_frames),
        ("binary-tree disjointness", tree_disjointness),
        ("axiom economy", economy),
        ("non-interference soundness sweep", soundness_sweep),
        ("mode equivalence", mode_equivalence),
        ("theorem corroboration", theorem_search),
        ("worked-model verdicts", worked_models),
        ("commutativity pitfall", pitfall),
        ("trace economy", trace_economy),
        ("round trip and determinism", round_trip),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|f| *f == id || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id:>2} PASS  {name} ({secs:.2} s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name} ({secs:.2} s): {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
