mod common;

use std::time::Instant;

use aspect_core::dsl::parse_domain;
use aspect_core::engine::{aspect_of_action, aspect_of_fluent, intersects, progress};
use aspect_core::frame::{check_aspect_soundness, reachable_states, SoundnessMode};
use aspect_core::{eval_fluent, WorldState};
use common::*;

#[test]
fn blocks_is_sound_under_exhaustive_check() {
    let d = domain("blocks.dom");
    let r = check_aspect_soundness(&d, SoundnessMode::Exhaustive { max_atoms: 16 });
    assert!(r.checked > 0);
    assert_eq!(r.skipped, 0);
    assert!(r.is_sound(), "{:?}", r.violations);
}

#[test]
fn narrowed_move_aspect_is_caught() {
    let text = read_fixture("blocks.dom").replace("aspect move(x,y) ({y,z}) if on(x,z)", "aspect move(x,y) ({y})");
    let d = parse_domain("narrow.dom", &text).unwrap().value;
    let r = check_aspect_soundness(&d, SoundnessMode::Exhaustive { max_atoms: 16 });
    assert!(!r.is_sound());
    // the freed source block gets cleared behind the action's back
    let v = r.violations.iter().find(|v| v.fluent.name == "clear").expect("a clear violation");
    let (x, z) = (&v.action.args[0], &v.fluent.args[0]);
    assert!(v.state.iter().any(|p| p.name == "on" && &p.args[0] == x && &p.args[1] == z));
}

#[test]
fn domain_without_effects_is_vacuously_sound() {
    let d = domain("economy.dom");
    let r = check_aspect_soundness(&d, SoundnessMode::Exhaustive { max_atoms: 16 });
    assert!(r.is_sound());
    assert!(r.completeness_gaps.is_empty());
}

#[test]
fn fixture_scenarios_are_sound_on_reachable_states() {
    for (dom, inits) in SCENARIOS {
        let d = domain(dom);
        let states: Vec<WorldState> = inits.iter().map(|i| init(&d, i)).collect();
        let r = check_aspect_soundness(&d, SoundnessMode::Reachable { inits: &states, depth: 3 });
        assert!(r.is_sound(), "{dom}: {:?}", r.violations);
    }
}

/// Direct sweep, independent of the report: every disjoint pair in every
/// reachable state keeps the fluent's value.
#[test]
fn disjoint_pairs_persist_in_reachable_states() {
    let start = Instant::now();
    let mut pairs = 0usize;
    for (dom, inits) in SCENARIOS {
        let d = domain(dom);
        let states: Vec<WorldState> = inits.iter().map(|i| init(&d, i)).collect();
        let fluents = d.ground_fluents();
        for s in reachable_states(&d, &states, 4) {
            for a in d.ground_actions() {
                let Ok(next) = progress(&d, &s, &a) else { continue };
                for p in &fluents {
                    if aspect_of_fluent(&d, &s, p).is_err() || aspect_of_action(&d, &s, &a).is_err() {
                        continue;
                    }
                    if !intersects(&d, &s, &a, p).unwrap() {
                        pairs += 1;
                        assert_eq!(
                            eval_fluent(&d, &next, p).unwrap(),
                            eval_fluent(&d, &s, p).unwrap(),
                            "{dom}: {a} changed {p}"
                        );
                    }
                }
            }
        }
    }
    assert!(pairs > 1000);
    assert!(start.elapsed().as_secs() < 60);
}
