#![allow(dead_code)]

use std::path::PathBuf;

use aspect_core::dsl::{parse_actions, parse_domain, parse_ground_action, parse_ground_fluent, parse_state};
use aspect_core::{Domain, GroundAction, GroundFluent, WorldState};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn domain(name: &str) -> Domain {
    match parse_domain(name, &read_fixture(name)) {
        Ok(p) => p.value,
        Err(d) => panic!("{name}: {}", d.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n")),
    }
}

pub fn init(domain: &Domain, name: &str) -> WorldState {
    let spec = parse_state(domain, name, &read_fixture(name)).unwrap_or_else(|d| panic!("{name}: {d:?}"));
    spec.build(domain).unwrap()
}

pub fn fluent(domain: &Domain, text: &str) -> GroundFluent {
    parse_ground_fluent(domain, text).unwrap()
}

pub fn action(domain: &Domain, text: &str) -> GroundAction {
    parse_ground_action(domain, text).unwrap()
}

pub fn actions(domain: &Domain, text: &str) -> Vec<GroundAction> {
    parse_actions(domain, text).unwrap()
}

pub const DOMAINS: [&str; 5] = ["blocks.dom", "blocks_nosupport.dom", "rooms.dom", "display.dom", "economy.dom"];

/// Fixture domains paired with their initial states.
pub const SCENARIOS: [(&str, &[&str]); 4] = [
    ("blocks.dom", &["blocks.init", "blocks_tower.init"]),
    ("blocks_nosupport.dom", &["blocks.init"]),
    ("rooms.dom", &["rooms.init"]),
    ("display.dom", &["display.init", "display_part.init"]),
];
