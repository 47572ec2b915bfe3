use std::path::PathBuf;

use aspect_validator::{parse_model, FiniteModel};

pub const MODELS: &[&str] = &["heater", "heater_small", "heater_all", "university"];

pub fn model_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/models").join(format!("{name}.model"))
}

pub fn model_text(name: &str) -> String {
    std::fs::read_to_string(model_path(name)).expect("fixture exists")
}

pub fn model(name: &str) -> FiniteModel {
    parse_model(&format!("{name}.model"), &model_text(name)).unwrap_or_else(|d| panic!("{name}: {d:?}"))
}
