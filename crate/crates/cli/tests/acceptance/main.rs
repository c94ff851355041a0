//! Acceptance suite: one test per release criterion.
//!
//! Each test exercises the toolkit end to end (most of them through the
//! compiled `comet` binary) and prints a single `ACCEPTANCE <n> <name>: PASS`
//! line on success, so `cargo test --test acceptance -- --nocapture` reads as
//! a checklist. Criteria with runtime budgets assert them with a wall clock.
//!
//! Tests run in numeric order under the default single-threaded runner; the
//! desk-scale corpus is built once by the first criterion that needs it and
//! its build time is charged to criterion 6's budget.

mod c01_metric_oracles;
mod c04_dedup_property;
mod c05_constrained_decoding;
mod c06_completion_trend;
mod c09_history_effect;
mod c10_llm_contract;
mod desk;
mod fixture;
mod support;

/// Print the per-criterion checklist line.
pub fn pass(number: u32, name: &str) {
    println!("ACCEPTANCE {number} {name}: PASS");
}
