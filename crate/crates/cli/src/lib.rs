//! Scenario files, CSV/SVG writers, and the subcommand implementations
//! behind the `revolt` binary.

pub mod commands;
pub mod csvio;
pub mod scenario;
pub mod svg;

pub use commands::CliError;
pub use scenario::{
    parse_scenario, InitSpec, IntegratorOverrides, Scenario, ScenarioError, Variant,
};
