//! Scenario files, the batch verification driver and its report format.

pub mod scenario;
pub mod suite;

pub use scenario::{gen_scenario, GenOptions, Scenario, ScenarioFile};
pub use suite::{run_check, run_suite, Check, Record, Report, Status, SuiteOptions};
