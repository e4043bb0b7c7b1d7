//! Scenario loading and the mission loop.

mod config;
mod mission;

pub use config::{
    load_scenario, load_scenario_file, parse_timestamp, sample_times, Scenario, DEFAULT_T_END, DEFAULT_T_START,
    SCENARIO_SCHEMA,
};
pub use mission::{
    access_table, compare_schemes, run_mission, run_mission_with, select_targets, AccessRow, Comparison, ComparisonRow,
    MissionReport,
};
