//! Experiment files, sweeps and CSV output behind the `aerocov` binary.

mod config;
mod run;
mod sweep;

pub use config::{emit_config, load_config, load_run_config, parse_config, RunConfig, KEYS};
pub use run::{
    parse_association, run, Command, Engine, EngineKind, PointRecord, Row, RunOptions, RunRecord, DEFAULT_DROPS,
    NO_HANDOVER_WINDOW,
};
pub use sweep::{SweepParameter, SweepSpec};
