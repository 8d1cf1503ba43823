//! Config-driven experiment runner: JSON configs in, versioned JSON records and fixed-schema
//! CSV rows out.

mod config;
mod record;
mod run;
mod sweep;
mod verify;

pub use config::{
    BayesSpec, ChannelSpec, EnsembleSpec, Experiment, ExperimentConfig, PgmParams, RecoverParams,
    SearchParams, StateSpec, SweepParams, CONFIG_VERSION, MAX_SWEEP_DIM,
};
pub use record::{
    BayesRecord, CsvRow, PgmPipeline, PgmRecord, RecoverRecord, ResultRecord, RunRecord,
    SearchRecord, SweepRecord, CSV_COLUMNS, RECORD_VERSION,
};
pub use run::{bayes_comparison, instrument_success, recover_instance, replay, run_config};
pub use sweep::{complexity_sweep, sweep_grid, sweep_instance, GridPoint};
pub use verify::{verify_suite, Check, VerifyOutcome};
