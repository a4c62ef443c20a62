//! Configured Monte Carlo runs, kernel verification and reports.

mod config;
mod report;
mod run;
mod verify;

pub use config::{CountSpec, EnsembleConfig, ExperimentConfig, Plan, ScalingConfig, WindowConfig, SCHEMA_VERSION};
pub use report::{report, ReportOutput};
pub use run::{
    load_run, run_experiment, run_trial, CountSummary, ExperimentRun, FailedTrial, GapRow, RunMeta, ScaledGapRow,
    Summary, TrialResult, MAX_FAILED_FRACTION,
};
pub use verify::{
    cd_identity_error, density_verdicts, law_normalization_errors, one_point_verdicts, pair_verdicts,
    remainder_verdicts, verify_kernels, Verdict, VerdictBundle,
};
