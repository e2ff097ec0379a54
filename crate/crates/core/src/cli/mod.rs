//! Command-line driver: the JSON run-configuration schema, the
//! verification-report machinery, and one entry point per command
//! (classify, solve, build-surface, build-trinoid, verify).

pub mod checks;
pub mod commands;
pub mod config;

pub use checks::{
    connection_products, det_drift_sample, overlap_samples, period_residual,
    wronskian_samples, write_samples_csv, CheckRow, SampleRow, VerificationReport,
};
pub use commands::{
    cmd_build_surface, cmd_build_trinoid, cmd_classify, cmd_solve, cmd_verify, run,
};
pub use config::{
    input_form, InputForm, Mode, Overrides, RunConfig, Tolerances, DEFAULT_RESOLUTION,
    DEFAULT_R_EXCL, DEFAULT_SEED,
};
