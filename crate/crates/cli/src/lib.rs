//! Command-line front end for `morley-core`: `verify` one prime, `scan` a
//! range in parallel with deterministic ordering, and list `residuals`.

pub mod cli;
pub mod error;
pub mod pipeline;
pub mod record;
pub mod render;

pub use cli::{cmd_residuals, cmd_scan, cmd_verify, exit_code, run, ScanConfig, ScanSummary};
pub use error::CliError;
