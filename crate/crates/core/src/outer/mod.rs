//! The adaptive outer loop: relaxed inexact proximal steps, parameter schedules, the
//! checkable linear-decrease condition and restarts.

mod params;
mod run;

pub use params::{
    check_constant, checking_condition, derive_constants, derive_delta, restart_index, rho_of, solve_alpha,
    AgppaParams, DerivedConstants, Schedule, ALPHA_BRACKET,
};
pub use run::{
    agppa_run, agppa_run_prepared, igppa_step, HistoryRow, Residuals, SolveReport, Status, StepOutput,
    REPORT_SCHEMA_VERSION,
};
