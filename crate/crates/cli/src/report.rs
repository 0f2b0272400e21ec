//! The machine-readable outputs of `solve`. Their layout is pinned by the files in `schema/`.

use agppa::lp::Form;
use agppa::outer::{DerivedConstants, HistoryRow, Residuals, Status};
use agppa::solvers::InnerStats;
use agppa::ResidualKind;
use anyhow::Result;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

pub const HISTORY_HEADER: &str = "step,stage,sigma,eta,residual,step_norm,wall_ms,violation";

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub status: Status,
    /// Form the solver was applied to.
    pub form: Form,
    pub seed: u64,
    /// Objective of the input model (including any MPS objective constant).
    pub objective: f64,
    pub residual_kind: ResidualKind,
    /// Selected residual of the returned pair on the input problem.
    pub residual: f64,
    pub residuals: Residuals,
    /// Selected residual on the problem that was solved (differs only in the dual form).
    pub solved_residual: f64,
    pub steps: usize,
    pub stages: usize,
    pub sigma_final: f64,
    pub eta_final: f64,
    pub violations: usize,
    pub derived: DerivedConstants,
    pub inner: InnerStats,
    pub wall_ms: f64,
    /// Primal solution of the normalized problem.
    pub x: Vec<f64>,
    pub lambda: Vec<f64>,
    /// For MPS input: column names and values in file order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub columns: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column_values: Option<Vec<f64>>,
}

pub fn history_csv(rows: &[HistoryRow]) -> Result<Vec<u8>> {
    if rows.is_empty() {
        return Ok(format!("{HISTORY_HEADER}\n").into_bytes());
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(w.into_inner()?)
}
