//! Canonical JSON encoding of problems and primal-dual points.
//!
//! ```json
//! {
//!   "c": [1.0, 2.0],
//!   "n_b": 1,
//!   "a_ineq": [[0, 0, 1.0], [0, 1, 1.0]],
//!   "b_ineq": [4.0],
//!   "a_eq": [],
//!   "b_eq": []
//! }
//! ```
//!
//! Matrix entries are `[row, col, value]` triplets; the matrix shapes follow from the
//! lengths of `c`, `b_ineq` and `b_eq`. Points are `{"x": [...], "lambda": [...]}`.

use serde::{Deserialize, Serialize};

use super::problem::{LpProblem, PrimalDualPoint};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemJson {
    pub c: Vec<f64>,
    #[serde(default)]
    pub n_b: usize,
    #[serde(default)]
    pub a_ineq: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pub b_ineq: Vec<f64>,
    #[serde(default)]
    pub a_eq: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pub b_eq: Vec<f64>,
}

impl ProblemJson {
    pub fn from_problem(p: &LpProblem) -> Self {
        ProblemJson {
            c: p.c().to_vec(),
            n_b: p.n_b(),
            a_ineq: p.a_ineq().triplets(),
            b_ineq: p.b_ineq().to_vec(),
            a_eq: p.a_eq().triplets(),
            b_eq: p.b_eq().to_vec(),
        }
    }

    pub fn to_problem(&self) -> Result<LpProblem> {
        let n = self.c.len();
        let a_ineq = SparseMatrix::from_triplets(self.b_ineq.len(), n, &self.a_ineq)?;
        let a_eq = SparseMatrix::from_triplets(self.b_eq.len(), n, &self.a_eq)?;
        LpProblem::new(self.c.clone(), a_ineq, self.b_ineq.clone(), a_eq, self.b_eq.clone(), self.n_b)
    }
}

pub fn parse_problem_json(text: &str) -> Result<LpProblem> {
    let raw: ProblemJson = serde_json::from_str(text).map_err(|e| Error::Problem(e.to_string()))?;
    raw.to_problem()
}

pub fn problem_to_json(p: &LpProblem) -> String {
    serde_json::to_string_pretty(&ProblemJson::from_problem(p)).expect("plain data serializes")
}

pub fn parse_point_json(text: &str) -> Result<PrimalDualPoint> {
    let z: PrimalDualPoint = serde_json::from_str(text).map_err(|e| Error::Problem(e.to_string()))?;
    if z.x.iter().chain(&z.lambda).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("point"));
    }
    Ok(z)
}

pub fn point_to_json(z: &PrimalDualPoint) -> String {
    serde_json::to_string_pretty(z).expect("plain data serializes")
}
