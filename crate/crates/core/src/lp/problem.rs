use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// A linear program in general form:
///
/// ```text
/// min  cᵀx
/// s.t. A_I x ≤ b_I
///      A_E x = b_E
///      x_i ≥ 0   for i < n_b
/// ```
///
/// The stacked matrix `A = [A_I; A_E]` and `b = [b_I; b_E]` are built at construction and
/// shared by every solver routine.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    c: Vec<f64>,
    a_ineq: SparseMatrix,
    b_ineq: Vec<f64>,
    a_eq: SparseMatrix,
    b_eq: Vec<f64>,
    n_b: usize,
    a: SparseMatrix,
    b: Vec<f64>,
}

impl LpProblem {
    pub fn new(
        c: Vec<f64>,
        a_ineq: SparseMatrix,
        b_ineq: Vec<f64>,
        a_eq: SparseMatrix,
        b_eq: Vec<f64>,
        n_b: usize,
    ) -> Result<Self> {
        let n = c.len();
        let dim = |what, expected, found| {
            if expected == found {
                Ok(())
            } else {
                Err(Error::DimensionMismatch { what, expected, found })
            }
        };
        dim("A_I columns", n, a_ineq.cols())?;
        dim("A_E columns", n, a_eq.cols())?;
        dim("b_I length", a_ineq.rows(), b_ineq.len())?;
        dim("b_E length", a_eq.rows(), b_eq.len())?;
        if n_b > n {
            return Err(Error::Problem(format!("n_b = {n_b} exceeds n = {n}")));
        }
        if c.iter().chain(&b_ineq).chain(&b_eq).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("problem vector"));
        }
        let a = a_ineq.vstack(&a_eq)?;
        let b = b_ineq.iter().chain(&b_eq).copied().collect();
        Ok(LpProblem { c, a_ineq, b_ineq, a_eq, b_eq, n_b, a, b })
    }

    /// Inequality-only problem `min cᵀx s.t. A x ≤ b, x_{<n_b} ≥ 0`.
    pub fn inequality(c: Vec<f64>, a: SparseMatrix, b: Vec<f64>, n_b: usize) -> Result<Self> {
        let n = c.len();
        LpProblem::new(c, a, b, SparseMatrix::zeros(0, n), vec![], n_b)
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    pub fn m_ineq(&self) -> usize {
        self.b_ineq.len()
    }

    pub fn m_eq(&self) -> usize {
        self.b_eq.len()
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn a_ineq(&self) -> &SparseMatrix {
        &self.a_ineq
    }

    pub fn b_ineq(&self) -> &[f64] {
        &self.b_ineq
    }

    pub fn a_eq(&self) -> &SparseMatrix {
        &self.a_eq
    }

    pub fn b_eq(&self) -> &[f64] {
        &self.b_eq
    }

    /// Stacked constraint matrix `[A_I; A_E]`.
    pub fn a(&self) -> &SparseMatrix {
        &self.a
    }

    /// Stacked right-hand side `[b_I; b_E]`.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        dot(&self.c, x)
    }

    /// Dual objective term `bᵀλ` (the duality gap is `cᵀx + bᵀλ`).
    pub fn dual_objective(&self, lambda: &[f64]) -> f64 {
        dot(&self.b, lambda)
    }

    pub fn check_point(&self, z: &PrimalDualPoint) -> Result<()> {
        if z.x.len() != self.n() {
            return Err(Error::DimensionMismatch { what: "x", expected: self.n(), found: z.x.len() });
        }
        if z.lambda.len() != self.m() {
            return Err(Error::DimensionMismatch { what: "lambda", expected: self.m(), found: z.lambda.len() });
        }
        Ok(())
    }

    /// The origin projected onto the sign constraints, which is the origin itself.
    pub fn zero_point(&self) -> PrimalDualPoint {
        PrimalDualPoint { x: vec![0.0; self.n()], lambda: vec![0.0; self.m()] }
    }
}

/// A primal-dual pair `z = (x, λ)` with `λ = [λ_I; λ_E]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimalDualPoint {
    pub x: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl PrimalDualPoint {
    pub fn new(x: Vec<f64>, lambda: Vec<f64>) -> Self {
        PrimalDualPoint { x, lambda }
    }

    /// Clips `x_{<n_b}` and `λ_{<m_I}` at zero.
    pub fn project_signs(&mut self, n_b: usize, m_ineq: usize) {
        self.x[..n_b].iter_mut().for_each(|v| *v = v.max(0.0));
        self.lambda[..m_ineq].iter_mut().for_each(|v| *v = v.max(0.0));
    }

    pub fn is_sign_feasible(&self, n_b: usize, m_ineq: usize) -> bool {
        self.x[..n_b].iter().all(|&v| v >= 0.0) && self.lambda[..m_ineq].iter().all(|&v| v >= 0.0)
    }

    /// Euclidean distance in the product space.
    pub fn distance(&self, other: &PrimalDualPoint) -> f64 {
        let dx: f64 = self.x.iter().zip(&other.x).map(|(a, b)| (a - b) * (a - b)).sum();
        let dl: f64 = self.lambda.iter().zip(&other.lambda).map(|(a, b)| (a - b) * (a - b)).sum();
        (dx + dl).sqrt()
    }

    pub fn norm(&self) -> f64 {
        let s: f64 = self.x.iter().chain(&self.lambda).map(|v| v * v).sum();
        s.sqrt()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc + x * y)
}
