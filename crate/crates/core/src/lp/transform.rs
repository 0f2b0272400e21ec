//! Dualization and the primal/dual form choice.
//!
//! The dual of the general-form problem is written back in general form:
//!
//! ```text
//! min  bᵀλ
//! s.t. −[Aᵀλ]_i ≤ c_i   for i < n_b
//!      −[Aᵀλ]_i = c_i   for i ≥ n_b
//!      λ_j ≥ 0          for j < m_I
//! ```
//!
//! so the constraint matrix is `−Aᵀ`, the right-hand side is `c` and the cost is `b`. The
//! multipliers of this dual are exactly the original `x`, and its variables are the
//! original `λ`; recovering a pair is therefore a swap.

use serde::{Deserialize, Serialize};

use super::problem::{LpProblem, PrimalDualPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Primal,
    Dual,
}

/// Maps primal-dual pairs between the problem that was solved and the original problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolutionMap {
    form: Form,
}

impl SolutionMap {
    pub fn identity() -> Self {
        SolutionMap { form: Form::Primal }
    }

    pub fn form(&self) -> Form {
        self.form
    }

    /// Pair of the original problem from a pair of the solved problem.
    pub fn to_original(&self, solved: &PrimalDualPoint) -> PrimalDualPoint {
        match self.form {
            Form::Primal => solved.clone(),
            Form::Dual => PrimalDualPoint::new(solved.lambda.clone(), solved.x.clone()),
        }
    }

    /// Pair of the solved problem from a pair of the original problem.
    pub fn to_solved(&self, original: &PrimalDualPoint) -> PrimalDualPoint {
        // the swap is an involution
        self.to_original(original)
    }

    /// Objective of the original problem given the objective of the solved one.
    pub fn original_objective(&self, solved_objective: f64) -> f64 {
        match self.form {
            Form::Primal => solved_objective,
            Form::Dual => -solved_objective,
        }
    }
}

pub fn dualize(p: &LpProblem) -> (LpProblem, SolutionMap) {
    let neg_at = p.a().transpose().scaled(-1.0);
    let n_b = p.n_b();
    let a_ineq = neg_at.row_slice(0, n_b);
    let a_eq = neg_at.row_slice(n_b, p.n());
    let b_ineq = p.c()[..n_b].to_vec();
    let b_eq = p.c()[n_b..].to_vec();
    let dual = LpProblem::new(p.b().to_vec(), a_ineq, b_ineq, a_eq, b_eq, p.m_ineq())
        .expect("dual of a valid problem is valid");
    (dual, SolutionMap { form: Form::Dual })
}

/// The form the solver is applied to by default: primal iff `m_I > n_b`.
pub fn choose_form(p: &LpProblem) -> Form {
    if p.m_ineq() > p.n_b() {
        Form::Primal
    } else {
        Form::Dual
    }
}

/// Returns the problem in the requested form together with the pair map.
pub fn apply_form(p: &LpProblem, form: Form) -> (LpProblem, SolutionMap) {
    match form {
        Form::Primal => (p.clone(), SolutionMap::identity()),
        Form::Dual => dualize(p),
    }
}
