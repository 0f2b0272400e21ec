//! Inner minimizers of `F`.
//!
//! * [`hood`]: one call of a first-order method with a fixed work budget that shrinks the
//!   optimality gap by `e⁻¹` (accelerated proximal gradient or randomized coordinate
//!   descent);
//! * [`algorithm2_solve`]: repeats HOOD calls interleaved with proximal gradient steps until
//!   the computable stopping test holds;
//! * [`pssn_solve`]: projected semismooth Newton with CG and Armijo line search;
//! * [`hybrid_solve`]: PSSN under a work budget, then the restart scheme from its best point.
//!
//! Work is counted in units of one sparse product with `A` (`nnz(A)` multiply-adds).

use serde::{Deserialize, Serialize};

use crate::inner::{Eval, InnerInstance};

mod alg2;
mod hood;
mod hybrid;
mod pssn;

pub use alg2::{algorithm2_solve, Alg2Config};
pub use hood::{
    apg_iterations, hood_apg, hood_call, hood_epoch_units, hood_rcd, rcd_epoch_length, HoodConfig, HoodKind,
};
pub use hybrid::{budget_epochs, hybrid_solve, zeta2, BudgetRule};
pub use pssn::{hessian_vec, pssn_solve, Budget, PssnConfig, PssnOutcome};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InnerStats {
    /// Work in sparse-product units.
    pub work: f64,
    pub hood_calls: u64,
    pub alg2_iters: u64,
    pub newton_steps: u64,
    pub cg_iters: u64,
    /// Newton steps whose line search failed and were replaced by a proximal gradient step.
    pub line_search_fallbacks: u64,
    /// Hybrid solves whose PSSN phase ran out of budget.
    pub budget_fallbacks: u64,
}

impl std::ops::AddAssign<&InnerStats> for InnerStats {
    fn add_assign(&mut self, o: &InnerStats) {
        self.work += o.work;
        self.hood_calls += o.hood_calls;
        self.alg2_iters += o.alg2_iters;
        self.newton_steps += o.newton_steps;
        self.cg_iters += o.cg_iters;
        self.line_search_fallbacks += o.line_search_fallbacks;
        self.budget_fallbacks += o.budget_fallbacks;
    }
}

/// An approximate minimizer with its evaluation.
#[derive(Debug, Clone)]
pub struct InnerResult {
    pub eval: Eval,
    pub stats: InnerStats,
}

impl InnerResult {
    pub fn x(&self) -> &[f64] {
        &self.eval.x
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum InnerFailure {
    #[error("inner solver hit its iteration cap (subgradient distance {dist:e})")]
    IterationCap { best: Box<InnerResult>, dist: f64 },
}

impl InnerFailure {
    pub fn best(&self) -> &InnerResult {
        match self {
            InnerFailure::IterationCap { best, .. } => best,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InnerSolverKind {
    #[default]
    Hybrid,
    FirstOrderOnly,
    PssnOnly,
}

impl std::str::FromStr for InnerSolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hybrid" => Ok(InnerSolverKind::Hybrid),
            "first_order_only" => Ok(InnerSolverKind::FirstOrderOnly),
            "pssn_only" => Ok(InnerSolverKind::PssnOnly),
            other => Err(format!("unknown inner solver {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerConfig {
    pub kind: InnerSolverKind,
    pub alg2: Alg2Config,
    pub pssn: PssnConfig,
    pub budget: BudgetRule,
}

impl Default for InnerConfig {
    fn default() -> Self {
        InnerConfig {
            kind: InnerSolverKind::Hybrid,
            alg2: Alg2Config::default(),
            pssn: PssnConfig::default(),
            budget: BudgetRule::default(),
        }
    }
}

/// Solves one inner problem with the configured method.
pub fn solve_inner(
    inst: &InnerInstance,
    eta: f64,
    delta: f64,
    cfg: &InnerConfig,
    seed: u64,
) -> Result<InnerResult, InnerFailure> {
    match cfg.kind {
        InnerSolverKind::FirstOrderOnly => algorithm2_solve(inst, eta, delta, &cfg.alg2, None, seed),
        InnerSolverKind::Hybrid => hybrid_solve(inst, eta, delta, cfg, seed),
        InnerSolverKind::PssnOnly => {
            let mut budget = Budget::unlimited();
            match pssn_solve(inst, eta, delta, &cfg.pssn, None, &mut budget) {
                PssnOutcome::Converged(r) => Ok(r),
                PssnOutcome::Exhausted(r) => {
                    let dist = inst.subgrad_dist_of(&r.eval);
                    Err(InnerFailure::IterationCap { best: Box::new(r), dist })
                }
            }
        }
    }
}
