use serde::{Deserialize, Serialize};

use super::alg2::algorithm2_solve;
use super::hood::hood_epoch_units;
use super::pssn::{pssn_solve, Budget, PssnOutcome};
use super::{InnerConfig, InnerFailure, InnerResult};
use crate::inner::InnerInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetRule {
    /// Multiplier `c_J` on the number of HOOD epochs granted to PSSN.
    pub c_j: f64,
}

impl Default for BudgetRule {
    fn default() -> Self {
        BudgetRule { c_j: 10.0 }
    }
}

/// `ζ₂(q) = 2(1 + δ)²q²/δ²`.
pub fn zeta2(q: f64, delta: f64) -> f64 {
    2.0 * (1.0 + delta).powi(2) * q * q / (delta * delta)
}

/// `c_J·⌈max(ln ζ₂(Lσ), 1)⌉` HOOD epochs.
pub fn budget_epochs(l_sigma: f64, delta: f64, c_j: f64) -> f64 {
    c_j * zeta2(l_sigma, delta).ln().max(1.0).ceil()
}

/// PSSN under a budget of [`budget_epochs`] HOOD epochs; if it runs out, the restart scheme takes
/// over from PSSN's last iterate. A zero budget skips PSSN entirely.
pub fn hybrid_solve(
    inst: &InnerInstance,
    eta: f64,
    delta: f64,
    cfg: &InnerConfig,
    seed: u64,
) -> Result<InnerResult, InnerFailure> {
    let epochs = budget_epochs(inst.l * inst.sigma, delta, cfg.budget.c_j);
    let units = epochs * hood_epoch_units(inst, &cfg.alg2.hood);
    if !(units > 0.0) {
        return algorithm2_solve(inst, eta, delta, &cfg.alg2, None, seed);
    }
    let mut budget = Budget::new(units);
    match pssn_solve(inst, eta, delta, &cfg.pssn, None, &mut budget) {
        PssnOutcome::Converged(r) => Ok(r),
        PssnOutcome::Exhausted(best) => {
            let mut stats = best.stats.clone();
            stats.budget_fallbacks += 1;
            let tail = algorithm2_solve(inst, eta, delta, &cfg.alg2, Some(&best.eval.x), seed);
            let merge = |mut r: InnerResult| {
                let mut s = stats.clone();
                s += &r.stats;
                r.stats = s;
                r
            };
            match tail {
                Ok(r) => Ok(merge(r)),
                Err(InnerFailure::IterationCap { best, dist }) => {
                    Err(InnerFailure::IterationCap { best: Box::new(merge(*best)), dist })
                }
            }
        }
    }
}
