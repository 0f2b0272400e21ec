use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::hood::{hood_call, HoodConfig};
use super::{InnerFailure, InnerResult, InnerStats};
use crate::inner::InnerInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alg2Config {
    pub hood: HoodConfig,
    pub max_iters: usize,
}

impl Default for Alg2Config {
    fn default() -> Self {
        Alg2Config { hood: HoodConfig::default(), max_iters: 100_000 }
    }
}

/// HOOD calls safeguarded by a best-of comparison, each followed by a proximal gradient
/// step, until the stopping test holds at the proximal gradient point.
///
/// Starts from `G_F(start)` with `start = x̄` by default. The starting point itself is tested
/// before the first HOOD call. The HOOD call `k` uses a seed drawn from a generator seeded
/// with `seed`.
pub fn algorithm2_solve(
    inst: &InnerInstance,
    eta: f64,
    delta: f64,
    cfg: &Alg2Config,
    start: Option<&[f64]>,
    seed: u64,
) -> Result<InnerResult, InnerFailure> {
    let mut stats = InnerStats::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0 = start.unwrap_or(&inst.x_bar);
    let mut e = inst.evaluate(&inst.prox_grad_of(&inst.evaluate(x0)));
    stats.work += 4.0;
    if inst.stopping_check_of(&e, eta, delta) {
        return Ok(InnerResult { eval: e, stats });
    }
    for _ in 0..cfg.max_iters {
        stats.alg2_iters += 1;
        let fy = inst.big_f_of(&e);
        let (y1, work) = hood_call(inst, &e.x, &cfg.hood, rng.gen());
        stats.hood_calls += 1;
        stats.work += work + 2.0;
        let mut ey = inst.evaluate(&y1);
        if inst.big_f_of(&ey) > fy {
            ey = e;
        }
        e = inst.evaluate(&inst.prox_grad_of(&ey));
        stats.work += 2.0;
        if inst.stopping_check_of(&e, eta, delta) {
            return Ok(InnerResult { eval: e, stats });
        }
    }
    let dist = inst.subgrad_dist_of(&e);
    Err(InnerFailure::IterationCap { best: Box::new(InnerResult { eval: e, stats }), dist })
}
