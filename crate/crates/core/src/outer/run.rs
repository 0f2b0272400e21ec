use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::params::{checking_condition, derive_constants, restart_index, AgppaParams, DerivedConstants, Schedule};
use crate::error::Result;
use crate::inner::{InnerInstance, Prepared};
use crate::lp::{residual_e1, residual_e2, residual_e3, LpProblem, PrimalDualPoint};
use crate::solvers::{solve_inner, InnerConfig, InnerFailure, InnerStats};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct StepOutput {
    pub z_next: PrimalDualPoint,
    /// `(x̃, Λ(x̃))`.
    pub w: PrimalDualPoint,
    pub stats: InnerStats,
}

/// One relaxed inexact proximal step: `w = (x̃, Λ(x̃))` for an approximate minimizer `x̃`
/// of the inner problem at `z`, then `z⁺ = γw + (1 − γ)z`.
#[allow(clippy::too_many_arguments)]
pub fn igppa_step(
    data: &Prepared,
    z: &PrimalDualPoint,
    sigma: f64,
    eta: f64,
    delta: f64,
    gamma: f64,
    inner: &InnerConfig,
    seed: u64,
) -> std::result::Result<StepOutput, InnerFailure> {
    let inst = InnerInstance::new(data, z.x.clone(), z.lambda.clone(), sigma);
    let r = solve_inner(&inst, eta, delta, inner, seed)?;
    let w = PrimalDualPoint::new(r.eval.x, r.eval.lambda);
    let z_next = if gamma == 1.0 {
        w.clone()
    } else {
        let mix = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(w, z)| gamma * w + (1.0 - gamma) * z).collect();
        PrimalDualPoint::new(mix(&w.x, &z.x), mix(&w.lambda, &z.lambda))
    };
    Ok(StepOutput { z_next, w, stats: r.stats })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Solved,
    TimeLimit,
    /// Stage or step cap reached.
    StageLimit,
    InnerFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryRow {
    /// Cumulative number of proximal steps.
    pub step: usize,
    pub stage: usize,
    pub sigma: f64,
    pub eta: f64,
    /// Residual of the point produced by this step.
    pub residual: f64,
    pub step_norm: f64,
    pub wall_ms: f64,
    /// Whether the checking condition fired on this step.
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
}

impl Residuals {
    pub fn of(p: &LpProblem, z: &PrimalDualPoint) -> Self {
        Residuals { e1: residual_e1(p, z), e2: residual_e2(p, z), e3: residual_e3(p, z) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub status: Status,
    pub z: PrimalDualPoint,
    pub objective: f64,
    /// Value of the selected residual at `z`.
    pub residual: f64,
    pub residuals: Residuals,
    /// Total proximal steps `N∘`.
    pub steps: usize,
    /// Index `s∘` of the last stage.
    pub stages: usize,
    pub sigma_final: f64,
    pub eta_final: f64,
    pub violations: usize,
    pub derived: DerivedConstants,
    pub inner: InnerStats,
    pub wall_ms: f64,
    #[serde(skip)]
    pub history: Vec<HistoryRow>,
}

/// Runs the adaptive outer loop on `p` from `start` (the origin by default).
///
/// Within stage `s` the steps use `σ_s` and `η_{s,t}`. A stage ends when the residual of
/// `z^{s,t}` is at most `ε` (the run is then solved) or when the step `z^{s,t+1} − z^{s,t}`
/// violates the checking condition; in the latter case the next stage restarts from the
/// stage iterate with the smallest residual (earliest on ties) with `σ` and `η₀` scaled.
pub fn agppa_run(
    p: &LpProblem,
    params: &AgppaParams,
    inner: &InnerConfig,
    start: Option<PrimalDualPoint>,
    seed: u64,
) -> Result<SolveReport> {
    let data = Prepared::new(p.clone());
    agppa_run_prepared(&data, params, inner, start, seed)
}

pub fn agppa_run_prepared(
    data: &Prepared,
    params: &AgppaParams,
    inner: &InnerConfig,
    start: Option<PrimalDualPoint>,
    seed: u64,
) -> Result<SolveReport> {
    let clock = Instant::now();
    let p = &data.problem;
    let derived = derive_constants(params, data.frobenius)?;
    let schedule = Schedule::new(params, &derived);
    let kind = params.residual_kind;
    let eps = params.epsilon;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut z = match start {
        Some(z) => {
            p.check_point(&z)?;
            z
        }
        None => p.zero_point(),
    };
    z.project_signs(p.n_b(), p.m_ineq());
    let mut res_z = kind.eval(p, &z);

    let mut history = vec![HistoryRow {
        step: 0,
        stage: 0,
        sigma: schedule.sigma(0),
        eta: schedule.eta(0, 0),
        residual: res_z,
        step_norm: 0.0,
        wall_ms: 0.0,
        violation: false,
    }];
    let mut stats = InnerStats::default();
    let mut steps = 0usize;
    let mut violations = 0usize;
    let mut s = 0usize;
    let mut stages_run = 0usize;
    let mut last_eta = schedule.eta(0, 0);
    let mut best = (res_z, z.clone());
    let mut status = Status::Solved;
    let out_of_time = |clock: &Instant| params.max_time.is_some_and(|t| clock.elapsed().as_secs_f64() > t);

    'outer: while res_z > eps {
        if s >= params.max_stages {
            status = Status::StageLimit;
            break;
        }
        stages_run = s + 1;
        let sigma = schedule.sigma(s);
        log::info!("stage {s}: sigma = {sigma:e}, residual = {res_z:e}");
        let mut iterates = vec![z.clone()];
        let mut residuals = vec![res_z];
        let mut norms: Vec<f64> = Vec::new();
        let mut t = 0usize;
        loop {
            let eta = schedule.eta(s, t);
            last_eta = eta;
            if params.check_residual_first && residuals[t] <= eps {
                z = iterates[t].clone();
                res_z = residuals[t];
                break;
            }
            if steps >= params.max_steps {
                status = Status::StageLimit;
                break 'outer;
            }
            if out_of_time(&clock) {
                status = Status::TimeLimit;
                break 'outer;
            }
            let out = match igppa_step(data, &iterates[t], sigma, eta, derived.delta, params.gamma, inner, rng.gen()) {
                Ok(o) => o,
                Err(e) => {
                    log::error!("inner solve failed at stage {s}, step {t}: {e}");
                    stats += &e.best().stats;
                    status = Status::InnerFailure;
                    break 'outer;
                }
            };
            stats += &out.stats;
            steps += 1;
            let step_norm = out.z_next.distance(&iterates[t]);
            let violation = checking_condition(&norms, step_norm, derived.c, params.rho);
            norms.push(step_norm);
            let r_next = kind.eval(p, &out.z_next);
            if r_next < best.0 {
                best = (r_next, out.z_next.clone());
            }
            history.push(HistoryRow {
                step: steps,
                stage: s,
                sigma,
                eta,
                residual: r_next,
                step_norm,
                wall_ms: clock.elapsed().as_secs_f64() * 1e3,
                violation,
            });
            log::debug!("step {steps} (s = {s}, t = {t}): residual {r_next:e}, step {step_norm:e}");
            iterates.push(out.z_next);
            residuals.push(r_next);

            if residuals[t] <= eps {
                z = iterates[t].clone();
                res_z = residuals[t];
                break;
            }
            if violation {
                violations += 1;
                let k = restart_index(&residuals);
                z = iterates[k].clone();
                res_z = residuals[k];
                break;
            }
            t += 1;
        }
        s += 1;
    }

    let (res, z) = if status == Status::Solved { (res_z, z) } else { best };
    let s_final = stages_run.saturating_sub(1);
    Ok(SolveReport {
        schema_version: REPORT_SCHEMA_VERSION,
        status,
        objective: p.objective(&z.x),
        residual: res,
        residuals: Residuals::of(p, &z),
        z,
        steps,
        stages: s_final,
        sigma_final: schedule.sigma(s_final),
        eta_final: last_eta,
        violations,
        derived,
        inner: stats,
        wall_ms: clock.elapsed().as_secs_f64() * 1e3,
        history,
    })
}
