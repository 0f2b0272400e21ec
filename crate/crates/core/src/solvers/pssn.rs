use serde::{Deserialize, Serialize};

use super::{InnerResult, InnerStats};
use crate::inner::{Eval, InnerInstance};
use crate::lp::problem::dot;
use crate::sparse::norm;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PssnConfig {
    /// Armijo constant.
    pub mu: f64,
    /// CG relative tolerance.
    pub nu: f64,
    /// Line-search shrink factor.
    pub rho: f64,
    /// CG superlinear exponent.
    pub tau: f64,
    pub max_newton: usize,
    /// CG iterations are capped at `cg_cap_factor · |active set|`.
    pub cg_cap_factor: usize,
    pub max_halvings: usize,
}

impl Default for PssnConfig {
    fn default() -> Self {
        PssnConfig { mu: 1e-4, nu: 0.5, rho: 0.5, tau: 0.5, max_newton: 500, cg_cap_factor: 10, max_halvings: 60 }
    }
}

/// Remaining work in sparse-product units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub remaining: f64,
}

impl Budget {
    pub fn new(units: f64) -> Self {
        Budget { remaining: units }
    }

    pub fn unlimited() -> Self {
        Budget { remaining: f64::INFINITY }
    }

    pub fn exhausted(&self) -> bool {
        self.remaining <= 0.0
    }

    fn charge(&mut self, units: f64) {
        self.remaining -= units;
    }
}

#[derive(Debug, Clone)]
pub enum PssnOutcome {
    Converged(InnerResult),
    /// Budget or Newton-step cap reached; carries the last (lowest-`F`) iterate.
    Exhausted(InnerResult),
}

/// `(σ·AᵀDA + I/σ)v` restricted to the coordinates where `active` is set, with
/// `D_jj = 0` exactly on the inequality rows whose pre-clip multiplier `w_j` is negative.
pub fn hessian_vec(inst: &InnerInstance, w: &[f64], active: &[bool], v: &[f64]) -> Vec<f64> {
    let p = inst.problem();
    let m_i = p.m_ineq();
    let vm: Vec<f64> = v.iter().zip(active).map(|(&x, &a)| if a { x } else { 0.0 }).collect();
    let mut av = p.a().spmv(&vm).expect("v length matches problem");
    for (j, t) in av.iter_mut().enumerate() {
        if j < m_i && w[j] < 0.0 {
            *t = 0.0;
        }
    }
    let mut out = p.a().spmv_t(&av).expect("row count matches");
    for i in 0..out.len() {
        out[i] = if active[i] { inst.sigma * out[i] + vm[i] / inst.sigma } else { 0.0 };
    }
    out
}

struct CgResult {
    y: Vec<f64>,
    iters: usize,
}

fn conjugate_gradient(inst: &InnerInstance, w: &[f64], active: &[bool], rhs: &[f64], tol: f64, cap: usize) -> CgResult {
    let n = rhs.len();
    let mut y = vec![0.0; n];
    let mut r = rhs.to_vec();
    let mut d = r.clone();
    let mut rr = dot(&r, &r);
    let mut iters = 0;
    while rr.sqrt() > tol && iters < cap {
        let hd = hessian_vec(inst, w, active, &d);
        let dhd = dot(&d, &hd);
        if dhd <= 0.0 {
            break;
        }
        let a = rr / dhd;
        for i in 0..n {
            y[i] += a * d[i];
            r[i] -= a * hd[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        for i in 0..n {
            d[i] = r[i] + beta * d[i];
        }
        rr = rr_new;
        iters += 1;
    }
    CgResult { y, iters }
}

/// Projected semismooth Newton on `f̃(x) = f(x) + ‖x − x̄‖²/(2σ)` over `x_{<n_b} ≥ 0`.
///
/// Each step fixes the coordinates sitting at zero with a positive partial derivative,
/// solves the generalized Newton system on the rest by CG (started at zero), and runs an
/// Armijo search along the projected arc. If the search fails after `max_halvings`
/// reductions, a proximal gradient step is taken instead. Every Newton step charges
/// `CG iterations + 2` units, every line-search trial one more.
pub fn pssn_solve(
    inst: &InnerInstance,
    eta: f64,
    delta: f64,
    cfg: &PssnConfig,
    start: Option<&[f64]>,
    budget: &mut Budget,
) -> PssnOutcome {
    let mut stats = InnerStats::default();
    let n = inst.n();
    let n_b = inst.n_b();
    let mut e: Eval = match start {
        Some(x) => inst.evaluate(x),
        None => {
            stats.work += 2.0;
            inst.evaluate(&inst.prox_grad_of(&inst.evaluate(&inst.x_bar)))
        }
    };
    stats.work += 2.0;
    budget.charge(stats.work);
    loop {
        if inst.stopping_check_of(&e, eta, delta) {
            return PssnOutcome::Converged(InnerResult { eval: e, stats });
        }
        if budget.exhausted() || stats.newton_steps as usize >= cfg.max_newton {
            return PssnOutcome::Exhausted(InnerResult { eval: e, stats });
        }
        stats.newton_steps += 1;

        let g = inst.smooth_grad_of(&e);
        let active: Vec<bool> = (0..n).map(|i| !(i < n_b && e.x[i] == 0.0 && g[i] > 0.0)).collect();
        let g_a: Vec<f64> = g.iter().zip(&active).map(|(&v, &a)| if a { v } else { 0.0 }).collect();
        let gnorm = norm(&g_a);
        let tol = (cfg.nu * gnorm).min(gnorm.powf(1.0 + cfg.tau));
        let cap = cfg.cg_cap_factor * active.iter().filter(|&&a| a).count();
        let rhs: Vec<f64> = g_a.iter().map(|v| -v).collect();
        let cg = conjugate_gradient(inst, &e.w, &active, &rhs, tol, cap);
        stats.cg_iters += cg.iters as u64;
        let mut step_work = cg.iters as f64 + 2.0;

        let mut y = cg.y;
        let mut slope = dot(&g_a, &y);
        if !(slope < 0.0) {
            y = rhs;
            slope = -gnorm * gnorm;
        }

        let f0 = inst.big_f_of(&e);
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=cfg.max_halvings {
            let trial: Vec<f64> = (0..n)
                .map(|i| {
                    let v = e.x[i] + t * y[i];
                    if i < n_b {
                        v.max(0.0)
                    } else {
                        v
                    }
                })
                .collect();
            step_work += 1.0;
            if inst.big_f_value(&trial) <= f0 + cfg.mu * t * slope {
                accepted = Some(trial);
                break;
            }
            t *= cfg.rho;
        }
        let next = match accepted {
            Some(x) => x,
            None => {
                stats.line_search_fallbacks += 1;
                inst.prox_grad_of(&e)
            }
        };
        e = inst.evaluate(&next);
        step_work += 2.0;
        stats.work += step_work;
        budget.charge(step_work);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner::Prepared;
    use crate::lp::LpProblem;
    use crate::sparse::SparseMatrix;

    #[test]
    fn hessian_with_all_rows_active_matches_dense() {
        let a = SparseMatrix::from_dense(2, 3, &[1.0, -2.0, 0.5, 0.0, 1.0, 3.0]).unwrap();
        let ad = a.to_dense();
        let d = Prepared::new(LpProblem::inequality(vec![0.0; 3], a, vec![0.0, 0.0], 0).unwrap());
        let sigma = 0.8;
        let inst = InnerInstance::new(&d, vec![0.0; 3], vec![1.0, 1.0], sigma);
        let v = [0.3, -1.1, 2.0];
        let hv = hessian_vec(&inst, &[1.0, 1.0], &[true; 3], &v);
        for i in 0..3 {
            let mut s = 0.0;
            for r in 0..2 {
                let av: f64 = (0..3).map(|k| ad[r][k] * v[k]).sum();
                s += ad[r][i] * av;
            }
            let want = sigma * s + v[i] / sigma;
            assert!((hv[i] - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_gradient_terminates_immediately() {
        // σ = 1, x̄ = 0, λ̄ = 0 on min x s.t. −x ≤ −1: x = 0 is the minimizer
        let a = SparseMatrix::from_dense(1, 1, &[-1.0]).unwrap();
        let d = Prepared::new(LpProblem::inequality(vec![1.0], a, vec![-1.0], 0).unwrap());
        let inst = InnerInstance::new(&d, vec![0.0], vec![0.0], 1.0);
        let mut budget = Budget::unlimited();
        match pssn_solve(&inst, 1e-8, 0.3, &PssnConfig::default(), Some(&[0.0]), &mut budget) {
            PssnOutcome::Converged(r) => assert_eq!(r.stats.newton_steps, 0),
            PssnOutcome::Exhausted(_) => panic!("did not converge"),
        }
    }
}
