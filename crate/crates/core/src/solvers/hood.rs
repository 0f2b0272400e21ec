use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::inner::InnerInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum HoodKind {
    #[default]
    Apg,
    Rcd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoodConfig {
    pub kind: HoodKind,
    /// Multiplier in the fixed call length (APG iterations or RCD coordinate updates).
    pub length_factor: f64,
    pub seed: u64,
}

impl Default for HoodConfig {
    fn default() -> Self {
        HoodConfig { kind: HoodKind::Apg, length_factor: 3.0, seed: 0 }
    }
}

/// `⌈k·σ‖A‖⌉ + 2`, where `σ‖A‖ ≈ √(Lσ)` is the square-root condition number of `F`.
pub fn apg_iterations(inst: &InnerInstance, factor: f64) -> usize {
    (factor * inst.sigma * inst.data.norm_est).ceil() as usize + 2
}

/// `⌈k·n·√(1 + σ²·maxᵢ‖aᵢ‖²)⌉` coordinate updates.
pub fn rcd_epoch_length(inst: &InnerInstance, factor: f64) -> usize {
    let max_sq = inst.data.col_norms_sq.iter().fold(0.0f64, |m, &v| m.max(v));
    let n = inst.n() as f64;
    ((factor * n * (1.0 + inst.sigma * inst.sigma * max_sq).sqrt()).ceil() as usize).max(1)
}

/// Work of one HOOD call in sparse-product units.
pub fn hood_epoch_units(inst: &InnerInstance, cfg: &HoodConfig) -> f64 {
    match cfg.kind {
        HoodKind::Apg => 2.0 * apg_iterations(inst, cfg.length_factor) as f64 + 2.0,
        HoodKind::Rcd => {
            let n = inst.n().max(1) as f64;
            2.0 * rcd_epoch_length(inst, cfg.length_factor) as f64 / n + 3.0
        }
    }
}

/// One HOOD call as configured. Returns the new point and the work spent.
pub fn hood_call(inst: &InnerInstance, y: &[f64], cfg: &HoodConfig, seed: u64) -> (Vec<f64>, f64) {
    match cfg.kind {
        HoodKind::Apg => apg(inst, y, cfg.length_factor),
        HoodKind::Rcd => rcd(inst, y, seed, cfg.length_factor),
    }
}

/// Accelerated proximal gradient with constant momentum `(√κ − 1)/(√κ + 1)`, `κ = Lσ + 1`,
/// run for a fixed number of steps. The start point is returned if it is better.
pub fn hood_apg(inst: &InnerInstance, y: &[f64]) -> Vec<f64> {
    apg(inst, y, HoodConfig::default().length_factor).0
}

fn apg(inst: &InnerInstance, y: &[f64], factor: f64) -> (Vec<f64>, f64) {
    let k = apg_iterations(inst, factor);
    let sk = (inst.l * inst.sigma + 1.0).sqrt();
    let beta = (sk - 1.0) / (sk + 1.0);
    let mut x_prev = y.to_vec();
    let mut yk = y.to_vec();
    for _ in 0..k {
        let x = inst.prox_grad_of(&inst.evaluate(&yk));
        for i in 0..x.len() {
            yk[i] = x[i] + beta * (x[i] - x_prev[i]);
        }
        x_prev = x;
    }
    let work = 2.0 * k as f64 + 2.0;
    if inst.big_f_value(&x_prev) <= inst.big_f_value(y) {
        (x_prev, work)
    } else {
        (y.to_vec(), work)
    }
}

/// One epoch of accelerated randomized coordinate descent (APPROX with serial uniform
/// sampling) in its `θ²u + z` form, with coordinate constants `σ‖aᵢ‖²` and the separable
/// proximal term handled exactly. The start point is returned if it is better.
pub fn hood_rcd(inst: &InnerInstance, y: &[f64], seed: u64) -> Vec<f64> {
    rcd(inst, y, seed, HoodConfig::default().length_factor).0
}

fn rcd(inst: &InnerInstance, y: &[f64], seed: u64, factor: f64) -> (Vec<f64>, f64) {
    let p = inst.problem();
    let n = p.n();
    if n == 0 {
        return (y.to_vec(), 0.0);
    }
    let a = p.a();
    let b = p.b();
    let c = p.c();
    let m_i = p.m_ineq();
    let n_b = p.n_b();
    let sigma = inst.sigma;
    let nf = n as f64;
    let v: Vec<f64> = inst.coord_lipschitz();
    let epoch = rcd_epoch_length(inst, factor);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = y.to_vec();
    let mut u = vec![0.0; n];
    let mut az = a.spmv(y).expect("y length matches problem");
    let mut au = vec![0.0; p.m()];
    let mut theta = 1.0 / nf;
    let mut theta_last = theta;
    let mut flops = 0usize;

    for _ in 0..epoch {
        let i = rng.gen_range(0..n);
        let t2 = theta * theta;
        let (rows, vals) = a.col(i);
        let mut g = c[i];
        for (&r, &arv) in rows.iter().zip(vals) {
            let w = inst.lambda_bar[r] + sigma * (t2 * au[r] + az[r] - b[r]);
            let lam = if r < m_i { w.max(0.0) } else { w };
            g += arv * lam;
        }
        let coef = nf * theta * v[i];
        let mut s = (coef * z[i] - g + inst.x_bar[i] / sigma) / (coef + 1.0 / sigma);
        if i < n_b {
            s = s.max(0.0);
        }
        let t = s - z[i];
        if t != 0.0 {
            z[i] = s;
            let du = -(1.0 - nf * theta) / t2 * t;
            u[i] += du;
            for (&r, &arv) in rows.iter().zip(vals) {
                az[r] += t * arv;
                au[r] += du * arv;
            }
        }
        flops += 2 * rows.len() + 1;
        theta_last = theta;
        theta = ((t2 * t2 + 4.0 * t2).sqrt() - t2) / 2.0;
    }

    let t2 = theta_last * theta_last;
    let mut out: Vec<f64> = (0..n).map(|i| t2 * u[i] + z[i]).collect();
    // the output is a convex combination of feasible points; remove round-off below zero
    out[..n_b].iter_mut().for_each(|v| *v = v.max(0.0));
    let work = flops as f64 / a.nnz().max(1) as f64 + 3.0;
    if inst.big_f_value(&out) <= inst.big_f_value(y) {
        (out, work)
    } else {
        (y.to_vec(), work)
    }
}
