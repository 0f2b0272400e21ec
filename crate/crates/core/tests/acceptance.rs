//! Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use agppa::inner::{InnerInstance, Prepared};
use agppa::lp::{apply_form, choose_form, dualize, residual_e2, LpProblem, PrimalDualPoint, ResidualKind};
use agppa::oracle::{
    dist_to_optimal_face, exact_inner_minimizer, exact_resolvent, gen_covering_lp, gen_tiny_mixed, vertex_enum_solve,
    OracleSolution,
};
use agppa::outer::{agppa_run, derive_constants, igppa_step, rho_of, solve_alpha, AgppaParams, Schedule, Status};
use agppa::solvers::{
    algorithm2_solve, hessian_vec, hood_apg, hood_rcd, hybrid_solve, Alg2Config, InnerConfig, InnerSolverKind,
};

fn report(id: u32, ok: bool, detail: String) {
    println!("{} criterion {id}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id}: {detail}");
}

/// The first `count` tiny instances the oracle can solve, by increasing seed.
fn tiny_corpus(count: usize) -> Vec<(u64, LpProblem, OracleSolution)> {
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() < count {
        let p = gen_tiny_mixed(seed);
        if let Ok(sol) = vertex_enum_solve(&p) {
            out.push((seed, p, sol));
        }
        seed += 1;
    }
    out
}

#[test]
fn c01_oracle_equivalence() {
    let clock = Instant::now();
    let params = AgppaParams { epsilon: 1e-7, residual_kind: ResidualKind::E1, ..Default::default() };
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for (seed, p, sol) in tiny_corpus(50) {
        let r = agppa_run(&p, &params, &InnerConfig::default(), None, seed).unwrap();
        let err = (r.objective - sol.objective).abs() / (1.0 + sol.objective.abs());
        worst = worst.max(err);
        if r.status != Status::Solved || err > 1e-5 {
            bad.push((seed, r.status, err));
        }
    }
    let secs = clock.elapsed().as_secs_f64();
    report(
        1,
        bad.is_empty() && secs < 60.0,
        format!("50 instances, worst relative objective error {worst:.2e}, {secs:.1} s, failures {bad:?}"),
    );
}

#[test]
fn c02_schedule_exactness() {
    let params = AgppaParams::default();
    let derived = derive_constants(&params, 3.7).unwrap();
    let sched = Schedule::new(&params, &derived);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut mismatches = 0;
    for _ in 0..10_000 {
        let s: usize = rng.gen_range(0..60);
        let t: usize = rng.gen_range(0..100_000);
        let sigma = derived.sigma0 * params.rho_sigma.powi(s as i32);
        let eta = params.eta0 * params.rho_eta.powi(s as i32) * (1.0 + t as f64).powf(-params.varsigma);
        if sched.sigma(s).to_bits() != sigma.to_bits() || sched.eta(s, t).to_bits() != eta.to_bits() {
            mismatches += 1;
        }
    }
    report(2, mismatches == 0, format!("10000 sampled (s, t), {mismatches} differ in any bit"));
}

#[test]
fn c03_constant_derivation() {
    let params = AgppaParams::default();
    let d = derive_constants(&params, 1.0).unwrap();
    let rate = rho_of(d.alpha, d.delta, params.gamma).unwrap();
    let alpha_closed = solve_alpha(std::f64::consts::FRAC_1_SQRT_2, 0.0, 1.0).unwrap();
    // 0.370588 is 0.9·0.7/1.7 rounded to six digits
    let ok = (d.delta - 0.63 / 1.7).abs() <= 1e-9
        && (d.delta - 0.370588).abs() <= 5e-7
        && (rate - 0.7).abs() <= 1e-10
        && (alpha_closed - 1.0).abs() <= 1e-10;
    report(
        3,
        ok,
        format!(
            "delta {:.9}, rho_of(alpha = {:.9}) = {rate:.12}, closed-form alpha {alpha_closed:.12}",
            d.delta, d.alpha
        ),
    );
}

/// Random inner instance on a tiny problem, with its exact optimal value.
fn random_inner(data: &Prepared, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>, f64) {
    let p = &data.problem;
    let x_bar: Vec<f64> = (0..p.n()).map(|_| 4.0 * rng.gen::<f64>() - 2.0).collect();
    let lambda_bar: Vec<f64> = (0..p.m())
        .map(|j| if j < p.m_ineq() { 2.0 * rng.gen::<f64>() } else { 4.0 * rng.gen::<f64>() - 2.0 })
        .collect();
    let sigma = 10f64.powf(2.0 * rng.gen::<f64>() - 1.0);
    (x_bar, lambda_bar, sigma)
}

fn random_start(n: usize, n_b: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|i| if i < n_b { 3.0 * rng.gen::<f64>() } else { 6.0 * rng.gen::<f64>() - 3.0 }).collect()
}

#[test]
fn c04_hood_contract() {
    let e_inv = (-1f64).exp();
    let mut problems: Vec<LpProblem> = tiny_corpus(40).into_iter().map(|(_, p, _)| p).collect();
    problems.extend((0..10).map(|s| gen_covering_lp(8, 12, 0.3, s).unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut apg_worst = 0.0f64;
    let mut rcd_worst_mean = 0.0f64;
    for (k, p) in problems.iter().enumerate() {
        let data = Prepared::new(p.clone());
        let (x_bar, lambda_bar, sigma) = random_inner(&data, &mut rng);
        let inst = InnerInstance::new(&data, x_bar, lambda_bar, sigma);
        let f_star = inst.big_f_value(&exact_inner_minimizer(&inst).unwrap());
        let y = random_start(p.n(), p.n_b(), &mut rng);
        let gap0 = inst.big_f_value(&y) - f_star;
        let factor = |y1: &[f64]| ((inst.big_f_value(y1) - f_star).max(0.0)) / gap0;
        apg_worst = apg_worst.max(factor(&hood_apg(&inst, &y)));
        if k % 5 == 0 {
            let mean = (0..200u64).map(|s| factor(&hood_rcd(&inst, &y, s))).sum::<f64>() / 200.0;
            rcd_worst_mean = rcd_worst_mean.max(mean);
        }
    }
    report(
        4,
        apg_worst <= e_inv && rcd_worst_mean <= 1.05 * e_inv,
        format!("APG worst factor {apg_worst:.4} on 50 instances, RCD worst 200-seed mean {rcd_worst_mean:.4} on 10 instances (bound {e_inv:.4})"),
    );
}

fn pair_dist(a: &PrimalDualPoint, x: &[f64], lambda: &[f64]) -> f64 {
    a.distance(&PrimalDualPoint::new(x.to_vec(), lambda.to_vec()))
}

#[test]
fn c05_stopping_soundness() {
    let delta = derive_constants(&AgppaParams::default(), 1.0).unwrap().delta;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut outputs, mut rechecks_failed, mut worst_excess) = (0, 0, f64::NEG_INFINITY);
    for (seed, p, _) in tiny_corpus(40) {
        let data = Prepared::new(p);
        let (x_bar, lambda_bar, sigma) = random_inner(&data, &mut rng);
        let inst = InnerInstance::new(&data, x_bar, lambda_bar, sigma);
        let j = exact_resolvent(&inst).unwrap();
        for eta in [1e-1, 1e-3, 1e-6] {
            let results = [
                algorithm2_solve(&inst, eta, delta, &Alg2Config::default(), None, seed),
                hybrid_solve(&inst, eta, delta, &InnerConfig::default(), seed),
            ];
            for r in results {
                let r = r.unwrap();
                outputs += 1;
                if !inst.stopping_check(r.x(), eta, delta) {
                    rechecks_failed += 1;
                }
                let lhs = pair_dist(&j, r.x(), &inst.lambda_of(r.x()));
                worst_excess = worst_excess.max(lhs - sigma * inst.subgrad_dist(r.x()));
            }
        }
    }
    report(
        5,
        rechecks_failed == 0 && worst_excess <= 1e-6,
        format!("{outputs} inner outputs, {rechecks_failed} fail the re-check, worst excess of the resolvent bound {worst_excess:.2e}"),
    );
}

#[test]
fn c06_firm_nonexpansiveness() {
    let corpus = tiny_corpus(20);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..100 {
        let data = Prepared::new(corpus[k % corpus.len()].1.clone());
        let (x1, l1, sigma) = random_inner(&data, &mut rng);
        let (x2, l2, _) = random_inner(&data, &mut rng);
        let j1 = exact_resolvent(&InnerInstance::new(&data, x1.clone(), l1.clone(), sigma)).unwrap();
        let j2 = exact_resolvent(&InnerInstance::new(&data, x2.clone(), l2.clone(), sigma)).unwrap();
        let dj: Vec<f64> =
            j1.x.iter().chain(&j1.lambda).zip(j2.x.iter().chain(&j2.lambda)).map(|(a, b)| a - b).collect();
        let dz: Vec<f64> = x1.iter().chain(&l1).zip(x2.iter().chain(&l2)).map(|(a, b)| a - b).collect();
        let lhs: f64 = dj.iter().map(|v| v * v).sum();
        let rhs: f64 = dj.iter().zip(&dz).map(|(a, b)| a * b).sum();
        worst = worst.max(lhs - rhs);
    }
    report(6, worst <= 1e-6, format!("100 pairs, worst ‖ΔJ‖² − ⟨ΔJ, Δz⟩ = {worst:.2e}"));
}

#[test]
fn c07_step_lower_bound() {
    let params = AgppaParams::default();
    let mut worst = f64::NEG_INFINITY;
    let mut steps = 0;
    for (seed, p, sol) in tiny_corpus(10) {
        let data = Prepared::new(p.clone());
        let derived = derive_constants(&params, data.frobenius).unwrap();
        let sched = Schedule::new(&params, &derived);
        let mut z = p.zero_point();
        for t in 0..10 {
            let out = igppa_step(
                &data,
                &z,
                derived.sigma0,
                sched.eta(0, t),
                derived.delta,
                params.gamma,
                &InnerConfig::default(),
                seed,
            )
            .unwrap();
            let lhs = (1.0 - derived.delta) / params.gamma * out.z_next.distance(&z);
            let dist = dist_to_optimal_face(&sol, &z).unwrap();
            worst = worst.max(lhs - dist);
            steps += 1;
            z = out.z_next;
        }
    }
    report(7, worst <= 1e-8, format!("{steps} steps, worst (1−δ)/γ·‖Δz‖ − dist(z, Ω) = {worst:.2e}"));
}

#[test]
fn c08_gradient_and_hessian() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let corpus = tiny_corpus(20);
    let (mut points, mut worst_grad, mut worst_hv) = (0, 0.0f64, 0.0f64);
    while points < 200 {
        let data = Prepared::new(corpus[points % corpus.len()].1.clone());
        let p = &data.problem;
        let (x_bar, lambda_bar, sigma) = random_inner(&data, &mut rng);
        let inst = InnerInstance::new(&data, x_bar, lambda_bar, sigma);
        let x = random_start(p.n(), 0, &mut rng);
        let e = inst.evaluate(&x);
        let h = 1e-5;
        // margin-safe: no kink of the clipped multiplier within the difference stencil
        let row_norm = |j: usize| p.a().row(j).1.iter().map(|v| v.abs()).sum::<f64>();
        if (0..p.m_ineq()).any(|j| e.w[j].abs() <= 10.0 * sigma * h * row_norm(j)) {
            continue;
        }
        points += 1;
        let g = inst.grad_f(&x);
        let mut fd = vec![0.0; p.n()];
        for i in 0..p.n() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            fd[i] = (inst.f_value(&xp) - inst.f_value(&xm)) / (2.0 * h);
        }
        let diff = g.iter().zip(&fd).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let scale = g.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
        worst_grad = worst_grad.max(diff / scale);

        let active: Vec<bool> = (0..p.n()).map(|_| rng.gen::<f64>() < 0.8).collect();
        let v: Vec<f64> = (0..p.n()).map(|_| 2.0 * rng.gen::<f64>() - 1.0).collect();
        let hv = hessian_vec(&inst, &e.w, &active, &v);
        let a = p.a().to_dense();
        for i in 0..p.n() {
            let mut want = 0.0;
            if active[i] {
                for j in 0..p.m() {
                    let d = if j < p.m_ineq() && e.w[j] < 0.0 { 0.0 } else { 1.0 };
                    for k in (0..p.n()).filter(|&k| active[k]) {
                        want += sigma * a[j][i] * d * a[j][k] * v[k];
                    }
                }
                want += v[i] / sigma;
            }
            worst_hv = worst_hv.max((hv[i] - want).abs() / (1.0 + want.abs()));
        }
    }
    report(
        8,
        worst_grad <= 1e-6 && worst_hv <= 1e-10,
        format!(
            "200 points, worst gradient relative error {worst_grad:.2e}, worst Hessian-vector error {worst_hv:.2e}"
        ),
    );
}

/// Violations of the checking condition over at most 100 steps with `σ₀` scaled.
fn violations_with_sigma_scale(p: &LpProblem, seed: u64, scale: f64) -> (usize, Status, usize) {
    let base = AgppaParams::default();
    let frob = p.a().frobenius_norm();
    let sigma0 = derive_constants(&base, frob).unwrap().sigma0 * scale;
    let params = AgppaParams {
        sigma0: Some(sigma0),
        eta0: 1e-10,
        epsilon: 1e-9,
        residual_kind: ResidualKind::E1,
        max_steps: 100,
        ..base
    };
    let r = agppa_run(p, &params, &InnerConfig::default(), None, seed).unwrap();
    (r.violations, r.status, r.steps)
}

#[test]
fn c09_adaptive_behavior() {
    let corpus = tiny_corpus(50);
    let mut fired_large = Vec::new();
    let mut fired_small = 0;
    for (seed, p, _) in &corpus {
        let (v, status, steps) = violations_with_sigma_scale(p, *seed, 1e4);
        if v > 0 {
            fired_large.push((*seed, v, status, steps));
        }
        if violations_with_sigma_scale(p, *seed, 1e-4).0 > 0 {
            fired_small += 1;
        }
    }
    let share = fired_small as f64 / corpus.len() as f64;
    report(
        9,
        fired_large.is_empty() && share >= 0.8,
        format!("sigma0·1e4: fired on {fired_large:?}; sigma0/1e4: fired on {:.0}% of 50 instances", 100.0 * share),
    );
}

/// Wall time (best of `repeats`) and final E₂ on the original problem, solving in the
/// automatically chosen form.
fn covering_run(p: &LpProblem, eps: f64, kind: InnerSolverKind, seed: u64, repeats: usize) -> (f64, f64) {
    let (q, map) = apply_form(p, choose_form(p));
    let params =
        AgppaParams { epsilon: eps, residual_kind: ResidualKind::E2, max_time: Some(300.0), ..Default::default() };
    let cfg = InnerConfig { kind, ..Default::default() };
    let mut best = f64::INFINITY;
    let mut e2 = f64::INFINITY;
    for _ in 0..repeats {
        let clock = Instant::now();
        let r = agppa_run(&q, &params, &cfg, None, seed).unwrap();
        best = best.min(clock.elapsed().as_secs_f64());
        e2 = residual_e2(p, &map.to_original(&r.z));
    }
    (best, e2)
}

#[test]
fn c10_desk_scale_performance() {
    let p = gen_covering_lp(200, 1000, 0.01, 0).unwrap();
    let (t3, e3) = covering_run(&p, 1e-3, InnerSolverKind::Hybrid, 0, 1);
    let (t5, e5) = covering_run(&p, 1e-5, InnerSolverKind::Hybrid, 0, 3);
    let (t5_fo, _) = covering_run(&p, 1e-5, InnerSolverKind::FirstOrderOnly, 0, 3);
    let mut faster = 0;
    for seed in 0..10 {
        let q = gen_covering_lp(200, 1000, 0.01, seed).unwrap();
        let (th, _) = covering_run(&q, 1e-5, InnerSolverKind::Hybrid, seed, 3);
        let (tf, _) = covering_run(&q, 1e-5, InnerSolverKind::FirstOrderOnly, seed, 3);
        if th < tf {
            faster += 1;
        }
    }
    let ok = e3 <= 1e-3 && t3 < 60.0 && e5 <= 1e-5 && t5 < 300.0 && t5 <= 2.0 * t5_fo && faster >= 7;
    report(
        10,
        ok,
        format!(
            "E2 {e3:.1e} in {t3:.3} s, E2 {e5:.1e} in {t5:.3} s (first-order only {t5_fo:.3} s), hybrid faster on {faster}/10"
        ),
    );
}

#[test]
fn c11_dualization() {
    let corpus = tiny_corpus(50);
    let mut worst_gap = 0.0f64;
    let mut worst_res = 0.0f64;
    let eps = 1e-7;
    let params = AgppaParams { epsilon: eps, ..Default::default() };
    for (seed, p, sol) in &corpus {
        let (d, map) = dualize(p);
        let dual_opt = vertex_enum_solve(&d).unwrap().objective;
        worst_gap = worst_gap.max((sol.objective + dual_opt).abs());
        let r = agppa_run(&d, &params, &InnerConfig::default(), None, *seed).unwrap();
        let z = map.to_original(&r.z);
        worst_res = worst_res.max(params.residual_kind.eval(p, &z) / eps);
    }
    report(
        11,
        worst_gap <= 1e-8 && worst_res <= 10.0,
        format!("50 instances, worst |opt(p) + opt(dual)| {worst_gap:.2e}, worst original residual {worst_res:.2} ε"),
    );
}
