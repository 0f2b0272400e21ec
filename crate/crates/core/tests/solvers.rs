use agppa::inner::{InnerInstance, Prepared};
use agppa::lp::LpProblem;
use agppa::oracle::{exact_inner_minimizer, gen_random_sparse_lp, gen_tiny_mixed};
use agppa::solvers::{
    algorithm2_solve, hessian_vec, hood_apg, hood_rcd, hybrid_solve, pssn_solve, Alg2Config, Budget, BudgetRule,
    InnerConfig, PssnConfig, PssnOutcome,
};
use agppa::SparseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn one_dim() -> Prepared {
    let a = SparseMatrix::from_dense(1, 1, &[-1.0]).unwrap();
    Prepared::new(LpProblem::inequality(vec![1.0], a, vec![-1.0], 0).unwrap())
}

/// Golden-section minimum of a convex scalar function on `[lo, hi]`.
fn scalar_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let (a, b) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    f((lo + hi) / 2.0)
}

#[test]
fn apg_decrease_on_the_one_dim_problem() {
    let d = one_dim();
    let inst = InnerInstance::new(&d, vec![-0.5], vec![0.3], 2.0);
    let f_star = scalar_min(|x| inst.big_f_value(&[x]), -50.0, 50.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..50 {
        let y = [20.0 * rng.gen::<f64>() - 10.0];
        let gap = inst.big_f_value(&y) - f_star;
        let after = inst.big_f_value(&hood_apg(&inst, &y)) - f_star;
        assert!(after <= (-1f64).exp() * gap + 1e-12, "{after} vs {gap}");
    }
}

#[test]
fn rcd_mean_decrease_on_twenty_variables() {
    let p = gen_random_sparse_lp(30, 20, 0.3, 9).unwrap();
    let d = Prepared::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x_bar: Vec<f64> = (0..20).map(|_| rng.gen::<f64>() - 0.5).collect();
    let lambda_bar: Vec<f64> = (0..30).map(|_| rng.gen::<f64>()).collect();
    let inst = InnerInstance::new(&d, x_bar, lambda_bar, 0.05);
    // reference value from a long accelerated run
    let mut x = vec![0.0; 20];
    for _ in 0..400 {
        x = hood_apg(&inst, &x);
    }
    let f_star = inst.big_f_value(&x);
    let y: Vec<f64> = (0..20).map(|_| 4.0 * rng.gen::<f64>() - 2.0).collect();
    let gap = inst.big_f_value(&y) - f_star;
    let mean = (0..200).map(|s| (inst.big_f_value(&hood_rcd(&inst, &y, s)) - f_star) / gap).sum::<f64>() / 200.0;
    assert!(mean <= 1.05 * (-1f64).exp(), "{mean}");
}

#[test]
fn newton_converges_fast_on_a_quadratic_piece() {
    // only equality rows: the multiplier map is affine and f̃ is quadratic
    let a = SparseMatrix::from_dense(2, 3, &[1.0, 2.0, 0.0, 0.0, -1.0, 3.0]).unwrap();
    let p = LpProblem::new(vec![1.0, -1.0, 0.5], SparseMatrix::zeros(0, 3), vec![], a, vec![1.0, 2.0], 0).unwrap();
    let d = Prepared::new(p);
    let inst = InnerInstance::new(&d, vec![0.3, 0.1, -0.2], vec![0.5, -0.5], 1.5);
    let mut budget = Budget::unlimited();
    let PssnOutcome::Converged(r) = pssn_solve(&inst, 1e-13, 1e-12, &PssnConfig::default(), None, &mut budget) else {
        panic!("budget is unlimited");
    };
    assert!(r.stats.newton_steps <= 3, "{:?}", r.stats);
    assert!(inst.subgrad_dist(r.x()) <= 1e-10);
}

#[test]
fn easy_instance_never_falls_back() {
    let d = one_dim();
    let inst = InnerInstance::new(&d, vec![0.0], vec![0.0], 1.0);
    let r = hybrid_solve(&inst, 1e-8, 0.37, &InnerConfig::default(), 0).unwrap();
    assert_eq!(r.stats.budget_fallbacks, 0);
    assert_eq!(r.stats.hood_calls, 0);
}

#[test]
fn zero_budget_is_plain_algorithm_two() {
    let cfg = InnerConfig { budget: BudgetRule { c_j: 0.0 }, ..Default::default() };
    for seed in 0..10 {
        let d = Prepared::new(gen_tiny_mixed(seed));
        let p = &d.problem;
        let inst = InnerInstance::new(&d, vec![0.5; p.n()], vec![0.5; p.m()], 3.0);
        let a = hybrid_solve(&inst, 1e-6, 0.37, &cfg, seed).unwrap();
        let b = algorithm2_solve(&inst, 1e-6, 0.37, &Alg2Config::default(), None, seed).unwrap();
        assert_eq!(a.eval, b.eval);
    }
}

#[test]
fn both_solvers_meet_the_same_criterion() {
    for seed in 0..20 {
        let d = Prepared::new(gen_tiny_mixed(seed));
        let p = &d.problem;
        let inst = InnerInstance::new(&d, vec![1.0; p.n()], vec![0.0; p.m()], 0.7);
        let x_star = exact_inner_minimizer(&inst).unwrap();
        for r in [
            hybrid_solve(&inst, 1e-4, 0.37, &InnerConfig::default(), seed).unwrap(),
            algorithm2_solve(&inst, 1e-4, 0.37, &Alg2Config::default(), None, seed).unwrap(),
        ] {
            assert!(inst.stopping_check(r.x(), 1e-4, 0.37));
            // and F never ends above its value at the first proximal gradient point
            assert!(inst.big_f_value(r.x()) <= inst.big_f_value(&inst.prox_grad_step(&inst.x_bar)) + 1e-12);
            assert!(inst.big_f_value(r.x()) >= inst.big_f_value(&x_star) - 1e-9);
        }
    }
}

#[test]
fn generalized_hessian_is_positive_definite() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for seed in 0..20 {
        let d = Prepared::new(gen_tiny_mixed(seed));
        let p = &d.problem;
        let sigma = 10f64.powf(2.0 * rng.gen::<f64>() - 1.0);
        let inst = InnerInstance::new(&d, vec![0.0; p.n()], vec![0.0; p.m()], sigma);
        let x: Vec<f64> = (0..p.n()).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let e = inst.evaluate(&x);
        let active = vec![true; p.n()];
        let v: Vec<f64> = (0..p.n()).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let hv = hessian_vec(&inst, &e.w, &active, &v);
        let vhv: f64 = v.iter().zip(&hv).map(|(a, b)| a * b).sum();
        let vv: f64 = v.iter().map(|a| a * a).sum();
        assert!(vhv >= vv / sigma * (1.0 - 1e-12));
    }
}
