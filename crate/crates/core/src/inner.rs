//! The inner objective of one proximal step.
//!
//! For a base pair `(x̄, λ̄)` and `σ > 0` the inner problem is
//!
//! ```text
//! min_x F(x) = f(x) + ‖x − x̄‖²/(2σ) + ι(x_{<n_b} ≥ 0)
//! f(x)       = cᵀx + ‖Λ(x)‖²/(2σ) − ‖λ̄‖²/(2σ)
//! Λ(x)       = [λ̄ + σ(Ax − b)]₊^{m_I}
//! ```
//!
//! where `[·]₊^{m_I}` clips only the inequality block. `∇f = c + AᵀΛ(x)` is Lipschitz with
//! `L = σ‖A‖²`, and `F` is `1/σ`-strongly convex.

use crate::lp::problem::dot;
use crate::lp::LpProblem;
use crate::sparse::{norm, spectral_norm_estimate, SPECTRAL_ITERS, SPECTRAL_SEED};

const ROUNDOFF_FACTOR: f64 = 2.0;

/// A problem together with the norms every inner instance needs. Computed once per solve.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub problem: LpProblem,
    /// Safety-factored estimate of ‖A‖₂.
    pub norm_est: f64,
    pub frobenius: f64,
    /// `‖a_i‖²` for every column `a_i` of `A`.
    pub col_norms_sq: Vec<f64>,
}

impl Prepared {
    pub fn new(problem: LpProblem) -> Self {
        let a = problem.a();
        let norm_est = spectral_norm_estimate(a, SPECTRAL_ITERS, SPECTRAL_SEED);
        let frobenius = a.frobenius_norm();
        let col_norms_sq = a.col_norms_sq();
        Prepared { problem, norm_est, frobenius, col_norms_sq }
    }
}

/// Everything derived from one evaluation point: two sparse products.
#[derive(Debug, Clone, PartialEq)]
pub struct Eval {
    pub x: Vec<f64>,
    /// `λ̄ + σ(Ax − b)` before clipping.
    pub w: Vec<f64>,
    /// `Λ(x)`.
    pub lambda: Vec<f64>,
    /// `∇f(x)`.
    pub grad: Vec<f64>,
    /// `f(x)`.
    pub f: f64,
}

#[derive(Debug, Clone)]
pub struct InnerInstance<'a> {
    pub data: &'a Prepared,
    pub x_bar: Vec<f64>,
    pub lambda_bar: Vec<f64>,
    pub sigma: f64,
    /// Lipschitz constant of `∇f`.
    pub l: f64,
    lambda_bar_sq: f64,
}

impl<'a> InnerInstance<'a> {
    pub fn new(data: &'a Prepared, x_bar: Vec<f64>, lambda_bar: Vec<f64>, sigma: f64) -> Self {
        let p = &data.problem;
        assert_eq!(x_bar.len(), p.n(), "x̄ length");
        assert_eq!(lambda_bar.len(), p.m(), "λ̄ length");
        assert!(sigma > 0.0 && sigma.is_finite(), "σ must be positive");
        let l = sigma * data.norm_est * data.norm_est;
        let lambda_bar_sq = dot(&lambda_bar, &lambda_bar);
        InnerInstance { data, x_bar, lambda_bar, sigma, l, lambda_bar_sq }
    }

    pub fn problem(&self) -> &LpProblem {
        &self.data.problem
    }

    pub fn n(&self) -> usize {
        self.data.problem.n()
    }

    pub fn n_b(&self) -> usize {
        self.data.problem.n_b()
    }

    /// Strong convexity modulus of `F`.
    pub fn mu(&self) -> f64 {
        1.0 / self.sigma
    }

    /// Coordinate-wise Lipschitz constants `σ‖a_i‖²`.
    pub fn coord_lipschitz(&self) -> Vec<f64> {
        self.data.col_norms_sq.iter().map(|v| self.sigma * v).collect()
    }

    /// `λ̄ + σ(Ax − b)` from a precomputed `Ax`.
    fn pre_clip(&self, ax: &[f64]) -> Vec<f64> {
        let b = self.data.problem.b();
        (0..ax.len()).map(|j| self.lambda_bar[j] + self.sigma * (ax[j] - b[j])).collect()
    }

    fn clip(&self, w: &[f64]) -> Vec<f64> {
        let m_i = self.data.problem.m_ineq();
        w.iter().enumerate().map(|(j, &v)| if j < m_i { v.max(0.0) } else { v }).collect()
    }

    fn f_from(&self, x: &[f64], lambda: &[f64]) -> f64 {
        self.data.problem.objective(x) + (dot(lambda, lambda) - self.lambda_bar_sq) / (2.0 * self.sigma)
    }

    pub fn evaluate(&self, x: &[f64]) -> Eval {
        let p = &self.data.problem;
        let ax = p.a().spmv(x).expect("x length matches problem");
        let w = self.pre_clip(&ax);
        let lambda = self.clip(&w);
        let mut grad = vec![0.0; p.n()];
        p.a().spmv_t_into(&lambda, &mut grad);
        for (g, c) in grad.iter_mut().zip(p.c()) {
            *g += c;
        }
        let f = self.f_from(x, &lambda);
        Eval { x: x.to_vec(), w, lambda, grad, f }
    }

    pub fn lambda_of(&self, x: &[f64]) -> Vec<f64> {
        let ax = self.data.problem.a().spmv(x).expect("x length matches problem");
        self.clip(&self.pre_clip(&ax))
    }

    pub fn f_value(&self, x: &[f64]) -> f64 {
        self.f_from(x, &self.lambda_of(x))
    }

    fn sign_feasible(&self, x: &[f64]) -> bool {
        x[..self.n_b()].iter().all(|&v| v >= 0.0)
    }

    fn prox_term(&self, x: &[f64]) -> f64 {
        let d: f64 = x.iter().zip(&self.x_bar).map(|(a, b)| (a - b) * (a - b)).sum();
        d / (2.0 * self.sigma)
    }

    /// `F(x)`; `+∞` off the sign constraints.
    pub fn big_f_value(&self, x: &[f64]) -> f64 {
        if !self.sign_feasible(x) {
            return f64::INFINITY;
        }
        self.f_value(x) + self.prox_term(x)
    }

    pub fn big_f_of(&self, e: &Eval) -> f64 {
        if !self.sign_feasible(&e.x) {
            return f64::INFINITY;
        }
        e.f + self.prox_term(&e.x)
    }

    pub fn grad_f(&self, x: &[f64]) -> Vec<f64> {
        self.evaluate(x).grad
    }

    /// Gradient of the smooth part `f̃(x) = f(x) + ‖x − x̄‖²/(2σ)`.
    pub fn smooth_grad_of(&self, e: &Eval) -> Vec<f64> {
        e.grad.iter().zip(&e.x).zip(&self.x_bar).map(|((g, x), xb)| g + (x - xb) / self.sigma).collect()
    }

    /// Minimum-norm element of `∂F(x)`.
    pub fn min_norm_subgradient_of(&self, e: &Eval) -> Vec<f64> {
        let n_b = self.n_b();
        let mut g = self.smooth_grad_of(e);
        for i in 0..n_b {
            if e.x[i] == 0.0 {
                g[i] = g[i].min(0.0);
            }
        }
        g
    }

    pub fn subgrad_dist_of(&self, e: &Eval) -> f64 {
        norm(&self.min_norm_subgradient_of(e))
    }

    pub fn subgrad_dist(&self, x: &[f64]) -> f64 {
        self.subgrad_dist_of(&self.evaluate(x))
    }

    /// `‖(x, Λ(x)) − (x̄, λ̄)‖`.
    pub fn displacement_of(&self, e: &Eval) -> f64 {
        let dx: f64 = e.x.iter().zip(&self.x_bar).map(|(a, b)| (a - b) * (a - b)).sum();
        let dl: f64 = e.lambda.iter().zip(&self.lambda_bar).map(|(a, b)| (a - b) * (a - b)).sum();
        (dx + dl).sqrt()
    }

    /// Right-hand side of the stopping test: `min{η, δ‖(x, Λ(x)) − (x̄, λ̄)‖}/σ`.
    pub fn threshold_of(&self, e: &Eval, eta: f64, delta: f64) -> f64 {
        eta.min(delta * self.displacement_of(e)) / self.sigma
    }

    /// Accuracy to which the subgradient distance at `e` can be computed in floating point:
    /// a bound on the rounding error of `∇f(x) + (x − x̄)/σ` from the magnitudes entering it.
    pub fn roundoff_floor_of(&self, e: &Eval) -> f64 {
        let p = &self.data.problem;
        let a = p.a();
        let b = p.b();
        let u: Vec<f64> = (0..p.m())
            .map(|j| {
                let (idx, val) = a.row(j);
                let ax: f64 = idx.iter().zip(val).map(|(&k, v)| (v * e.x[k]).abs()).sum();
                self.lambda_bar[j].abs() + self.sigma * (ax + b[j].abs())
            })
            .collect();
        let s: Vec<f64> = (0..p.n())
            .map(|i| {
                let (idx, val) = a.col(i);
                let atu: f64 = idx.iter().zip(val).map(|(&j, v)| v.abs() * u[j]).sum();
                p.c()[i].abs() + atu + (e.x[i].abs() + self.x_bar[i].abs()) / self.sigma
            })
            .collect();
        ROUNDOFF_FACTOR * f64::EPSILON * norm(&s)
    }

    /// The stopping test, except that a subgradient distance at the rounding level of its
    /// own evaluation is accepted: below that level the test cannot be decided.
    pub fn stopping_check_of(&self, e: &Eval, eta: f64, delta: f64) -> bool {
        let dist = self.subgrad_dist_of(e);
        if dist <= self.threshold_of(e, eta, delta) {
            return true;
        }
        // the floor costs two extra sparse passes; only look when the distance is tiny
        dist <= 1e-6 * (1.0 + norm(self.problem().c())) && dist <= self.roundoff_floor_of(e)
    }

    pub fn stopping_check(&self, x: &[f64], eta: f64, delta: f64) -> bool {
        self.stopping_check_of(&self.evaluate(x), eta, delta)
    }

    /// The proximal gradient operator `G_F` applied at an evaluated point.
    pub fn prox_grad_of(&self, e: &Eval) -> Vec<f64> {
        let ls = self.l * self.sigma;
        let n_b = self.n_b();
        (0..e.x.len())
            .map(|i| {
                let v = (ls * e.x[i] - self.sigma * e.grad[i] + self.x_bar[i]) / (ls + 1.0);
                if i < n_b {
                    v.max(0.0)
                } else {
                    v
                }
            })
            .collect()
    }

    pub fn prox_grad_step(&self, x: &[f64]) -> Vec<f64> {
        self.prox_grad_of(&self.evaluate(x))
    }
}
