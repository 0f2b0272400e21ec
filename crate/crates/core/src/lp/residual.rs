//! KKT residual functions measuring how far a primal-dual pair is from optimality.
//!
//! All three share the same building blocks: the duality gap `cᵀx + bᵀλ`, the primal
//! violation `[Ax − b]₊^{m_I}` (positive part on the inequality rows, raw residual on the
//! equality rows) and the dual violation `[Aᵀλ + c]₋^{n_b}` (negative part on the
//! sign-constrained coordinates, raw value on the free ones).

use serde::{Deserialize, Serialize};

use super::problem::{LpProblem, PrimalDualPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ResidualKind {
    E1,
    #[default]
    E2,
    E3,
}

impl ResidualKind {
    pub fn eval(self, p: &LpProblem, z: &PrimalDualPoint) -> f64 {
        match self {
            ResidualKind::E1 => residual_e1(p, z),
            ResidualKind::E2 => residual_e2(p, z),
            ResidualKind::E3 => residual_e3(p, z),
        }
    }
}

impl std::str::FromStr for ResidualKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "e1" => Ok(ResidualKind::E1),
            "e2" => Ok(ResidualKind::E2),
            "e3" => Ok(ResidualKind::E3),
            other => Err(format!("unknown residual kind {other:?} (expected e1, e2 or e3)")),
        }
    }
}

/// The pieces every residual is assembled from.
#[derive(Debug, Clone, PartialEq)]
pub struct KktParts {
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub primal_violation: Vec<f64>,
    pub dual_violation: Vec<f64>,
}

impl KktParts {
    pub fn compute(p: &LpProblem, z: &PrimalDualPoint) -> KktParts {
        let ax = p.a().spmv(&z.x).expect("x length matches problem");
        let aty = p.a().spmv_t(&z.lambda).expect("lambda length matches problem");
        let primal_violation = ax
            .iter()
            .zip(p.b())
            .enumerate()
            .map(|(i, (v, b))| if i < p.m_ineq() { (v - b).max(0.0) } else { v - b })
            .collect();
        let dual_violation = aty
            .iter()
            .zip(p.c())
            .enumerate()
            .map(|(i, (v, c))| if i < p.n_b() { (v + c).min(0.0) } else { v + c })
            .collect();
        KktParts {
            primal_obj: p.objective(&z.x),
            dual_obj: p.dual_objective(&z.lambda),
            primal_violation,
            dual_violation,
        }
    }

    pub fn gap(&self) -> f64 {
        self.primal_obj + self.dual_obj
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

/// Euclidean norm of the stacked gap, dual violation and primal violation.
pub fn residual_e1(p: &LpProblem, z: &PrimalDualPoint) -> f64 {
    let k = KktParts::compute(p, z);
    let s = k.gap().powi(2)
        + k.dual_violation.iter().map(|v| v * v).sum::<f64>()
        + k.primal_violation.iter().map(|v| v * v).sum::<f64>();
    s.sqrt()
}

/// Normalized KKT residual: the largest of the relative gap, the primal violation over
/// `1 + ‖b‖` and the dual violation over `1 + ‖c‖`.
pub fn residual_e2(p: &LpProblem, z: &PrimalDualPoint) -> f64 {
    let k = KktParts::compute(p, z);
    let gap = k.gap().abs() / (1.0 + k.primal_obj.abs() + k.dual_obj.abs());
    let primal = norm2(&k.primal_violation) / (1.0 + norm2(p.b()));
    let dual = norm2(&k.dual_violation) / (1.0 + norm2(p.c()));
    gap.max(primal).max(dual)
}

/// Gap relative to `max(1, |cᵀx|)` together with the ∞-norm violations.
pub fn residual_e3(p: &LpProblem, z: &PrimalDualPoint) -> f64 {
    let k = KktParts::compute(p, z);
    let gap = k.gap().abs() / k.primal_obj.abs().max(1.0);
    gap.max(norm_inf(&k.primal_violation)).max(norm_inf(&k.dual_violation))
}
