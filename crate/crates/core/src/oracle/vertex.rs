use super::dense::{for_each_subset, solve};
use crate::error::{Error, Result};
use crate::lp::{residual_e1, LpProblem, PrimalDualPoint};

pub const MAX_N: usize = 10;
pub const MAX_M: usize = 14;

const FEAS_TOL: f64 = 1e-9;

/// Ground truth for a tiny LP.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub x: Vec<f64>,
    pub lambda: Vec<f64>,
    pub objective: f64,
    /// Distinct optimal vertices.
    pub vertices: Vec<Vec<f64>>,
    /// Distinct dual solutions read off optimal bases.
    pub duals: Vec<Vec<f64>>,
}

impl OracleSolution {
    pub fn point(&self) -> PrimalDualPoint {
        PrimalDualPoint::new(self.x.clone(), self.lambda.clone())
    }

    /// One optimal vertex and one optimal dual.
    pub fn is_unique(&self) -> bool {
        self.vertices.len() == 1 && self.duals.len() == 1
    }
}

fn push_distinct(list: &mut Vec<Vec<f64>>, v: Vec<f64>, tol: f64) {
    if !list.iter().any(|u| u.iter().zip(&v).all(|(a, b)| (a - b).abs() <= tol)) {
        list.push(v);
    }
}

/// Enumerates basic solutions: every equality row plus `n − m_E` rows chosen among the
/// inequality rows and the sign constraints `−x_i ≤ 0`.
///
/// The primal optimum is the best feasible basic solution. Duals come from solving
/// `R_Bᵀy = −c` on optimal bases and keeping the dual-feasible ones; the returned pair is
/// checked to have `E₁ ≤ 1e-9`.
pub fn vertex_enum_solve(p: &LpProblem) -> Result<OracleSolution> {
    let (n, m_i, m_e, n_b) = (p.n(), p.m_ineq(), p.m_eq(), p.n_b());
    if n > MAX_N || p.m() > MAX_M {
        return Err(Error::Oracle(format!("problem {}x{n} exceeds the enumeration cap {MAX_M}x{MAX_N}", p.m())));
    }
    if m_e > n {
        return Err(Error::Oracle("more equality rows than variables".into()));
    }
    let dense = p.a().to_dense();
    let b = p.b();
    // candidate rows: inequality rows then sign rows
    let mut cand: Vec<(Vec<f64>, f64)> = (0..m_i).map(|j| (dense[j].clone(), b[j])).collect();
    for i in 0..n_b {
        let mut r = vec![0.0; n];
        r[i] = -1.0;
        cand.push((r, 0.0));
    }
    let scale = 1.0 + b.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let tol = FEAS_TOL * scale;

    let mut feasible: Vec<(Vec<f64>, Vec<usize>)> = Vec::new();
    let k = n - m_e;
    for_each_subset(cand.len(), k, |subset| {
        let mut mat = Vec::with_capacity(n * n);
        let mut rhs = Vec::with_capacity(n);
        for j in 0..m_e {
            mat.extend_from_slice(&dense[m_i + j]);
            rhs.push(b[m_i + j]);
        }
        for &s in subset {
            mat.extend_from_slice(&cand[s].0);
            rhs.push(cand[s].1);
        }
        let Some(x) = solve(&mat, &rhs, n) else {
            return;
        };
        let ax = p.a().spmv(&x).expect("x has length n");
        let ok = (0..m_i).all(|j| ax[j] <= b[j] + tol)
            && (0..m_e).all(|j| (ax[m_i + j] - b[m_i + j]).abs() <= tol)
            && x[..n_b].iter().all(|&v| v >= -tol);
        if ok {
            feasible.push((x, subset.to_vec()));
        }
    });
    if feasible.is_empty() {
        return Err(Error::Oracle("no feasible basic solution (infeasible or no vertex)".into()));
    }

    let objective = feasible.iter().map(|(x, _)| p.objective(x)).fold(f64::INFINITY, f64::min);
    let cut = objective + FEAS_TOL * (1.0 + objective.abs());
    let mut vertices = Vec::new();
    let mut duals = Vec::new();
    for (x, subset) in feasible.iter().filter(|(x, _)| p.objective(x) <= cut) {
        push_distinct(&mut vertices, x.clone(), 1e-9);
        // transpose of the basis matrix
        let mut mt = vec![0.0; n * n];
        let rows: Vec<&[f64]> =
            (0..m_e).map(|j| dense[m_i + j].as_slice()).chain(subset.iter().map(|&s| cand[s].0.as_slice())).collect();
        for (r, row) in rows.iter().enumerate() {
            for c in 0..n {
                mt[c * n + r] = row[c];
            }
        }
        let rhs: Vec<f64> = p.c().iter().map(|v| -v).collect();
        let Some(y) = solve(&mt, &rhs, n) else {
            continue;
        };
        if y[m_e..].iter().any(|&v| v < -FEAS_TOL) {
            continue;
        }
        let mut lambda = vec![0.0; p.m()];
        for j in 0..m_e {
            lambda[m_i + j] = y[j];
        }
        for (pos, &s) in subset.iter().enumerate() {
            if s < m_i {
                lambda[s] = y[m_e + pos].max(0.0);
            }
        }
        push_distinct(&mut duals, lambda, 1e-9);
    }
    if duals.is_empty() {
        return Err(Error::Oracle("no dual-feasible optimal basis (unbounded or no vertex)".into()));
    }

    let mut sol = OracleSolution { x: vertices[0].clone(), lambda: duals[0].clone(), objective, vertices, duals };
    // snap round-off onto the sign constraints before the self-check
    sol.x[..n_b].iter_mut().for_each(|v| *v = v.max(0.0));
    let e1 = residual_e1(p, &sol.point());
    if e1 > 1e-9 {
        return Err(Error::Oracle(format!("self-check failed: E1 = {e1:e}")));
    }
    Ok(sol)
}
