use super::dense::{for_each_subset, solve};
use super::vertex::OracleSolution;
use crate::error::{Error, Result};
use crate::inner::InnerInstance;
use crate::lp::PrimalDualPoint;
use crate::solvers::{solve_inner, InnerConfig};

/// Minimizer of `F` on the piece where the inequality rows `active_rows` have nonnegative
/// pre-clip multipliers and the sign-constrained coordinates `zero` vanish.
fn piece_minimizer(inst: &InnerInstance, active_rows: &[bool], zero: &[bool]) -> Option<Vec<f64>> {
    let p = inst.problem();
    let (n, m_i) = (p.n(), p.m_ineq());
    let sigma = inst.sigma;
    let dense = p.a().to_dense();
    let b = p.b();
    let free: Vec<usize> = (0..n).filter(|&i| !zero[i]).collect();
    let k = free.len();
    let rows: Vec<usize> = (0..p.m()).filter(|&j| j >= m_i || active_rows[j]).collect();
    let mut mat = vec![0.0; k * k];
    let mut rhs: Vec<f64> = free.iter().map(|&i| -p.c()[i] + inst.x_bar[i] / sigma).collect();
    for (a, &i) in free.iter().enumerate() {
        mat[a * k + a] += 1.0 / sigma;
        for &r in &rows {
            let ari = dense[r][i];
            if ari == 0.0 {
                continue;
            }
            rhs[a] -= ari * (inst.lambda_bar[r] - sigma * b[r]);
            for (c, &j) in free.iter().enumerate() {
                mat[a * k + c] += sigma * ari * dense[r][j];
            }
        }
    }
    let xv = if k == 0 { Vec::new() } else { solve(&mat, &rhs, k)? };
    let mut x = vec![0.0; n];
    for (a, &i) in free.iter().enumerate() {
        x[i] = xv[a];
    }
    x[..p.n_b()].iter_mut().for_each(|v| *v = v.max(0.0));
    Some(x)
}

/// The exact minimizer of `F`, found by solving the linear system of the piece indicated
/// by an accurate approximate solve, or by enumerating every piece if that fails.
pub fn exact_inner_minimizer(inst: &InnerInstance) -> Result<Vec<f64>> {
    let p = inst.problem();
    let (m_i, n_b) = (p.m_ineq(), p.n_b());
    if m_i + n_b > 20 {
        return Err(Error::Oracle("too many pieces to enumerate".into()));
    }
    let guess = solve_inner(inst, 1e-12, 1e-6, &InnerConfig::default(), 0)
        .map(|r| r.eval)
        .unwrap_or_else(|e| e.best().eval.clone());
    let rows: Vec<bool> = (0..m_i).map(|j| guess.w[j] > 0.0).collect();
    let zero: Vec<bool> = (0..p.n()).map(|i| i < n_b && guess.x[i] == 0.0).collect();
    if let Some(x) = piece_minimizer(inst, &rows, &zero) {
        if inst.subgrad_dist(&x) <= 1e-11 {
            return Ok(x);
        }
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0u32..(1u32 << (m_i + n_b)) {
        let rows: Vec<bool> = (0..m_i).map(|j| mask >> j & 1 == 1).collect();
        let zero: Vec<bool> = (0..p.n()).map(|i| i < n_b && mask >> (m_i + i) & 1 == 1).collect();
        if let Some(x) = piece_minimizer(inst, &rows, &zero) {
            let d = inst.subgrad_dist(&x);
            if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                best = Some((d, x));
            }
        }
    }
    match best {
        Some((d, x)) if d <= 1e-9 => Ok(x),
        Some((d, _)) => Err(Error::Oracle(format!("no piece reached stationarity (best {d:e})"))),
        None => Err(Error::Oracle("every piece was singular".into())),
    }
}

/// `J(x̄, λ̄) = (x⋆, Λ(x⋆))` for the instance's base point.
pub fn exact_resolvent(inst: &InnerInstance) -> Result<PrimalDualPoint> {
    let x = exact_inner_minimizer(inst)?;
    let lambda = inst.lambda_of(&x);
    Ok(PrimalDualPoint::new(x, lambda))
}

/// Euclidean distance from `q` to the convex hull of `points`, by projecting onto the
/// affine hull of every subset and keeping projections with nonnegative weights.
pub fn hull_distance(points: &[Vec<f64>], q: &[f64]) -> Result<f64> {
    let dist = |u: &[f64]| u.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    match points.len() {
        0 => return Err(Error::Oracle("empty point set".into())),
        1 => return Ok(dist(&points[0])),
        k if k > 12 => return Err(Error::Oracle("too many vertices for hull projection".into())),
        _ => {}
    }
    let mut best = f64::INFINITY;
    for size in 1..=points.len() {
        for_each_subset(points.len(), size, |s| {
            let v0 = &points[s[0]];
            let d: Vec<Vec<f64>> =
                s[1..].iter().map(|&i| points[i].iter().zip(v0).map(|(a, b)| a - b).collect()).collect();
            let k = d.len();
            let mut g = vec![0.0; k * k];
            let mut r = vec![0.0; k];
            for a in 0..k {
                for c in 0..k {
                    g[a * k + c] = d[a].iter().zip(&d[c]).map(|(x, y)| x * y).sum();
                }
                r[a] = d[a].iter().zip(q).zip(v0).map(|((x, qq), v)| x * (qq - v)).sum();
            }
            let beta = if k == 0 {
                Vec::new()
            } else if let Some(b) = solve(&g, &r, k) {
                b
            } else {
                return;
            };
            let w0 = 1.0 - beta.iter().sum::<f64>();
            if w0 < -1e-12 || beta.iter().any(|&b| b < -1e-12) {
                return;
            }
            let proj: Vec<f64> = (0..q.len()).map(|i| v0[i] + (0..k).map(|a| beta[a] * d[a][i]).sum::<f64>()).collect();
            best = best.min(dist(&proj));
        });
    }
    Ok(best)
}

/// Distance from `z` to the optimal set described by the oracle's optimal vertices and
/// optimal-basis duals (the product of the two convex hulls).
pub fn dist_to_optimal_face(sol: &OracleSolution, z: &PrimalDualPoint) -> Result<f64> {
    let dx = hull_distance(&sol.vertices, &z.x)?;
    let dl = hull_distance(&sol.duals, &z.lambda)?;
    Ok((dx * dx + dl * dl).sqrt())
}
