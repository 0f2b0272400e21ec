//! Problem generators. Every generator is deterministic in its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::lp::LpProblem;
use crate::sparse::SparseMatrix;

fn check_density(density: f64) -> Result<()> {
    if density > 0.0 && density <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "density", reason: format!("{density} not in (0, 1]") })
    }
}

/// Random sparsity pattern with at least one entry per row; `value` draws the entries.
fn pattern(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    density: f64,
    mut value: impl FnMut(&mut ChaCha8Rng) -> f64,
) -> Vec<(usize, usize, f64)> {
    let mut t = Vec::new();
    for i in 0..m {
        loop {
            let row: Vec<(usize, usize, f64)> = (0..n)
                .filter_map(|j| (rng.gen::<f64>() < density).then(|| (i, j, value(rng))))
                .filter(|e| e.2 != 0.0)
                .collect();
            if !row.is_empty() {
                t.extend(row);
                break;
            }
        }
    }
    t
}

/// A random sparse LP together with the points that certify it.
#[derive(Debug, Clone, PartialEq)]
pub struct Certified {
    pub problem: LpProblem,
    /// Strictly feasible: `Ax₀ < b`.
    pub x0: Vec<f64>,
    /// Dual feasible: `λ₀ ≥ 0` and `Aᵀλ₀ + c = 0`, so `cᵀx ≥ −bᵀλ₀` on the feasible set.
    pub lambda0: Vec<f64>,
}

/// `min cᵀx s.t. Ax ≤ b` with free `x`. The entries of `A` are `100(U − 0.5)` on a random
/// pattern; `b = Ax₀ + s` with standard normal `x₀` and `s ∈ [0.1, 1.1]`, and
/// `c = −Aᵀλ₀` with a sparse nonnegative `λ₀`, so the problem is feasible and bounded.
pub fn gen_random_sparse_lp(m: usize, n: usize, density: f64, seed: u64) -> Result<LpProblem> {
    gen_random_sparse_certified(m, n, density, seed).map(|c| c.problem)
}

pub fn gen_random_sparse_certified(m: usize, n: usize, density: f64, seed: u64) -> Result<Certified> {
    check_density(density)?;
    if n == 0 {
        return Err(Error::InvalidParameter { name: "n", reason: "must be positive".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = pattern(&mut rng, m, n, density, |r| 100.0 * (r.gen::<f64>() - 0.5));
    let a = SparseMatrix::from_triplets(m, n, &t)?;
    let x0: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let mut b = a.spmv(&x0)?;
    for v in b.iter_mut() {
        *v += 0.1 + rng.gen::<f64>();
    }
    let lambda0: Vec<f64> = (0..m).map(|_| if rng.gen::<f64>() < 0.5 { rng.gen::<f64>() } else { 0.0 }).collect();
    let c: Vec<f64> = a.spmv_t(&lambda0)?.iter().map(|v| -v).collect();
    Ok(Certified { problem: LpProblem::inequality(c, a, b, 0)?, x0, lambda0 })
}

/// Covering LP `min cᵀx s.t. Ax ≥ e, x ≥ 0` encoded as `−Ax ≤ −e`. `A` is a rounded
/// uniform matrix on a random pattern (0/1 entries, every row nonempty), `c ∈ (0, 1]`.
pub fn gen_covering_lp(m: usize, n: usize, density: f64, seed: u64) -> Result<LpProblem> {
    check_density(density)?;
    if n == 0 {
        return Err(Error::InvalidParameter { name: "n", reason: "must be positive".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t: Vec<(usize, usize, f64)> = pattern(&mut rng, m, n, density, |r| r.gen::<f64>().round())
        .into_iter()
        .map(|(i, j, _)| (i, j, -1.0))
        .collect();
    let a = SparseMatrix::from_triplets(m, n, &t)?;
    let c: Vec<f64> = (0..n).map(|_| 1.0 - rng.gen::<f64>()).collect();
    LpProblem::inequality(c, a, vec![-1.0; m], n)
}

/// Mean-centers each sample and scales it to unit norm (zero rows are left as is).
pub fn normalize_samples(samples: &mut [Vec<f64>]) {
    for s in samples.iter_mut() {
        if s.is_empty() {
            continue;
        }
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        s.iter_mut().for_each(|v| *v -= mean);
        let norm = s.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            s.iter_mut().for_each(|v| *v /= norm);
        }
    }
}

/// L1-regularized multi-class SVM as an LP.
///
/// Labels are `1..=k` with `k` the largest label. Variables, all nonnegative, are ordered
/// `[w₁⁺, v₁, …, w_k⁺, v_k, ξ]` with `w_j = w_j⁺ − v_j`. For every sample `i` and class
/// `j ≠ yᵢ` the margin constraint `(w_{yᵢ} − w_j)ᵀxᵢ ≥ 1 − ξᵢ` becomes a `≤` row, giving
/// `m_I = (k−1)p_n` and `n_b = 2k·p_d + p_n`.
pub fn l1svm_to_lp(samples: &[Vec<f64>], labels: &[usize], penalty: f64) -> Result<LpProblem> {
    if samples.len() != labels.len() {
        return Err(Error::DimensionMismatch { what: "labels", expected: samples.len(), found: labels.len() });
    }
    if !(penalty > 0.0) {
        return Err(Error::InvalidParameter { name: "penalty", reason: "must be positive".into() });
    }
    if labels.iter().any(|&l| l == 0) {
        return Err(Error::InvalidParameter { name: "labels", reason: "labels start at 1".into() });
    }
    let k = labels.iter().copied().max().unwrap_or(0);
    if k < 2 {
        return Err(Error::InvalidParameter { name: "labels", reason: format!("need at least 2 classes, found {k}") });
    }
    let p_n = samples.len();
    let p_d = samples.first().map_or(0, |s| s.len());
    if samples.iter().any(|s| s.len() != p_d) {
        return Err(Error::Problem("samples have different lengths".into()));
    }
    let n = 2 * k * p_d + p_n;
    let wp = |j: usize, f: usize| 2 * j * p_d + f;
    let vn = |j: usize, f: usize| 2 * j * p_d + p_d + f;
    let xi = |i: usize| 2 * k * p_d + i;
    let mut c = vec![penalty; 2 * k * p_d];
    c.extend(std::iter::repeat(1.0).take(p_n));
    let mut t = Vec::new();
    let mut row = 0;
    for (i, (x, &y)) in samples.iter().zip(labels).enumerate() {
        let y = y - 1;
        for j in (0..k).filter(|&j| j != y) {
            // −(w_y − w_j)ᵀx − ξᵢ ≤ −1
            for (f, &v) in x.iter().enumerate() {
                t.push((row, wp(y, f), -v));
                t.push((row, vn(y, f), v));
                t.push((row, wp(j, f), v));
                t.push((row, vn(j, f), -v));
            }
            t.push((row, xi(i), -1.0));
            row += 1;
        }
    }
    let a = SparseMatrix::from_triplets(row, n, &t)?;
    LpProblem::inequality(c, a, vec![-1.0; row], n)
}

/// Tiny LP with a mix of free and sign-constrained variables and of inequality and
/// equality rows (`n ≤ 6`, `m ≤ 8`).
///
/// Feasibility comes from a point `x₀` with slack on every inequality; boundedness from
/// `c = −Aᵀλ₀ + r` with `λ₀_I ≥ 0` and reduced costs `r ≥ 0` on the signed block.
pub fn gen_tiny_mixed(seed: u64) -> LpProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=6usize);
    let n_b = rng.gen_range(0..=n);
    let m_e = rng.gen_range(0..=(n - 1).min(2));
    let min_ineq = (n + 1).saturating_sub(n_b + m_e).max(1);
    let m_i = rng.gen_range(min_ineq.min(8 - m_e)..=(8 - m_e));
    let entry = |rng: &mut ChaCha8Rng| -> f64 {
        if rng.gen::<f64>() < 0.75 {
            (rng.gen::<f64>() * 8.0 - 4.0).round() / 2.0
        } else {
            0.0
        }
    };
    let mut dense = vec![0.0; (m_i + m_e) * n];
    for v in dense.iter_mut() {
        *v = entry(&mut rng);
    }
    let x0: Vec<f64> =
        (0..n).map(|i| if i < n_b { rng.gen::<f64>() * 2.0 } else { rng.gen::<f64>() * 4.0 - 2.0 }).collect();
    let ai = SparseMatrix::from_dense(m_i, n, &dense[..m_i * n]).expect("finite entries");
    let ae = SparseMatrix::from_dense(m_e, n, &dense[m_i * n..]).expect("finite entries");
    let mut b_i = ai.spmv(&x0).expect("sizes match");
    for v in b_i.iter_mut() {
        *v += 0.5 + rng.gen::<f64>();
    }
    let b_e = ae.spmv(&x0).expect("sizes match");
    let mut lambda0: Vec<f64> = (0..m_i).map(|_| rng.gen::<f64>() * 2.0).collect();
    lambda0.extend((0..m_e).map(|_| rng.gen::<f64>() * 2.0 - 1.0));
    let a = ai.vstack(&ae).expect("same width");
    let aty = a.spmv_t(&lambda0).expect("sizes match");
    let c: Vec<f64> = (0..n).map(|i| -aty[i] + if i < n_b { rng.gen::<f64>() } else { 0.0 }).collect();
    LpProblem::new(c, ai, b_i, ae, b_e, n_b).expect("consistent sizes")
}
