//! Immutable sparse matrices stored in both compressed-column and compressed-row order.
//!
//! The row view serves `A x`, the column view serves `Aᵀ y` and per-column access for
//! coordinate methods. Both views are built once and never mutated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Safety factor applied on top of the power-iteration estimate of `‖A‖₂`.
pub const SPECTRAL_SAFETY: f64 = 1.02;

/// Default number of power iterations for [`spectral_norm_estimate`].
pub const SPECTRAL_ITERS: usize = 50;

/// Default seed for the power-iteration start vector.
pub const SPECTRAL_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    // compressed columns
    col_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    col_val: Vec<f64>,
    // compressed rows
    row_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    row_val: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from `(row, col, value)` triplets.
    ///
    /// Duplicate coordinates are summed; entries that end up exactly zero are dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        for &(i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::IndexOutOfBounds { row: i, col: j, rows, cols });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite("matrix entry"));
            }
        }
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        sorted.sort_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));

        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(sorted.len());
        for (i, j, v) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        merged.retain(|t| t.2 != 0.0);

        let mut col_ptr = vec![0usize; cols + 1];
        for &(_, j, _) in &merged {
            col_ptr[j + 1] += 1;
        }
        for j in 0..cols {
            col_ptr[j + 1] += col_ptr[j];
        }
        let col_idx = merged.iter().map(|t| t.0).collect();
        let col_val = merged.iter().map(|t| t.2).collect();

        let mut by_row = merged;
        by_row.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; rows + 1];
        for &(i, _, _) in &by_row {
            row_ptr[i + 1] += 1;
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        let row_idx = by_row.iter().map(|t| t.1).collect();
        let row_val = by_row.iter().map(|t| t.2).collect();

        Ok(SparseMatrix { rows, cols, col_ptr, col_idx, col_val, row_ptr, row_idx, row_val })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix::from_triplets(rows, cols, &[]).expect("empty triplet list is valid")
    }

    pub fn identity(n: usize) -> Self {
        let t: Vec<_> = (0..n).map(|i| (i, i, 1.0)).collect();
        SparseMatrix::from_triplets(n, n, &t).expect("identity triplets are valid")
    }

    /// Builds from a dense row-major slice, skipping zeros.
    pub fn from_dense(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { what: "dense data", expected: rows * cols, found: data.len() });
        }
        let mut t = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                let v = data[i * cols + j];
                if v != 0.0 {
                    t.push((i, j, v));
                }
            }
        }
        SparseMatrix::from_triplets(rows, cols, &t)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.col_val.len()
    }

    /// Triplets in column-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for j in 0..self.cols {
            for k in self.col_ptr[j]..self.col_ptr[j + 1] {
                out.push((self.col_idx[k], j, self.col_val[k]));
            }
        }
        out
    }

    /// Row indices and values of column `j`.
    pub fn col(&self, j: usize) -> (&[usize], &[f64]) {
        let r = self.col_ptr[j]..self.col_ptr[j + 1];
        (&self.col_idx[r.clone()], &self.col_val[r])
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.row_idx[r.clone()], &self.row_val[r])
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v;
        }
        d
    }

    /// `A x`.
    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("spmv input", self.cols, x.len())?;
        let mut y = vec![0.0; self.rows];
        self.spmv_into(x, &mut y);
        Ok(y)
    }

    /// `Aᵀ y`.
    pub fn spmv_t(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len("spmv_t input", self.rows, y.len())?;
        let mut x = vec![0.0; self.cols];
        self.spmv_t_into(y, &mut x);
        Ok(x)
    }

    /// `out = A x`; lengths are the caller's responsibility.
    pub fn spmv_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (i, o) in out.iter_mut().enumerate() {
            let (idx, val) = self.row(i);
            *o = idx.iter().zip(val).fold(0.0, |acc, (&j, &v)| acc + v * x[j]);
        }
    }

    /// `out = Aᵀ y`; lengths are the caller's responsibility.
    pub fn spmv_t_into(&self, y: &[f64], out: &mut [f64]) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        for (j, o) in out.iter_mut().enumerate() {
            let (idx, val) = self.col(j);
            *o = idx.iter().zip(val).fold(0.0, |acc, (&i, &v)| acc + v * y[i]);
        }
    }

    /// `a_jᵀ y` for a single column.
    pub fn col_dot(&self, j: usize, y: &[f64]) -> f64 {
        let (idx, val) = self.col(j);
        idx.iter().zip(val).fold(0.0, |acc, (&i, &v)| acc + v * y[i])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.col_val.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Squared Euclidean norm of every column.
    pub fn col_norms_sq(&self) -> Vec<f64> {
        (0..self.cols).map(|j| self.col(j).1.iter().map(|v| v * v).sum()).collect()
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &SparseMatrix) -> Result<SparseMatrix> {
        check_len("vstack column count", self.cols, below.cols)?;
        let mut t = self.triplets();
        t.extend(below.triplets().into_iter().map(|(i, j, v)| (i + self.rows, j, v)));
        SparseMatrix::from_triplets(self.rows + below.rows, self.cols, &t)
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            col_ptr: self.row_ptr.clone(),
            col_idx: self.row_idx.clone(),
            col_val: self.row_val.clone(),
            row_ptr: self.col_ptr.clone(),
            row_idx: self.col_idx.clone(),
            row_val: self.col_val.clone(),
        }
    }

    pub fn scaled(&self, alpha: f64) -> SparseMatrix {
        let t: Vec<_> = self.triplets().into_iter().map(|(i, j, v)| (i, j, alpha * v)).collect();
        SparseMatrix::from_triplets(self.rows, self.cols, &t).expect("scaling preserves bounds")
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_slice(&self, start: usize, end: usize) -> SparseMatrix {
        let mut t = Vec::new();
        for i in start..end {
            let (idx, val) = self.row(i);
            t.extend(idx.iter().zip(val).map(|(&j, &v)| (i - start, j, v)));
        }
        SparseMatrix::from_triplets(end - start, self.cols, &t).expect("slice stays in bounds")
    }

    /// Columns reordered so that new column `k` is old column `perm[k]`.
    pub fn permute_cols(&self, perm: &[usize]) -> Result<SparseMatrix> {
        check_len("column permutation", self.cols, perm.len())?;
        let mut t = Vec::with_capacity(self.nnz());
        for (k, &j) in perm.iter().enumerate() {
            let (idx, val) = self.col(j);
            t.extend(idx.iter().zip(val).map(|(&i, &v)| (i, k, v)));
        }
        SparseMatrix::from_triplets(self.rows, self.cols, &t)
    }
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { what, expected, found })
    }
}

/// Upper estimate of `‖A‖₂`: power iteration on `AᵀA` from a seeded random start, times
/// [`SPECTRAL_SAFETY`]. Returns 0 for a matrix without stored entries.
pub fn spectral_norm_estimate(a: &SparseMatrix, iters: usize, seed: u64) -> f64 {
    if a.nnz() == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..a.cols()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut av = vec![0.0; a.rows()];
    let mut w = vec![0.0; a.cols()];
    let mut estimate = 0.0;
    normalize(&mut v);
    for _ in 0..iters.max(1) {
        a.spmv_into(&v, &mut av);
        estimate = norm(&av);
        a.spmv_t_into(&av, &mut w);
        let nw = norm(&w);
        if nw == 0.0 {
            // start vector landed in the null space; restart on a fresh direction
            v.iter_mut().for_each(|x| *x = rng.gen_range(-1.0..1.0));
            normalize(&mut v);
            continue;
        }
        v.iter_mut().zip(&w).for_each(|(x, y)| *x = y / nw);
    }
    a.spmv_into(&v, &mut av);
    estimate = f64::max(estimate, norm(&av));
    estimate * SPECTRAL_SAFETY
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) {
    let n = norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_matrix(rows: usize, cols: usize, density: f64, seed: u64) -> SparseMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen::<f64>() < density {
                    t.push((i, j, rng.gen_range(-3.0..3.0)));
                }
            }
        }
        SparseMatrix::from_triplets(rows, cols, &t).unwrap()
    }

    fn dense_mv(d: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        d.iter().map(|row| row.iter().zip(x).fold(0.0, |acc, (a, b)| acc + a * b)).collect()
    }

    #[test]
    fn scalar_and_identity_products() {
        let a = SparseMatrix::from_dense(1, 1, &[2.0]).unwrap();
        assert_eq!(a.spmv(&[3.0]).unwrap(), vec![6.0]);
        let id = SparseMatrix::identity(3);
        assert_eq!(id.spmv(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(id.spmv_t(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = SparseMatrix::identity(3);
        assert!(matches!(a.spmv(&[1.0]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.spmv_t(&[1.0, 2.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn products_match_dense_reference_bitwise() {
        for seed in 0..100 {
            let a = random_matrix(5, 4, 0.5, seed);
            let d = a.to_dense();
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 1000);
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
            assert_eq!(a.spmv(&x).unwrap(), dense_mv(&d, &x), "seed {seed}");
            let dt: Vec<Vec<f64>> = (0..4).map(|j| (0..5).map(|i| d[i][j]).collect()).collect();
            assert_eq!(a.spmv_t(&y).unwrap(), dense_mv(&dt, &y), "seed {seed}");
        }
        // the spelled-out instance
        let a = random_matrix(5, 4, 0.5, 7);
        let x = [1.0, -2.0, 0.5, 3.0];
        assert_eq!(a.spmv(&x).unwrap(), dense_mv(&a.to_dense(), &x));
    }

    #[test]
    fn duplicates_are_summed_and_zeros_dropped() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 0, -1.0), (1, 1, 2.0), (1, 1, 1.0)]).unwrap();
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.triplets(), vec![(1, 1, 3.0)]);
    }

    #[test]
    fn out_of_bounds_triplet_rejected() {
        assert!(SparseMatrix::from_triplets(2, 2, &[(2, 0, 1.0)]).is_err());
        assert!(SparseMatrix::from_triplets(2, 2, &[(0, 0, f64::NAN)]).is_err());
    }

    #[test]
    fn spectral_estimate_small_cases() {
        let a = SparseMatrix::from_dense(1, 1, &[3.0]).unwrap();
        assert!((spectral_norm_estimate(&a, 50, 1) - 3.06).abs() < 1e-12);
        let d = SparseMatrix::from_dense(2, 2, &[1.0, 0.0, 0.0, 5.0]).unwrap();
        assert!((spectral_norm_estimate(&d, 20, 3) - 5.0 * 1.02).abs() < 1e-6);
        assert_eq!(spectral_norm_estimate(&SparseMatrix::zeros(3, 2), 50, 0), 0.0);
    }

    #[test]
    fn spectral_estimate_brackets_svd() {
        for seed in [1u64, 2, 3] {
            let a = random_matrix(20, 30, 1.0, seed);
            let d = a.to_dense();
            let m = nalgebra::DMatrix::from_fn(20, 30, |i, j| d[i][j]);
            let smax = m.singular_values().max();
            let est = spectral_norm_estimate(&a, SPECTRAL_ITERS, seed);
            assert!(est >= 0.99 * smax && est <= 1.05 * smax, "seed {seed}: {est} vs {smax}");
        }
    }

    #[test]
    fn views_agree() {
        let a = random_matrix(7, 9, 0.4, 11);
        let mut from_rows = Vec::new();
        for i in 0..a.rows() {
            let (idx, val) = a.row(i);
            assert!(idx.windows(2).all(|w| w[0] < w[1]));
            from_rows.extend(idx.iter().zip(val).map(|(&j, &v)| (i, j, v)));
        }
        for j in 0..a.cols() {
            assert!(a.col(j).0.windows(2).all(|w| w[0] < w[1]));
        }
        from_rows.sort_by(|x, y| (x.1, x.0).cmp(&(y.1, y.0)));
        assert_eq!(from_rows, a.triplets());
        assert_eq!(a.transpose().transpose(), a);
    }
}
