//! Small dense linear algebra for the oracles.

pub const PIVOT_TOL: f64 = 1e-10;

/// Solves `M y = r` by Gaussian elimination with partial pivoting. `m` is row-major `n×n`.
/// Returns `None` if a pivot falls below [`PIVOT_TOL`] relative to the largest entry.
pub fn solve(m: &[f64], r: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut a = m.to_vec();
    let mut y = r.to_vec();
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1.0);
    for k in 0..n {
        let (p, pv) = (k..n).map(|i| (i, a[i * n + k].abs())).fold((k, -1.0), |b, c| if c.1 > b.1 { c } else { b });
        if pv <= PIVOT_TOL * scale {
            return None;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            y.swap(k, p);
        }
        let d = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / d;
            if f != 0.0 {
                for j in k..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
                y[i] -= f * y[k];
            }
        }
    }
    for k in (0..n).rev() {
        let mut s = y[k];
        for j in k + 1..n {
            s -= a[k * n + j] * y[j];
        }
        y[k] = s / a[k * n + k];
    }
    Some(y)
}

/// Visits every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // rightmost position that can still advance
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
