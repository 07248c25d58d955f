//! Small dense kernels over [`Ring`] values, shared by the exact and float paths.

use crate::scalar::{Ring, Scalar};

/// Determinant by fraction-free (Bareiss) elimination with largest-magnitude
/// pivoting. Every division is exact when `T` is an integer type.
pub fn det<T: Ring>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    if n == 0 {
        return T::one();
    }
    debug_assert!(a.iter().all(|row| row.len() == n));
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        let mut pivot = k;
        for r in k + 1..n {
            if a[r][k].abs() > a[pivot][k].abs() {
                pivot = r;
            }
        }
        if a[pivot][k].is_zero() {
            return T::zero();
        }
        if pivot != k {
            a.swap(pivot, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Rank of a symmetric matrix if it is positive semidefinite, `None` otherwise.
///
/// Symmetric elimination with largest-diagonal pivoting (pivoted Cholesky).
/// Values within `tol * scale` of zero are treated as zero in float mode, where
/// `scale` is the largest initial diagonal entry; exact mode ignores `tol`.
pub fn psd_rank<T: Scalar>(mut a: Vec<Vec<T>>, tol: f64) -> Option<usize> {
    let n = a.len();
    let scale = a.iter().enumerate().map(|(i, row)| row[i].to_f64().abs()).fold(0.0f64, f64::max).max(1.0);
    let eps = tol * scale;
    let mut active: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    while !active.is_empty() {
        let mut best: Option<usize> = None;
        for (pos, &i) in active.iter().enumerate() {
            let d = &a[i][i];
            if d.is_negative() && !d.is_negligible(eps) {
                return None;
            }
            if best.is_none_or(|b| *d > a[active[b]][active[b]]) {
                best = Some(pos);
            }
        }
        let pos = best.expect("active set is non-empty");
        let p = active[pos];
        let pivot = a[p][p].clone();
        if pivot.is_negligible(eps) {
            // Remaining diagonal is zero; a PSD matrix must then vanish entirely.
            let all_zero = active.iter().all(|&i| active.iter().all(|&j| a[i][j].is_negligible(eps)));
            return all_zero.then_some(rank);
        }
        active.swap_remove(pos);
        for &i in &active {
            for &j in &active {
                let v = a[i][j].clone() - a[i][p].clone() * a[p][j].clone() / pivot.clone();
                a[i][j] = v;
            }
        }
        rank += 1;
    }
    Some(rank)
}

pub(crate) fn identity<T: Ring>(m: usize) -> Vec<Vec<T>> {
    (0..m).map(|i| (0..m).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

pub(crate) fn mat_vec<T: Ring>(a: &[Vec<T>], x: &[T]) -> Vec<T> {
    a.iter().map(|row| row.iter().zip(x).fold(T::zero(), |acc, (r, v)| acc + r.clone() * v.clone())).collect()
}

pub(crate) fn transpose_mul<T: Ring>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    let m = a.len();
    (0..m)
        .map(|i| (0..m).map(|j| (0..m).fold(T::zero(), |acc, k| acc + a[k][i].clone() * a[k][j].clone())).collect())
        .collect()
}
