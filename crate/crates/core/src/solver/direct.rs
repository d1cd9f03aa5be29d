//! Direct solvers: dense and banded LU with partial pivoting.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sparse::{CsrMatrix, SparseSystem};

/// Dense row-major LU factorisation `P A = L U`.
#[derive(Clone, Debug)]
pub struct DenseLu<T> {
    n: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Real> DenseLu<T> {
    pub fn factor(a: &[Vec<T>]) -> Result<Self> {
        let n = a.len();
        if a.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: a.iter().map(|r| r.len()).find(|&l| l != n).unwrap_or(n),
            });
        }
        let mut lu: Vec<T> = a.iter().flatten().copied().collect();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if lu[i * n + k].abs() > lu[p * n + k].abs() {
                    p = i;
                }
            }
            if lu[p * n + k] == T::zero() {
                return Err(Error::Singular { column: k });
            }
            if p != k {
                for c in 0..n {
                    lu.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let m = lu[i * n + k] / pivot;
                lu[i * n + k] = m;
                if m != T::zero() {
                    for c in k + 1..n {
                        let v = lu[k * n + c];
                        lu[i * n + c] -= m * v;
                    }
                }
            }
        }
        Ok(DenseLu { n, lu, perm })
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: b.len(),
            });
        }
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for c in 0..i {
                acc -= self.lu[i * n + c] * x[c];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for c in i + 1..n {
                acc -= self.lu[i * n + c] * x[c];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        Ok(x)
    }

    /// `A^{-1}` as rows.
    pub fn inverse(&self) -> Result<Vec<Vec<T>>> {
        let n = self.n;
        let mut inv = vec![vec![T::zero(); n]; n];
        let mut e = vec![T::zero(); n];
        for c in 0..n {
            e[c] = T::one();
            let col = self.solve(&e)?;
            e[c] = T::zero();
            for (r, v) in col.into_iter().enumerate() {
                inv[r][c] = v;
            }
        }
        Ok(inv)
    }
}

/// Solves a banded system by Gaussian elimination with partial pivoting.
/// Row `i` keeps columns `i - kl ..= i + kl + ku`, which holds the fill
/// created by row interchanges.
pub fn solve_banded<T: Real>(a: &CsrMatrix<T>, b: &[T]) -> Result<Vec<T>> {
    let n = a.nrows();
    if b.len() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: b.len(),
        });
    }
    let (kl, ku) = a.bandwidth();
    let w = 2 * kl + ku + 1;
    let mut band = vec![T::zero(); n * w];
    let at = |i: usize, c: usize| i * w + c + kl - i;
    for i in 0..n {
        for (c, v) in a.row(i) {
            band[at(i, c)] = v;
        }
    }
    let mut x = b.to_vec();
    for k in 0..n {
        let last = (k + kl).min(n - 1);
        let right = (k + kl + ku).min(n - 1);
        let mut p = k;
        for i in k + 1..=last {
            if band[at(i, k)].abs() > band[at(p, k)].abs() {
                p = i;
            }
        }
        if band[at(p, k)] == T::zero() {
            return Err(Error::Singular { column: k });
        }
        if p != k {
            for c in k..=right {
                band.swap(at(k, c), at(p, c));
            }
            x.swap(k, p);
        }
        let pivot = band[at(k, k)];
        for i in k + 1..=last {
            let m = band[at(i, k)] / pivot;
            if m == T::zero() {
                continue;
            }
            for c in k + 1..=right {
                let v = band[at(k, c)];
                band[at(i, c)] -= m * v;
            }
            let xk = x[k];
            x[i] -= m * xk;
        }
    }
    for k in (0..n).rev() {
        let right = (k + kl + ku).min(n - 1);
        let mut acc = x[k];
        for c in k + 1..=right {
            acc -= band[at(k, c)] * x[c];
        }
        x[k] = acc / band[at(k, k)];
    }
    Ok(x)
}

/// Largest `n` factored with full dense storage; beyond it the banded
/// elimination (same pivoting rule, band-limited storage) is used.
pub const DENSE_LIMIT: usize = 2048;

/// Direct solve of a sparse system by pivoted LU.
pub fn solve_direct_dense<T: Real>(system: &SparseSystem<T>) -> Result<Vec<T>> {
    if system.n() <= DENSE_LIMIT {
        DenseLu::factor(&system.matrix.to_dense())?.solve(&system.rhs)
    } else {
        solve_banded(&system.matrix, &system.rhs)
    }
}
