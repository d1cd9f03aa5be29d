//! Compressed-row matrices and linear systems.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Rows below this size are multiplied sequentially.
const PARALLEL_ROWS: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<T>,
}

impl<T: Real> CsrMatrix<T> {
    /// Validates that columns are in range and strictly increasing per row.
    pub fn new(nrows: usize, ncols: usize, row_ptr: Vec<usize>, cols: Vec<usize>, vals: Vec<T>) -> Result<Self> {
        if row_ptr.len() != nrows + 1 || row_ptr[0] != 0 || *row_ptr.last().unwrap() != cols.len() {
            return Err(Error::Assembly("row pointer array is inconsistent".into()));
        }
        if cols.len() != vals.len() {
            return Err(Error::DimensionMismatch {
                expected: cols.len(),
                actual: vals.len(),
            });
        }
        for r in 0..nrows {
            let row = &cols[row_ptr[r]..row_ptr[r + 1]];
            if row.windows(2).any(|w| w[0] >= w[1]) || row.iter().any(|&c| c >= ncols) {
                return Err(Error::Assembly(format!("row {r}: columns unsorted or out of range")));
            }
        }
        Ok(CsrMatrix {
            nrows,
            ncols,
            row_ptr,
            cols,
            vals,
        })
    }

    /// Builds from per-row `(column, value)` lists; duplicates are summed.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<(usize, T)>>) -> Result<Self> {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            let start = cols.len();
            for (c, v) in row {
                if cols.len() > start && *cols.last().unwrap() == c {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self::new(row_ptr.len() - 1, ncols, row_ptr, cols, vals)
    }

    pub fn from_dense(a: &[Vec<T>]) -> Result<Self> {
        let ncols = a.first().map_or(0, |r| r.len());
        let rows = a
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != T::zero())
                    .map(|(c, v)| (c, *v))
                    .collect()
            })
            .collect();
        Self::from_rows(ncols, rows)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.cols
    }

    pub fn values(&self) -> &[T] {
        &self.vals
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[span.clone()].binary_search(&c) {
            Ok(k) => self.vals[span.start + k],
            Err(_) => T::zero(),
        }
    }

    fn row_dot(&self, r: usize, x: &[T]) -> T {
        let mut acc = T::zero();
        for k in self.row_ptr[r]..self.row_ptr[r + 1] {
            acc += self.vals[k] * x[self.cols[k]];
        }
        acc
    }

    /// `y = A x`. Each entry is a fixed-order sum, so the result does not
    /// depend on how rows are distributed over threads.
    pub fn matvec_into(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        if self.nrows >= PARALLEL_ROWS {
            y.par_iter_mut().enumerate().for_each(|(r, out)| *out = self.row_dot(r, x));
        } else {
            for (r, out) in y.iter_mut().enumerate() {
                *out = self.row_dot(r, x);
            }
        }
    }

    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                actual: x.len(),
            });
        }
        let mut y = vec![T::zero(); self.nrows];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut a = vec![vec![T::zero(); self.ncols]; self.nrows];
        for (r, row) in a.iter_mut().enumerate() {
            for (c, v) in self.row(r) {
                row[c] = v;
            }
        }
        a
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.nrows).map(|r| self.get(r, r)).collect()
    }

    /// Lower and upper bandwidth.
    pub fn bandwidth(&self) -> (usize, usize) {
        let mut kl = 0;
        let mut ku = 0;
        for r in 0..self.nrows {
            for (c, _) in self.row(r) {
                if c < r {
                    kl = kl.max(r - c);
                } else {
                    ku = ku.max(c - r);
                }
            }
        }
        (kl, ku)
    }

    /// Matrix Market coordinate format, 1-based, row-major entry order.
    /// Values use the shortest decimal that reads back to the same float.
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "{} {} {}", self.nrows, self.ncols, self.nnz())?;
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                writeln!(w, "{} {} {}", r + 1, c + 1, v.as_f64())?;
            }
        }
        Ok(())
    }
}

/// `A U = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSystem<T> {
    pub matrix: CsrMatrix<T>,
    pub rhs: Vec<T>,
}

impl<T: Real> SparseSystem<T> {
    pub fn new(matrix: CsrMatrix<T>, rhs: Vec<T>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        if rhs.len() != matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                actual: rhs.len(),
            });
        }
        Ok(SparseSystem { matrix, rhs })
    }

    pub fn n(&self) -> usize {
        self.rhs.len()
    }
}

/// `rhs - A u`.
pub fn residual<T: Real>(system: &SparseSystem<T>, u: &[T]) -> Result<Vec<T>> {
    let au = system.matrix.matvec(u)?;
    Ok(system.rhs.iter().zip(&au).map(|(&b, &a)| b - a).collect())
}

/// Euclidean norm with a sequential left-to-right sum.
pub fn norm2<T: Real>(v: &[T]) -> T {
    let mut acc = T::zero();
    for &x in v {
        acc += x * x;
    }
    acc.sqrt()
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn residual_norm<T: Real>(system: &SparseSystem<T>, u: &[T]) -> Result<T> {
    Ok(norm2(&residual(system, u)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CsrMatrix<f64> {
        CsrMatrix::from_dense(&[vec![2.0, -1.0, 0.0], vec![-1.0, 2.0, -1.0], vec![0.0, -1.0, 2.0]]).unwrap()
    }

    #[test]
    fn construction_and_access() {
        let a = small();
        assert_eq!(a.nnz(), 7);
        assert_eq!(a.get(1, 2), -1.0);
        assert_eq!(a.get(0, 2), 0.0);
        assert_eq!(a.bandwidth(), (1, 1));
        assert_eq!(a.matvec(&[1.0, 1.0, 1.0]).unwrap(), vec![1.0, 0.0, 1.0]);
        assert!(matches!(a.matvec(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn duplicates_are_summed_and_unsorted_rejected() {
        let a = CsrMatrix::from_rows(2, vec![vec![(1, 1.0), (0, 2.0), (1, 3.0)], vec![]]).unwrap();
        assert_eq!(a.get(0, 1), 4.0);
        assert_eq!(a.col_indices(), &[0, 1]);
        assert!(CsrMatrix::<f64>::new(1, 2, vec![0, 2], vec![1, 0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn residuals() {
        let sys = SparseSystem::new(small(), vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(residual_norm(&sys, &[1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(residual_norm(&sys, &[0.0; 3]).unwrap(), 2f64.sqrt());
    }

    #[test]
    fn matrix_market_output() {
        let mut out = Vec::new();
        small().write_matrix_market(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[1], "3 3 7");
        assert_eq!(lines[2], "1 1 2");
        assert_eq!(lines[3], "1 2 -1");
        assert_eq!(lines.len(), 9);
    }
}
