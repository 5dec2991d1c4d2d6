//! Compressed sparse row matrices assembled from coordinate triplets.
//!
//! Assembly goes through a triplet stage whose entries are summed in a fixed
//! (row, col, insertion) order, so matrices are bit-identical regardless of
//! whether the element loop ran in parallel or serially.

use nalgebra::DMatrix;

use crate::error::{FemError, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Coordinate-format staging buffer for sparse assembly.
#[derive(Debug, Clone, Default)]
pub struct Triplets {
    nrows: usize,
    ncols: usize,
    entries: Vec<(u32, u32, f64)>,
}

impl Triplets {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.nrows && col < self.ncols);
        self.entries.push((row as u32, col as u32, value));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Deduplicate into CSR. Duplicates are summed in insertion order within
    /// each (row, col) slot (stable sort), giving reproducible round-off.
    pub fn to_csr(&self) -> CsrMatrix {
        let mut entries = self.entries.clone();
        entries.sort_by_key(|&(r, c, _)| (r, c));

        let mut row_ptr = vec![0usize; self.nrows + 1];
        let mut cols = Vec::new();
        let mut vals: Vec<f64> = Vec::new();
        let mut last: Option<(u32, u32)> = None;
        for &(r, c, v) in &entries {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r as usize + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..self.nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr,
            cols,
            vals,
        }
    }
}

/// Sparse matrix in compressed row storage.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            cols: (0..n as u32).collect(),
            vals: vec![1.0; n],
        }
    }

    pub fn row(&self, i: usize) -> (&[u32], &[f64]) {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        (&self.cols[lo..hi], &self.vals[lo..hi])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&(j as u32)) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        let (cols, vals) = self.row(i);
        let mut acc = 0.0;
        for (c, v) in cols.iter().zip(vals) {
            acc += v * x[*c as usize];
        }
        acc
    }

    /// y = A x. Rows are independent, so the parallel version is bit-identical
    /// to the serial one.
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        #[cfg(feature = "parallel")]
        {
            y.par_iter_mut()
                .enumerate()
                .for_each(|(i, yi)| *yi = self.row_dot(i, x));
        }
        #[cfg(not(feature = "parallel"))]
        {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = self.row_dot(i, x);
            }
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// Serial product, kept for benchmarking against the parallel path.
    pub fn mul_vec_serial(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows).map(|i| self.row_dot(i, x)).collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.nrows).map(|i| self.get(i, i)).collect()
    }

    /// self + scale * other, on the union of both sparsity patterns.
    pub fn add_scaled(&self, other: &CsrMatrix, scale: f64) -> CsrMatrix {
        assert_eq!(self.nrows, other.nrows);
        assert_eq!(self.ncols, other.ncols);
        let mut row_ptr = vec![0usize; self.nrows + 1];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for i in 0..self.nrows {
            let (ca, va) = self.row(i);
            let (cb, vb) = other.row(i);
            let (mut p, mut q) = (0, 0);
            while p < ca.len() || q < cb.len() {
                let next = match (ca.get(p), cb.get(q)) {
                    (Some(&a), Some(&b)) if a == b => {
                        let e = (a, va[p] + scale * vb[q]);
                        p += 1;
                        q += 1;
                        e
                    }
                    (Some(&a), Some(&b)) if a < b => {
                        let e = (a, va[p]);
                        p += 1;
                        e
                    }
                    (Some(_), Some(&b)) => {
                        let e = (b, scale * vb[q]);
                        q += 1;
                        e
                    }
                    (Some(&a), None) => {
                        let e = (a, va[p]);
                        p += 1;
                        e
                    }
                    (None, Some(&b)) => {
                        let e = (b, scale * vb[q]);
                        q += 1;
                        e
                    }
                    (None, None) => unreachable!(),
                };
                cols.push(next.0);
                vals.push(next.1);
            }
            row_ptr[i + 1] = cols.len();
        }
        CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                m[(i, *c as usize)] = *v;
            }
        }
        m
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter()
                .zip(vals)
                .map(move |(c, v)| (i, *c as usize, *v))
        })
    }

    /// Column indices of each row, for sparsity-pattern comparisons.
    pub fn pattern(&self) -> Vec<Vec<u32>> {
        (0..self.nrows).map(|i| self.row(i).0.to_vec()).collect()
    }

    /// Max |A_ij - A_ji| over stored entries.
    pub fn symmetry_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, j, v) in self.iter() {
            worst = worst.max((v - self.get(j, i)).abs());
        }
        worst
    }

    /// Text export, one `row col value` line per entry, row-major order.
    pub fn write_triplets<W: std::io::Write>(&self, w: &mut W) -> Result<()> {
        for (i, j, v) in self.iter() {
            writeln!(w, "{} {} {:.17e}", i, j, v).map_err(FemError::Io)?;
        }
        Ok(())
    }
}

/// Euclidean dot product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_deduplicate_in_order() {
        let mut t = Triplets::new(2, 2);
        t.push(0, 0, 1.0);
        t.push(1, 1, 2.0);
        t.push(0, 0, 3.0);
        t.push(0, 1, -1.0);
        let a = t.to_csr();
        assert_eq!(a.nnz(), 3);
        assert_eq!(a.get(0, 0), 4.0);
        assert_eq!(a.get(0, 1), -1.0);
        assert_eq!(a.get(1, 1), 2.0);
        assert_eq!(a.get(1, 0), 0.0);
    }

    #[test]
    fn matvec_matches_dense() {
        let mut t = Triplets::new(3, 3);
        t.push(0, 0, 2.0);
        t.push(0, 2, 1.0);
        t.push(1, 1, -1.0);
        t.push(2, 0, 0.5);
        t.push(2, 2, 3.0);
        let a = t.to_csr();
        let x = vec![1.0, 2.0, 3.0];
        let y = a.mul_vec(&x);
        assert_eq!(y, vec![5.0, -2.0, 9.5]);
        assert_eq!(y, a.mul_vec_serial(&x));
    }

    #[test]
    fn add_scaled_unions_patterns() {
        let mut ta = Triplets::new(2, 2);
        ta.push(0, 0, 1.0);
        ta.push(1, 0, 2.0);
        let mut tb = Triplets::new(2, 2);
        tb.push(0, 1, 1.0);
        tb.push(1, 0, 1.0);
        let c = ta.to_csr().add_scaled(&tb.to_csr(), 0.5);
        assert_eq!(c.get(0, 0), 1.0);
        assert_eq!(c.get(0, 1), 0.5);
        assert_eq!(c.get(1, 0), 2.5);
        assert_eq!(c.nnz(), 3);
    }
}
