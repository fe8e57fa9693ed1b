//! Compressed-row storage for fast matrix-vector products during integration.
//!
//! Hamiltonians are assembled densely in [`crate::hilbert`] and converted here
//! once per run; only exact zeros are dropped.

use nalgebra::DMatrix;

use crate::hilbert::LinOp;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "square matrices only");
        let dim = m.nrows();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for i in 0..dim {
            for j in 0..dim {
                let v = m[(i, j)];
                if v.re != 0.0 || v.im != 0.0 {
                    cols.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            values,
        }
    }

    pub fn from_op(op: &LinOp) -> Self {
        Self::from_dense(op.matrix())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `out += factor · A x`.
    pub fn mul_add(&self, factor: C64, x: &[C64], out: &mut [C64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.cols[k]];
            }
            *o += factor * acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_dense_product() {
        let m = DMatrix::from_fn(5, 5, |i, j| {
            if (i + 2 * j) % 3 == 0 {
                C64::new(i as f64 - j as f64, 0.5 * j as f64)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let csr = CsrMatrix::from_dense(&m);
        assert!(csr.nnz() < 25);
        let x: Vec<C64> = (0..5).map(|k| C64::new(k as f64, -1.0)).collect();
        let mut out = vec![C64::new(1.0, 0.0); 5];
        csr.mul_add(C64::new(0.0, 2.0), &x, &mut out);
        let dense = &m * nalgebra::DVector::from_vec(x.clone());
        for i in 0..5 {
            let expected = C64::new(1.0, 0.0) + C64::new(0.0, 2.0) * dense[i];
            assert!((out[i] - expected).norm() < 1e-12);
        }
    }
}
