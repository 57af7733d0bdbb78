//! Small dense linear algebra: LU with partial pivoting for the Gram
//! systems, a one-norm condition number, and symmetric eigenvalues.

use crate::error::{GfdError, Result};

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(dim: usize, mut f: F) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// `P A = L U` with unit-diagonal `L` packed below the diagonal of `lu`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Fails with [`GfdError::Singular`] on an exactly zero pivot.
    pub fn factor(a: &Matrix) -> Result<Self> {
        let n = a.dim;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let (piv, max) = (col..n)
                .map(|r| (r, lu.get(r, col).abs()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if max == 0.0 || !max.is_finite() {
                return Err(GfdError::Singular(col));
            }
            if piv != col {
                for j in 0..n {
                    lu.data.swap(piv * n + j, col * n + j);
                }
                perm.swap(piv, col);
            }
            let d = lu.get(col, col);
            for r in col + 1..n {
                let factor = lu.get(r, col) / d;
                lu.set(r, col, factor);
                if factor != 0.0 {
                    for j in col + 1..n {
                        let v = lu.get(r, j) - factor * lu.get(col, j);
                        lu.set(r, j, v);
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.dim;
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu.get(i, j) * y[j]).sum();
            y[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu.get(i, j) * y[j]).sum();
            y[i] = (y[i] - s) / self.lu.get(i, i);
        }
        y
    }

    /// `||A^-1||_1`, from the explicit inverse columns. Exact rather than
    /// estimated; the systems here are at most a few hundred rows.
    pub fn inverse_one_norm(&self) -> f64 {
        let n = self.lu.dim;
        let mut e = vec![0.0; n];
        (0..n)
            .map(|j| {
                e.iter_mut().for_each(|v| *v = 0.0);
                e[j] = 1.0;
                self.solve(&e).iter().map(|v| v.abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// One-norm condition number `||A||_1 ||A^-1||_1`.
pub fn condition_one_norm(a: &Matrix, lu: &Lu) -> f64 {
    a.one_norm() * lu.inverse_one_norm()
}

/// Eigenvalues `(min, max)` of the symmetric 2x2 matrix `[[a, b], [b, c]]`.
pub fn sym2_eigenvalues(a: f64, b: f64, c: f64) -> (f64, f64) {
    let mean = 0.5 * (a + c);
    let radius = (0.5 * (a - c)).hypot(b);
    (mean - radius, mean + radius)
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &Matrix) -> Vec<f64> {
    let m = nalgebra::DMatrix::from_row_slice(a.dim, a.dim, &a.data);
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
