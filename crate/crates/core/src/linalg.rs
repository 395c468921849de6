//! Small dense matrices and LU factorization with partial pivoting.
//!
//! Everything here is sized for desk-scale networks (tens of buses, a few
//! hundred LP columns), so storage is a flat row-major `Vec`.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from row slices. Panics if rows are ragged.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// Copy with row `r` and column `c` removed.
    pub fn without(&self, r: Option<usize>, c: Option<usize>) -> Self {
        let keep_rows: Vec<usize> = (0..self.rows).filter(|&i| Some(i) != r).collect();
        let keep_cols: Vec<usize> = (0..self.cols).filter(|&j| Some(j) != c).collect();
        let mut out = Self::zeros(keep_rows.len(), keep_cols.len());
        for (oi, &i) in keep_rows.iter().enumerate() {
            for (oj, &j) in keep_cols.iter().enumerate() {
                out[(oi, oj)] = self[(i, j)];
            }
        }
        out
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Raised when elimination meets a pivot below the singularity threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularMatrix {
    pub column: usize,
}

impl fmt::Display for SingularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "matrix is singular (no usable pivot in column {})", self.column)
    }
}

impl std::error::Error for SingularMatrix {}

/// `P A = L U` with unit-diagonal `L` stored below the diagonal of `lu`.
#[derive(Debug, Clone)]
pub struct LuFactors<T> {
    lu: DenseMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> LuFactors<T> {
    /// Factors a square matrix. A pivot is rejected when its magnitude falls
    /// below `T::pivot_tol()` times the largest entry (or 1, whichever is larger).
    pub fn factor(a: &DenseMatrix<T>) -> Result<Self, SingularMatrix> {
        assert_eq!(a.rows(), a.cols(), "LU needs a square matrix");
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let threshold = T::pivot_tol() * a.max_abs().max(T::one());

        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, T::zero()), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            if best <= threshold {
                return Err(SingularMatrix { column: k });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor != T::zero() {
                    for j in (k + 1)..n {
                        let v = lu[(k, j)];
                        lu[(i, j)] -= factor * v;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// Solves `Aᵀ y = c`.
    pub fn solve_transpose(&self, c: &[T]) -> Vec<T> {
        let n = self.dim();
        assert_eq!(c.len(), n);
        // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ w = c, then Lᵀ z = w, then y = Pᵀ z.
        let mut w = c.to_vec();
        for i in 0..n {
            for j in 0..i {
                let u = self.lu[(j, i)];
                let wj = w[j];
                w[i] -= u * wj;
            }
            w[i] /= self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let l = self.lu[(j, i)];
                let wj = w[j];
                w[i] -= l * wj;
            }
        }
        let mut y = vec![T::zero(); n];
        for (k, &p) in self.perm.iter().enumerate() {
            y[p] = w[k];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn solves_pivoting_system() {
        // Zero leading entry forces a row swap.
        let a = DenseMatrix::from_rows(&[
            vec![0.0, 2.0, 1.0],
            vec![1.0, 1.0, 0.0],
            vec![3.0, 0.0, 1.0],
        ]);
        let x_true = [1.0, -2.0, 0.5];
        let b = a.mul_vec(&x_true);
        let lu = LuFactors::factor(&a).unwrap();
        assert!(close(&lu.solve(&b), &x_true, 1e-12));
    }

    #[test]
    fn transpose_solve_matches_explicit_transpose() {
        let a = DenseMatrix::from_rows(&[
            vec![4.0, -1.0, 0.5],
            vec![2.0, 3.0, -1.0],
            vec![0.0, 1.0, 5.0],
        ]);
        let mut at = DenseMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                at[(i, j)] = a[(j, i)];
            }
        }
        let c = [1.0, 2.0, 3.0];
        let y = LuFactors::factor(&a).unwrap().solve_transpose(&c);
        let y2 = LuFactors::factor(&at).unwrap().solve(&c);
        assert!(close(&y, &y2, 1e-12));
    }

    #[test]
    fn rejects_singular() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(LuFactors::factor(&a).is_err());
    }

    #[test]
    fn works_in_f32() {
        let a = DenseMatrix::<f32>::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        let x = LuFactors::factor(&a).unwrap().solve(&[3.0, 4.0]);
        assert!((x[0] - 1.0).abs() < 1e-6 && (x[1] - 1.0).abs() < 1e-6);
    }
}
