//! Small dense matrices over a finite field. Gaussian elimination uses
//! lexicographic pivoting (first usable row, first nonzero column) so every
//! derived basis and normal form is reproducible.

use crate::field::{Field, FqElem};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FqElem>,
}

impl Matrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<FqElem>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FqElem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FqElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FqElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, field: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = field.add(out.get(i, j), field.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, field: &Field, v: &[FqElem]) -> Vec<FqElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = field.zero();
                for (j, &x) in v.iter().enumerate() {
                    acc = field.add(acc, field.mul(self.get(i, j), x));
                }
                acc
            })
            .collect()
    }

    /// Reduced row-echelon form; returns the pivot columns.
    pub fn rref(&self, field: &Field) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    let a = m.get(pr, c);
                    let b = m.get(row, c);
                    m.set(pr, c, b);
                    m.set(row, c, a);
                }
            }
            let inv = field.inv(m.get(row, col)).unwrap();
            for c in col..m.cols {
                m.set(row, c, field.mul(m.get(row, c), inv));
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = field.sub(m.get(r, c), field.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.rref(field).1.len()
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverse(&self, field: &Field) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zero(field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, field.one());
        }
        let (r, pivots) = aug.rref(field);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut out = Matrix::zero(field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j));
            }
        }
        Some(out)
    }

    /// Basis of the right kernel, one vector per non-pivot column, in column
    /// order.
    pub fn kernel_basis(&self, field: &Field) -> Vec<Vec<FqElem>> {
        let (r, pivots) = self.rref(field);
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![field.zero(); self.cols];
            v[free] = field.one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = field.neg(r.get(prow, free));
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, field: &Field, b: &[FqElem]) -> Option<Vec<FqElem>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zero(field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref(field);
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![field.zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = r.get(prow, self.cols);
        }
        Some(x)
    }

    /// Greedily extend the given rows to a basis of the full space using
    /// standard basis vectors, then also any of the supplied pool vectors.
    /// Selection order is deterministic.
    pub fn complete_basis(field: &Field, rows: &[Vec<FqElem>], pool: &[Vec<FqElem>]) -> Matrix {
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut chosen: Vec<Vec<FqElem>> = rows.to_vec();
        let mut rank = Matrix::from_rows(&chosen).rank(field);
        let mut candidates: Vec<Vec<FqElem>> = pool.to_vec();
        for i in 0..n {
            let mut e = vec![field.zero(); n];
            e[i] = field.one();
            candidates.push(e);
        }
        for cand in candidates {
            if chosen.len() == n {
                break;
            }
            chosen.push(cand);
            let new_rank = Matrix::from_rows(&chosen).rank(field);
            if new_rank > rank {
                rank = new_rank;
            } else {
                chosen.pop();
            }
        }
        assert_eq!(chosen.len(), n, "input rows were dependent");
        Matrix::from_rows(&chosen)
    }

    /// Columns-of interpretation: build the matrix whose columns are the given
    /// vectors.
    pub fn from_cols(field: &Field, cols: &[Vec<FqElem>]) -> Matrix {
        let c = cols.len();
        let r = cols.first().map(|v| v.len()).unwrap_or(0);
        let mut m = Matrix::zero(field, r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }
}
