//! Dense matrices over `Q(sqrt5)` with exact Gaussian elimination.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_traits::{One, Zero};

use super::{AlgebraError, Q5Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Q5Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q5Scalar>,
}

impl Q5Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Q5Matrix { rows, cols, data: vec![Q5Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q5Scalar::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Q5Scalar>>) -> Result<Self, AlgebraError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(AlgebraError::DimensionMismatch { expected: ncols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Q5Matrix { rows: nrows, cols: ncols, data })
    }

    /// Integer matrix, handy for tests and permutation matrices.
    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self, AlgebraError> {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Q5Scalar::from_int(v)).collect()).collect(),
        )
    }

    pub fn from_columns(cols: &[Vec<Q5Scalar>]) -> Result<Self, AlgebraError> {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(nrows, ncols);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != nrows {
                return Err(AlgebraError::DimensionMismatch { expected: nrows, found: col.len() });
            }
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Q5Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q5Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn trace(&self) -> Q5Scalar {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = &self[(i, j)];
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn scale(&self, s: &Q5Scalar) -> Self {
        Q5Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(AlgebraError::DimensionMismatch { expected: self.rows * self.cols, found: rhs.rows * rhs.cols });
        }
        Ok(Q5Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.cols != rhs.rows {
            return Err(AlgebraError::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Q5Scalar]) -> Result<Vec<Q5Scalar>, AlgebraError> {
        if v.len() != self.cols {
            return Err(AlgebraError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn pow(&self, exp: u32) -> Self {
        assert!(self.is_square(), "matrix power needs a square matrix");
        let mut acc = Self::identity(self.rows);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Sub-block `rows r0..r0+nr`, `cols c0..c0+nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        let mut b = Self::zeros(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                b[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        b
    }

    /// Stacks square blocks along the diagonal.
    pub fn block_diagonal(blocks: &[Q5Matrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(off + i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        m
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let delta = &f * &m[(r, j)];
                    m[(i, j)] -= &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Indices of the first linearly independent columns, scanning left to right.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Solves `self * X = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if rhs.rows != self.rows {
            return Err(AlgebraError::DimensionMismatch { expected: self.rows, found: rhs.rows });
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, n + rhs.cols);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..rhs.cols {
                aug[(i, n + j)] = rhs[(i, j)].clone();
            }
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(AlgebraError::Singular);
        }
        Ok(red.block(0, n, n, rhs.cols))
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        self.solve(&Self::identity(self.rows))
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(Q5Scalar::to_f64).collect()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for Q5Matrix {
    type Output = Q5Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Q5Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Q5Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q5Scalar {
        &mut self.data[i * self.cols + j]
    }
}

/// Panics on a shape mismatch; use [`Q5Matrix::checked_mul`] otherwise.
impl Mul for &Q5Matrix {
    type Output = Q5Matrix;
    fn mul(self, rhs: &Q5Matrix) -> Q5Matrix {
        self.checked_mul(rhs).expect("matrix shapes must agree")
    }
}

impl fmt::Display for Q5Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Incrementally maintained echelon basis of a subspace of `Q(sqrt5)^n`.
#[derive(Clone, Debug, Default)]
pub struct LinearSpan {
    dim: usize,
    // Each row is monic at its pivot and zero at every other row's pivot.
    rows: Vec<(usize, Vec<Q5Scalar>)>,
}

impl LinearSpan {
    pub fn new(dim: usize) -> Self {
        LinearSpan { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Q5Scalar]) -> Vec<Q5Scalar> {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            for (wj, rj) in w.iter_mut().zip(row) {
                if !rj.is_zero() {
                    *wj -= &(&f * rj);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Q5Scalar]) -> bool {
        assert_eq!(v.len(), self.dim);
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span. Returns `false` if it was already dependent.
    pub fn insert(&mut self, v: &[Q5Scalar]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("pivot is nonzero");
        for x in w.iter_mut() {
            *x = &*x * &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (rj, wj) in row.iter_mut().zip(&w) {
                if !wj.is_zero() {
                    *rj -= &(&f * wj);
                }
            }
        }
        self.rows.push((p, w));
        true
    }
}
