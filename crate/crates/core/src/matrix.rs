use std::ops::{Index, IndexMut};

use num_bigint::BigInt;

use crate::scalar::{Checked, Scalar};

/// Dense row-major integer matrix. Rows are addressable by generator index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: Vec<Vec<T>>,
    ncols: usize,
}

pub type IntVec = Vec<BigInt>;
pub type IntMat = Matrix<BigInt>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix {
            rows: vec![vec![T::zero(); ncols]; nrows],
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = T::one();
        }
        m
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.rows[i][i] = d.clone();
        }
        m
    }

    /// Builds a matrix from rows. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix rows");
        Matrix { rows, ncols }
    }

    /// Like [`Matrix::from_rows`] but with an explicit column count, so that
    /// matrices without rows keep their width.
    pub fn with_cols(rows: Vec<Vec<T>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix rows");
        Matrix { rows, ncols }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| T::from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        self.rows
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.rows[i]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                t.rows[j][i] = x.clone();
            }
        }
        t
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn try_mul(&self, rhs: &Matrix<T>) -> Checked<Matrix<T>> {
        assert_eq!(self.ncols, rhs.nrows(), "matrix product shape mismatch");
        let mut out = Self::zeros(self.nrows(), rhs.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            for (k, a) in r.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.ncols {
                    let p = a.try_mul(&rhs.rows[k][j])?;
                    out.rows[i][j] = out.rows[i][j].try_add(&p)?;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[T]) -> Checked<Vec<T>> {
        assert_eq!(v.len(), self.nrows());
        let mut out = vec![T::zero(); self.ncols];
        for (a, r) in v.iter().zip(&self.rows) {
            if a.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(r) {
                *o = o.try_add(&a.try_mul(x)?)?;
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[T]) -> Checked<Vec<T>> {
        assert_eq!(v.len(), self.ncols);
        self.rows.iter().map(|r| T::dot(r, v)).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
            ncols: self.ncols,
        }
    }

    pub fn try_map<U: Scalar>(&self, f: impl Fn(&T) -> Option<U>) -> Option<Matrix<U>> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(&f).collect::<Option<Vec<U>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            rows,
            ncols: self.ncols,
        })
    }

    pub fn to_bigint(&self) -> IntMat {
        self.map(Scalar::to_bigint)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.rows[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.rows[i][j]
    }
}
