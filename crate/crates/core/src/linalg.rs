//! Exact integer linear algebra.
//!
//! Determinants and linear systems use fraction-free (Bareiss) elimination.
//! Trigonalization uses unimodular row operations (extended Euclid on each
//! column), so the transformation matrix stays in GL(d, Z).

use crate::matrix::Matrix;
use crate::scalar::{content, Checked, Overflow, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(&'static str),
    #[error("matrix is singular")]
    Singular,
    #[error("zero vector has no primitive form")]
    ZeroVector,
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

/// Solution of `A * solution = denom * B` with integral numerators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSolveResult<T> {
    pub solution: Matrix<T>,
    pub denom: T,
}

fn require_square<T: Scalar>(m: &Matrix<T>) -> Result<(), LinalgError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(LinalgError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

/// Fraction-free forward elimination on the first `n` columns of `m`
/// (an `n x (n + k)` augmented matrix). Returns the determinant of the
/// leading square block, or `None` if it is singular.
fn bareiss_forward<T: Scalar>(m: &mut [Vec<T>], n: usize) -> Checked<Option<T>> {
    let width = m.first().map_or(0, Vec::len);
    let mut prev = T::one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Ok(None);
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..width {
                let v = row[j].try_mul_add(pivot, &factor.try_neg()?, &pivot_row[j])?;
                row[j] = if prev.is_one() { v } else { v.try_div(&prev)? };
            }
            row[k] = T::zero();
        }
        prev = pivot.clone();
    }
    if n == 0 {
        return Ok(Some(T::one()));
    }
    let d = m[n - 1][n - 1].clone();
    Ok(Some(if negate { d.try_neg()? } else { d }))
}

/// Exact determinant of a square matrix given by rows.
pub fn det_rows<T: Scalar>(rows: &[Vec<T>]) -> Checked<T> {
    let n = rows.len();
    let mut m = rows.to_vec();
    Ok(bareiss_forward(&mut m, n)?.unwrap_or_else(T::zero))
}

pub fn det<T: Scalar>(m: &Matrix<T>) -> Result<T, LinalgError> {
    require_square(m)?;
    Ok(det_rows(m.rows())?)
}

/// Solves `A x_j = denom * b_j` for every right hand side column `b_j`,
/// with `denom = |det A|`. The solution is returned column by column.
///
/// This is the unreduced workhorse behind [`solve_multi_rhs`].
pub fn solve_scaled<T: Scalar>(a: &[Vec<T>], rhs_cols: &[Vec<T>]) -> Result<(Vec<Vec<T>>, T), LinalgError> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(LinalgError::Shape("system matrix must be square"));
    }
    if rhs_cols.iter().any(|c| c.len() != n) {
        return Err(LinalgError::Shape("right hand side length"));
    }
    let k = rhs_cols.len();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = Vec::with_capacity(n + k);
            row.extend_from_slice(r);
            row.extend(rhs_cols.iter().map(|c| c[i].clone()));
            row
        })
        .collect();
    let det = bareiss_forward(&mut m, n)?.ok_or(LinalgError::Singular)?;
    // The last pivot is the determinant of the row-permuted matrix.
    let last = m[n - 1][n - 1].clone();
    let mut sols = Vec::with_capacity(k);
    for c in 0..k {
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut acc = last.try_mul(&m[i][n + c])?;
            for j in i + 1..n {
                if !m[i][j].is_zero() {
                    acc = acc.try_sub(&m[i][j].try_mul(&x[j])?)?;
                }
            }
            x[i] = acc.try_div(&m[i][i])?;
        }
        // x solves A x = last * b; normalize to a positive denominator.
        if last.is_negative() {
            for v in &mut x {
                *v = v.try_neg()?;
            }
        }
        sols.push(x);
    }
    Ok((sols, det.try_abs()?))
}

/// Solves `A * X = denom * B` exactly. The common denominator starts as
/// `|det A|` and is reduced by the gcd of all numerators.
pub fn solve_multi_rhs<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<RationalSolveResult<T>, LinalgError> {
    require_square(a)?;
    if b.nrows() != a.nrows() {
        return Err(LinalgError::Shape("right hand side row count"));
    }
    let cols: Vec<Vec<T>> = (0..b.ncols()).map(|j| b.column(j)).collect();
    let (sols, mut denom) = solve_scaled(a.rows(), &cols)?;
    let mut g = denom.clone();
    for s in &sols {
        g = g.try_gcd(&content(s)?)?;
    }
    let mut solution = Matrix::zeros(a.nrows(), b.ncols());
    for (j, s) in sols.iter().enumerate() {
        for (i, v) in s.iter().enumerate() {
            solution[(i, j)] = if g.is_one() { v.clone() } else { v.try_div(&g)? };
        }
    }
    if !g.is_one() {
        denom = denom.try_div(&g)?;
    }
    Ok(RationalSolveResult { solution, denom })
}

pub fn invert<T: Scalar>(m: &Matrix<T>) -> Result<RationalSolveResult<T>, LinalgError> {
    require_square(m)?;
    solve_multi_rhs(m, &Matrix::identity(m.nrows()))
}

/// Divides `v` by the gcd of its entries.
pub fn primitivize<T: Scalar>(v: &[T]) -> Result<Vec<T>, LinalgError> {
    let g = content(v)?;
    if g.is_zero() {
        return Err(LinalgError::ZeroVector);
    }
    if g.is_one() {
        return Ok(v.to_vec());
    }
    Ok(v.iter().map(|x| x.try_div(&g)).collect::<Checked<_>>()?)
}

pub(crate) fn primitivize_in_place<T: Scalar>(v: &mut [T]) -> Checked<()> {
    let g = content(v)?;
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = x.try_div(&g)?;
        }
    }
    Ok(())
}

/// Row echelon form by unimodular row operations. `track`, if given, receives
/// the same operations, so starting from the identity it ends as `X` with
/// `X * M = E`. Pivots are positive. Returns the rank.
fn echelon_unimodular<T: Scalar>(rows: &mut [Vec<T>], mut track: Option<&mut [Vec<T>]>) -> Checked<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let mut have_pivot = false;
        loop {
            let mut best: Option<(usize, T)> = None;
            for (i, row) in rows.iter().enumerate().skip(r) {
                if !row[col].is_zero() {
                    let a = row[col].try_abs()?;
                    if best.as_ref().is_none_or(|(_, b)| a < *b) {
                        best = Some((i, a));
                    }
                }
            }
            let Some((p, _)) = best else { break };
            have_pivot = true;
            rows.swap(p, r);
            if let Some(t) = track.as_deref_mut() {
                t.swap(p, r);
            }
            let mut clean = true;
            for i in r + 1..nrows {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].try_div(&rows[r][col])?;
                let (head, tail) = rows.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[r], &q)?;
                if let Some(t) = track.as_deref_mut() {
                    let (th, tt) = t.split_at_mut(i);
                    sub_multiple(&mut tt[0], &th[r], &q)?;
                }
                if !rows[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if have_pivot {
            if rows[r][col].is_negative() {
                negate(&mut rows[r])?;
                if let Some(t) = track.as_deref_mut() {
                    negate(&mut t[r])?;
                }
            }
            r += 1;
        }
    }
    Ok(r)
}

fn sub_multiple<T: Scalar>(target: &mut [T], src: &[T], q: &T) -> Checked<()> {
    if q.is_zero() {
        return Ok(());
    }
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t = t.try_sub(&q.try_mul(s)?)?;
        }
    }
    Ok(())
}

fn negate<T: Scalar>(v: &mut [T]) -> Checked<()> {
    for x in v.iter_mut() {
        *x = x.try_neg()?;
    }
    Ok(())
}

/// Unimodular trigonalization: returns `(X, D)` with `X * M = D`,
/// `|det X| = 1` and `D` upper triangular with positive diagonal.
pub fn trigonalize<T: Scalar>(m: &Matrix<T>) -> Result<(Matrix<T>, Matrix<T>), LinalgError> {
    require_square(m)?;
    let n = m.nrows();
    let mut rows = m.rows().to_vec();
    let mut x = Matrix::<T>::identity(n).into_rows();
    let rank = echelon_unimodular(&mut rows, Some(&mut x))?;
    if rank < n {
        return Err(LinalgError::Singular);
    }
    Ok((Matrix::from_rows(x), Matrix::from_rows(rows)))
}

/// Diagonal `a_1, ..., a_d` of a unimodular trigonalization of the rows,
/// without tracking the transformation.
pub fn trigonal_diagonal<T: Scalar>(rows: &[Vec<T>]) -> Result<Vec<T>, LinalgError> {
    let n = rows.len();
    let mut work = rows.to_vec();
    let rank = echelon_unimodular(&mut work, None)?;
    if rank < n {
        return Err(LinalgError::Singular);
    }
    Ok((0..n).map(|i| work[i][i].clone()).collect())
}

/// Incrementally maintained basis of a row space, kept in echelon shape.
#[derive(Clone, Debug)]
pub struct IncrementalBasis<T> {
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: Scalar> Default for IncrementalBasis<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> IncrementalBasis<T> {
    pub fn new() -> Self {
        IncrementalBasis { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[T]) -> Checked<Vec<T>> {
        let mut w = v.to_vec();
        for (p, b) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            let piv = &b[*p];
            for (x, y) in w.iter_mut().zip(b) {
                *x = x.try_mul_add(piv, &f.try_neg()?, y)?;
            }
            primitivize_in_place(&mut w)?;
        }
        Ok(w)
    }

    /// Adds `v` if it is independent of the current rows; returns whether it was.
    pub fn insert(&mut self, v: &[T]) -> Checked<bool> {
        let w = self.reduce(v)?;
        match w.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, w));
                Ok(true)
            }
            None => Ok(false),
        }
    }

    pub fn contains(&self, v: &[T]) -> Checked<bool> {
        Ok(self.reduce(v)?.iter().all(Scalar::is_zero))
    }
}

/// Rank over the rationals.
pub fn rank<T: Scalar>(m: &Matrix<T>) -> Result<usize, LinalgError> {
    Ok(rank_of_rows(m.rows().iter().map(Vec::as_slice))?)
}

pub fn rank_of_rows<'a, T: Scalar>(rows: impl IntoIterator<Item = &'a [T]>) -> Checked<usize> {
    let mut basis = IncrementalBasis::new();
    let mut dim = None;
    for r in rows {
        let d = *dim.get_or_insert(r.len());
        basis.insert(r)?;
        if basis.rank() == d {
            break;
        }
    }
    Ok(basis.rank())
}

/// Z-basis (as rows) of the lattice `{ y : M y = 0 }`.
pub fn kernel_basis<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    let n = m.ncols();
    let mut t = m.transpose().into_rows();
    let mut x = Matrix::<T>::identity(n).into_rows();
    if t.is_empty() {
        return Ok(Matrix::with_cols(x, n));
    }
    let r = echelon_unimodular(&mut t, Some(&mut x))?;
    Ok(Matrix::with_cols(x.split_off(r), n))
}

/// A saturated sublattice `span(G) ∩ Z^d` with a basis `B` (rows) and an
/// integral section `P` such that `B * P = I`. Coordinates: `x = c * B`,
/// `c = x * P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeEmbedding<T> {
    pub basis: Matrix<T>,
    pub section: Matrix<T>,
}

impl<T: Scalar> LatticeEmbedding<T> {
    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Coordinates of a lattice vector of the sublattice.
    pub fn to_sub(&self, x: &[T]) -> Checked<Vec<T>> {
        self.section.left_apply(x)
    }

    pub fn to_ambient(&self, c: &[T]) -> Checked<Vec<T>> {
        self.basis.left_apply(c)
    }

    /// Restricts an ambient linear form to the sublattice.
    pub fn restrict_form(&self, form: &[T]) -> Checked<Vec<T>> {
        self.basis.apply(form)
    }

    /// Extends a form on the sublattice to an ambient form agreeing with it
    /// on the sublattice.
    pub fn extend_form(&self, form: &[T]) -> Checked<Vec<T>> {
        self.section.apply(form)
    }
}

/// Computes the saturation `span(rows) ∩ Z^d` of the row space.
pub fn saturation<T: Scalar>(gens: &Matrix<T>) -> Result<LatticeEmbedding<T>, LinalgError> {
    let d = gens.ncols();
    let equations = kernel_basis(gens)?;
    let basis = if equations.nrows() == 0 {
        Matrix::identity(d)
    } else {
        kernel_basis(&equations)?
    };
    let r = basis.nrows();
    let mut bt = basis.transpose().into_rows();
    let mut x = Matrix::<T>::identity(d).into_rows();
    let rank = echelon_unimodular(&mut bt, Some(&mut x))?;
    debug_assert_eq!(rank, r);
    let top = Matrix::from_rows(bt[..r].to_vec());
    let inv = invert(&top)?;
    if !inv.denom.is_one() {
        return Err(LinalgError::Singular);
    }
    let x_top = Matrix::with_cols(x[..r].to_vec(), d);
    let section_t = inv.solution.try_mul(&x_top)?;
    Ok(LatticeEmbedding {
        basis,
        section: section_t.transpose(),
    })
}
