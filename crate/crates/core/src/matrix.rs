//! Dense exact matrices over [`ExactScalar`].

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::scalar::{ExactScalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<ExactScalar>,
}

/// Inertia of a symmetric matrix: counts of positive, negative and zero pivots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)?;
        if self.zero > 0 {
            write!(f, "+{}", self.zero)?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![ExactScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ExactScalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(MatrixError::DimensionMismatch(row.len(), c));
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| ExactScalar::from_integer(x)).collect())
                .collect(),
        )
        .expect("rectangular integer rows")
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

    pub fn row(&self, i: usize) -> &[ExactScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<ExactScalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<ExactScalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
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

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Common surd base of the entries, or an error if two differ.
    pub fn surd_base(&self) -> Result<u64, ScalarError> {
        let mut d = 1;
        for x in &self.data {
            let e = x.surd_base();
            if e != 1 {
                if d != 1 && d != e {
                    return Err(ScalarError::MismatchedSurd(d, e));
                }
                d = e;
            }
        }
        Ok(d)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let v = a.checked_mul(b)?;
                        out[(i, j)] = out[(i, j)].checked_add(&v)?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Result<Vec<ExactScalar>, MatrixError> {
        if self.cols != v.len() {
            return Err(MatrixError::DimensionMismatch(self.cols, v.len()));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = ExactScalar::zero();
            for (a, b) in self.row(i).iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.checked_add(&a.checked_mul(b)?)?;
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ExactScalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// Row echelon reduction in place; returns pivot columns and the number
    /// of row swaps performed.
    fn echelon(&mut self) -> Result<(Vec<usize>, usize), MatrixError> {
        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                self.swap_rows(p, r);
                swaps += 1;
            }
            let inv = self[(r, c)].checked_inv()?;
            for i in r + 1..self.rows {
                if self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].checked_mul(&inv)?;
                for j in c..self.cols {
                    if !self[(r, j)].is_zero() {
                        let v = f.checked_mul(&self[(r, j)])?;
                        self[(i, j)] = self[(i, j)].checked_sub(&v)?;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok((pivots, swaps))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn det(&self) -> Result<ExactScalar, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare(self.rows, self.cols));
        }
        let mut m = self.clone();
        let (pivots, swaps) = m.echelon()?;
        if pivots.len() < self.rows {
            return Ok(ExactScalar::zero());
        }
        let mut d = ExactScalar::one();
        for i in 0..self.rows {
            d = d.checked_mul(&m[(i, i)])?;
        }
        Ok(if swaps % 2 == 1 { -d } else { d })
    }

    pub fn rank(&self) -> Result<usize, MatrixError> {
        let mut m = self.clone();
        Ok(m.echelon()?.0.len())
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&i| !a[(i, c)].is_zero()).ok_or(MatrixError::Singular)?;
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let pinv = a[(c, c)].checked_inv()?;
            for j in 0..n {
                a[(c, j)] = a[(c, j)].checked_mul(&pinv)?;
                inv[(c, j)] = inv[(c, j)].checked_mul(&pinv)?;
            }
            for i in 0..n {
                if i == c || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in 0..n {
                    if !a[(c, j)].is_zero() {
                        let v = f.checked_mul(&a[(c, j)])?;
                        a[(i, j)] = a[(i, j)].checked_sub(&v)?;
                    }
                    if !inv[(c, j)].is_zero() {
                        let v = f.checked_mul(&inv[(c, j)])?;
                        inv[(i, j)] = inv[(i, j)].checked_sub(&v)?;
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Solves `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[ExactScalar]) -> Result<Vec<ExactScalar>, MatrixError> {
        self.inverse()?.mul_vec(b)
    }

    /// Inertia of a symmetric matrix by congruence diagonalization.
    ///
    /// Pivots are taken from the diagonal; when the remaining diagonal is
    /// zero but an off-diagonal entry `(i, j)` is not, row and column `j` are
    /// added to row and column `i`, which makes the diagonal entry `2 a_ij`.
    pub fn signature(&self) -> Result<Signature, MatrixError> {
        if !self.is_symmetric() {
            return Err(MatrixError::NotSymmetric);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sig = Signature {
            positive: 0,
            negative: 0,
            zero: 0,
        };
        for k in 0..n {
            let mut pivot = (k..n).find(|&i| !a[(i, i)].is_zero());
            if pivot.is_none() {
                let off = (k..n)
                    .flat_map(|i| (k..n).map(move |j| (i, j)))
                    .find(|&(i, j)| i != j && !a[(i, j)].is_zero());
                if let Some((i, j)) = off {
                    a.add_congruent(i, j)?;
                    pivot = Some(i);
                }
            }
            let Some(p) = pivot else {
                sig.zero += n - k;
                break;
            };
            a.swap_congruent(p, k);
            let pinv = a[(k, k)].checked_inv()?;
            for r in k + 1..n {
                if a[(r, k)].is_zero() {
                    continue;
                }
                let f = a[(r, k)].checked_mul(&pinv)?;
                for j in k..n {
                    if !a[(k, j)].is_zero() {
                        let v = f.checked_mul(&a[(k, j)])?;
                        a[(r, j)] = a[(r, j)].checked_sub(&v)?;
                    }
                }
                for i in k..n {
                    if !a[(i, k)].is_zero() {
                        let v = f.checked_mul(&a[(i, k)])?;
                        a[(i, r)] = a[(i, r)].checked_sub(&v)?;
                    }
                }
            }
            match a[(k, k)].sign() {
                1 => sig.positive += 1,
                -1 => sig.negative += 1,
                _ => unreachable!("pivot is nonzero"),
            }
        }
        Ok(sig)
    }

    fn swap_congruent(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.swap_rows(a, b);
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn add_congruent(&mut self, i: usize, j: usize) -> Result<(), ScalarError> {
        for c in 0..self.cols {
            let v = self[(j, c)].clone();
            self[(i, c)] = self[(i, c)].checked_add(&v)?;
        }
        for r in 0..self.rows {
            let v = self[(r, j)].clone();
            self[(r, i)] = self[(r, i)].checked_add(&v)?;
        }
        Ok(())
    }

    /// True when every entry is a rational integer.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(ExactScalar::is_integer)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = ExactScalar;
    fn index(&self, (i, j): (usize, usize)) -> &ExactScalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ExactScalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(crate::lorentz::short_text).collect();
            writeln!(f, "[{}]", row.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_integers(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.det().unwrap(), ExactScalar::one());
        let inv = m.inverse().unwrap();
        assert_eq!(inv, Matrix::from_integers(&[vec![1, -1], vec![-1, 2]]));
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn row_swap_flips_determinant_sign() {
        let m = Matrix::from_integers(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]);
        assert_eq!(m.det().unwrap(), ExactScalar::from_integer(-3));
    }

    #[test]
    fn singular_matrix() {
        let m = Matrix::from_integers(&[vec![1, 2], vec![2, 4]]);
        assert!(m.det().unwrap().is_zero());
        assert_eq!(m.inverse(), Err(MatrixError::Singular));
        assert_eq!(m.rank().unwrap(), 1);
    }

    #[test]
    fn signature_with_zero_diagonal() {
        // hyperbolic plane: pivots only reachable through the off-diagonal trick
        let m = Matrix::from_integers(&[vec![0, 1], vec![1, 0]]);
        let s = m.signature().unwrap();
        assert_eq!((s.positive, s.negative, s.zero), (1, 1, 0));
        let apollonian = Matrix::from_integers(&[
            vec![-2, 2, 2, 2],
            vec![2, -2, 2, 2],
            vec![2, 2, -2, 2],
            vec![2, 2, 2, -2],
        ]);
        let s = apollonian.signature().unwrap();
        assert_eq!((s.positive, s.negative, s.zero), (1, 3, 0));
        let degenerate = Matrix::from_integers(&[vec![-2, 2], vec![2, -2]]);
        let s = degenerate.signature().unwrap();
        assert_eq!((s.positive, s.negative, s.zero), (0, 1, 1));
    }

    #[test]
    fn surd_entries() {
        let s3: ExactScalar = "sqrt(3)".parse().unwrap();
        let m = Matrix::from_rows(vec![
            vec![ExactScalar::from_integer(-2), s3.clone()],
            vec![s3, ExactScalar::from_integer(-2)],
        ])
        .unwrap();
        assert_eq!(m.det().unwrap(), ExactScalar::one());
        assert_eq!(m.surd_base().unwrap(), 3);
        let s = m.signature().unwrap();
        assert_eq!((s.positive, s.negative), (0, 2));
    }
}
