//! Dense exact linear algebra over any [`Ring`].
//!
//! Elimination only pivots on entries with `try_inverse`. Over a field this is
//! ordinary Gauss-Jordan; over graded Laurent coefficients it pivots on
//! homogeneous entries, so homogeneous inputs stay homogeneous.

use crate::coeff::Ring;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("column {col} has nonzero entries but none is invertible")]
    NonInvertiblePivot { col: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, R::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<R>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<R> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).plus(&a.times(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(R::zero(), |acc, j| {
                    if v[j].is_zero() {
                        acc
                    } else {
                        acc.plus(&self.get(i, j).times(&v[j]))
                    }
                })
            })
            .collect()
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scale(&R::one().negate()))
    }

    pub fn scale(&self, c: &R) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.times(c)).collect(),
        }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss-Jordan on the first `ncols` columns. Returns pivot columns; row
    /// `i` of the result carries the pivot of `pivots[i]`.
    fn eliminate(&mut self, ncols: usize) -> Result<Vec<usize>, LinalgError> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == self.rows {
                break;
            }
            let mut found = None;
            let mut saw_nonzero = false;
            for i in r..self.rows {
                let v = self.get(i, c);
                if v.is_zero() {
                    continue;
                }
                saw_nonzero = true;
                if let Some(inv) = v.try_inverse() {
                    found = Some((i, inv));
                    break;
                }
            }
            let Some((p, inv)) = found else {
                if saw_nonzero {
                    return Err(LinalgError::NonInvertiblePivot { col: c });
                }
                continue;
            };
            self.swap_rows(r, p);
            for j in 0..self.cols {
                let v = self.get(r, j).times(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let pv = self.get(r, j);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j).minus(&f.times(pv));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok(pivots)
    }

    fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn rref(&self) -> Result<(Self, Vec<usize>), LinalgError> {
        let mut m = self.clone();
        let piv = m.eliminate(self.cols)?;
        Ok((m, piv))
    }

    pub fn rank(&self) -> Result<usize, LinalgError> {
        Ok(self.rref()?.1.len())
    }

    /// Basis of the right kernel. Each vector has a 1 in one free column.
    pub fn nullspace(&self) -> Result<Vec<Vec<R>>, LinalgError> {
        let (m, piv) = self.rref()?;
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !piv.contains(c)) {
            let mut v = vec![R::zero(); self.cols];
            v[free] = R::one();
            for (i, &pc) in piv.iter().enumerate() {
                v[pc] = m.get(i, free).negate();
            }
            out.push(v);
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = self.hstack(&Self::identity(n));
        let piv = aug.eliminate(n)?;
        if piv.len() < n {
            return Err(LinalgError::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
    }

    /// Solves `A x = b`, or returns `y` with `y^T A = 0` and `y^T b != 0`.
    pub fn solve(&self, b: &[R]) -> Result<Solve<R>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Shape("right-hand side length".into()));
        }
        let bm = Self::from_columns(self.rows, &[b.to_vec()]);
        let mut aug = self.hstack(&bm).hstack(&Self::identity(self.rows));
        let piv = aug.eliminate(self.cols)?;
        for i in piv.len()..self.rows {
            if !aug.get(i, self.cols).is_zero() {
                let y = (0..self.rows).map(|k| aug.get(i, self.cols + 1 + k).clone()).collect();
                return Ok(Solve::Inconsistent { certificate: y });
            }
        }
        let mut x = vec![R::zero(); self.cols];
        for (i, &pc) in piv.iter().enumerate() {
            x[pc] = aug.get(i, self.cols).clone();
        }
        Ok(Solve::Solution(x))
    }
}

impl<R: Ring> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Solve<R> {
    Solution(Vec<R>),
    Inconsistent { certificate: Vec<R> },
}

pub fn dot<R: Ring>(a: &[R], b: &[R]) -> R {
    a.iter().zip(b).fold(R::zero(), |acc, (x, y)| acc.plus(&x.times(y)))
}
