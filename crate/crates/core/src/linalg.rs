//! Dense matrices over a [`Scalar`] backend.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn scalar(s: S) -> Self {
        Matrix {
            rows: 1,
            cols: 1,
            data: vec![s],
        }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::ShapeMismatch {
                expected: format!("{c} columns"),
                found: format!("{} columns", bad.len()),
            });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(entries: Vec<S>) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
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

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        let mut out: Matrix<S> = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero(0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if b.is_zero(0.0) {
                        continue;
                    }
                    let prod = a.clone() * b.clone();
                    let slot = &mut out[(r, c)];
                    *slot = slot.clone() + prod;
                }
            }
        }
        Ok(out)
    }

    /// Matrix product; panics on incompatible shapes.
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("matrix shapes are compatible")
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Gauss-Jordan inverse with largest-magnitude pivoting.
    pub fn inverse(&self, tol: f64) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[(r, col)].is_zero(tol))
                .max_by(|&x, &y| {
                    a[(x, col)]
                        .magnitude()
                        .partial_cmp(&a[(y, col)].magnitude())
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(y.cmp(&x))
                })?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = a[(col, col)].inv().ok()?;
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r == col || a[(r, col)].is_zero(0.0) {
                    continue;
                }
                let factor = a[(r, col)].clone();
                a.axpy_row(r, col, &factor);
                inv.axpy_row(r, col, &factor);
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, x: usize, y: usize) {
        if x == y {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(x * self.cols + c, y * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: &S) {
        for c in 0..self.cols {
            let v = self[(r, c)].clone() * s.clone();
            self[(r, c)] = v;
        }
    }

    // row[target] -= factor * row[source]
    fn axpy_row(&mut self, target: usize, source: usize, factor: &S) {
        for c in 0..self.cols {
            let v = self[(target, c)].clone() - factor.clone() * self[(source, c)].clone();
            self[(target, c)] = v;
        }
    }

    /// Indices of a maximal set of linearly independent rows, greedily from the top.
    pub fn independent_rows(&self, tol: f64) -> Vec<usize> {
        let mut basis: Vec<(usize, Vec<S>)> = Vec::new();
        let mut chosen = Vec::new();
        for r in 0..self.rows {
            let mut v: Vec<S> = self.row(r).to_vec();
            for (pc, b) in &basis {
                if v[*pc].is_zero(0.0) {
                    continue;
                }
                let f = v[*pc].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
            let scale = self.row(r).iter().map(|x| x.magnitude()).fold(1.0, f64::max);
            let pivot = (0..self.cols)
                .filter(|&c| !v[c].is_zero(tol * scale))
                .max_by(|&x, &y| {
                    v[x].magnitude()
                        .partial_cmp(&v[y].magnitude())
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(y.cmp(&x))
                });
            if let Some(pc) = pivot {
                let p = v[pc].inv().expect("pivot is nonzero");
                for x in v.iter_mut() {
                    *x = x.clone() * p.clone();
                }
                basis.push((pc, v));
                chosen.push(r);
            }
        }
        chosen
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&Matrix::identity(self.rows), tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }

    /// Whether every off-diagonal entry vanishes.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self[(r, c)].is_zero(tol)))
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        &mut self.data[r * self.cols + c]
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.data[r * self.cols + c])?;
            }
        }
        write!(f, "]")
    }
}
