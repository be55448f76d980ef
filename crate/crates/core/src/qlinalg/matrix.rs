use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::int::Int;

/// Dense row-major matrix with exact scalar entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix<S = Int> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

pub type IntMatrix = ExactMatrix<Int>;
pub type QMatrix = ExactMatrix<BigRational>;

impl<S: Clone + Zero> ExactMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self
    where
        S: One,
    {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_cols(cols: Vec<Vec<S>>, rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[S] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn into_rows(self) -> Vec<Vec<S>> {
        let c = self.cols;
        if c == 0 {
            return vec![Vec::new(); self.rows];
        }
        let mut out = Vec::with_capacity(self.rows);
        let mut it = self.entries.into_iter();
        for _ in 0..self.rows {
            out.push(it.by_ref().take(c).collect());
        }
        out
    }
}

impl<S> ExactMatrix<S>
where
    S: Clone + Zero,
    for<'a> &'a S: std::ops::Mul<&'a S, Output = S>,
{
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
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
                        let t = a * b;
                        let slot = &mut out[(i, j)];
                        *slot = std::mem::replace(slot, S::zero()) + t;
                    }
                }
            }
        }
        out
    }
}

impl<S> Index<(usize, usize)> for ExactMatrix<S> {
    type Output = S;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for ExactMatrix<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl<S: fmt::Display> fmt::Debug for ExactMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.entries[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Int::from(v)).collect())
                .collect(),
        )
    }

    pub fn to_rational(&self) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |i, j| {
            BigRational::from_integer(self[(i, j)].to_bigint())
        })
    }
}

impl QMatrix {
    /// Row-scales by the lcm of each row's denominators; rank and row space
    /// over the rationals are unchanged.
    pub fn clear_denominators(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            let lcm = self
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, q| num_integer::lcm(acc, q.denom().clone()));
            for j in 0..self.cols {
                let q = &self[(i, j)];
                out[(i, j)] = Int::from(q.numer() * (&lcm / q.denom()));
            }
        }
        out
    }
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
///
/// Pivots are chosen per column among the remaining rows by smallest bit
/// length, which keeps intermediate minors short.
pub fn rank(m: &IntMatrix) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut prev = Int::ONE;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = (r..rows)
            .filter(|&i| !a[(i, c)].is_zero())
            .min_by_key(|&i| a[(i, c)].bits());
        let Some(p) = pivot else { continue };
        a.swap_rows(r, p);
        let piv = a[(r, c)].clone();
        for i in r + 1..rows {
            let lead = a[(i, c)].clone();
            for j in c + 1..cols {
                let v = &(&piv * &a[(i, j)]) - &(&lead * &a[(r, j)]);
                a[(i, j)] = v.div_exact(&prev);
            }
            a[(i, c)] = Int::ZERO;
        }
        prev = piv;
        r += 1;
    }
    r
}

pub fn rank_q(m: &QMatrix) -> usize {
    rank(&m.clear_denominators())
}

/// Reduced row echelon form over the rationals; returns the form and its
/// pivot columns.
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a[(r, c)].recip();
        for j in c..cols {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let t = &f * &a[(r, j)];
                a[(i, j)] = &a[(i, j)] - &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Rank by plain rational Gaussian elimination (reference route).
pub fn rank_gaussian(m: &QMatrix) -> usize {
    rref(m).1.len()
}

/// Basis of the right null space `{x : m x = 0}` over the rationals.
pub fn nullspace(m: &QMatrix) -> Vec<Vec<BigRational>> {
    let (r, pivots) = rref(m);
    let cols = m.cols();
    let mut is_pivot = vec![None; cols];
    for (row, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(row);
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| is_pivot[c].is_none()) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = -r[(row, free)].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `m x = b` over the rationals, if a solution exists.
pub fn solve(m: &QMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(m.rows(), b.len());
    let aug = QMatrix::from_fn(m.rows(), m.cols() + 1, |i, j| {
        if j < m.cols() {
            m[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); m.cols()];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = r[(row, m.cols())].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&IntMatrix::zeros(3, 5)), 0);
        assert_eq!(rank(&IntMatrix::identity(4)), 4);
        assert_eq!(rank(&IntMatrix::from_i64(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&IntMatrix::zeros(0, 3)), 0);
    }

    #[test]
    fn bareiss_matches_gaussian_on_skipped_columns() {
        let m = IntMatrix::from_i64(&[&[0, 2, 4, 1], &[0, 1, 2, 3], &[0, 3, 6, 4], &[0, 0, 0, 7]]);
        assert_eq!(rank(&m), rank_gaussian(&m.to_rational()));
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn nullspace_annihilates() {
        let m = IntMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1]]).to_rational();
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        let x = QMatrix::from_cols(ns, 3);
        assert!(m.mul(&x).is_zero());
    }
}
