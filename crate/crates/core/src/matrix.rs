//! Dense square and rectangular matrices over [`Cyclotomic`] scalars.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Cyclotomic>,
}

impl CycMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CycMatrix { rows, cols, data: vec![Cyclotomic::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Cyclotomic::one())
    }

    pub fn scalar(n: usize, c: &Cyclotomic) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CycMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Integer matrix, handy for permutation matrices.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Cyclotomic::from_integer(x)).collect()).collect())
    }

    pub fn from_diagonal(diag: &[Cyclotomic]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = d.clone();
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

    pub fn get(&self, r: usize, c: usize) -> &Cyclotomic {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Cyclotomic) {
        self.data[r * self.cols + c] = v;
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[Cyclotomic] {
        &self.data
    }

    pub fn row_vectors(&self) -> Vec<Vec<Cyclotomic>> {
        self.data.chunks(self.cols.max(1)).map(<[Cyclotomic]>::to_vec).collect()
    }

    pub fn mul(&self, rhs: &CycMatrix) -> CycMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = CycMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> CycMatrix {
        assert!(self.is_square());
        let mut acc = CycMatrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &Cyclotomic) -> CycMatrix {
        CycMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, rhs: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn trace(&self) -> Cyclotomic {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// Kronecker product `self (x) rhs`.
    pub fn kron(&self, rhs: &CycMatrix) -> CycMatrix {
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        let mut out = CycMatrix::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Direct sum `diag(self, rhs)`.
    pub fn direct_sum(&self, rhs: &CycMatrix) -> CycMatrix {
        let mut out = CycMatrix::zeros(self.rows + rhs.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..rhs.rows {
            for j in 0..rhs.cols {
                out.set(self.rows + i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &CycMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block.get(i, j).clone());
            }
        }
    }

    /// `Some(c)` when the matrix equals `c * I`.
    pub fn as_scalar(&self) -> Option<Cyclotomic> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expect_zero = i != j;
                let v = self.get(i, j);
                if (expect_zero && !v.is_zero()) || (!expect_zero && *v != c) {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, &Cyclotomic)> {
        self.data.iter().enumerate().find(|(_, v)| !v.is_zero())
    }

    /// `Some(c)` with `self == c * other`, when such a scalar exists and `other != 0`.
    pub fn ratio_to(&self, other: &CycMatrix) -> Option<Cyclotomic> {
        let (idx, denom) = other.first_nonzero()?;
        let c = &self.data[idx] * &denom.inv()?;
        (other.scale(&c) == *self).then_some(c)
    }

    /// Basis of the right nullspace `{x : self * x = 0}`, exact Gaussian elimination.
    pub fn nullspace(&self) -> Vec<Vec<Cyclotomic>> {
        let mut m: Vec<Vec<Cyclotomic>> = self.row_vectors();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            let inv = m[r][c].inv().expect("pivot is nonzero");
            m[r] = m[r].iter().map(|x| x * &inv).collect();
            for i in 0..rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    let pivot_row = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(pivot_row.iter()) {
                        if !y.is_zero() {
                            *x = &*x - &(&f * y);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows {
                break;
            }
        }
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Cyclotomic::zero(); cols];
                v[f] = Cyclotomic::one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&m[i][f];
                }
                v
            })
            .collect()
    }
}

impl fmt::Display for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.row_vectors().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(Cyclotomic::symbolic).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: i64) -> Cyclotomic {
        Cyclotomic::omega_pow(k)
    }

    #[test]
    fn products_and_powers() {
        let p = CycMatrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        assert_eq!(p.pow(3), CycMatrix::identity(3));
        assert_ne!(p.pow(2), CycMatrix::identity(3));
        let d = CycMatrix::from_diagonal(&[w(1), Cyclotomic::one(), w(2)]);
        assert_eq!(d.pow(3), CycMatrix::identity(3));
        assert_eq!(d.trace(), Cyclotomic::zero());
    }

    #[test]
    fn kronecker_trace_is_multiplicative() {
        let a = CycMatrix::from_diagonal(&[w(1), w(2)]);
        let b = CycMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let k = a.kron(&b);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.trace(), &a.trace() * &b.trace());
    }

    #[test]
    fn scalar_detection() {
        assert_eq!(CycMatrix::scalar(3, &w(1)).as_scalar(), Some(w(1)));
        assert_eq!(CycMatrix::from_diagonal(&[w(1), w(2)]).as_scalar(), None);
        let m = CycMatrix::from_int_rows(&[&[0, 2], &[2, 0]]);
        let n = CycMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.ratio_to(&n), Some(Cyclotomic::from_integer(2)));
        assert_eq!(n.ratio_to(&CycMatrix::identity(2)), None);
    }

    #[test]
    fn nullspace_dimension() {
        // rank 1 over Q(w): rows are proportional
        let m = CycMatrix::from_rows(vec![vec![Cyclotomic::one(), w(1)], vec![w(2), Cyclotomic::one()]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        let v = CycMatrix::from_rows(ns[0].iter().map(|x| vec![x.clone()]).collect());
        assert_eq!(m.mul(&v), CycMatrix::zeros(2, 1));
        assert!(CycMatrix::identity(3).nullspace().is_empty());
        assert_eq!(CycMatrix::zeros(2, 3).nullspace().len(), 3);
    }
}
