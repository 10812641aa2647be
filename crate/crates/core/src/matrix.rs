//! Dense matrices over a prime field with exact Gaussian elimination.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{inv_mod, mul_mod};

#[derive(Clone, PartialEq, Eq)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<u64>,
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ModMatrix {}x{} mod {}", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> ModMatrix {
        ModMatrix {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, p: u64) -> ModMatrix {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>], p: u64) -> ModMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c, p);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.data[i * c + j] = x % p;
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<u64>], p: u64) -> ModMatrix {
        let mut m = Self::zeros(rows, columns.len(), p);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn from_signed_rows(rows: &[Vec<i64>], p: u64) -> ModMatrix {
        let conv: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
            .collect();
        Self::from_rows(&conv, p)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: u64) {
        self.data[r * self.cols + c] = x % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn trace(&self) -> u64 {
        (0..self.rows.min(self.cols)).fold(0, |acc, i| (acc + self.get(i, i)) % self.p)
    }

    pub fn transpose(&self) -> ModMatrix {
        let mut t = Self::zeros(self.cols, self.rows, self.p);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, rhs: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, rhs.rows, "shapes do not compose");
        assert_eq!(self.p, rhs.p);
        let p = self.p;
        let mut out = Self::zeros(self.rows, rhs.cols, p);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                let orow = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rhs.row(k)) {
                    if b != 0 {
                        *o = (*o + mul_mod(a, b, p)) % p;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| (acc + mul_mod(a, b, self.p)) % self.p)
            })
            .collect()
    }

    pub fn add(&self, rhs: &ModMatrix) -> ModMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&rhs.data) {
            *o = (*o + b) % self.p;
        }
        out
    }

    pub fn sub(&self, rhs: &ModMatrix) -> ModMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&rhs.data) {
            *o = (*o + self.p - b) % self.p;
        }
        out
    }

    pub fn scale(&self, s: u64) -> ModMatrix {
        let mut out = self.clone();
        for o in &mut out.data {
            *o = mul_mod(*o, s, self.p);
        }
        out
    }

    /// Adds `s * rhs` in place.
    pub fn add_scaled(&mut self, rhs: &ModMatrix, s: u64) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        if s == 0 {
            return;
        }
        for (o, &b) in self.data.iter_mut().zip(&rhs.data) {
            if b != 0 {
                *o = (*o + mul_mod(b, s, self.p)) % self.p;
            }
        }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ModMatrix {
        let mut out = Self::zeros(rows.len(), cols.len(), self.p);
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.data[i * cols.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &ModMatrix) -> ModMatrix {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols, self.p);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..rhs.cols {
                out.set(r, self.cols + c, rhs.get(r, c));
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (ModMatrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = inv_mod(m.get(row, col), p);
            for c in col..m.cols {
                let v = mul_mod(m.get(row, c), inv, p);
                m.data[row * m.cols + c] = v;
            }
            let pivot_row: Vec<u64> = m.row(row).to_vec();
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col);
                if f == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let sub = mul_mod(f, pivot_row[c], p);
                    let idx = r * m.cols + c;
                    m.data[idx] = (m.data[idx] + p - sub) % p;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}` as the columns of a `cols × k` matrix.
    pub fn kernel(&self) -> ModMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(self.cols, free.len(), self.p);
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, (self.p - r.get(i, f)) % self.p);
            }
        }
        basis
    }

    /// Some `x` with `A x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&ModMatrix::from_columns(self.rows, &[b.to_vec()], self.p));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Some(x)
    }

    /// Solves `A X = B` column by column.
    pub fn solve_matrix(&self, b: &ModMatrix) -> Option<ModMatrix> {
        let cols: Option<Vec<Vec<u64>>> = b.columns().iter().map(|c| self.solve(c)).collect();
        Some(ModMatrix::from_columns(self.cols, &cols?, self.p))
    }

    pub fn inverse(&self) -> Result<ModMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let aug = self.hstack(&ModMatrix::identity(n, self.p));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::SingularMatrix);
        }
        Ok(r.select(&(0..n).collect::<Vec<_>>(), &(n..2 * n).collect::<Vec<_>>()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u64 = 103;

    #[test]
    fn rank_examples() {
        assert_eq!(ModMatrix::identity(5, P).rank(), 5);
        assert_eq!(ModMatrix::zeros(3, 4, P).rank(), 0);
        // the generator b of the binary dihedral group in its 2-dim representation
        let b = ModMatrix::from_signed_rows(&[vec![0, -1], vec![1, 0]], P);
        assert_eq!(b.rank(), 2);
        let inv = b.inverse().unwrap();
        assert_eq!(b.mul(&inv), ModMatrix::identity(2, P));
    }

    #[test]
    fn singular_inverse() {
        let m = ModMatrix::from_rows(&[vec![1, 2], vec![2, 4]], P);
        assert_eq!(m.inverse(), Err(Error::SingularMatrix));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_inconsistent() {
        let m = ModMatrix::from_rows(&[vec![1, 1], vec![1, 1]], P);
        assert!(m.solve(&[1, 2]).is_none());
        let x = m.solve(&[3, 3]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![3, 3]);
    }

    fn arb_matrix() -> impl Strategy<Value = ModMatrix> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(0u64..4, c), r)
                .prop_map(|rows| ModMatrix::from_rows(&rows, P))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
            prop_assert!(m.mul(&k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn inverse_when_full_rank(m in arb_matrix()) {
            if m.rows() == m.cols() && m.rank() == m.rows() {
                let inv = m.inverse().unwrap();
                prop_assert_eq!(m.mul(&inv), ModMatrix::identity(m.rows(), P));
            }
        }
    }
}
