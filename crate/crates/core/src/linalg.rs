//! Dense matrices over the Gaussian rationals: reduced row echelon form,
//! rank, and nullspace. Entries stay exact throughout.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::gaussian::GaussianRational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![GaussianRational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let n = rows.len();
        Self { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussianRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussianRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[GaussianRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Stacks `other` below `self`.
    pub fn vstack(mut self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        self.data.extend_from_slice(&other.data);
        self.rows += other.rows;
        self
    }

    /// Gauss–Jordan elimination in place. Returns the pivot columns; the
    /// first `pivots.len()` rows are the nonzero rows of the RREF.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).inv().expect("pivot is nonzero");
            for k in c..self.cols {
                let v = self.get(r, k) * &inv;
                self.set(r, k, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for k in c..self.cols {
                    if self.get(r, k).is_zero() {
                        continue;
                    }
                    let v = self.get(i, k) - &(&f * self.get(r, k));
                    self.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column, with a 1 in that
    /// column.
    pub fn nullspace(&self) -> Vec<Vec<GaussianRational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![GaussianRational::zero(); self.cols];
                x[f] = GaussianRational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = -m.get(r, f);
                }
                x
            })
            .collect()
    }

    /// Reduced row echelon basis of the row space of `vectors`.
    pub fn echelon_basis(vectors: Vec<Vec<GaussianRational>>, cols: usize) -> Vec<Vec<GaussianRational>> {
        if vectors.is_empty() {
            return Vec::new();
        }
        let mut m = Matrix::from_rows(vectors);
        debug_assert_eq!(m.cols, cols);
        let rank = m.rref().len();
        (0..rank).map(|r| m.row(r).to_vec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect())
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]).rank(), 2);
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank(), 0);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 7, 9]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for x in &ns {
            for r in 0..a.rows() {
                let dot = a.row(r).iter().zip(x).fold(GaussianRational::zero(), |acc, (u, v)| acc + u * v);
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn complex_pivots() {
        let i = GaussianRational::i();
        let one = GaussianRational::one();
        // [[i, 1], [1, -i]] has rank 1: row2 = -i * row1.
        let a = Matrix::from_rows(vec![vec![i.clone(), one.clone()], vec![one, -&i]]);
        assert_eq!(a.rank(), 1);
        let ns = a.nullspace();
        assert_eq!(ns, vec![vec![i, GaussianRational::one()]]);
    }
}
