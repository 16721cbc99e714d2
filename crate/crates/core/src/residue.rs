//! Matrices over the residue field (F_p or Q) with deterministic elimination.

use alloc::vec::Vec;

use crate::scalar::Residue;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResMat {
    rows: usize,
    cols: usize,
    entries: Vec<Residue>,
}

impl ResMat {
    pub fn new(rows: usize, cols: usize, entries: Vec<Residue>) -> ResMat {
        assert_eq!(entries.len(), rows * cols);
        ResMat {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Residue {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Residue) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Stacks the rows of several matrices with equal column counts.
    pub fn vstack(mats: &[&ResMat]) -> ResMat {
        assert!(!mats.is_empty());
        let cols = mats[0].cols;
        assert!(mats.iter().all(|m| m.cols == cols));
        let rows = mats.iter().map(|m| m.rows).sum();
        let mut entries = Vec::with_capacity(rows * cols);
        for m in mats {
            entries.extend(m.entries.iter().cloned());
        }
        ResMat {
            rows,
            cols,
            entries,
        }
    }

    /// Reduced row echelon form; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let mut pr = None;
            for r in row..self.rows {
                if !self.at(r, col).is_zero() {
                    pr = Some(r);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != row {
                for j in 0..self.cols {
                    let a = self.at(pr, j).clone();
                    let b = self.at(row, j).clone();
                    self.set(pr, j, b);
                    self.set(row, j, a);
                }
            }
            let inv = self.at(row, col).inv().unwrap();
            for j in 0..self.cols {
                let v = self.at(row, j).mul(&inv);
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row || self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for j in 0..self.cols {
                    let v = self.at(r, j).sub(&factor.mul(self.at(row, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.rref().len()
    }

    /// Echelonized basis of the right kernel, deterministic: one vector per
    /// free column, with a 1 in the free position.
    pub fn kernel_basis(&self) -> Vec<Vec<Residue>> {
        let mut work = self.clone();
        let pivots = work.rref();
        let zero = self
            .entries
            .first()
            .map(|e| e.zero_like())
            .expect("kernel of an empty matrix");
        let one = zero.one_like();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = alloc::vec![zero.clone(); self.cols];
            v[free] = one.clone();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = work.at(r, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }
}
