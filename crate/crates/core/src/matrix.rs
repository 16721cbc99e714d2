//! Dense matrices over the exact valued scalars.
//!
//! Carrier for lattice generators and the map matrices of the Mustafin
//! computations. All entries of one matrix share a backend.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::residue::ResMat;
use crate::scalar::{Backend, Scalar, ScalarError};
use crate::valuation::Valuation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    backend: Backend,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(
        backend: Backend,
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
    ) -> Result<Matrix, ScalarError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(ScalarError::DimensionMismatch);
        }
        if entries.iter().any(|e| e.backend() != backend) {
            return Err(ScalarError::BackendMismatch);
        }
        Ok(Matrix {
            backend,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        backend: Backend,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix::new(backend, rows, cols, entries).expect("from_fn entries share the backend")
    }

    pub fn identity(backend: Backend, d: usize) -> Matrix {
        Matrix::from_fn(backend, d, d, |i, j| {
            if i == j {
                Scalar::one(backend)
            } else {
                Scalar::zero(backend)
            }
        })
    }

    pub fn diagonal(backend: Backend, diag: &[Scalar]) -> Result<Matrix, ScalarError> {
        let d = diag.len();
        if diag.iter().any(|e| e.backend() != backend) {
            return Err(ScalarError::BackendMismatch);
        }
        Ok(Matrix::from_fn(backend, d, d, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                Scalar::zero(backend)
            }
        }))
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.backend(), self.backend);
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.backend, self.cols, self.rows, |i, j| {
            self.at(j, i).clone()
        })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, ScalarError> {
        if self.backend != other.backend {
            return Err(ScalarError::BackendMismatch);
        }
        if self.cols != other.rows {
            return Err(ScalarError::DimensionMismatch);
        }
        Ok(Matrix::from_fn(
            self.backend,
            self.rows,
            other.cols,
            |i, j| {
                let mut acc = Scalar::zero(self.backend);
                for t in 0..self.cols {
                    acc = acc.add(&self.at(i, t).mul(other.at(t, j)));
                }
                acc
            },
        ))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        assert_eq!(c.backend(), self.backend);
        Matrix::from_fn(self.backend, self.rows, self.cols, |i, j| {
            self.at(i, j).mul(c)
        })
    }

    /// Scaling by pi^m.
    pub fn scale_uniformizer(&self, m: i64) -> Matrix {
        self.scale(&Scalar::uniformizer_pow(self.backend, m))
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &Matrix) -> Result<Matrix, ScalarError> {
        if self.backend != other.backend {
            return Err(ScalarError::BackendMismatch);
        }
        if self.rows != other.rows {
            return Err(ScalarError::DimensionMismatch);
        }
        Ok(Matrix::from_fn(
            self.backend,
            self.rows,
            self.cols + other.cols,
            |i, j| {
                if j < self.cols {
                    self.at(i, j).clone()
                } else {
                    other.at(i, j - self.cols).clone()
                }
            },
        ))
    }

    /// Minimum valuation over all entries; `Infinite` for the zero matrix.
    pub fn min_valuation(&self) -> Valuation {
        self.entries
            .iter()
            .map(|e| e.valuation())
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Saturation: the minimal entry valuation s and pi^(-s) * self, whose
    /// minimum entry valuation is 0.
    pub fn saturate(&self) -> Result<(i64, Matrix), ScalarError> {
        match self.min_valuation() {
            Valuation::Infinite => Err(ScalarError::ZeroMatrix),
            Valuation::Finite(s) => {
                let scaled = self.scale_uniformizer(-s);
                debug_assert_eq!(scaled.min_valuation(), Valuation::Finite(0));
                Ok((s, scaled))
            }
        }
    }

    /// True when every entry lies in the valuation ring.
    pub fn is_integral(&self) -> bool {
        self.min_valuation() >= Valuation::Finite(0)
    }

    /// Entrywise reduction to the residue field; requires integrality.
    pub fn residue_matrix(&self) -> Result<ResMat, ScalarError> {
        let mut out = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            out.push(e.residue()?);
        }
        Ok(ResMat::new(self.rows, self.cols, out))
    }

    /// Exact inverse over the fraction field by Gauss-Jordan elimination.
    /// Pivots take the entry of minimal valuation, ties row-major.
    pub fn inverse(&self) -> Result<Matrix, ScalarError> {
        if !self.is_square() {
            return Err(ScalarError::DimensionMismatch);
        }
        let d = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(self.backend, d);
        for col in 0..d {
            let mut pivot: Option<(usize, Valuation)> = None;
            for r in col..d {
                let v = a.at(r, col).valuation();
                if v.is_infinite() {
                    continue;
                }
                if pivot.map(|(_, pv)| v < pv).unwrap_or(true) {
                    pivot = Some((r, v));
                }
            }
            let (pr, _) = pivot.ok_or(ScalarError::SingularMatrix)?;
            if pr != col {
                a.swap_rows(pr, col);
                inv.swap_rows(pr, col);
            }
            let pv = a.at(col, col).clone();
            for j in 0..d {
                let na = a.at(col, j).div(&pv)?;
                a.set(col, j, na);
                let ni = inv.at(col, j).div(&pv)?;
                inv.set(col, j, ni);
            }
            for r in 0..d {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone();
                for j in 0..d {
                    let na = a.at(r, j).sub(&factor.mul(a.at(col, j)));
                    a.set(r, j, na);
                    let ni = inv.at(r, j).sub(&factor.mul(inv.at(col, j)));
                    inv.set(r, j, ni);
                }
            }
        }
        Ok(inv)
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

    /// Rank over the fraction field.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..a.cols {
            let mut pr = None;
            for r in row..a.rows {
                if !a.at(r, col).is_zero() {
                    pr = Some(r);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            a.swap_rows(pr, row);
            let pv = a.at(row, col).clone();
            for r in row + 1..a.rows {
                if a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).div(&pv).unwrap();
                for j in col..a.cols {
                    let nv = a.at(r, j).sub(&factor.mul(a.at(row, j)));
                    a.set(r, j, nv);
                }
            }
            rank += 1;
            row += 1;
            if row == a.rows {
                break;
            }
        }
        rank
    }

    /// Lexicographic order on entries, for stable canonical listings.
    pub fn canonical_cmp(&self, other: &Matrix) -> Ordering {
        self.rows
            .cmp(&other.rows)
            .then(self.cols.cmp(&other.cols))
            .then_with(|| {
                for (a, b) in self.entries.iter().zip(other.entries.iter()) {
                    match a.canonical_cmp(b) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Builds a matrix over the chosen backend from integer entries.
pub fn matrix_from_ints(backend: Backend, rows: &[&[i64]]) -> Matrix {
    let r = rows.len();
    let c = rows[0].len();
    Matrix::from_fn(backend, r, c, |i, j| Scalar::from_int(backend, rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::QPoly;
    use num_rational::BigRational;
    use num_traits::One;

    fn tadic_t_pow(e: usize) -> Scalar {
        Scalar::tadic_from_polys(QPoly::monomial(BigRational::one(), e), QPoly::one()).unwrap()
    }

    #[test]
    fn saturate_padic_example() {
        let b = Backend::padic(2).unwrap();
        let m = matrix_from_ints(b, &[&[2, 4], &[4, 0]]);
        let (s, m2) = m.saturate().unwrap();
        assert_eq!(s, 1);
        assert_eq!(m2, matrix_from_ints(b, &[&[1, 2], &[2, 0]]));
    }

    #[test]
    fn saturate_tadic_diagonals() {
        let already = Matrix::diagonal(
            Backend::Tadic,
            &[tadic_t_pow(2), tadic_t_pow(1), tadic_t_pow(0)],
        )
        .unwrap();
        let (s, m2) = already.saturate().unwrap();
        assert_eq!(s, 0);
        assert_eq!(m2, already);

        let deeper = Matrix::diagonal(Backend::Tadic, &[tadic_t_pow(2), tadic_t_pow(3)]).unwrap();
        let (s, m2) = deeper.saturate().unwrap();
        assert_eq!(s, 2);
        assert_eq!(
            m2,
            Matrix::diagonal(Backend::Tadic, &[tadic_t_pow(0), tadic_t_pow(1)]).unwrap()
        );
    }

    #[test]
    fn saturate_rejects_zero() {
        let b = Backend::padic(3).unwrap();
        let m = matrix_from_ints(b, &[&[0, 0], &[0, 0]]);
        assert!(matches!(m.saturate(), Err(ScalarError::ZeroMatrix)));
    }

    #[test]
    fn inverse_round_trip() {
        let b = Backend::padic(2).unwrap();
        let m = matrix_from_ints(b, &[&[1, 2], &[3, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(b, 2));
    }

    #[test]
    fn singular_matrix_detected() {
        let b = Backend::padic(2).unwrap();
        let m = matrix_from_ints(b, &[&[1, 2], &[2, 4]]);
        assert!(matches!(m.inverse(), Err(ScalarError::SingularMatrix)));
        assert_eq!(m.rank(), 1);
    }
}
