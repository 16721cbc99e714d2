//! Normal forms over local principal ideal rings: Smith decompositions over
//! Z/p^k and over exact DVR scalars, and the column-style Hermite form that
//! canonicalizes lattice generator matrices.
//!
//! Pivot rule everywhere: minimal valuation, ties broken row-major. This
//! keeps transforms reproducible across runs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::matrix::Matrix;
use crate::scalar::{Scalar, ScalarError};
use crate::valuation::Valuation;
use crate::zk::ZkRing;

/// Dense matrix over Z/p^k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZkMat {
    pub ring: ZkRing,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl ZkMat {
    pub fn new(ring: ZkRing, rows: usize, cols: usize, entries: Vec<u64>) -> ZkMat {
        assert_eq!(entries.len(), rows * cols);
        let entries = entries.into_iter().map(|e| e % ring.modulus).collect();
        ZkMat {
            ring,
            rows,
            cols,
            entries,
        }
    }

    pub fn zero(ring: ZkRing, rows: usize, cols: usize) -> ZkMat {
        ZkMat::new(ring, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(ring: ZkRing, d: usize) -> ZkMat {
        let mut m = ZkMat::zero(ring, d, d);
        for i in 0..d {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.cols + j] = v % self.ring.modulus;
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &ZkMat) -> ZkMat {
        assert_eq!(self.ring, other.ring);
        assert_eq!(self.cols, other.rows);
        let mut out = ZkMat::zero(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for t in 0..self.cols {
                    acc = self
                        .ring
                        .add(acc, self.ring.mul(self.at(i, t), other.at(t, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Entrywise reduction into Z/p^j for j <= k.
    pub fn reduce_depth(&self, j: u32) -> ZkMat {
        let ring = self.ring.truncated(j);
        ZkMat::new(ring, self.rows, self.cols, self.entries.clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn scale_row(&mut self, r: usize, c: u64) {
        for j in 0..self.cols {
            let v = self.ring.mul(self.at(r, j), c);
            self.set(r, j, v);
        }
    }

    /// row_r -= c * row_s
    fn row_axpy(&mut self, r: usize, s: usize, c: u64) {
        for j in 0..self.cols {
            let v = self
                .ring
                .sub(self.at(r, j), self.ring.mul(c, self.at(s, j)));
            self.set(r, j, v);
        }
    }

    /// col_c -= f * col_s
    fn col_axpy(&mut self, c: usize, s: usize, f: u64) {
        for i in 0..self.rows {
            let v = self
                .ring
                .sub(self.at(i, c), self.ring.mul(f, self.at(i, s)));
            self.set(i, c, v);
        }
    }

    /// Inverse over Z/p^k; `None` when the determinant is a non-unit.
    pub fn inverse(&self) -> Option<ZkMat> {
        assert_eq!(self.rows, self.cols);
        let d = self.rows;
        let ring = self.ring;
        let mut a = self.clone();
        let mut inv = ZkMat::identity(ring, d);
        for col in 0..d {
            let pivot = (col..d).find(|&r| ring.is_unit(a.at(r, col)))?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let piv_inv = ring.inv_unit(a.at(col, col));
            a.scale_row(col, piv_inv);
            inv.scale_row(col, piv_inv);
            for r in 0..d {
                if r == col || a.at(r, col) == 0 {
                    continue;
                }
                let f = a.at(r, col);
                a.row_axpy(r, col, f);
                inv.row_axpy(r, col, f);
            }
        }
        debug_assert_eq!(self.mul(&inv), ZkMat::identity(ring, d));
        Some(inv)
    }
}

impl fmt::Display for ZkMat {
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

/// Smith decomposition over Z/p^k: left * M * right = diag(p^v_1, ...).
/// Divisors with valuation >= k are zero in the ring and reported `Infinite`.
#[derive(Debug, Clone)]
pub struct SmithZk {
    pub divisor_valuations: Vec<Valuation>,
    pub left: ZkMat,
    pub right: ZkMat,
    pub diagonal: ZkMat,
}

pub fn smith_form_zk(m: &ZkMat) -> SmithZk {
    let ring = m.ring;
    let k = ring.k;
    let mut a = m.clone();
    let mut left = ZkMat::identity(ring, m.rows());
    let mut right = ZkMat::identity(ring, m.cols());
    let steps = m.rows().min(m.cols());
    let mut vals = Vec::with_capacity(steps);

    for t in 0..steps {
        // minimal-valuation pivot among the remaining block, ties row-major
        let mut pivot: Option<(usize, usize, u32)> = None;
        for i in t..m.rows() {
            for j in t..m.cols() {
                let v = ring.val(a.at(i, j));
                if v >= k {
                    continue;
                }
                if pivot.map(|(_, _, pv)| v < pv).unwrap_or(true) {
                    pivot = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, v)) = pivot else {
            // remaining block is zero
            for _ in t..steps {
                vals.push(Valuation::Infinite);
            }
            break;
        };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);

        // normalize the pivot to exactly p^v
        let unit = a.at(t, t) / ring.p.pow(v);
        let unit_inv = ring.inv_unit(unit);
        a.scale_row(t, unit_inv);
        left.scale_row(t, unit_inv);
        debug_assert_eq!(a.at(t, t), ring.p.pow(v) % ring.modulus);

        let pv = ring.p.pow(v);
        for r in t + 1..m.rows() {
            let e = a.at(r, t);
            if e == 0 {
                continue;
            }
            let c = ring.exact_div_pow_p(e, v);
            a.row_axpy(r, t, c);
            left.row_axpy(r, t, c);
        }
        for c in t + 1..m.cols() {
            let e = a.at(t, c);
            if e == 0 {
                continue;
            }
            debug_assert_eq!(e % pv, 0);
            let f = e / pv;
            a.col_axpy(c, t, f);
            right.col_axpy(c, t, f);
        }
        vals.push(Valuation::Finite(v as i64));
    }

    debug_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    debug_assert_eq!(
        left.mul(m).mul(&right),
        diag_from_vals(ring, m.rows(), m.cols(), &vals)
    );
    SmithZk {
        diagonal: diag_from_vals(ring, m.rows(), m.cols(), &vals),
        divisor_valuations: vals,
        left,
        right,
    }
}

fn diag_from_vals(ring: ZkRing, rows: usize, cols: usize, vals: &[Valuation]) -> ZkMat {
    let mut d = ZkMat::zero(ring, rows, cols);
    for (i, v) in vals.iter().enumerate() {
        if let Valuation::Finite(v) = v {
            d.set(i, i, ring.p.pow(*v as u32) % ring.modulus);
        }
    }
    d
}

/// Number of elementary divisors that are nonzero in the ring: the minimum
/// number of generators of the image module.
pub fn inner_rank(m: &ZkMat) -> usize {
    smith_form_zk(m)
        .divisor_valuations
        .iter()
        .filter(|v| !v.is_infinite())
        .count()
}

/// Largest rank of a free submodule of the kernel.
pub fn free_rank_kernel(m: &ZkMat) -> usize {
    m.cols() - inner_rank(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    pub inner_rank: usize,
    pub free_rank_kernel: usize,
    pub divisor_valuations: Vec<Valuation>,
}

pub fn rank_profile(m: &ZkMat) -> RankProfile {
    let snf = smith_form_zk(m);
    let inner = snf
        .divisor_valuations
        .iter()
        .filter(|v| !v.is_infinite())
        .count();
    RankProfile {
        inner_rank: inner,
        free_rank_kernel: m.cols() - inner,
        divisor_valuations: snf.divisor_valuations,
    }
}

/// Smith decomposition of a matrix over exact DVR scalars. Transforms are
/// integral with unit determinant; divisors are pi^v with v possibly
/// negative when the input is not integral, and `Infinite` for zero.
#[derive(Debug, Clone)]
pub struct SmithDvr {
    pub divisor_valuations: Vec<Valuation>,
    pub left: Matrix,
    pub right: Matrix,
}

pub fn smith_form_dvr(m: &Matrix) -> SmithDvr {
    let backend = m.backend();
    let mut a = m.clone();
    let mut left = Matrix::identity(backend, m.rows());
    let mut right = Matrix::identity(backend, m.cols());
    let steps = m.rows().min(m.cols());
    let mut vals = Vec::with_capacity(steps);

    for t in 0..steps {
        let mut pivot: Option<(usize, usize, i64)> = None;
        for i in t..m.rows() {
            for j in t..m.cols() {
                let Valuation::Finite(v) = a.at(i, j).valuation() else {
                    continue;
                };
                if pivot.map(|(_, _, pv)| v < pv).unwrap_or(true) {
                    pivot = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, v)) = pivot else {
            for _ in t..steps {
                vals.push(Valuation::Infinite);
            }
            break;
        };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);

        let pi_v = Scalar::uniformizer_pow(backend, v);
        let unit = a.at(t, t).div(&pi_v).unwrap();
        let unit_inv = Scalar::one(backend).div(&unit).unwrap();
        for j in 0..m.cols() {
            let x = a.at(t, j).mul(&unit_inv);
            a.set(t, j, x);
        }
        for j in 0..left.cols() {
            let x = left.at(t, j).mul(&unit_inv);
            left.set(t, j, x);
        }

        for r in t + 1..m.rows() {
            if a.at(r, t).is_zero() {
                continue;
            }
            let c = a.at(r, t).div(&pi_v).unwrap();
            debug_assert!(c.valuation() >= Valuation::Finite(0));
            for j in 0..m.cols() {
                let x = a.at(r, j).sub(&c.mul(a.at(t, j)));
                a.set(r, j, x);
            }
            for j in 0..left.cols() {
                let x = left.at(r, j).sub(&c.mul(left.at(t, j)));
                left.set(r, j, x);
            }
        }
        for cidx in t + 1..m.cols() {
            if a.at(t, cidx).is_zero() {
                continue;
            }
            let f = a.at(t, cidx).div(&pi_v).unwrap();
            for i in 0..m.rows() {
                let x = a.at(i, cidx).sub(&f.mul(a.at(i, t)));
                a.set(i, cidx, x);
            }
            for i in 0..right.rows() {
                let x = right.at(i, cidx).sub(&f.mul(right.at(i, t)));
                right.set(i, cidx, x);
            }
        }
        vals.push(Valuation::Finite(v));
    }

    debug_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    SmithDvr {
        divisor_valuations: vals,
        left,
        right,
    }
}

/// Column-style Hermite normal form over the valuation ring.
///
/// Input: d x m generator matrix of full row rank over the fraction field
/// (columns generate the lattice). Output: the canonical d x d form — lower
/// triangular, diagonal pi^(a_i), and every entry left of the diagonal in
/// row i reduced into the canonical representatives modulo pi^(a_i).
pub fn column_hermite(m: &Matrix) -> Result<Matrix, ScalarError> {
    // normalize to an integral matrix first: the Hermite form commutes with
    // homotheties, and the elimination below assumes entries in the
    // valuation ring
    match m.min_valuation() {
        Valuation::Infinite => return Err(ScalarError::SingularMatrix),
        Valuation::Finite(s) if s != 0 => {
            let h = column_hermite(&m.scale_uniformizer(-s))?;
            return Ok(h.scale_uniformizer(s));
        }
        Valuation::Finite(_) => {}
    }
    let backend = m.backend();
    let d = m.rows();
    if m.cols() < d {
        return Err(ScalarError::SingularMatrix);
    }
    let mut a = m.clone();
    for row in 0..d {
        let mut pivot: Option<(usize, i64)> = None;
        for j in row..a.cols() {
            let Valuation::Finite(v) = a.at(row, j).valuation() else {
                continue;
            };
            if pivot.map(|(_, pv)| v < pv).unwrap_or(true) {
                pivot = Some((j, v));
            }
        }
        let Some((pj, v)) = pivot else {
            return Err(ScalarError::SingularMatrix);
        };
        a.swap_cols(row, pj);

        // scale the pivot column by the inverse unit part: diagonal pi^v
        let pi_v = Scalar::uniformizer_pow(backend, v);
        let unit = a.at(row, row).div(&pi_v).unwrap();
        let unit_inv = Scalar::one(backend).div(&unit).unwrap();
        for i in row..d {
            let x = a.at(i, row).mul(&unit_inv);
            a.set(i, row, x);
        }

        // eliminate the rest of the row to the right
        for j in row + 1..a.cols() {
            if a.at(row, j).is_zero() {
                continue;
            }
            let c = a.at(row, j).div(&pi_v).unwrap();
            for i in row..d {
                let x = a.at(i, j).sub(&c.mul(a.at(i, row)));
                a.set(i, j, x);
            }
        }

        // reduce the entries left of the diagonal into canonical residues
        if v >= 0 {
            for j in 0..row {
                let entry = a.at(row, j).clone();
                let (rep, q) = entry.canonical_rep_mod(v as u32);
                if q.is_zero() {
                    continue;
                }
                for i in row..d {
                    let x = a.at(i, j).sub(&q.mul(a.at(i, row)));
                    a.set(i, j, x);
                }
                debug_assert_eq!(a.at(row, j), &rep);
            }
        }
    }

    // spare columns must have been exhausted
    for j in d..a.cols() {
        for i in 0..d {
            if !a.at(i, j).is_zero() {
                return Err(ScalarError::SingularMatrix);
            }
        }
    }
    Ok(Matrix::from_fn(backend, d, d, |i, j| a.at(i, j).clone()))
}

/// Hermite normal form of a square matrix invertible over the fraction field.
pub fn hermite_form(m: &Matrix) -> Result<Matrix, ScalarError> {
    if !m.is_square() {
        return Err(ScalarError::DimensionMismatch);
    }
    column_hermite(m)
}

/// Negative reduction exponents never appear for integral inputs; exposed for
/// the building layer, which canonicalizes after a homothety rescale.
pub fn min_finite_valuation(m: &Matrix) -> Option<i64> {
    m.min_valuation().finite()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::matrix_from_ints;
    use crate::scalar::Backend;

    fn zk(p: u64, k: u32) -> ZkRing {
        ZkRing::new(p, k).unwrap()
    }

    fn zkmat(p: u64, k: u32, rows: &[&[u64]]) -> ZkMat {
        let r = rows.len();
        let c = rows[0].len();
        let mut e = Vec::new();
        for row in rows {
            e.extend_from_slice(row);
        }
        ZkMat::new(zk(p, k), r, c, e)
    }

    #[test]
    fn smith_of_cokernel_example_matrix() {
        // over Z/9 the matrix [[2,3],[3,0]] has divisors (1, 9): one unit
        // divisor and one that vanishes in the ring
        let m = zkmat(3, 2, &[&[2, 3], &[3, 0]]);
        let snf = smith_form_zk(&m);
        assert_eq!(
            snf.divisor_valuations,
            vec![Valuation::Finite(0), Valuation::Infinite]
        );
        assert_eq!(inner_rank(&m), 1);
        assert_eq!(free_rank_kernel(&m), 1);
    }

    #[test]
    fn smith_of_identity() {
        let m = ZkMat::identity(zk(2, 3), 3);
        let snf = smith_form_zk(&m);
        assert!(snf
            .divisor_valuations
            .iter()
            .all(|v| *v == Valuation::Finite(0)));
    }

    #[test]
    fn smith_of_scaled_diagonal() {
        let m = zkmat(3, 2, &[&[3, 0], &[0, 3]]);
        let snf = smith_form_zk(&m);
        assert_eq!(
            snf.divisor_valuations,
            vec![Valuation::Finite(1), Valuation::Finite(1)]
        );
    }

    #[test]
    fn inner_rank_examples() {
        assert_eq!(inner_rank(&zkmat(2, 3, &[&[0, 0], &[0, 0]])), 0);
        assert_eq!(free_rank_kernel(&zkmat(2, 3, &[&[0, 0], &[0, 0]])), 2);
        // over Z/4: integer Smith form diag(1, 2), both nonzero in the ring
        assert_eq!(inner_rank(&zkmat(2, 2, &[&[2, 0], &[0, 1]])), 2);
    }

    #[test]
    fn smith_reconstruction_zk() {
        let m = zkmat(2, 3, &[&[4, 6, 1], &[2, 0, 5], &[7, 3, 2]]);
        let snf = smith_form_zk(&m);
        assert_eq!(snf.left.mul(&m).mul(&snf.right), snf.diagonal);
    }

    #[test]
    fn hermite_fig1_style_examples() {
        let b = Backend::padic(2).unwrap();
        let m = matrix_from_ints(b, &[&[4, 0], &[2, 4]]);
        assert_eq!(hermite_form(&m).unwrap(), m);

        let id = Matrix::identity(b, 3);
        assert_eq!(hermite_form(&id).unwrap(), id);

        let m = matrix_from_ints(b, &[&[1, 0], &[5, 4]]);
        let expect = matrix_from_ints(b, &[&[1, 0], &[1, 4]]);
        assert_eq!(hermite_form(&m).unwrap(), expect);
    }

    #[test]
    fn hermite_rejects_singular() {
        let b = Backend::padic(2).unwrap();
        let m = matrix_from_ints(b, &[&[1, 2], &[2, 4]]);
        assert!(matches!(hermite_form(&m), Err(ScalarError::SingularMatrix)));
    }

    #[test]
    fn dvr_smith_on_rational_matrix() {
        let b = Backend::padic(2).unwrap();
        let m = matrix_from_ints(b, &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 8]]);
        let snf = smith_form_dvr(&m);
        assert_eq!(
            snf.divisor_valuations,
            vec![
                Valuation::Finite(0),
                Valuation::Finite(1),
                Valuation::Finite(3)
            ]
        );
        // reconstruction: left * m * right is diagonal with those valuations
        let prod = snf.left.mul(&m).unwrap().mul(&snf.right).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert_eq!(prod.at(i, j).valuation(), snf.divisor_valuations[i]);
                } else {
                    assert!(prod.at(i, j).is_zero());
                }
            }
        }
    }
}
