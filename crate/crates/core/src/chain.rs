//! Finite chain rings Z/p^k and their unramified extensions GR(p^k, n):
//! Frobenius, trace and norm, Teichmüller representatives, pi-adic digit
//! expansions, Moore matrices, dual bases and the integral-basis test.
//!
//! A ring descriptor is built deterministically: the lexicographically least
//! monic irreducible polynomial of degree n over F_p is lifted to the unique
//! monic divisor of x^(p^n - 1) - 1 over Z/p^k congruent to it mod p. The
//! class of x is then a Teichmüller element generating the extension.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::zk::{is_prime_u64, ZkRing};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainError {
    NotPrime { p: u64 },
    UnsupportedSize,
    SingularMooreMatrix,
    NotIntegralBasis,
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainError::NotPrime { p } => write!(f, "{p} is not prime"),
            ChainError::UnsupportedSize => {
                write!(f, "ring parameters exceed the supported desk scale")
            }
            ChainError::SingularMooreMatrix => {
                write!(f, "Moore matrix has non-unit determinant")
            }
            ChainError::NotIntegralBasis => write!(f, "vector is not an integral basis"),
        }
    }
}

impl core::error::Error for ChainError {}

/// Identity stamp of a canonical ring descriptor. Two descriptors with equal
/// stamps are equal, since construction is deterministic in (p, k, n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingId {
    pub p: u64,
    pub k: u32,
    pub n: usize,
}

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GR({}^{}, {})", self.p, self.k, self.n)
    }
}

/// Element of GR(p^k, n): coordinates in the power basis 1, xi, ..., xi^(n-1),
/// constant term first, residues mod p^k.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrElem {
    pub coeffs: Vec<u64>,
}

impl GrElem {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// The Galois ring GR(p^k, n) together with its precomputed structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisRing {
    pub zk: ZkRing,
    pub n: usize,
    /// Monic basic irreducible of degree n, constant term first, length n+1.
    pub modulus: Vec<u64>,
    /// Coordinates of xi^(n+i) for i in 0..n-1.
    reduction: Vec<Vec<u64>>,
    /// sigma_table[j][i] = coordinates of sigma^j(xi^i).
    sigma_table: Vec<Vec<Vec<u64>>>,
}

const MAX_RESIDUE_ORDER: u64 = 1 << 16;
const MAX_RING_ORDER_LOG2: u32 = 48;

impl GaloisRing {
    /// Deterministic construction of GR(p^k, n); Z/p^k when n = 1.
    pub fn new(p: u64, k: u32, n: usize) -> Result<GaloisRing, ChainError> {
        if !is_prime_u64(p) {
            return Err(ChainError::NotPrime { p });
        }
        if k == 0 || n == 0 {
            return Err(ChainError::UnsupportedSize);
        }
        let zk = ZkRing::new(p, k).ok_or(ChainError::UnsupportedSize)?;
        if zk.modulus.leading_zeros() < 64 - MAX_RING_ORDER_LOG2 {
            return Err(ChainError::UnsupportedSize);
        }
        let residue_order = p
            .checked_pow(n as u32)
            .filter(|&q| q <= MAX_RESIDUE_ORDER)
            .ok_or(ChainError::UnsupportedSize)?;

        if n == 1 {
            // degree-1 convention: basic irreducible x - 1
            let modulus = vec![zk.neg(1), 1];
            return Ok(GaloisRing::from_modulus(zk, 1, modulus));
        }

        let fbar = least_irreducible(p, n);
        // work in a provisional ring on a naive lift to locate the
        // Teichmüller generator and its minimal polynomial
        let provisional = GaloisRing::from_modulus(zk, n, fbar.clone());
        let mut xi = provisional.xi();
        for _ in 0..k {
            xi = provisional.pow(&xi, residue_order);
        }
        assert_eq!(
            provisional.pow(&xi, residue_order),
            xi,
            "Teichmüller iteration did not stabilize"
        );

        // h(X) = prod over conjugates (X - xi^(p^i)); coefficients land in Z/p^k
        let mut h = vec![provisional.one()];
        for i in 0..n {
            let conj = provisional.pow(&xi, p.pow(i as u32) % (residue_order - 1).max(1));
            let neg_conj = provisional.neg(&conj);
            let mut next = vec![provisional.zero(); h.len() + 1];
            for (d, c) in h.iter().enumerate() {
                next[d + 1] = provisional.add(&next[d + 1], c);
                next[d] = provisional.add(&next[d], &provisional.mul(c, &neg_conj));
            }
            h = next;
        }
        let mut modulus = Vec::with_capacity(n + 1);
        for c in &h {
            assert!(
                c.coeffs[1..].iter().all(|&x| x == 0),
                "basic irreducible coefficient escaped the base ring"
            );
            modulus.push(c.coeffs[0]);
        }
        assert_eq!(modulus[n], 1, "basic irreducible is monic");
        for i in 0..=n {
            assert_eq!(modulus[i] % p, fbar[i] % p, "lift is congruent mod p");
        }
        assert!(
            divides_cyclotomic_like(&zk, &modulus, residue_order - 1),
            "basic irreducible divides x^(p^n - 1) - 1"
        );
        Ok(GaloisRing::from_modulus(zk, n, modulus))
    }

    fn from_modulus(zk: ZkRing, n: usize, modulus: Vec<u64>) -> GaloisRing {
        assert_eq!(modulus.len(), n + 1);
        assert_eq!(modulus[n], 1);
        // reduction table for xi^n .. xi^(2n-2)
        let mut reduction: Vec<Vec<u64>> = Vec::with_capacity(n.saturating_sub(1).max(1));
        let mut top: Vec<u64> = (0..n).map(|i| zk.neg(modulus[i])).collect();
        reduction.push(top.clone());
        for _ in 1..n.max(1) - 1 {
            // multiply by xi: shift and fold the overflowing coordinate
            let carry = top[n - 1];
            let mut next = vec![0u64; n];
            for i in (1..n).rev() {
                next[i] = top[i - 1];
            }
            for i in 0..n {
                next[i] = zk.add(next[i], zk.mul(carry, reduction[0][i]));
            }
            top = next.clone();
            reduction.push(next);
        }

        let mut ring = GaloisRing {
            zk,
            n,
            modulus,
            reduction,
            sigma_table: Vec::new(),
        };
        ring.sigma_table = ring.build_sigma_tables();
        ring
    }

    fn build_sigma_tables(&self) -> Vec<Vec<Vec<u64>>> {
        let n = self.n;
        let mut tables = Vec::with_capacity(n);
        for j in 0..n {
            let mut table = Vec::with_capacity(n);
            if n == 1 {
                table.push(vec![1]);
            } else {
                let group_order = self.zk.p.pow(n as u32) - 1;
                let exp = mod_pow_u64(self.zk.p, j as u64, group_order);
                let sigma_xi = self.pow(&self.xi(), exp);
                let mut acc = self.one();
                for _ in 0..n {
                    table.push(acc.coeffs.clone());
                    acc = self.mul(&acc, &sigma_xi);
                }
            }
            tables.push(table);
        }
        tables
    }

    pub fn id(&self) -> RingId {
        RingId {
            p: self.zk.p,
            k: self.zk.k,
            n: self.n,
        }
    }

    pub fn p(&self) -> u64 {
        self.zk.p
    }

    pub fn depth(&self) -> u32 {
        self.zk.k
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Order of the ring, p^(k n), if it fits in u64.
    pub fn order(&self) -> Option<u64> {
        self.zk.modulus.checked_pow(self.n as u32)
    }

    pub fn zero(&self) -> GrElem {
        GrElem {
            coeffs: vec![0; self.n],
        }
    }

    pub fn one(&self) -> GrElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, c: u64) -> GrElem {
        let mut coeffs = vec![0; self.n];
        coeffs[0] = c % self.zk.modulus;
        GrElem { coeffs }
    }

    pub fn from_i64(&self, c: i64) -> GrElem {
        let mut coeffs = vec![0; self.n];
        coeffs[0] = self.zk.reduce_i64(c);
        GrElem { coeffs }
    }

    /// The distinguished Teichmüller generator: the class of x.
    pub fn xi(&self) -> GrElem {
        if self.n == 1 {
            return self.one();
        }
        let mut coeffs = vec![0; self.n];
        coeffs[1] = 1;
        GrElem { coeffs }
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> GrElem {
        assert_eq!(coeffs.len(), self.n, "coefficient vector length mismatch");
        GrElem {
            coeffs: coeffs.iter().map(|&c| c % self.zk.modulus).collect(),
        }
    }

    pub fn add(&self, a: &GrElem, b: &GrElem) -> GrElem {
        GrElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.zk.add(x, y))
                .collect(),
        }
    }

    pub fn sub(&self, a: &GrElem, b: &GrElem) -> GrElem {
        GrElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.zk.sub(x, y))
                .collect(),
        }
    }

    pub fn neg(&self, a: &GrElem) -> GrElem {
        GrElem {
            coeffs: a.coeffs.iter().map(|&x| self.zk.neg(x)).collect(),
        }
    }

    pub fn mul(&self, a: &GrElem, b: &GrElem) -> GrElem {
        let n = self.n;
        if n == 1 {
            return GrElem {
                coeffs: vec![self.zk.mul(a.coeffs[0], b.coeffs[0])],
            };
        }
        let mut conv = vec![0u64; 2 * n - 1];
        for i in 0..n {
            if a.coeffs[i] == 0 {
                continue;
            }
            for j in 0..n {
                conv[i + j] = self
                    .zk
                    .add(conv[i + j], self.zk.mul(a.coeffs[i], b.coeffs[j]));
            }
        }
        let mut out: Vec<u64> = conv[..n].to_vec();
        for i in 0..n - 1 {
            if conv[n + i] == 0 {
                continue;
            }
            for t in 0..n {
                out[t] = self
                    .zk
                    .add(out[t], self.zk.mul(conv[n + i], self.reduction[i][t]));
            }
        }
        GrElem { coeffs: out }
    }

    pub fn scale(&self, c: u64, a: &GrElem) -> GrElem {
        GrElem {
            coeffs: a.coeffs.iter().map(|&x| self.zk.mul(c, x)).collect(),
        }
    }

    pub fn pow(&self, base: &GrElem, mut exp: u64) -> GrElem {
        let mut acc = self.one();
        let mut base = base.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Element valuation: the largest j <= k with x in p^j S; k exactly for 0.
    pub fn val(&self, a: &GrElem) -> u32 {
        a.coeffs.iter().map(|&c| self.zk.val(c)).min().unwrap()
    }

    pub fn is_unit(&self, a: &GrElem) -> bool {
        self.val(a) == 0
    }

    /// Inverse of a unit: residue-field inverse lifted by Newton steps.
    pub fn inv_unit(&self, a: &GrElem) -> GrElem {
        assert!(self.is_unit(a), "attempted to invert a non-unit");
        // inverse in the residue field via x^(p^n - 2)
        let q = self.zk.p.pow(self.n as u32);
        let mut inv = self.pow(a, q - 2);
        if self.zk.k > 1 {
            // x^(q-2) inverts only mod p; refine: inv <- inv (2 - a inv)
            let two = self.from_u64(2);
            let mut bits = 1;
            while bits < self.zk.k {
                let t = self.sub(&two, &self.mul(a, &inv));
                inv = self.mul(&inv, &t);
                bits *= 2;
            }
        }
        debug_assert_eq!(self.mul(a, &inv), self.one());
        inv
    }

    /// Frobenius power sigma^j; sigma(xi) = xi^p, sigma^n = id.
    pub fn frobenius(&self, a: &GrElem, j: usize) -> GrElem {
        let j = j % self.n;
        if j == 0 {
            return a.clone();
        }
        let table = &self.sigma_table[j];
        let mut out = vec![0u64; self.n];
        for (i, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for t in 0..self.n {
                out[t] = self.zk.add(out[t], self.zk.mul(c, table[i][t]));
            }
        }
        GrElem { coeffs: out }
    }

    /// Trace and norm down to Z/p^k: sum resp. product of all conjugates.
    /// Both land in the fixed subring (checked).
    pub fn trace_norm(&self, a: &GrElem) -> (GrElem, GrElem) {
        let mut tr = self.zero();
        let mut nm = self.one();
        for j in 0..self.n {
            let conj = self.frobenius(a, j);
            tr = self.add(&tr, &conj);
            nm = self.mul(&nm, &conj);
        }
        assert!(self.in_base_ring(&tr), "trace lies in the base ring");
        assert!(self.in_base_ring(&nm), "norm lies in the base ring");
        (tr, nm)
    }

    pub fn trace(&self, a: &GrElem) -> GrElem {
        self.trace_norm(a).0
    }

    pub fn norm(&self, a: &GrElem) -> GrElem {
        self.trace_norm(a).1
    }

    /// Whether the element lies in the canonical copy of Z/p^k.
    pub fn in_base_ring(&self, a: &GrElem) -> bool {
        a.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Residue-field coordinates (mod p) of an element.
    pub fn residue_coeffs(&self, a: &GrElem) -> Vec<u64> {
        a.coeffs.iter().map(|&c| c % self.zk.p).collect()
    }

    /// The unique Teichmüller representative above a residue-field element
    /// (coordinates mod p): the fixed point of y -> y^(p^n) over the lift.
    pub fn teichmuller_lift(&self, residue: &[u64]) -> GrElem {
        assert_eq!(residue.len(), self.n);
        let q = self.zk.p.pow(self.n as u32);
        let mut y = self.from_coeffs(residue);
        for _ in 0..self.zk.k {
            y = self.pow(&y, q);
        }
        debug_assert_eq!(self.pow(&y, q), y);
        debug_assert_eq!(
            self.residue_coeffs(&y),
            residue.iter().map(|&c| c % self.zk.p).collect::<Vec<_>>()
        );
        y
    }

    /// The pi-adic expansion x = sum digit_i p^i with Teichmüller digits,
    /// as k elements of this ring.
    pub fn pi_digits(&self, a: &GrElem) -> Vec<GrElem> {
        let mut digits = Vec::with_capacity(self.zk.k as usize);
        let mut v = a.clone();
        for _ in 0..self.zk.k {
            let digit = self.teichmuller_lift(&self.residue_coeffs(&v));
            let diff = self.sub(&v, &digit);
            v = GrElem {
                coeffs: diff
                    .coeffs
                    .iter()
                    .map(|&c| self.zk.exact_div_pow_p(c, 1))
                    .collect(),
            };
            digits.push(digit);
        }
        debug_assert_eq!(&self.digits_assemble(&digits), a);
        digits
    }

    /// Inverse of `pi_digits`: sum digit_i p^i.
    pub fn digits_assemble(&self, digits: &[GrElem]) -> GrElem {
        let mut acc = self.zero();
        let mut scale = 1u64 % self.zk.modulus;
        for d in digits {
            acc = self.add(&acc, &self.scale(scale, d));
            scale = self.zk.mul(scale, self.zk.p);
        }
        acc
    }

    /// Entrywise reduction into the canonical depth-j descriptor.
    pub fn truncated(&self, j: u32) -> GaloisRing {
        assert!(j >= 1 && j <= self.zk.k);
        let zk = self.zk.truncated(j);
        let modulus = self.modulus.iter().map(|&c| c % zk.modulus).collect();
        GaloisRing::from_modulus(zk, self.n, modulus)
    }

    pub fn reduce_elem(&self, a: &GrElem, target: &GaloisRing) -> GrElem {
        assert_eq!(self.zk.p, target.zk.p);
        assert_eq!(self.n, target.n);
        assert!(target.zk.k <= self.zk.k);
        GrElem {
            coeffs: a.coeffs.iter().map(|&c| c % target.zk.modulus).collect(),
        }
    }

    /// All p^(kn) elements in a fixed odometer order.
    pub fn elements(&self) -> impl Iterator<Item = GrElem> + '_ {
        let total = self.order().expect("ring order fits u64");
        (0..total).map(move |mut idx| {
            let mut coeffs = vec![0u64; self.n];
            for c in coeffs.iter_mut() {
                *c = idx % self.zk.modulus;
                idx /= self.zk.modulus;
            }
            GrElem { coeffs }
        })
    }

    /// The power basis (1, xi, ..., xi^(n-1)).
    pub fn power_basis(&self) -> Vec<GrElem> {
        let mut basis = Vec::with_capacity(self.n);
        let mut acc = self.one();
        for _ in 0..self.n {
            basis.push(acc.clone());
            acc = self.mul(&acc, &self.xi());
        }
        basis
    }
}

/// Matrix over a Galois ring; used for Moore matrices and their algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrMat {
    rows: usize,
    cols: usize,
    entries: Vec<GrElem>,
}

impl GrMat {
    pub fn new(rows: usize, cols: usize, entries: Vec<GrElem>) -> GrMat {
        assert_eq!(entries.len(), rows * cols);
        GrMat {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GrElem) -> GrMat {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        GrMat {
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(ring: &GaloisRing, d: usize) -> GrMat {
        GrMat::from_fn(d, d, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &GrElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GrElem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul(&self, ring: &GaloisRing, other: &GrMat) -> GrMat {
        assert_eq!(self.cols, other.rows);
        GrMat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = ring.zero();
            for t in 0..self.cols {
                acc = ring.add(&acc, &ring.mul(self.at(i, t), other.at(t, j)));
            }
            acc
        })
    }

    /// Determinant by Laplace expansion along the first row (desk scale).
    pub fn det(&self, ring: &GaloisRing) -> GrElem {
        assert_eq!(self.rows, self.cols);
        match self.rows {
            0 => ring.one(),
            1 => self.at(0, 0).clone(),
            _ => {
                let mut acc = ring.zero();
                for j in 0..self.cols {
                    if self.at(0, j).is_zero() {
                        continue;
                    }
                    let minor = GrMat::from_fn(self.rows - 1, self.cols - 1, |r, c| {
                        self.at(r + 1, if c < j { c } else { c + 1 }).clone()
                    });
                    let term = ring.mul(self.at(0, j), &minor.det(ring));
                    acc = if j % 2 == 0 {
                        ring.add(&acc, &term)
                    } else {
                        ring.sub(&acc, &term)
                    };
                }
                acc
            }
        }
    }

    /// Inverse over the ring; `None` when the determinant is a non-unit.
    pub fn inverse(&self, ring: &GaloisRing) -> Option<GrMat> {
        assert_eq!(self.rows, self.cols);
        let d = self.rows;
        let mut a = self.clone();
        let mut inv = GrMat::identity(ring, d);
        for col in 0..d {
            let pivot = (col..d).find(|&r| ring.is_unit(a.at(r, col)))?;
            if pivot != col {
                for j in 0..d {
                    let x = a.at(pivot, j).clone();
                    let y = a.at(col, j).clone();
                    a.set(pivot, j, y);
                    a.set(col, j, x);
                    let x = inv.at(pivot, j).clone();
                    let y = inv.at(col, j).clone();
                    inv.set(pivot, j, y);
                    inv.set(col, j, x);
                }
            }
            let piv_inv = ring.inv_unit(a.at(col, col));
            for j in 0..d {
                let x = ring.mul(a.at(col, j), &piv_inv);
                a.set(col, j, x);
                let x = ring.mul(inv.at(col, j), &piv_inv);
                inv.set(col, j, x);
            }
            for r in 0..d {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col).clone();
                for j in 0..d {
                    let x = ring.sub(a.at(r, j), &ring.mul(&f, a.at(col, j)));
                    a.set(r, j, x);
                    let x = ring.sub(inv.at(r, j), &ring.mul(&f, inv.at(col, j)));
                    inv.set(r, j, x);
                }
            }
        }
        Some(inv)
    }
}

/// The truncated Moore matrix (sigma^i(alpha_j)) with s rows.
pub fn moore_matrix(ring: &GaloisRing, alpha: &[GrElem], s: usize) -> GrMat {
    GrMat::from_fn(s, alpha.len(), |i, j| ring.frobenius(&alpha[j], i))
}

/// A basis together with its trace-dual: Tr(alpha_i alpha*_j) = delta_ij.
#[derive(Debug, Clone)]
pub struct BasisWithDual {
    pub alpha: Vec<GrElem>,
    pub alpha_star: Vec<GrElem>,
}

/// Dual basis read off the inverse Moore matrix.
pub fn dual_basis(ring: &GaloisRing, alpha: &[GrElem]) -> Result<BasisWithDual, ChainError> {
    let n = ring.degree();
    if alpha.len() != n {
        return Err(ChainError::NotIntegralBasis);
    }
    let moore = moore_matrix(ring, alpha, n);
    let inv = moore.inverse(ring).ok_or(ChainError::SingularMooreMatrix)?;
    let alpha_star: Vec<GrElem> = (0..n).map(|j| inv.at(j, 0).clone()).collect();
    debug_assert!((0..n).all(|i| {
        (0..n).all(|j| {
            let tr = ring.trace(&ring.mul(&alpha[i], &alpha_star[j]));
            tr == if i == j { ring.one() } else { ring.zero() }
        })
    }));
    Ok(BasisWithDual {
        alpha: alpha.to_vec(),
        alpha_star,
    })
}

/// True iff the Moore determinant of alpha is a unit, i.e. alpha is an
/// integral basis of the extension.
pub fn integral_basis_test(ring: &GaloisRing, alpha: &[GrElem]) -> bool {
    if alpha.len() != ring.degree() {
        return false;
    }
    let moore = moore_matrix(ring, alpha, ring.degree());
    ring.is_unit(&moore.det(ring))
}

fn mod_pow_u64(base: u64, exp: u64, modulus: u64) -> u64 {
    if modulus <= 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % modulus;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % modulus as u128) as u64;
        }
        b = ((b as u128 * b as u128) % modulus as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Lexicographically least monic irreducible polynomial of degree n over F_p,
/// counting coefficient vectors (c_0, ..., c_{n-1}) as base-p integers.
fn least_irreducible(p: u64, n: usize) -> Vec<u64> {
    let total = p.pow(n as u32);
    for idx in 0..total {
        let mut poly = Vec::with_capacity(n + 1);
        let mut t = idx;
        for _ in 0..n {
            poly.push(t % p);
            t /= p;
        }
        poly.push(1);
        if fp_poly_irreducible(p, &poly) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

/// Trial division by every monic polynomial of degree 1..=n/2 over F_p.
fn fp_poly_irreducible(p: u64, poly: &[u64]) -> bool {
    let n = poly.len() - 1;
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                div.push(t % p);
                t /= p;
            }
            div.push(1);
            if fp_poly_rem_is_zero(p, poly, &div) {
                return false;
            }
        }
    }
    true
}

fn fp_poly_rem_is_zero(p: u64, poly: &[u64], div: &[u64]) -> bool {
    let mut rem: Vec<u64> = poly.iter().map(|&c| c % p).collect();
    let dd = div.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap() % p;
        if lead != 0 {
            let shift = rem.len() - 1 - dd;
            for i in 0..=dd {
                let idx = shift + i;
                rem[idx] = (rem[idx] + p - (lead * div[i]) % p) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c % p == 0)
}

/// Checks that `modulus` divides x^order - 1 over Z/p^k by long division.
fn divides_cyclotomic_like(zk: &ZkRing, modulus: &[u64], order: u64) -> bool {
    // remainder of x^order - 1 modulo the monic `modulus`, done by repeated
    // squaring of x in the quotient ring
    let n = modulus.len() - 1;
    let reduce = |v: &mut Vec<u64>| {
        while v.len() > n {
            let lead = *v.last().unwrap();
            let deg = v.len() - 1;
            if lead != 0 {
                for i in 0..n {
                    let idx = deg - n + i;
                    v[idx] = zk.sub(v[idx], zk.mul(lead, modulus[i]));
                }
            }
            v.pop();
        }
        while v.len() < n {
            v.push(0);
        }
    };
    let mul = |a: &[u64], b: &[u64]| {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = zk.add(out[i + j], zk.mul(x, y));
            }
        }
        reduce(&mut out);
        out
    };
    let mut acc = vec![0u64; n];
    acc[0] = 1;
    let mut base = vec![0u64; n.max(2)];
    base[1] = 1;
    reduce(&mut base);
    let mut e = order;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    // x^order = 1 in the quotient iff modulus | x^order - 1
    acc[0] == 1 && acc[1..].iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_least_irreducible_over_f3_is_x2_plus_1() {
        // oracle: exhaust monic quadratics over F_3 for irreducibility
        let mut first = None;
        for idx in 0..9u64 {
            let poly = vec![idx % 3, idx / 3, 1];
            let has_root = (0..3).any(|x| (x * x % 3 * poly[2] + poly[1] * x + poly[0]) % 3 == 0);
            if !has_root {
                first = Some(poly);
                break;
            }
        }
        assert_eq!(first.unwrap(), vec![1, 0, 1]);
        let ring = GaloisRing::new(3, 1, 2).unwrap();
        assert_eq!(ring.modulus, vec![1, 0, 1]);
    }

    #[test]
    fn hensel_lift_is_unique_divisor_over_z9() {
        let ring = GaloisRing::new(3, 2, 2).unwrap();
        assert_eq!(ring.modulus[2], 1);
        assert_eq!(ring.modulus[0] % 3, 1);
        assert_eq!(ring.modulus[1] % 3, 0);
        let zk = ZkRing::new(3, 2).unwrap();
        // oracle: exhaust all monic quadratics over Z/9 congruent to x^2+1
        let mut matching = Vec::new();
        for c0 in [1u64, 4, 7] {
            for c1 in [0u64, 3, 6] {
                if divides_cyclotomic_like(&zk, &[c0, c1, 1], 8) {
                    matching.push(vec![c0, c1, 1]);
                }
            }
        }
        assert_eq!(matching.len(), 1);
        assert_eq!(matching[0], ring.modulus);
    }

    #[test]
    fn degree_one_ring_is_zpk() {
        let ring = GaloisRing::new(2, 3, 1).unwrap();
        assert_eq!(ring.modulus, vec![7, 1]); // x - 1 over Z/8
        let (tr, nm) = ring.trace_norm(&ring.from_u64(5));
        assert_eq!(tr, ring.from_u64(5));
        assert_eq!(nm, ring.from_u64(5));
    }

    #[test]
    fn frobenius_properties_gr9_2() {
        let ring = GaloisRing::new(3, 2, 2).unwrap();
        let xi = ring.xi();
        // sigma(xi) = xi^3
        assert_eq!(ring.frobenius(&xi, 1), ring.pow(&xi, 3));
        // sigma^n = id
        let x = ring.from_coeffs(&[1, 1]);
        assert_eq!(ring.frobenius(&x, 2), x);
        // elements of the base ring are fixed
        let c = ring.from_u64(5);
        assert_eq!(ring.frobenius(&c, 1), c);
    }

    #[test]
    fn trace_and_norm_in_gr9_2() {
        let ring = GaloisRing::new(3, 2, 2).unwrap();
        let (tr, nm) = ring.trace_norm(&ring.one());
        assert_eq!(tr, ring.from_u64(2));
        assert_eq!(nm, ring.one());

        // norm(xi) = xi^(1+3) = xi^4 lies in Z/9 and squares to xi^8 = 1
        let xi = ring.xi();
        let nm = ring.norm(&xi);
        assert_eq!(nm, ring.pow(&xi, 4));
        assert!(ring.in_base_ring(&nm));
        assert_eq!(ring.mul(&nm, &nm), ring.one());
    }

    #[test]
    fn teichmuller_in_z9() {
        let ring = GaloisRing::new(3, 2, 1).unwrap();
        // oracle: solutions of y^3 = y in Z/9 are exactly {0, 1, 8}
        let fixed: Vec<u64> = (0..9u64).filter(|&y| (y * y % 9) * y % 9 == y).collect();
        assert_eq!(fixed, vec![0, 1, 8]);
        assert_eq!(ring.teichmuller_lift(&[2]), ring.from_u64(8));
        assert_eq!(ring.teichmuller_lift(&[0]), ring.zero());
        assert_eq!(ring.teichmuller_lift(&[1]), ring.one());
    }

    #[test]
    fn teichmuller_generator_is_fixed_by_construction() {
        let ring = GaloisRing::new(3, 2, 2).unwrap();
        let xi = ring.xi();
        assert_eq!(ring.teichmuller_lift(&ring.residue_coeffs(&xi)), xi);
    }

    #[test]
    fn pi_digits_in_z9() {
        let ring = GaloisRing::new(3, 2, 1).unwrap();
        assert_eq!(
            ring.pi_digits(&ring.from_u64(3)),
            vec![ring.zero(), ring.one()]
        );
        // 5 = 8 + 8*3 mod 9
        assert_eq!(
            ring.pi_digits(&ring.from_u64(5)),
            vec![ring.from_u64(8), ring.from_u64(8)]
        );
        assert_eq!(ring.pi_digits(&ring.zero()), vec![ring.zero(), ring.zero()]);
    }

    #[test]
    fn pi_digit_uniqueness_exhaustive_z9() {
        // digit pairs from the Teichmüller set {0,1,8} reassemble bijectively
        let ring = GaloisRing::new(3, 2, 1).unwrap();
        let teich = [ring.zero(), ring.one(), ring.from_u64(8)];
        let mut seen = alloc::collections::BTreeSet::new();
        for d0 in &teich {
            for d1 in &teich {
                let x = ring.digits_assemble(&[d0.clone(), d1.clone()]);
                assert!(seen.insert(x.coeffs.clone()));
            }
        }
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn moore_matrix_shapes_and_entries() {
        let ring = GaloisRing::new(3, 2, 2).unwrap();
        let xi = ring.xi();
        let m = moore_matrix(&ring, &[ring.one(), xi.clone()], 2);
        assert_eq!(m.at(0, 0), &ring.one());
        assert_eq!(m.at(0, 1), &xi);
        assert_eq!(m.at(1, 0), &ring.one());
        assert_eq!(m.at(1, 1), &ring.pow(&xi, 3));

        let single = moore_matrix(&ring, &[ring.one()], 1);
        assert_eq!(single.at(0, 0), &ring.one());
    }

    #[test]
    fn truncated_moore_of_power_basis() {
        let ring = GaloisRing::new(3, 1, 2).unwrap();
        let basis = ring.power_basis();
        let m = moore_matrix(&ring, &basis, 2);
        assert_eq!(m.rows(), 2);
        assert_eq!(m.cols(), 2);
        assert_eq!(m.at(1, 1), &ring.pow(&ring.xi(), 3));
    }

    #[test]
    fn dual_basis_of_power_basis_gr3_2() {
        let ring = GaloisRing::new(3, 1, 2).unwrap();
        let alpha = ring.power_basis();
        let dual = dual_basis(&ring, &alpha).unwrap();
        // oracle: exhaust all pairs for the trace conditions
        let mut solutions = Vec::new();
        for a in ring.elements() {
            for b in ring.elements() {
                let ok = ring.trace(&ring.mul(&alpha[0], &a)) == ring.one()
                    && ring.trace(&ring.mul(&alpha[1], &a)) == ring.zero()
                    && ring.trace(&ring.mul(&alpha[0], &b)) == ring.zero()
                    && ring.trace(&ring.mul(&alpha[1], &b)) == ring.one();
                if ok {
                    solutions.push((a.clone(), b.clone()));
                }
            }
        }
        assert_eq!(solutions.len(), 1);
        assert_eq!(solutions[0].0, dual.alpha_star[0]);
        assert_eq!(solutions[0].1, dual.alpha_star[1]);
    }

    #[test]
    fn dual_basis_rejects_degenerate_vectors() {
        let ring = GaloisRing::new(3, 2, 2).unwrap();
        let alpha = [ring.one(), ring.scale(3, &ring.xi())];
        assert!(matches!(
            dual_basis(&ring, &alpha),
            Err(ChainError::SingularMooreMatrix)
        ));
    }

    #[test]
    fn integral_basis_test_examples() {
        let ring = GaloisRing::new(3, 2, 2).unwrap();
        let xi = ring.xi();
        assert!(integral_basis_test(&ring, &[ring.one(), xi.clone()]));
        assert!(!integral_basis_test(
            &ring,
            &[ring.one(), ring.scale(3, &xi)]
        ));
        assert!(!integral_basis_test(&ring, &[ring.one(), ring.one()]));

        let z8 = GaloisRing::new(2, 3, 1).unwrap();
        let dual = dual_basis(&z8, &[z8.one()]).unwrap();
        assert_eq!(dual.alpha_star, vec![z8.one()]);
    }

    #[test]
    fn truncation_gives_canonical_smaller_ring() {
        let big = GaloisRing::new(3, 2, 2).unwrap();
        let small = big.truncated(1);
        let fresh = GaloisRing::new(3, 1, 2).unwrap();
        assert_eq!(small, fresh);
    }
}
