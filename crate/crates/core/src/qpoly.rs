//! Dense polynomials in one variable over the exact rationals.
//!
//! These carry the t-adic scalar backend: rational functions num/den with
//! exact coefficients. Only what the valued-scalar layer needs is here.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial with rational coefficients, constant term first.
/// Invariant: no trailing zero coefficients (the zero polynomial is empty).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> QPoly {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> QPoly {
        QPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> QPoly {
        QPoly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> QPoly {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    /// Monomial c * t^e.
    pub fn monomial(c: BigRational, e: usize) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); e + 1];
        coeffs[e] = c;
        QPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Order at t = 0: index of the lowest nonzero coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval_at_zero(&self) -> BigRational {
        self.coeff(0)
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        QPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplication by t^e.
    pub fn shift(&self, e: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); e];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    /// Exact division by t^e; panics if the order is too low.
    pub fn unshift(&self, e: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        assert!(self.ord().unwrap_or(0) >= e, "not divisible by t^{e}");
        QPoly {
            coeffs: self.coeffs[e..].to_vec(),
        }
    }

    /// Euclidean division: (quotient, remainder) with deg r < deg divisor.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead_inv = BigRational::one() / divisor.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading().unwrap() * &lead_inv;
            let shift = rd - dd;
            quot[shift] = c.clone();
            rem = rem.sub(&divisor.mul(&QPoly::monomial(c, shift)));
        }
        (QPoly::from_coeffs(quot), rem)
    }

    /// Monic gcd via the Euclidean algorithm; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn make_monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(l) => self.scale(&(BigRational::one() / l.clone())),
        }
    }

    /// Inverse as a power series modulo t^prec; requires a unit constant term.
    pub fn series_inverse(&self, prec: usize) -> QPoly {
        let c0 = self.coeff(0);
        assert!(!c0.is_zero(), "series inverse needs a unit constant term");
        let mut inv = vec![BigRational::zero(); prec];
        if prec == 0 {
            return QPoly::zero();
        }
        inv[0] = BigRational::one() / c0.clone();
        for m in 1..prec {
            let mut acc = BigRational::zero();
            for j in 1..=m {
                acc += self.coeff(j) * &inv[m - j];
            }
            inv[m] = -(acc / c0.clone());
        }
        QPoly::from_coeffs(inv)
    }

    /// Truncation modulo t^prec.
    pub fn truncate(&self, prec: usize) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().take(prec).cloned().collect())
    }

    /// Deterministic total order: by degree, then by coefficients from the
    /// constant term up. Used for canonical sorting of lattice matrices.
    pub fn canonical_cmp(&self, other: &QPoly) -> Ordering {
        match self.coeffs.len().cmp(&other.coeffs.len()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.coeffs.iter().zip(other.coeffs.iter()) {
            match a.cmp(b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for QPoly {
    /// Canonical sparse form, lowest degree first: "2+t", "1-t", "t^2", "0".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let unit_coeff = mag.is_one();
            if e == 0 || !unit_coeff {
                write!(f, "{mag}")?;
            }
            if e > 0 {
                if !unit_coeff {
                    write!(f, "*")?;
                }
                if e == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Convenience constructor from integer coefficients, constant term first.
pub fn qpoly_from_ints(coeffs: &[i64]) -> QPoly {
    QPoly::from_coeffs(
        coeffs
            .iter()
            .map(|&c| BigRational::from(BigInt::from(c)))
            .collect(),
    )
}
