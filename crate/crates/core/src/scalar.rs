//! Exact scalars of the two discretely valued coefficient fields: Q with the
//! p-adic valuation and Q(t) with the t-adic valuation.
//!
//! Both backends are exact; there is no floating point and no truncation
//! policy anywhere. Values are immutable and every operation is pure.

use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::qpoly::QPoly;
use crate::valuation::Valuation;
use crate::zk::{inv_mod_prime, is_prime_u64};

/// Which valued field a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Q with the p-adic valuation; uniformizer p.
    Padic { p: u64 },
    /// Q(t) with the t-adic valuation; uniformizer t. Residue field Q.
    Tadic,
}

impl Backend {
    pub fn padic(p: u64) -> Result<Backend, ScalarError> {
        if !is_prime_u64(p) {
            return Err(ScalarError::NotPrime { p });
        }
        Ok(Backend::Padic { p })
    }

    pub fn uniformizer_name(&self) -> &'static str {
        match self {
            Backend::Padic { .. } => "pi",
            Backend::Tadic => "t",
        }
    }

    /// Residue field is finite exactly for the p-adic backend.
    pub fn finite_residue_field(&self) -> bool {
        matches!(self, Backend::Padic { .. })
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Padic { p } => write!(f, "padic(p={p})"),
            Backend::Tadic => write!(f, "tadic"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalarError {
    NotPrime { p: u64 },
    BackendMismatch,
    NegativeValuation { valuation: Valuation },
    DivisionByZero,
    ZeroMatrix,
    SingularMatrix,
    DimensionMismatch,
}

impl fmt::Display for ScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarError::NotPrime { p } => write!(f, "{p} is not prime"),
            ScalarError::BackendMismatch => write!(f, "scalars from different valued fields"),
            ScalarError::NegativeValuation { valuation } => {
                write!(f, "residue undefined: valuation {valuation} is negative")
            }
            ScalarError::DivisionByZero => write!(f, "division by zero"),
            ScalarError::ZeroMatrix => write!(f, "matrix is zero"),
            ScalarError::SingularMatrix => write!(f, "matrix is singular over the fraction field"),
            ScalarError::DimensionMismatch => write!(f, "matrix dimensions do not match"),
        }
    }
}

impl core::error::Error for ScalarError {}

/// Exact element of the chosen valued field.
///
/// P-adic scalars are rationals in lowest terms; t-adic scalars are rational
/// functions num/den with gcd 1 and monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Padic { p: u64, value: BigRational },
    Tadic { num: QPoly, den: QPoly },
}

impl Scalar {
    pub fn zero(backend: Backend) -> Scalar {
        match backend {
            Backend::Padic { p } => Scalar::Padic {
                p,
                value: BigRational::zero(),
            },
            Backend::Tadic => Scalar::Tadic {
                num: QPoly::zero(),
                den: QPoly::one(),
            },
        }
    }

    pub fn one(backend: Backend) -> Scalar {
        Scalar::from_int(backend, 1)
    }

    pub fn from_int(backend: Backend, n: i64) -> Scalar {
        match backend {
            Backend::Padic { p } => Scalar::Padic {
                p,
                value: BigRational::from(BigInt::from(n)),
            },
            Backend::Tadic => Scalar::tadic_from_polys(
                QPoly::constant(BigRational::from(BigInt::from(n))),
                QPoly::one(),
            )
            .unwrap(),
        }
    }

    pub fn from_rational(backend: Backend, value: BigRational) -> Scalar {
        match backend {
            Backend::Padic { p } => Scalar::Padic { p, value },
            Backend::Tadic => {
                Scalar::tadic_from_polys(QPoly::constant(value), QPoly::one()).unwrap()
            }
        }
    }

    /// Rational function num/den in normalized form (gcd 1, monic denominator).
    pub fn tadic_from_polys(num: QPoly, den: QPoly) -> Result<Scalar, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar::Tadic {
                num: QPoly::zero(),
                den: QPoly::one(),
            });
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().unwrap().clone();
        let inv = BigRational::one() / lead;
        Ok(Scalar::Tadic {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    /// pi^m for the backend's uniformizer (negative m allowed).
    pub fn uniformizer_pow(backend: Backend, m: i64) -> Scalar {
        match backend {
            Backend::Padic { p } => {
                let base = BigRational::from(BigInt::from(p));
                let mut v = BigRational::one();
                for _ in 0..m.unsigned_abs() {
                    v *= &base;
                }
                if m < 0 {
                    v = v.recip();
                }
                Scalar::Padic { p, value: v }
            }
            Backend::Tadic => {
                if m >= 0 {
                    Scalar::tadic_from_polys(
                        QPoly::monomial(BigRational::one(), m as usize),
                        QPoly::one(),
                    )
                    .unwrap()
                } else {
                    Scalar::tadic_from_polys(
                        QPoly::one(),
                        QPoly::monomial(BigRational::one(), (-m) as usize),
                    )
                    .unwrap()
                }
            }
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Padic { p, .. } => Backend::Padic { p: *p },
            Scalar::Tadic { .. } => Backend::Tadic,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Padic { value, .. } => value.is_zero(),
            Scalar::Tadic { num, .. } => num.is_zero(),
        }
    }

    /// The discrete valuation; `Infinite` exactly for zero.
    pub fn valuation(&self) -> Valuation {
        match self {
            Scalar::Padic { p, value } => {
                if value.is_zero() {
                    return Valuation::Infinite;
                }
                let vn = int_padic_val(value.numer(), *p);
                let vd = int_padic_val(value.denom(), *p);
                Valuation::Finite(vn - vd)
            }
            Scalar::Tadic { num, den } => match num.ord() {
                None => Valuation::Infinite,
                Some(on) => Valuation::Finite(on as i64 - den.ord().unwrap() as i64),
            },
        }
    }

    fn same_backend(&self, other: &Scalar) -> bool {
        self.backend() == other.backend()
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        assert!(self.same_backend(other), "scalar backend mismatch");
        match (self, other) {
            (Scalar::Padic { p, value: a }, Scalar::Padic { value: b, .. }) => Scalar::Padic {
                p: *p,
                value: a + b,
            },
            (Scalar::Tadic { num: an, den: ad }, Scalar::Tadic { num: bn, den: bd }) => {
                Scalar::tadic_from_polys(an.mul(bd).add(&bn.mul(ad)), ad.mul(bd)).unwrap()
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Padic { p, value } => Scalar::Padic {
                p: *p,
                value: -value,
            },
            Scalar::Tadic { num, den } => Scalar::Tadic {
                num: num.neg(),
                den: den.clone(),
            },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        assert!(self.same_backend(other), "scalar backend mismatch");
        match (self, other) {
            (Scalar::Padic { p, value: a }, Scalar::Padic { value: b, .. }) => Scalar::Padic {
                p: *p,
                value: a * b,
            },
            (Scalar::Tadic { num: an, den: ad }, Scalar::Tadic { num: bn, den: bd }) => {
                Scalar::tadic_from_polys(an.mul(bn), ad.mul(bd)).unwrap()
            }
            _ => unreachable!(),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        assert!(self.same_backend(other), "scalar backend mismatch");
        Ok(match (self, other) {
            (Scalar::Padic { p, value: a }, Scalar::Padic { value: b, .. }) => Scalar::Padic {
                p: *p,
                value: a / b,
            },
            (Scalar::Tadic { num: an, den: ad }, Scalar::Tadic { num: bn, den: bd }) => {
                Scalar::tadic_from_polys(an.mul(bd), ad.mul(bn))?
            }
            _ => unreachable!(),
        })
    }

    /// Reduction into the residue field. Defined for valuation >= 0.
    pub fn residue(&self) -> Result<Residue, ScalarError> {
        let v = self.valuation();
        if matches!(v, Valuation::Finite(x) if x < 0) {
            return Err(ScalarError::NegativeValuation { valuation: v });
        }
        Ok(match self {
            Scalar::Padic { p, value } => {
                if value.is_zero() {
                    Residue::Fp { p: *p, value: 0 }
                } else {
                    let n = mod_u64(value.numer(), *p);
                    let d = mod_u64(value.denom(), *p);
                    Residue::Fp {
                        p: *p,
                        value: n * inv_mod_prime(d, *p) % *p,
                    }
                }
            }
            Scalar::Tadic { num, den } => {
                // normalized with valuation >= 0: den has a unit constant term
                Residue::Rat(num.eval_at_zero() / den.eval_at_zero())
            }
        })
    }

    /// Residue representative of an integral scalar modulo pi^a, in the fixed
    /// canonical set: integers in [0, p^a) for p-adic, polynomials of degree
    /// < a for t-adic. Also returns the exact quotient (self - rep) / pi^a.
    pub fn canonical_rep_mod(&self, a: u32) -> (Scalar, Scalar) {
        debug_assert!(self.valuation() >= Valuation::Finite(0));
        match self {
            Scalar::Padic { p, value } => {
                let modulus = BigInt::from(*p).pow(a);
                let rep = if value.is_zero() {
                    BigInt::zero()
                } else {
                    // numer * denom^{-1} mod p^a, via Bezout on the denominator
                    let d_inv = big_inv_mod(value.denom(), &modulus);
                    (((value.numer() * d_inv) % &modulus) + &modulus) % &modulus
                };
                let rep_s = Scalar::Padic {
                    p: *p,
                    value: BigRational::from(rep),
                };
                let q = self
                    .sub(&rep_s)
                    .div(&Scalar::uniformizer_pow(self.backend(), a as i64))
                    .unwrap();
                (rep_s, q)
            }
            Scalar::Tadic { num, den } => {
                let rep = if num.is_zero() {
                    QPoly::zero()
                } else {
                    num.mul(&den.series_inverse(a as usize))
                        .truncate(a as usize)
                };
                let rep_s = Scalar::tadic_from_polys(rep, QPoly::one()).unwrap();
                let q = self
                    .sub(&rep_s)
                    .div(&Scalar::uniformizer_pow(self.backend(), a as i64))
                    .unwrap();
                (rep_s, q)
            }
        }
    }

    /// Deterministic total order used for canonical sorting; scalars from
    /// different backends compare by backend tag.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Padic { p: pa, value: a }, Scalar::Padic { p: pb, value: b }) => {
                pa.cmp(pb).then_with(|| a.cmp(b))
            }
            (Scalar::Tadic { num: an, den: ad }, Scalar::Tadic { num: bn, den: bd }) => {
                an.canonical_cmp(bn).then_with(|| ad.canonical_cmp(bd))
            }
            (Scalar::Padic { .. }, Scalar::Tadic { .. }) => Ordering::Less,
            (Scalar::Tadic { .. }, Scalar::Padic { .. }) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Padic { value, .. } => write!(f, "{value}"),
            Scalar::Tadic { num, den } => {
                if den.is_one_poly() {
                    write!(f, "{num}")
                } else {
                    write!(f, "({num})/({den})")
                }
            }
        }
    }
}

impl QPoly {
    fn is_one_poly(&self) -> bool {
        self.degree() == Some(0) && self.coeff(0).is_one()
    }
}

/// Element of the residue field: F_p for the p-adic backend, Q for t-adic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residue {
    Fp { p: u64, value: u64 },
    Rat(BigRational),
}

impl Residue {
    pub fn zero_like(&self) -> Residue {
        match self {
            Residue::Fp { p, .. } => Residue::Fp { p: *p, value: 0 },
            Residue::Rat(_) => Residue::Rat(BigRational::zero()),
        }
    }

    pub fn one_like(&self) -> Residue {
        match self {
            Residue::Fp { p, .. } => Residue::Fp { p: *p, value: 1 },
            Residue::Rat(_) => Residue::Rat(BigRational::one()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Residue::Fp { value, .. } => *value == 0,
            Residue::Rat(v) => v.is_zero(),
        }
    }

    pub fn add(&self, other: &Residue) -> Residue {
        match (self, other) {
            (Residue::Fp { p, value: a }, Residue::Fp { value: b, .. }) => Residue::Fp {
                p: *p,
                value: (a + b) % p,
            },
            (Residue::Rat(a), Residue::Rat(b)) => Residue::Rat(a + b),
            _ => panic!("residue backend mismatch"),
        }
    }

    pub fn sub(&self, other: &Residue) -> Residue {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Residue {
        match self {
            Residue::Fp { p, value } => Residue::Fp {
                p: *p,
                value: if *value == 0 { 0 } else { p - value },
            },
            Residue::Rat(v) => Residue::Rat(-v),
        }
    }

    pub fn mul(&self, other: &Residue) -> Residue {
        match (self, other) {
            (Residue::Fp { p, value: a }, Residue::Fp { value: b, .. }) => Residue::Fp {
                p: *p,
                value: ((*a as u128 * *b as u128) % *p as u128) as u64,
            },
            (Residue::Rat(a), Residue::Rat(b)) => Residue::Rat(a * b),
            _ => panic!("residue backend mismatch"),
        }
    }

    pub fn inv(&self) -> Result<Residue, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            Residue::Fp { p, value } => Residue::Fp {
                p: *p,
                value: inv_mod_prime(*value, *p),
            },
            Residue::Rat(v) => Residue::Rat(v.recip()),
        })
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residue::Fp { value, .. } => write!(f, "{value}"),
            Residue::Rat(v) => write!(f, "{v}"),
        }
    }
}

fn int_padic_val(x: &BigInt, p: u64) -> i64 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut x = x.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&x, &p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

fn mod_u64(x: &BigInt, p: u64) -> u64 {
    let p_big = BigInt::from(p);
    let m = ((x % &p_big) + &p_big) % &p_big;
    m.to_u64().expect("residue fits u64")
}

fn big_inv_mod(x: &BigInt, modulus: &BigInt) -> BigInt {
    // extended Euclid; x must be coprime to the modulus
    let (mut r0, mut r1) = (modulus.clone(), ((x % modulus) + modulus) % modulus);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = core::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = core::mem::replace(&mut t1, t2);
    }
    assert!(r0.is_one(), "element not invertible modulo pi^a");
    ((t0 % modulus) + modulus) % modulus
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::qpoly_from_ints;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn padic_valuation_of_8_thirds() {
        let b = Backend::padic(2).unwrap();
        let x = Scalar::from_rational(b, q(8, 3));
        assert_eq!(x.valuation(), Valuation::Finite(3));
    }

    #[test]
    fn valuation_of_zero_is_infinite() {
        for b in [Backend::padic(5).unwrap(), Backend::Tadic] {
            assert_eq!(Scalar::zero(b).valuation(), Valuation::Infinite);
        }
    }

    #[test]
    fn tadic_valuation_t2_over_t_minus_1() {
        let x = Scalar::tadic_from_polys(qpoly_from_ints(&[0, 0, 1]), qpoly_from_ints(&[-1, 1]))
            .unwrap();
        assert_eq!(x.valuation(), Valuation::Finite(2));
    }

    #[test]
    fn residue_of_5_halves_mod_3() {
        // oracle: 2^{-1} = 2 in F_3, and 5*2 = 10 = 1 mod 3
        let b = Backend::padic(3).unwrap();
        let x = Scalar::from_rational(b, q(5, 2));
        assert_eq!(x.residue().unwrap(), Residue::Fp { p: 3, value: 1 });
    }

    #[test]
    fn residue_of_4_mod_2_is_zero() {
        let b = Backend::padic(2).unwrap();
        let x = Scalar::from_int(b, 4);
        assert_eq!(x.residue().unwrap(), Residue::Fp { p: 2, value: 0 });
    }

    #[test]
    fn tadic_residue_evaluates_at_zero() {
        let x =
            Scalar::tadic_from_polys(qpoly_from_ints(&[2, 1]), qpoly_from_ints(&[1, -1])).unwrap();
        assert_eq!(x.residue().unwrap(), Residue::Rat(q(2, 1)));
    }

    #[test]
    fn residue_rejects_negative_valuation() {
        let b = Backend::padic(2).unwrap();
        let x = Scalar::from_rational(b, q(1, 2));
        assert!(matches!(
            x.residue(),
            Err(ScalarError::NegativeValuation { .. })
        ));
    }

    #[test]
    fn residue_is_ring_homomorphic() {
        let b = Backend::padic(7).unwrap();
        let x = Scalar::from_rational(b, q(3, 2));
        let y = Scalar::from_rational(b, q(12, 5));
        let lhs = x.add(&y).residue().unwrap();
        let rhs = x.residue().unwrap().add(&y.residue().unwrap());
        assert_eq!(lhs, rhs);
        let lhs = x.mul(&y).residue().unwrap();
        let rhs = x.residue().unwrap().mul(&y.residue().unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_rep_reduces_five_thirds_mod_4() {
        let b = Backend::padic(2).unwrap();
        let x = Scalar::from_rational(b, q(5, 3));
        let (rep, quot) = x.canonical_rep_mod(2);
        // 5/3 = 5 * 3^{-1} = 5 * 3 = 15 = 3 mod 4
        assert_eq!(rep, Scalar::from_int(b, 3));
        let back = rep.add(&quot.mul(&Scalar::from_int(b, 4)));
        assert_eq!(back, x);
        assert!(quot.valuation() >= Valuation::Finite(0));
    }
}
