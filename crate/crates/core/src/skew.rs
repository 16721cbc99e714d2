//! The skew group algebra S\[G\] over a Galois ring: sigma-polynomial
//! arithmetic with the twist (a sigma^i)(b sigma^j) = a sigma^i(b)
//! sigma^(i+j mod n), evaluation, matrix representations through the
//! trace-dual basis, reduction and truncation maps, right division,
//! annihilator polynomials in both forms, the truncated-Moore factorization
//! and the norm criterion for maximal kernels.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::chain::{
    dual_basis, integral_basis_test, moore_matrix, ChainError, GaloisRing, GrElem, GrMat, RingId,
};
use crate::linalg::{smith_form_zk, ZkMat};
use crate::valuation::Valuation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkewError {
    RingMismatch,
    DepthMismatch,
    DepthExceeded,
    NotMonic,
    DependentReduction,
    SingularTruncatedMoore,
    NonUnitCoefficient,
    DegreeMismatch,
    NotIntegralBasis,
}

impl fmt::Display for SkewError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            SkewError::RingMismatch => "sigma-polynomials from different rings",
            SkewError::DepthMismatch => "ring descriptors are not compatible",
            SkewError::DepthExceeded => "truncation index exceeds the ring depth",
            SkewError::NotMonic => "divisor is not monic",
            SkewError::DependentReduction => {
                "reductions are linearly dependent over the residue field"
            }
            SkewError::SingularTruncatedMoore => "truncated Moore matrix is singular",
            SkewError::NonUnitCoefficient => "constant or leading coefficient is not a unit",
            SkewError::DegreeMismatch => "sigma-degree differs from the stated degree",
            SkewError::NotIntegralBasis => "basis fails the integral-basis test",
        };
        write!(f, "{msg}")
    }
}

impl core::error::Error for SkewError {}

impl From<ChainError> for SkewError {
    fn from(e: ChainError) -> SkewError {
        match e {
            ChainError::SingularMooreMatrix => SkewError::SingularTruncatedMoore,
            _ => SkewError::NotIntegralBasis,
        }
    }
}

/// Element sum_i f_i sigma^i of S\[G\], exponents already reduced mod n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaPoly {
    pub ring: RingId,
    /// coefficient of sigma^i at index i; always exactly n entries
    pub coeffs: Vec<GrElem>,
}

impl SigmaPoly {
    pub fn zero(ring: &GaloisRing) -> SigmaPoly {
        SigmaPoly {
            ring: ring.id(),
            coeffs: vec![ring.zero(); ring.degree()],
        }
    }

    pub fn identity(ring: &GaloisRing) -> SigmaPoly {
        SigmaPoly::monomial(ring, ring.one(), 0)
    }

    /// c * sigma^e with e reduced mod n.
    pub fn monomial(ring: &GaloisRing, c: GrElem, e: usize) -> SigmaPoly {
        let mut poly = SigmaPoly::zero(ring);
        let e = e % ring.degree();
        poly.coeffs[e] = c;
        poly
    }

    pub fn from_coeffs(ring: &GaloisRing, coeffs: Vec<GrElem>) -> SigmaPoly {
        assert_eq!(
            coeffs.len(),
            ring.degree(),
            "one coefficient per sigma power"
        );
        SigmaPoly {
            ring: ring.id(),
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Largest i with a nonzero coefficient; `None` for the zero polynomial.
    pub fn deg_sigma(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    fn check_ring(&self, ring: &GaloisRing) -> Result<(), SkewError> {
        if self.ring == ring.id() {
            Ok(())
        } else {
            Err(SkewError::RingMismatch)
        }
    }
}

pub fn add(ring: &GaloisRing, f: &SigmaPoly, g: &SigmaPoly) -> Result<SigmaPoly, SkewError> {
    f.check_ring(ring)?;
    g.check_ring(ring)?;
    Ok(SigmaPoly {
        ring: ring.id(),
        coeffs: f
            .coeffs
            .iter()
            .zip(&g.coeffs)
            .map(|(a, b)| ring.add(a, b))
            .collect(),
    })
}

pub fn sub(ring: &GaloisRing, f: &SigmaPoly, g: &SigmaPoly) -> Result<SigmaPoly, SkewError> {
    f.check_ring(ring)?;
    g.check_ring(ring)?;
    Ok(SigmaPoly {
        ring: ring.id(),
        coeffs: f
            .coeffs
            .iter()
            .zip(&g.coeffs)
            .map(|(a, b)| ring.sub(a, b))
            .collect(),
    })
}

/// Product under the twist (a sigma^i)(b sigma^j) = a sigma^i(b) sigma^(i+j).
pub fn mul(ring: &GaloisRing, f: &SigmaPoly, g: &SigmaPoly) -> Result<SigmaPoly, SkewError> {
    f.check_ring(ring)?;
    g.check_ring(ring)?;
    let n = ring.degree();
    let mut out = SigmaPoly::zero(ring);
    for (i, a) in f.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let e = (i + j) % n;
            let term = ring.mul(a, &ring.frobenius(b, i));
            out.coeffs[e] = ring.add(&out.coeffs[e], &term);
        }
    }
    Ok(out)
}

/// Valuation of a sigma-polynomial: the largest j with all coefficients in
/// p^j S; the ring depth k exactly for zero.
pub fn val(ring: &GaloisRing, f: &SigmaPoly) -> u32 {
    f.coeffs.iter().map(|c| ring.val(c)).min().unwrap()
}

/// Evaluation x -> sum f_i sigma^i(x); R-linear in x.
pub fn evaluate(ring: &GaloisRing, f: &SigmaPoly, x: &GrElem) -> Result<GrElem, SkewError> {
    f.check_ring(ring)?;
    let mut acc = ring.zero();
    for (i, c) in f.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = ring.add(&acc, &ring.mul(c, &ring.frobenius(x, i)));
    }
    Ok(acc)
}

/// Precomputed basis data for matrix representations: the basis, its
/// trace-dual, and the conjugates of the dual entries.
pub struct RepBasis {
    pub alpha: Vec<GrElem>,
    pub alpha_star: Vec<GrElem>,
    star_conjugates: Vec<Vec<GrElem>>,
}

impl RepBasis {
    pub fn new(ring: &GaloisRing, alpha: &[GrElem]) -> Result<RepBasis, SkewError> {
        if !integral_basis_test(ring, alpha) {
            return Err(SkewError::NotIntegralBasis);
        }
        let dual = dual_basis(ring, alpha)?;
        let n = ring.degree();
        let star_conjugates = dual
            .alpha_star
            .iter()
            .map(|a| (0..n).map(|i| ring.frobenius(a, i)).collect())
            .collect();
        Ok(RepBasis {
            alpha: dual.alpha,
            alpha_star: dual.alpha_star,
            star_conjugates,
        })
    }

    pub fn power_basis(ring: &GaloisRing) -> RepBasis {
        RepBasis::new(ring, &ring.power_basis()).expect("power basis is integral")
    }

    /// alpha-coordinates of y, extracted as traces against the dual basis.
    pub fn coordinates(&self, ring: &GaloisRing, y: &GrElem) -> Vec<u64> {
        let n = ring.degree();
        let conj_y: Vec<GrElem> = (0..n).map(|i| ring.frobenius(y, i)).collect();
        (0..n)
            .map(|m| {
                let mut tr = ring.zero();
                for i in 0..n {
                    tr = ring.add(&tr, &ring.mul(&conj_y[i], &self.star_conjugates[m][i]));
                }
                debug_assert!(ring.in_base_ring(&tr));
                tr.coeffs[0]
            })
            .collect()
    }

    /// Matrix of the endomorphism x -> f(x) in this basis: column j holds the
    /// coordinates of f(alpha_j).
    pub fn matrix_rep(&self, ring: &GaloisRing, f: &SigmaPoly) -> Result<ZkMat, SkewError> {
        f.check_ring(ring)?;
        let n = ring.degree();
        let mut m = ZkMat::zero(ring.zk, n, n);
        for (j, a) in self.alpha.iter().enumerate() {
            let y = evaluate(ring, f, a)?;
            for (i, c) in self.coordinates(ring, &y).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        Ok(m)
    }
}

/// Matrix representation of f with respect to an integral basis.
pub fn matrix_rep(ring: &GaloisRing, f: &SigmaPoly, alpha: &[GrElem]) -> Result<ZkMat, SkewError> {
    RepBasis::new(ring, alpha)?.matrix_rep(ring, f)
}

/// Coefficientwise reduction into a lower-depth descriptor; the kernel is
/// exactly p^i S\[G\].
pub fn reduce_mod(
    src: &GaloisRing,
    f: &SigmaPoly,
    dst: &GaloisRing,
) -> Result<SigmaPoly, SkewError> {
    f.check_ring(src)?;
    if src.p() != dst.p() || src.degree() != dst.degree() || dst.depth() > src.depth() {
        return Err(SkewError::DepthMismatch);
    }
    debug_assert!(src
        .modulus
        .iter()
        .zip(&dst.modulus)
        .all(|(&a, &b)| a % dst.zk.modulus == b));
    Ok(SigmaPoly {
        ring: dst.id(),
        coeffs: f.coeffs.iter().map(|c| src.reduce_elem(c, dst)).collect(),
    })
}

/// Truncated sum of the pi-adic expansion, keeping digits 0..=j of every
/// coefficient. Stays in the same ring.
pub fn truncate(ring: &GaloisRing, f: &SigmaPoly, j: u32) -> Result<SigmaPoly, SkewError> {
    f.check_ring(ring)?;
    if j >= ring.depth() {
        return Err(SkewError::DepthExceeded);
    }
    let coeffs = f
        .coeffs
        .iter()
        .map(|c| {
            let digits = ring.pi_digits(c);
            ring.digits_assemble(&digits[..=j as usize])
        })
        .collect();
    Ok(SigmaPoly {
        ring: ring.id(),
        coeffs,
    })
}

/// Right Euclidean division by a monic divisor: f = q * g + r with r = 0 or
/// deg_sigma(r) < deg_sigma(g).
pub fn right_divide(
    ring: &GaloisRing,
    f: &SigmaPoly,
    g: &SigmaPoly,
) -> Result<(SigmaPoly, SigmaPoly), SkewError> {
    f.check_ring(ring)?;
    g.check_ring(ring)?;
    let dg = g.deg_sigma().ok_or(SkewError::NotMonic)?;
    if g.coeffs[dg] != ring.one() {
        return Err(SkewError::NotMonic);
    }
    let mut q = SigmaPoly::zero(ring);
    let mut r = f.clone();
    while let Some(dr) = r.deg_sigma() {
        if dr < dg {
            break;
        }
        let c = r.coeffs[dr].clone();
        let shift = dr - dg;
        let term = SigmaPoly::monomial(ring, c, shift);
        q = add(ring, &q, &term)?;
        r = sub(ring, &r, &mul(ring, &term, g)?)?;
        debug_assert!(r.deg_sigma().map(|d| d < dr).unwrap_or(true));
    }
    debug_assert_eq!(&add(ring, &mul(ring, &q, g)?, &r)?, f);
    Ok((q, r))
}

/// Monic annihilator of the free module spanned by beta, built by the
/// defining recursion. The reductions of beta must stay independent over the
/// residue field; a non-unit evaluation is reported, never patched over.
pub fn annihilator_recursive(ring: &GaloisRing, beta: &[GrElem]) -> Result<SigmaPoly, SkewError> {
    let mut f = SigmaPoly::identity(ring);
    for (step_count, b) in beta.iter().enumerate() {
        let y = evaluate(ring, &f, b)?;
        if !ring.is_unit(&y) {
            // the hypothesis dim of the reduction = r fails; report, never patch
            return Err(SkewError::DependentReduction);
        }
        if step_count + 1 >= ring.degree() {
            // a monic annihilator of sigma-degree n would wrap around sigma^n = id
            return Err(SkewError::DegreeMismatch);
        }
        let ratio = ring.mul(&ring.frobenius(&y, 1), &ring.inv_unit(&y));
        // (sigma - ratio id) o f
        let step = sub(
            ring,
            &SigmaPoly::monomial(ring, ring.one(), 1),
            &SigmaPoly::monomial(ring, ratio, 0),
        )?;
        f = mul(ring, &step, &f)?;
    }
    Ok(f)
}

/// The same annihilator from minors of the truncated Moore matrix:
/// h_r^{-1} sum_i (-1)^(r-i) h_i sigma^i, h_i the determinant with row i
/// removed from the (r+1)-row Moore matrix of beta.
pub fn annihilator_determinant(ring: &GaloisRing, beta: &[GrElem]) -> Result<SigmaPoly, SkewError> {
    let r = beta.len();
    if r == 0 {
        return Ok(SigmaPoly::identity(ring));
    }
    if r >= ring.degree() {
        return Err(SkewError::DegreeMismatch);
    }
    let moore = moore_matrix(ring, beta, r + 1);
    let mut minors = Vec::with_capacity(r + 1);
    for i in 0..=r {
        let minor = GrMat::from_fn(r, r, |a, b| {
            moore.at(if a < i { a } else { a + 1 }, b).clone()
        });
        minors.push(minor.det(ring));
    }
    if !ring.is_unit(&minors[r]) {
        return Err(SkewError::SingularTruncatedMoore);
    }
    let lead_inv = ring.inv_unit(&minors[r]);
    let mut f = SigmaPoly::zero(ring);
    for (i, h) in minors.iter().enumerate() {
        let mut c = ring.mul(&lead_inv, h);
        if (r - i) % 2 == 1 {
            c = ring.neg(&c);
        }
        f.coeffs[i] = c;
    }
    Ok(f)
}

/// Factorization MG_r(alpha) A = MG_r(beta) diag(e): the elementary divisors
/// of the module spanned by alpha, exposed through an invertible change of
/// generators with an independent-reduction family beta.
#[derive(Debug, Clone)]
pub struct MooreFactorization {
    /// invertible r x r matrix over Z/p^k
    pub transform: ZkMat,
    pub beta: Vec<GrElem>,
    pub divisor_valuations: Vec<Valuation>,
}

pub fn moore_factorization(ring: &GaloisRing, alpha: &[GrElem]) -> MooreFactorization {
    let n = ring.degree();
    let r = alpha.len();
    assert!(r <= n, "at most n generators are supported");
    let mut coord = ZkMat::zero(ring.zk, n, r);
    for (j, a) in alpha.iter().enumerate() {
        for (i, &c) in a.coeffs.iter().enumerate() {
            coord.set(i, j, c);
        }
    }
    let snf = smith_form_zk(&coord);
    let left_inv = snf.left.inverse().expect("Smith transform is invertible");
    let beta: Vec<GrElem> = (0..r)
        .map(|j| ring.from_coeffs(&(0..n).map(|i| left_inv.at(i, j)).collect::<Vec<_>>()))
        .collect();

    let fact = MooreFactorization {
        transform: snf.right.clone(),
        beta,
        divisor_valuations: snf.divisor_valuations.clone(),
    };
    debug_assert!(verify_moore_factorization(ring, alpha, &fact));
    fact
}

pub fn verify_moore_factorization(
    ring: &GaloisRing,
    alpha: &[GrElem],
    fact: &MooreFactorization,
) -> bool {
    let r = alpha.len();
    let lhs_m = moore_matrix(ring, alpha, r);
    let a_as_gr = GrMat::from_fn(r, r, |i, j| ring.from_u64(fact.transform.at(i, j)));
    let lhs = lhs_m.mul(ring, &a_as_gr);
    let rhs_m = moore_matrix(ring, &fact.beta, r);
    let mut diag = GrMat::from_fn(r, r, |_, _| ring.zero());
    for (i, v) in fact.divisor_valuations.iter().enumerate() {
        if let Valuation::Finite(v) = v {
            diag.set(i, i, ring.from_u64(ring.p().pow(*v as u32)));
        }
    }
    let rhs = rhs_m.mul(ring, &diag);
    lhs == rhs && moore_matrix(ring, &fact.beta, r).inverse(ring).is_some()
}

/// Outcome of the norm criterion for sigma-polynomials of maximal kernel:
/// a polynomial of degree l with inner rank n - l must satisfy
/// Norm(f_0/f_l) = (-1)^(l n). The check is necessary, not sufficient.
#[derive(Debug, Clone)]
pub struct NormCheck {
    pub holds: bool,
    pub norm_value: GrElem,
    pub expected: GrElem,
}

pub fn norm_condition_check(
    ring: &GaloisRing,
    f: &SigmaPoly,
    ell: usize,
) -> Result<NormCheck, SkewError> {
    f.check_ring(ring)?;
    if f.deg_sigma() != Some(ell) {
        return Err(SkewError::DegreeMismatch);
    }
    let f0 = &f.coeffs[0];
    let fl = &f.coeffs[ell];
    if !ring.is_unit(f0) || !ring.is_unit(fl) {
        return Err(SkewError::NonUnitCoefficient);
    }
    let ratio = ring.mul(f0, &ring.inv_unit(fl));
    let norm_value = ring.norm(&ratio);
    let expected = if (ell * ring.degree()).is_multiple_of(2) {
        ring.one()
    } else {
        ring.from_i64(-1)
    };
    Ok(NormCheck {
        holds: norm_value == expected,
        norm_value,
        expected,
    })
}
