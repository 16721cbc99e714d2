//! Arithmetic in the chain ring Z/p^k with residues packed into `u64`.
//!
//! Desk-scale moduli only: the constructor rejects p^k that does not fit.
//! All intermediate products go through `u128`, so no overflow is possible.

/// Descriptor of Z/p^k. Copyable; every operation is a pure function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZkRing {
    pub p: u64,
    pub k: u32,
    /// p^k
    pub modulus: u64,
}

impl ZkRing {
    /// Builds Z/p^k. Assumes `p` prime (checked by the chain-ring layer).
    pub fn new(p: u64, k: u32) -> Option<ZkRing> {
        if p < 2 || k == 0 {
            return None;
        }
        let modulus = p.checked_pow(k)?;
        Some(ZkRing { p, k, modulus })
    }

    pub fn reduce_i64(&self, x: i64) -> u64 {
        let m = self.modulus as i128;
        (((x as i128 % m) + m) % m) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = (a as u128 + b as u128) % self.modulus as u128;
        s as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let m = self.modulus as u128;
        ((a as u128 + m - b as u128 % m) % m) as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a % self.modulus
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64 % self.modulus;
        base %= self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Valuation of a residue class: the largest j <= k with p^j | x.
    /// Zero gets valuation k (it lies in every power of the maximal ideal).
    pub fn val(&self, x: u64) -> u32 {
        if x.is_multiple_of(self.modulus) {
            return self.k;
        }
        let mut v = 0;
        let mut x = x % self.modulus;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, x: u64) -> bool {
        !x.is_multiple_of(self.p)
    }

    /// Inverse of a unit, by lifting the mod-p inverse with Newton steps.
    pub fn inv_unit(&self, x: u64) -> u64 {
        assert!(self.is_unit(x), "attempted to invert a non-unit mod p^k");
        let mut inv = inv_mod_prime(x % self.p, self.p);
        // each step doubles the precision: inv <- inv * (2 - x*inv)
        let mut bits = 1;
        while bits < self.k {
            let t = self.sub(2 % self.modulus, self.mul(x, inv));
            inv = self.mul(inv, t);
            bits *= 2;
        }
        debug_assert_eq!(self.mul(inv, x), 1 % self.modulus);
        inv
    }

    /// Exact division by p^j of a residue whose canonical representative is
    /// divisible by p^j. The result is only meaningful modulo p^(k-j).
    pub fn exact_div_pow_p(&self, x: u64, j: u32) -> u64 {
        let q = self.p.pow(j);
        debug_assert_eq!(x % q, 0, "representative not divisible by p^{j}");
        x / q
    }

    /// The ring Z/p^j for j <= k.
    pub fn truncated(&self, j: u32) -> ZkRing {
        assert!(j >= 1 && j <= self.k);
        ZkRing {
            p: self.p,
            k: j,
            modulus: self.p.pow(j),
        }
    }
}

/// Inverse mod a prime via the extended Euclidean algorithm.
pub fn inv_mod_prime(x: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, (x % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert!(r0 == 1, "not invertible mod p");
    (((t0 % p as i128) + p as i128) % p as i128) as u64
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map(|s| s <= n).unwrap_or(false) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations_in_z9() {
        let r = ZkRing::new(3, 2).unwrap();
        assert_eq!(r.val(0), 2);
        assert_eq!(r.val(3), 1);
        assert_eq!(r.val(6), 1);
        assert_eq!(r.val(5), 0);
    }

    #[test]
    fn unit_inverse_z27() {
        let r = ZkRing::new(3, 3).unwrap();
        for x in 1..27 {
            if r.is_unit(x) {
                assert_eq!(r.mul(x, r.inv_unit(x)), 1);
            }
        }
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(7919));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(91));
    }
}
