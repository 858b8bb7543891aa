//! Arithmetic in the prime field F_p for a runtime-chosen odd prime p < 2^62.

use crate::error::{Error, Result};

/// Canonical residue in `[0, p)`. All operations producing a `FieldElem` keep
/// it reduced; the modulus lives in the accompanying [`PrimeField`] context.
pub type FieldElem = u64;

/// Modulus context. The modulus is runtime data so the CLI can pick p per
/// input file; it must be an odd prime with 2 < p < 2^62.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Builds the context, verifying the range and (deterministically, via
    /// Miller-Rabin) the primality of `p`.
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || p >= (1 << 62) || !is_prime_u64(p) {
            return Err(Error::BadPrime(p));
        }
        Ok(PrimeField { p })
    }

    /// Builds the context without the primality check (`--no-prime-check`).
    /// The range bound is still enforced.
    pub fn new_unchecked(p: u64) -> Result<Self> {
        if p <= 2 || p >= (1 << 62) {
            return Err(Error::BadPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn zero(&self) -> FieldElem {
        0
    }

    #[inline]
    pub fn one(&self) -> FieldElem {
        1 % self.p
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn from_u128(&self, x: u128) -> FieldElem {
        (x % self.p as u128) as u64
    }

    #[inline]
    pub fn from_i64(&self, x: i64) -> FieldElem {
        let m = x.rem_euclid(self.p as i64);
        m as u64
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert!(a < self.p && b < self.p);
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert!(a < self.p && b < self.p);
        if a >= b { a - b } else { a + self.p - b }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        debug_assert!(a < self.p);
        if a == 0 { 0 } else { self.p - a }
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert!(a < self.p && b < self.p);
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// `a^e mod p` by square-and-multiply, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a % self.p;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm, so that
    /// the zero case is detected explicitly rather than silently mapped by a
    /// Fermat power.
    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "modulus must be prime");
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }
}

/// Deterministic Miller-Rabin. The chosen bases are a proven witness set for
/// all integers below 3.3 * 10^24, far above the 2^62 modulus bound.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        a %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
