//! Exact scalar arithmetic: prime fields GF(q) with a runtime modulus, and
//! arbitrary-precision rationals. Both implement the [`Field`] trait so the
//! matrix kernel can run unchanged over either.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A field given as an arithmetic context. Elements do not carry the field
/// with them; every operation goes through the context, which keeps GF(q)
/// elements as bare `u64` values.
pub trait Field: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// The prime field GF(q). Elements are `u64` values already reduced mod q.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Gf {
    q: u64,
}

impl Gf {
    /// Builds GF(q), rejecting non-prime moduli.
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Gf { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Reduces an unsigned integer into [0, q).
    pub fn elem(&self, v: u64) -> u64 {
        v % self.q
    }

    /// Reduces a signed integer into [0, q).
    pub fn elem_i64(&self, v: i64) -> u64 {
        let q = self.q as i64;
        (v.rem_euclid(q)) as u64
    }

    /// Maps an exact rational into GF(q); fails if the denominator is
    /// divisible by q.
    pub fn elem_rational(&self, r: &BigRational) -> Result<u64> {
        let q = BigInt::from(self.q);
        let num = r.numer().mod_floor(&q);
        let den = r.denom().mod_floor(&q);
        let num: u64 = num.try_into().expect("reduced residue fits u64");
        let den: u64 = den.try_into().expect("reduced residue fits u64");
        let inv = self
            .inv(&den)
            .ok_or_else(|| Error::NotInvertible { value: den, q: self.q })?;
        Ok(self.mul(&num, &inv))
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut base = base % self.q;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Uniform element via the RNG's unbiased range sampling.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(0..self.q)
    }

    /// Uniform vector of the given length.
    pub fn sample_vec<R: rand::Rng + ?Sized>(&self, rng: &mut R, len: usize) -> Vec<u64> {
        (0..len).map(|_| self.sample(rng)).collect()
    }

    /// Pointwise sum of two vectors.
    pub fn add_vec(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        debug_assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(x, y)| self.add(x, y)).collect()
    }

    /// Pointwise difference of two vectors.
    pub fn sub_vec(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        debug_assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(x, y)| self.sub(x, y)).collect()
    }

    /// Inner product of two vectors.
    pub fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        debug_assert_eq!(a.len(), b.len());
        a.iter()
            .zip(b)
            .fold(0u64, |acc, (x, y)| self.add(&acc, &self.mul(x, y)))
    }
}

impl Field for Gf {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.q
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.q - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.q as u128) as u64
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(q-2) mod q.
        Some(self.pow(*a, self.q - 2))
    }
}

/// The rationals with arbitrary-precision integers. Used as the second
/// scalar instantiation of the matrix kernel for worked examples carrying
/// fractional entries.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
}

/// Convenience constructor for rational constants in tests and fixtures.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Deterministic trial-division primality test; moduli stay desk-scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

trait ModFloor {
    fn mod_floor(&self, m: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes = [2u64, 3, 5, 7, 11, 13, 101, 7919];
        for p in primes {
            assert!(is_prime(p), "{p} is prime");
        }
        for c in [0u64, 1, 4, 9, 15, 21, 91, 100] {
            assert!(!is_prime(c), "{c} is composite");
        }
        assert_eq!(next_prime_above(6), 7);
        assert_eq!(next_prime_above(15), 17);
    }

    #[test]
    fn field_axioms_exhaustive_small_q() {
        for q in [2u64, 3, 5, 7, 11, 13] {
            let f = Gf::new(q).unwrap();
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.add(&a, &b), f.add(&b, &a));
                    assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                    for c in 0..q {
                        assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
                        assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                        assert_eq!(
                            f.mul(&a, &f.add(&b, &c)),
                            f.add(&f.mul(&a, &b), &f.mul(&a, &c))
                        );
                    }
                    assert_eq!(f.sub(&f.add(&a, &b), &b), a);
                }
                assert_eq!(f.add(&a, &f.neg(&a)), 0);
                if a != 0 {
                    let ai = f.inv(&a).unwrap();
                    assert_eq!(f.mul(&a, &ai), f.one());
                }
            }
            assert!(f.inv(&0).is_none());
        }
    }

    #[test]
    fn rational_mapping_into_gf() {
        let f = Gf::new(101).unwrap();
        // 3/2 mod 101 = 3 * inverse(2) = 3 * 51 = 153 mod 101 = 52.
        assert_eq!(f.elem_rational(&ratio(3, 2)).unwrap(), 52);
        assert_eq!(f.elem_rational(&ratio(-5, 2)).unwrap(), f.elem_i64(-5 * 51));
        let bad = Gf::new(2).unwrap();
        assert!(bad.elem_rational(&ratio(1, 2)).is_err());
    }

    #[test]
    fn signed_reduction() {
        let f = Gf::new(7).unwrap();
        assert_eq!(f.elem_i64(-1), 6);
        assert_eq!(f.elem_i64(-7), 0);
        assert_eq!(f.elem_i64(15), 1);
    }
}
