//! Prime-field arithmetic on arbitrary-precision integers.
//!
//! Nothing in here is constant time. Values are canonical residues and every
//! operation reduces its output.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;

/// A prime modulus plus the derived constants the arithmetic needs.
#[derive(Debug, PartialEq, Eq)]
pub struct Modulus {
    value: BigUint,
    bits: u64,
    byte_len: usize,
    /// `(m + 1) / 4`, the square-root exponent for `m ≡ 3 mod 4`.
    sqrt_exp: BigUint,
    /// `(m - 1) / 2`, Euler's criterion exponent.
    euler_exp: BigUint,
}

impl Modulus {
    pub fn new(value: BigUint) -> Arc<Self> {
        let bits = value.bits();
        let byte_len = bits.div_ceil(8) as usize;
        let sqrt_exp = (&value + 1u32) >> 2;
        let euler_exp = (&value - 1u32) >> 1;
        Arc::new(Self {
            value,
            bits,
            byte_len,
            sqrt_exp,
            euler_exp,
        })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Fixed width of a serialized residue.
    pub fn byte_len(&self) -> usize {
        self.byte_len
    }

    fn reduce(&self, v: BigUint) -> BigUint {
        if v < self.value {
            v
        } else {
            v % &self.value
        }
    }

    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.value {
            s - &self.value
        } else {
            s
        }
    }

    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.value - (b - a)
        }
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.value
    }

    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.value - a
        }
    }

    fn inv(&self, a: &BigUint) -> Option<BigUint> {
        if a.is_zero() {
            return None;
        }
        a.modinv(&self.value)
    }

    /// Uniform residue by rejection sampling on the bit length of the modulus.
    fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> BigUint {
        let mut buf = vec![0u8; self.byte_len];
        let excess = (self.byte_len as u64) * 8 - self.bits;
        loop {
            rng.fill_bytes(&mut buf);
            buf[0] &= 0xffu8 >> excess;
            let v = BigUint::from_bytes_be(&buf);
            if v < self.value {
                return v;
            }
        }
    }

    fn to_fixed_bytes(&self, v: &BigUint) -> Vec<u8> {
        let raw = v.to_bytes_be();
        let mut out = vec![0u8; self.byte_len];
        if !v.is_zero() {
            out[self.byte_len - raw.len()..].copy_from_slice(&raw);
        }
        out
    }
}

macro_rules! residue_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone)]
        pub struct $name {
            value: BigUint,
            modulus: Arc<Modulus>,
        }

        impl $name {
            /// Reduces `value` into the canonical range.
            pub fn new(value: BigUint, modulus: &Arc<Modulus>) -> Self {
                Self {
                    value: modulus.reduce(value),
                    modulus: Arc::clone(modulus),
                }
            }

            pub fn from_u64(value: u64, modulus: &Arc<Modulus>) -> Self {
                Self::new(BigUint::from(value), modulus)
            }

            pub fn zero(modulus: &Arc<Modulus>) -> Self {
                Self {
                    value: BigUint::zero(),
                    modulus: Arc::clone(modulus),
                }
            }

            pub fn one(modulus: &Arc<Modulus>) -> Self {
                Self::from_u64(1, modulus)
            }

            pub fn random<R: RngCore + ?Sized>(modulus: &Arc<Modulus>, rng: &mut R) -> Self {
                Self {
                    value: modulus.random(rng),
                    modulus: Arc::clone(modulus),
                }
            }

            /// Parses a big-endian encoding; `None` unless the value is already canonical.
            pub fn from_bytes_be(bytes: &[u8], modulus: &Arc<Modulus>) -> Option<Self> {
                let value = BigUint::from_bytes_be(bytes);
                (value < modulus.value).then(|| Self {
                    value,
                    modulus: Arc::clone(modulus),
                })
            }

            /// Big-endian, left-padded to the modulus byte width.
            pub fn to_bytes_be(&self) -> Vec<u8> {
                self.modulus.to_fixed_bytes(&self.value)
            }

            pub fn value(&self) -> &BigUint {
                &self.value
            }

            pub fn modulus(&self) -> &Arc<Modulus> {
                &self.modulus
            }

            pub fn is_zero(&self) -> bool {
                self.value.is_zero()
            }

            pub fn is_one(&self) -> bool {
                self.value.is_one()
            }

            pub fn inverse(&self) -> Option<Self> {
                self.modulus.inv(&self.value).map(|value| Self {
                    value,
                    modulus: Arc::clone(&self.modulus),
                })
            }

            pub fn pow(&self, exp: &BigUint) -> Self {
                Self {
                    value: self.value.modpow(exp, &self.modulus.value),
                    modulus: Arc::clone(&self.modulus),
                }
            }

            pub fn square(&self) -> Self {
                self * self
            }

            pub fn double(&self) -> Self {
                self + self
            }

            fn with(&self, value: BigUint) -> Self {
                Self {
                    value,
                    modulus: Arc::clone(&self.modulus),
                }
            }
        }

        impl PartialEq for $name {
            fn eq(&self, other: &Self) -> bool {
                self.value == other.value && self.modulus.value == other.modulus.value
            }
        }

        impl Eq for $name {}

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}(0x{:x})", stringify!($name), self.value)
            }
        }

        impl<'a> Add<&'a $name> for &'a $name {
            type Output = $name;
            fn add(self, rhs: &'a $name) -> $name {
                self.with(self.modulus.add(&self.value, &rhs.value))
            }
        }

        impl<'a> Sub<&'a $name> for &'a $name {
            type Output = $name;
            fn sub(self, rhs: &'a $name) -> $name {
                self.with(self.modulus.sub(&self.value, &rhs.value))
            }
        }

        impl<'a> Mul<&'a $name> for &'a $name {
            type Output = $name;
            fn mul(self, rhs: &'a $name) -> $name {
                self.with(self.modulus.mul(&self.value, &rhs.value))
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                self.with(self.modulus.neg(&self.value))
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, rhs: $name) -> $name {
                &self + &rhs
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, rhs: $name) -> $name {
                &self - &rhs
            }
        }

        impl Mul for $name {
            type Output = $name;
            fn mul(self, rhs: $name) -> $name {
                &self * &rhs
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name {
                -&self
            }
        }
    };
}

residue_type!(
    /// Element of the base field F_q.
    Fp
);

residue_type!(
    /// Exponent in Z_r, where r is the prime order of the pairing groups.
    Scalar
);

impl Fp {
    /// Square root for `q ≡ 3 mod 4`; `None` when `self` is a non-residue.
    pub fn sqrt(&self) -> Option<Self> {
        let root = self.pow(&self.modulus.sqrt_exp);
        (root.square() == *self).then_some(root)
    }

    /// Legendre symbol: 0, 1, or -1 (as `i8`).
    pub fn legendre(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if self.pow(&self.modulus.euler_exp).is_one() {
            1
        } else {
            -1
        }
    }

    /// Multiplication by a small constant.
    pub fn mul_small(&self, k: u32) -> Self {
        self.with(self.modulus.reduce(&self.value * k))
    }
}

impl Scalar {
    /// Uniform nonzero element.
    pub fn random_nonzero<R: RngCore + ?Sized>(modulus: &Arc<Modulus>, rng: &mut R) -> Self {
        loop {
            let s = Self::random(modulus, rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Reduces a signed integer into Z_r.
    pub fn from_i64(value: i64, modulus: &Arc<Modulus>) -> Self {
        let mag = Self::from_u64(value.unsigned_abs(), modulus);
        if value < 0 {
            -mag
        } else {
            mag
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn small() -> Arc<Modulus> {
        Modulus::new(BigUint::from(11u32))
    }

    #[test]
    fn canonical_reduction() {
        let m = small();
        assert_eq!(Fp::from_u64(25, &m).value(), &BigUint::from(3u32));
        assert_eq!((-Fp::zero(&m)).value(), &BigUint::zero());
        let a = Fp::from_u64(3, &m);
        let b = Fp::from_u64(9, &m);
        assert_eq!((&a - &b).value(), &BigUint::from(5u32));
        assert_eq!((&a + &b).value(), &BigUint::from(1u32));
        assert_eq!((&a * &b).value(), &BigUint::from(5u32));
    }

    #[test]
    fn inverse_of_zero_is_none() {
        let m = small();
        assert!(Fp::zero(&m).inverse().is_none());
        for v in 1..11 {
            let a = Fp::from_u64(v, &m);
            assert!((&a * &a.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn sqrt_matches_enumeration() {
        let m = small();
        let squares: Vec<u64> = (0..11u64).map(|v| v * v % 11).collect();
        for v in 0..11u64 {
            let a = Fp::from_u64(v, &m);
            match a.sqrt() {
                Some(root) => {
                    assert!(squares.contains(&v));
                    assert_eq!(root.square(), a);
                }
                None => assert!(!squares.contains(&v)),
            }
            let expected = if v == 0 {
                0
            } else if squares.contains(&v) {
                1
            } else {
                -1
            };
            assert_eq!(a.legendre(), expected);
        }
    }

    #[test]
    fn fixed_width_bytes() {
        let m = Modulus::new(BigUint::from(0x1_0001u32));
        assert_eq!(m.byte_len(), 3);
        let a = Fp::from_u64(5, &m);
        assert_eq!(a.to_bytes_be(), vec![0, 0, 5]);
        assert_eq!(Fp::from_bytes_be(&[0, 0, 5], &m), Some(a));
        assert!(Fp::from_bytes_be(&[1, 0, 1], &m).is_none());
    }

    #[test]
    fn random_is_in_range() {
        let m = Modulus::new(BigUint::from(257u32));
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..5000 {
            let v = Fp::random(&m, &mut rng);
            assert!(v.value() < m.value());
            seen.insert(v.value().clone());
        }
        assert_eq!(seen.len(), 257);
    }

    #[test]
    fn signed_scalars() {
        let m = Modulus::new(BigUint::from(7u32));
        assert_eq!(Scalar::from_i64(-2, &m).value(), &BigUint::from(5u32));
        assert_eq!(Scalar::from_i64(9, &m).value(), &BigUint::from(2u32));
    }
}
