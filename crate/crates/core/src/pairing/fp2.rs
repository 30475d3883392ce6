//! The quadratic extension F_q[i] / (i² + 1).

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigUint;

use super::field::{Fp, Modulus};

/// `c0 + c1·i` with `i² = -1`; a field because `q ≡ 3 mod 4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fp2 {
    pub c0: Fp,
    pub c1: Fp,
}

impl Fp2 {
    pub fn new(c0: Fp, c1: Fp) -> Self {
        Self { c0, c1 }
    }

    pub fn zero(m: &Arc<Modulus>) -> Self {
        Self::new(Fp::zero(m), Fp::zero(m))
    }

    pub fn one(m: &Arc<Modulus>) -> Self {
        Self::new(Fp::one(m), Fp::zero(m))
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.c0.is_one() && self.c1.is_zero()
    }

    /// The q-power Frobenius, which is complex conjugation here.
    pub fn conjugate(&self) -> Self {
        Self::new(self.c0.clone(), -&self.c1)
    }

    pub fn norm(&self) -> Fp {
        &self.c0.square() + &self.c1.square()
    }

    pub fn square(&self) -> Self {
        // (a + bi)² = (a + b)(a - b) + 2ab·i
        let sum = &self.c0 + &self.c1;
        let diff = &self.c0 - &self.c1;
        let cross = &self.c0 * &self.c1;
        Self::new(&sum * &diff, cross.double())
    }

    pub fn inverse(&self) -> Option<Self> {
        let inv_norm = self.norm().inverse()?;
        Some(Self::new(&self.c0 * &inv_norm, -&(&self.c1 * &inv_norm)))
    }

    pub fn mul_by_fp(&self, k: &Fp) -> Self {
        Self::new(&self.c0 * k, &self.c1 * k)
    }

    pub fn pow(&self, exp: &BigUint) -> Self {
        let m = self.c0.modulus();
        let mut acc = Self::one(m);
        for bit in (0..exp.bits()).rev() {
            acc = acc.square();
            if exp.bit(bit) {
                acc = &acc * self;
            }
        }
        acc
    }
}

impl<'a> Mul<&'a Fp2> for &'a Fp2 {
    type Output = Fp2;

    fn mul(self, rhs: &'a Fp2) -> Fp2 {
        // Karatsuba: three base-field products.
        let ac = &self.c0 * &rhs.c0;
        let bd = &self.c1 * &rhs.c1;
        let cross = &(&self.c0 + &self.c1) * &(&rhs.c0 + &rhs.c1);
        Fp2::new(&ac - &bd, &(&cross - &ac) - &bd)
    }
}

impl<'a> Add<&'a Fp2> for &'a Fp2 {
    type Output = Fp2;

    fn add(self, rhs: &'a Fp2) -> Fp2 {
        Fp2::new(&self.c0 + &rhs.c0, &self.c1 + &rhs.c1)
    }
}

impl<'a> Sub<&'a Fp2> for &'a Fp2 {
    type Output = Fp2;

    fn sub(self, rhs: &'a Fp2) -> Fp2 {
        Fp2::new(&self.c0 - &rhs.c0, &self.c1 - &rhs.c1)
    }
}

impl Neg for &Fp2 {
    type Output = Fp2;

    fn neg(self) -> Fp2 {
        Fp2::new(-&self.c0, -&self.c1)
    }
}
