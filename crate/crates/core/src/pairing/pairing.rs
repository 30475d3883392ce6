//! The reduced Tate pairing with distortion map, and the target group GT.

use num_bigint::BigUint;

use super::curve::{CurvePoint, Jacobian};
use super::field::{Fp, Scalar};
use super::fp2::Fp2;
use super::params::GroupParams;
use crate::error::PairingError;

/// Element of the order-r subgroup of F_{q²}*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtElement(Fp2);

impl GtElement {
    pub fn one(params: &GroupParams) -> Self {
        Self(Fp2::one(params.field()))
    }

    /// Wraps a raw extension-field value. Membership in the subgroup is the
    /// caller's responsibility; see [`GtElement::in_subgroup`].
    pub fn from_fp2(value: Fp2) -> Self {
        Self(value)
    }

    pub fn value(&self) -> &Fp2 {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// Subgroup elements have norm 1, so the inverse is the conjugate.
    pub fn inverse(&self) -> Self {
        Self(self.0.conjugate())
    }

    pub fn pow(&self, k: &Scalar) -> Self {
        Self(self.0.pow(k.value()))
    }

    pub fn pow_big(&self, k: &BigUint) -> Self {
        Self(self.0.pow(k))
    }

    pub fn in_subgroup(&self, params: &GroupParams) -> bool {
        !self.0.is_zero() && self.0.pow(params.r()).is_one()
    }

    /// Two fixed-width big-endian field elements, real part first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.0.c0.to_bytes_be();
        out.extend(self.0.c1.to_bytes_be());
        out
    }
}

/// ê(P, Q) = Tate_r(P, φ(Q))^((q²-1)/r) with φ(x, y) = (-x, i·y).
///
/// Both inputs must lie in the order-r subgroup. Membership of `p` falls out
/// of the Miller loop (its final accumulator is `[r]P`); `q` is checked with
/// one scalar multiplication.
pub fn pairing(
    p: &CurvePoint,
    q: &CurvePoint,
    params: &GroupParams,
) -> Result<GtElement, PairingError> {
    if !p.is_on_curve() || !q.is_on_curve() {
        return Err(PairingError::NotInSubgroup);
    }
    let (Some((xp, yp)), Some((xq, yq))) = (p.coordinates(), q.coordinates()) else {
        return Ok(GtElement::one(params));
    };
    if !q.mul(params.r()).is_infinity() {
        return Err(PairingError::NotInSubgroup);
    }
    let (f, acc) = miller_loop(xp, yp, xq, yq, params.r());
    if !acc.is_infinity() {
        return Err(PairingError::NotInSubgroup);
    }
    Ok(final_exponentiation(&f, params))
}

/// Accumulates line functions through `T` and `P` evaluated at `φ(Q)`.
/// Vertical lines and all F_q scale factors are dropped since they vanish
/// under the final exponentiation.
fn miller_loop(xp: &Fp, yp: &Fp, xq: &Fp, yq: &Fp, r: &BigUint) -> (Fp2, Jacobian) {
    let m = xp.modulus();
    let mut f = Fp2::one(m);
    let mut t = Jacobian::from_affine(xp, yp);
    for bit in (0..r.bits() - 1).rev() {
        if !t.is_infinity() && !t.y.is_zero() {
            f = &f.square() * &tangent_line(&t, xq, yq);
        } else {
            f = f.square();
        }
        t = t.double();
        if r.bit(bit) {
            if let Some(line) = chord_line(&t, xp, yp, xq, yq) {
                f = &f * &line;
            }
            t = t.add_affine(xp, yp);
        }
    }
    (f, t)
}

/// Tangent at `T`, scaled by `2·Y·Z⁴` (an F_q factor):
/// `M·(Z²·x_Q + X) - 2Y² + (2·Y·Z³·y_Q)·i` where `M = 3X² + Z⁴`.
fn tangent_line(t: &Jacobian, xq: &Fp, yq: &Fp) -> Fp2 {
    let zz = t.z.square();
    let slope_num = &t.x.square().mul_small(3) + &zz.square();
    let re = &(&slope_num * &(&(&zz * xq) + &t.x)) - &t.y.square().double();
    let z3 = (&t.y * &t.z).double();
    let im = &(&z3 * &zz) * yq;
    Fp2::new(re, im)
}

/// Chord through `T` and affine `P`, scaled by `Z·H` where `H = x_P·Z² - X`.
/// Returns `None` for a vertical line.
fn chord_line(t: &Jacobian, xp: &Fp, yp: &Fp, xq: &Fp, yq: &Fp) -> Option<Fp2> {
    if t.is_infinity() {
        return None;
    }
    let zz = t.z.square();
    let h = &(xp * &zz) - &t.x;
    if h.is_zero() {
        return None;
    }
    let rr = &(&(yp * &t.z) * &zz) - &t.y;
    let z3 = &t.z * &h;
    let re = &(&rr * &(xq + xp)) - &(&z3 * yp);
    let im = &z3 * yq;
    Some(Fp2::new(re, im))
}

/// `f^((q-1)·h)`: the easy part via Frobenius, then the cofactor power.
fn final_exponentiation(f: &Fp2, params: &GroupParams) -> GtElement {
    let inv = f.inverse().expect("Miller loop output is nonzero");
    let unitary = &f.conjugate() * &inv;
    GtElement(unitary.pow(params.h()))
}
