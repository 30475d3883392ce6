//! The supersingular curve `y² = x³ + x` over F_q.

use num_bigint::BigUint;

use super::field::Fp;

/// Affine point of `y² = x³ + x`, or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Fp, y: Fp },
}

impl CurvePoint {
    /// Builds an affine point, checking the curve equation.
    pub fn from_affine(x: Fp, y: Fp) -> Option<Self> {
        let p = CurvePoint::Affine { x, y };
        p.is_on_curve().then_some(p)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn coordinates(&self) -> Option<(&Fp, &Fp)> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, y } => Some((x, y)),
        }
    }

    pub fn is_on_curve(&self) -> bool {
        match self {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => y.square() == curve_rhs(x),
        }
    }

    pub fn negate(&self) -> Self {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: -y,
            },
        }
    }

    /// Chord-and-tangent addition in affine coordinates.
    pub fn add(&self, other: &Self) -> Self {
        let (x1, y1, x2, y2) = match (self, other) {
            (CurvePoint::Infinity, _) => return other.clone(),
            (_, CurvePoint::Infinity) => return self.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let slope = if x1 == x2 {
            if y1 != y2 || y1.is_zero() {
                return CurvePoint::Infinity;
            }
            // tangent: (3x² + 1) / 2y
            let num = &x1.square().mul_small(3) + &Fp::one(x1.modulus());
            &num * &y1.double().inverse().expect("y is nonzero")
        } else {
            let dx = (x2 - x1).inverse().expect("x coordinates differ");
            &(y2 - y1) * &dx
        };
        let x3 = &(&slope.square() - x1) - x2;
        let y3 = &(&slope * &(x1 - &x3)) - y1;
        CurvePoint::Affine { x: x3, y: y3 }
    }

    pub fn double(&self) -> Self {
        self.add(self)
    }

    /// `[k]P` by left-to-right double-and-add over Jacobian coordinates.
    pub fn mul(&self, k: &BigUint) -> Self {
        let (x, y) = match self {
            CurvePoint::Infinity => return CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => (x, y),
        };
        let mut acc = Jacobian::infinity(x);
        for bit in (0..k.bits()).rev() {
            acc = acc.double();
            if k.bit(bit) {
                acc = acc.add_affine(x, y);
            }
        }
        acc.to_affine()
    }
}

/// `x³ + x`.
pub(crate) fn curve_rhs(x: &Fp) -> Fp {
    &(&x.square() * x) + x
}

/// Jacobian coordinates `(X, Y, Z)` for the affine point `(X/Z², Y/Z³)`.
/// `Z = 0` marks infinity.
#[derive(Clone, Debug)]
pub(crate) struct Jacobian {
    pub x: Fp,
    pub y: Fp,
    pub z: Fp,
}

impl Jacobian {
    pub fn infinity(like: &Fp) -> Self {
        let m = like.modulus();
        Self {
            x: Fp::one(m),
            y: Fp::one(m),
            z: Fp::zero(m),
        }
    }

    pub fn from_affine(x: &Fp, y: &Fp) -> Self {
        Self {
            x: x.clone(),
            y: y.clone(),
            z: Fp::one(x.modulus()),
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.z.is_zero()
    }

    pub fn double(&self) -> Self {
        if self.is_infinity() || self.y.is_zero() {
            return Self::infinity(&self.x);
        }
        let xx = self.x.square();
        let yy = self.y.square();
        let yyyy = yy.square();
        let zz = self.z.square();
        let s = (&self.x * &yy).mul_small(4);
        // a = 1
        let m = &xx.mul_small(3) + &zz.square();
        let x3 = &m.square() - &s.double();
        let y3 = &(&m * &(&s - &x3)) - &yyyy.mul_small(8);
        let z3 = (&self.y * &self.z).double();
        Self {
            x: x3,
            y: y3,
            z: z3,
        }
    }

    /// Mixed addition with an affine point.
    pub fn add_affine(&self, x2: &Fp, y2: &Fp) -> Self {
        if self.is_infinity() {
            return Self::from_affine(x2, y2);
        }
        let z1z1 = self.z.square();
        let u2 = x2 * &z1z1;
        let s2 = &(y2 * &self.z) * &z1z1;
        let h = &u2 - &self.x;
        let r = &s2 - &self.y;
        if h.is_zero() {
            return if r.is_zero() {
                self.double()
            } else {
                Self::infinity(x2)
            };
        }
        let hh = h.square();
        let hhh = &h * &hh;
        let v = &self.x * &hh;
        let x3 = &(&r.square() - &hhh) - &v.double();
        let y3 = &(&r * &(&v - &x3)) - &(&self.y * &hhh);
        let z3 = &self.z * &h;
        Self {
            x: x3,
            y: y3,
            z: z3,
        }
    }

    pub fn to_affine(&self) -> CurvePoint {
        if self.is_infinity() {
            return CurvePoint::Infinity;
        }
        let zinv = self.z.inverse().expect("z is nonzero");
        let zinv2 = zinv.square();
        let x = &self.x * &zinv2;
        let y = &(&self.y * &zinv2) * &zinv;
        CurvePoint::Affine { x, y }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::field::Modulus;

    /// Every affine point of the curve over F_11, by brute force.
    fn toy_points() -> Vec<CurvePoint> {
        let m = Modulus::new(BigUint::from(11u32));
        let mut out = vec![CurvePoint::Infinity];
        for x in 0..11u64 {
            for y in 0..11u64 {
                if (y * y) % 11 == (x * x * x + x) % 11 {
                    out.push(CurvePoint::Affine {
                        x: Fp::from_u64(x, &m),
                        y: Fp::from_u64(y, &m),
                    });
                }
            }
        }
        out
    }

    #[test]
    fn toy_curve_has_q_plus_one_points() {
        assert_eq!(toy_points().len(), 12);
    }

    #[test]
    fn group_law_closes_and_is_commutative() {
        let pts = toy_points();
        for p in &pts {
            for q in &pts {
                let s = p.add(q);
                assert!(s.is_on_curve());
                assert!(pts.contains(&s));
                assert_eq!(s, q.add(p));
            }
            assert_eq!(p.add(&CurvePoint::Infinity), *p);
            assert!(p.add(&p.negate()).is_infinity());
        }
    }

    #[test]
    fn group_law_is_associative() {
        let pts = toy_points();
        for a in &pts {
            for b in &pts {
                for c in &pts {
                    assert_eq!(a.add(b).add(c), a.add(&b.add(c)));
                }
            }
        }
    }

    #[test]
    fn scalar_mul_matches_repeated_addition() {
        let pts = toy_points();
        for p in &pts {
            let mut acc = CurvePoint::Infinity;
            for k in 0..30u32 {
                assert_eq!(p.mul(&BigUint::from(k)), acc, "k={k} p={p:?}");
                acc = acc.add(p);
            }
            assert!(p.mul(&BigUint::from(12u32)).is_infinity());
        }
    }

    #[test]
    fn order_three_points_exist() {
        let pts = toy_points();
        let order3: Vec<_> = pts
            .iter()
            .filter(|p| !p.is_infinity() && p.add(p).add(p).is_infinity())
            .collect();
        assert_eq!(order3.len(), 2);
    }
}
