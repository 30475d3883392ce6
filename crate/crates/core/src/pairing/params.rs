//! Type-A pairing parameters: `q = h·r - 1` prime, `q ≡ 3 mod 4`, and a
//! generator of the order-`r` subgroup of `y² = x³ + x` over F_q.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;

use super::curve::{curve_rhs, CurvePoint};
use super::field::{Fp, Modulus, Scalar};
use super::prime::{is_probable_prime, random_below, random_prime};
use crate::error::PairingError;

/// Miller-Rabin rounds used for generated and validated primes.
pub const PRIMALITY_ROUNDS: u32 = 64;

/// Candidate multipliers tried before giving up on finding a prime q.
pub const DEFAULT_SEARCH_BUDGET: u64 = 200_000;

/// Symmetric-equivalent security strength and the matching (r, q) sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SecurityLevel {
    Bits80,
    Bits112,
    Bits128,
}

impl SecurityLevel {
    pub const ALL: [SecurityLevel; 3] = [Self::Bits80, Self::Bits112, Self::Bits128];

    pub fn bits(self) -> u16 {
        match self {
            Self::Bits80 => 80,
            Self::Bits112 => 112,
            Self::Bits128 => 128,
        }
    }

    pub fn from_bits(bits: u16) -> Option<Self> {
        match bits {
            80 => Some(Self::Bits80),
            112 => Some(Self::Bits112),
            128 => Some(Self::Bits128),
            _ => None,
        }
    }

    /// Bit length of the group order r.
    pub fn order_bits(self) -> u64 {
        match self {
            Self::Bits80 => 160,
            Self::Bits112 => 224,
            Self::Bits128 => 256,
        }
    }

    /// Bit length of the field prime q.
    pub fn field_bits(self) -> u64 {
        match self {
            Self::Bits80 => 512,
            Self::Bits112 => 1024,
            Self::Bits128 => 1536,
        }
    }
}

impl fmt::Display for SecurityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits())
    }
}

impl std::str::FromStr for SecurityLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .parse::<u16>()
            .ok()
            .and_then(Self::from_bits)
            .ok_or_else(|| format!("unsupported security level {s:?} (expected 80, 112 or 128)"))
    }
}

#[derive(Debug)]
struct Inner {
    field: Arc<Modulus>,
    order: Arc<Modulus>,
    cofactor: BigUint,
    generator: CurvePoint,
    level: Option<SecurityLevel>,
}

/// A Type-A pairing instance. Cheap to clone.
#[derive(Clone, Debug)]
pub struct GroupParams(Arc<Inner>);

impl PartialEq for GroupParams {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.q() == other.q()
                && self.r() == other.r()
                && self.0.generator == other.0.generator
                && self.0.level == other.0.level)
    }
}

impl Eq for GroupParams {}

impl GroupParams {
    /// Assembles parameters from their parts, checking every invariant except
    /// primality of q and r (see [`GroupParams::validate`]).
    pub fn from_parts(
        q: BigUint,
        r: BigUint,
        h: BigUint,
        gx: BigUint,
        gy: BigUint,
        level: Option<SecurityLevel>,
    ) -> Result<Self, PairingError> {
        let bad = |m: &str| Err(PairingError::InvalidParams(m.to_string()));
        if &q % 4u32 != BigUint::from(3u32) {
            return bad("q is not 3 mod 4");
        }
        if r < BigUint::from(3u32) || &q + 1u32 != &h * &r {
            return bad("q + 1 != h * r");
        }
        if !(&h % 4u32).is_zero() {
            return bad("cofactor is not a multiple of 4");
        }
        if let Some(level) = level {
            if r.bits() != level.order_bits() || q.bits() != level.field_bits() {
                return bad("bit lengths do not match the security level");
            }
        }
        let field = Modulus::new(q);
        let order = Modulus::new(r);
        if &gx >= field.value() || &gy >= field.value() {
            return bad("generator coordinates out of range");
        }
        let g = CurvePoint::from_affine(Fp::new(gx, &field), Fp::new(gy, &field))
            .ok_or_else(|| PairingError::InvalidParams("generator is not on the curve".into()))?;
        if !g.mul(order.value()).is_infinity() {
            return bad("generator order does not divide r");
        }
        Ok(Self(Arc::new(Inner {
            field,
            order,
            cofactor: h,
            generator: g,
            level,
        })))
    }

    pub fn q(&self) -> &BigUint {
        self.0.field.value()
    }

    pub fn r(&self) -> &BigUint {
        self.0.order.value()
    }

    pub fn h(&self) -> &BigUint {
        &self.0.cofactor
    }

    pub fn generator(&self) -> &CurvePoint {
        &self.0.generator
    }

    pub fn level(&self) -> Option<SecurityLevel> {
        self.0.level
    }

    pub fn field(&self) -> &Arc<Modulus> {
        &self.0.field
    }

    pub fn order(&self) -> &Arc<Modulus> {
        &self.0.order
    }

    /// Serialized width of one field element.
    pub fn field_len(&self) -> usize {
        self.0.field.byte_len()
    }

    /// Serialized width of one scalar.
    pub fn scalar_len(&self) -> usize {
        self.0.order.byte_len()
    }

    pub fn random_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Scalar {
        Scalar::random(&self.0.order, rng)
    }

    pub fn random_nonzero_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Scalar {
        Scalar::random_nonzero(&self.0.order, rng)
    }

    pub fn scalar(&self, value: u64) -> Scalar {
        Scalar::from_u64(value, &self.0.order)
    }

    /// `[k]g`.
    pub fn g_mul(&self, k: &Scalar) -> CurvePoint {
        self.0.generator.mul(k.value())
    }

    pub fn in_subgroup(&self, p: &CurvePoint) -> bool {
        p.is_on_curve() && p.mul(self.r()).is_infinity()
    }

    /// Full invariant check including primality of q and r.
    pub fn validate<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<(), PairingError> {
        if !is_probable_prime(self.q(), PRIMALITY_ROUNDS, rng) {
            return Err(PairingError::InvalidParams("q is not prime".into()));
        }
        if !is_probable_prime(self.r(), PRIMALITY_ROUNDS, rng) {
            return Err(PairingError::InvalidParams("r is not prime".into()));
        }
        if self.0.generator.is_infinity() {
            return Err(PairingError::InvalidParams("generator is infinity".into()));
        }
        Ok(())
    }

    /// The exhaustively checkable instance q = 11, r = 3, h = 4.
    ///
    /// Test fixture only: it offers no security whatsoever.
    pub fn toy() -> Self {
        let q = BigUint::from(11u32);
        let field = Modulus::new(q.clone());
        let h = BigUint::from(4u32);
        let g = (0..11u64)
            .find_map(|x| {
                let x = Fp::from_u64(x, &field);
                let y = curve_rhs(&x).sqrt()?;
                let g = CurvePoint::Affine { x, y }.mul(&h);
                (!g.is_infinity()).then_some(g)
            })
            .expect("toy curve has order-3 points");
        let (gx, gy) = g.coordinates().expect("affine");
        Self::from_parts(
            q,
            BigUint::from(3u32),
            h,
            gx.value().clone(),
            gy.value().clone(),
            None,
        )
        .expect("toy parameters are valid")
    }

    /// Line-oriented `key=value` text with lowercase hex integers.
    pub fn to_text(&self) -> String {
        let (gx, gy) = self.0.generator.coordinates().expect("generator is affine");
        let level = self.0.level.map_or(0, SecurityLevel::bits);
        format!(
            "type=a\nq={:x}\nr={:x}\nh={:x}\ngx={:x}\ngy={:x}\nlevel={}\n",
            self.q(),
            self.r(),
            self.h(),
            gx.value(),
            gy.value(),
            level
        )
    }

    pub fn from_text(text: &str) -> Result<Self, PairingError> {
        let bad = |m: String| PairingError::InvalidParams(m);
        let mut fields: [Option<&str>; 7] = [None; 7];
        const KEYS: [&str; 7] = ["type", "q", "r", "h", "gx", "gy", "level"];
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line without '=': {line:?}")))?;
            let slot = KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| bad(format!("unknown key {key:?}")))?;
            if fields[slot].replace(value).is_some() {
                return Err(bad(format!("duplicate key {key:?}")));
            }
        }
        let get = |i: usize| fields[i].ok_or_else(|| bad(format!("missing key {:?}", KEYS[i])));
        if get(0)? != "a" {
            return Err(bad("only type=a is supported".into()));
        }
        let hex = |i: usize| -> Result<BigUint, PairingError> {
            let v = get(i)?;
            if v.is_empty() || !v.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)) {
                return Err(bad(format!("{} is not lowercase hex", KEYS[i])));
            }
            BigUint::parse_bytes(v.as_bytes(), 16).ok_or_else(|| bad(format!("bad hex for {}", KEYS[i])))
        };
        let level = match get(6)? {
            "0" => None,
            v => Some(v.parse::<SecurityLevel>().map_err(bad)?),
        };
        Self::from_parts(hex(1)?, hex(2)?, hex(3)?, hex(4)?, hex(5)?, level)
    }
}

/// Samples a fresh Type-A instance for `level`.
pub fn generate_params<R: RngCore + ?Sized>(
    level: SecurityLevel,
    rng: &mut R,
) -> Result<GroupParams, PairingError> {
    generate_params_with_budget(level, DEFAULT_SEARCH_BUDGET, rng)
}

/// As [`generate_params`] with an explicit bound on multiplier candidates.
pub fn generate_params_with_budget<R: RngCore + ?Sized>(
    level: SecurityLevel,
    budget: u64,
    rng: &mut R,
) -> Result<GroupParams, PairingError> {
    let q_bits = level.field_bits();
    let r = random_prime(level.order_bits(), PRIMALITY_ROUNDS, rng);

    // q = 4mr - 1 must have exactly q_bits bits.
    let four_r = &r << 2;
    let q_min = BigUint::one() << (q_bits - 1);
    let m_lo = (&q_min + 1u32 + &four_r - 1u32) / &four_r;
    let m_hi = (BigUint::one() << q_bits) / &four_r;
    let span = &m_hi - &m_lo + 1u32;

    let mut found = None;
    for _ in 0..budget {
        let m = &m_lo + random_below(&span, rng);
        let q: BigUint = &four_r * &m - 1u32;
        if q.bits() == q_bits && is_probable_prime(&q, PRIMALITY_ROUNDS, rng) {
            found = Some((q, m << 2u32));
            break;
        }
    }
    let (q, h) = found.ok_or(PairingError::ParameterSearchExhausted(budget))?;

    let field = Modulus::new(q.clone());
    let g = loop {
        let x = Fp::random(&field, rng);
        let Some(mut y) = curve_rhs(&x).sqrt() else {
            continue;
        };
        if rng.next_u32() & 1 == 1 {
            y = -y;
        }
        let g = CurvePoint::Affine { x, y }.mul(&h);
        if !g.is_infinity() {
            break g;
        }
    };
    let (gx, gy) = g.coordinates().expect("affine");
    GroupParams::from_parts(
        q,
        r,
        h,
        gx.value().clone(),
        gy.value().clone(),
        Some(level),
    )
}
