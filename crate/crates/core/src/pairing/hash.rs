//! Deterministic hashing of attribute strings into the order-r subgroup.

use num_bigint::BigUint;
use sha2::{Digest, Sha256};

use super::curve::{curve_rhs, CurvePoint};
use super::field::Fp;
use super::params::GroupParams;
use crate::error::PairingError;

const DOMAIN_TAG: &[u8] = b"ABEN-H2G-v1";

/// Counters tried before giving up. Each try succeeds with probability ~1/2.
pub const MAX_HASH_COUNTER: u32 = 256;

/// Maps `attribute` to a point of order r.
///
/// For counter = 0, 1, …: expand SHA-256 over `tag ‖ counter ‖ attribute` to
/// 16 bytes more than the field width, reduce to a candidate x, keep it if
/// `x³ + x` is a square (sign of y from one digest bit), then clear the
/// cofactor. Infinity after clearing moves on to the next counter.
pub fn hash_to_group(attribute: &[u8], params: &GroupParams) -> Result<CurvePoint, PairingError> {
    let field = params.field();
    let wide_len = params.field_len() + 16;
    for counter in 0..MAX_HASH_COUNTER {
        let wide = expand(attribute, counter, wide_len);
        let x = Fp::new(BigUint::from_bytes_be(&wide), field);
        let Some(mut y) = curve_rhs(&x).sqrt() else {
            continue;
        };
        if wide[0] & 0x80 != 0 {
            y = -y;
        }
        let point = CurvePoint::Affine { x, y }.mul(params.h());
        if !point.is_infinity() {
            return Ok(point);
        }
    }
    Err(PairingError::HashToPointFailure(MAX_HASH_COUNTER))
}

fn expand(attribute: &[u8], counter: u32, len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(len + 32);
    let mut block = 0u32;
    while out.len() < len {
        let digest = Sha256::new()
            .chain_update(DOMAIN_TAG)
            .chain_update(counter.to_be_bytes())
            .chain_update(block.to_be_bytes())
            .chain_update(attribute)
            .finalize();
        out.extend_from_slice(&digest);
        block += 1;
    }
    out.truncate(len);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let params = GroupParams::toy();
        assert_eq!(
            hash_to_group(b"a", &params).unwrap(),
            hash_to_group(b"a", &params).unwrap()
        );
    }

    #[test]
    fn toy_outputs_land_in_enumerated_subgroup() {
        let params = GroupParams::toy();
        let g = params.generator();
        let subgroup = [g.clone(), g.double()];
        for name in ["a", "b", "c", "doctor", "nurse", "x1", "x2", "x3"] {
            let p = hash_to_group(name.as_bytes(), &params).unwrap();
            assert!(subgroup.contains(&p), "{name} -> {p:?}");
        }
    }
}
