//! Arbitrary-precision field and curve arithmetic for the symmetric Type-A
//! pairing `ê: G × G → GT` on `y² = x³ + x` over F_q, `q ≡ 3 mod 4`,
//! embedding degree 2.
//!
//! None of this is constant time. It exists to measure ABE costs, not to
//! protect secrets against side channels.

mod curve;
mod field;
mod fp2;
mod hash;
#[allow(clippy::module_inception)]
mod pairing;
mod params;
pub mod prime;

pub use curve::CurvePoint;
pub use field::{Fp, Modulus, Scalar};
pub use fp2::Fp2;
pub use hash::{hash_to_group, MAX_HASH_COUNTER};
pub use pairing::{pairing, GtElement};
pub use params::{
    generate_params, generate_params_with_budget, GroupParams, SecurityLevel,
    DEFAULT_SEARCH_BUDGET, PRIMALITY_ROUNDS,
};
