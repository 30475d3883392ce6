//! Hybrid encryption and the binary object format.
//!
//! An ABE header encapsulates a GT element; SHA-256 over a domain tag and
//! that element's bytes yields an AES-256-GCM key protecting the payload.
//! The scheme tag and serialized header are bound as associated data.

mod wire;

use aes_gcm::aead::AeadInPlace;
use aes_gcm::{Aes256Gcm, KeyInit, Nonce, Tag};
use rand::RngCore;
use sha2::{Digest, Sha256};

use crate::cpabe::{cp_decrypt, cp_encrypt, CpHeader, CpPrivateKey, CpPublicParams};
use crate::error::{EnvelopeError, FormatError};
use crate::kpabe::{kp_decrypt, kp_encrypt, KpHeader, KpPrivateKey, KpPublicParams};
use crate::pairing::{GroupParams, GtElement, SecurityLevel};
use crate::policy::{AccessTree, AttributeSet};

pub use wire::{
    cp_header_len, kp_header_len, peek_object_type, Decode, Encode, ObjectType, LEN_PREFIX, MAGIC,
    PREFIX_LEN, VERSION,
};
use wire::{Reader, Writer};

pub const KDF_TAG: &[u8] = b"ABEN-KDF-v1";
pub const NONCE_LEN: usize = 12;
pub const TAG_LEN: usize = 16;
/// Nonce plus tag.
pub const DEM_OVERHEAD: usize = NONCE_LEN + TAG_LEN;
/// Envelope bytes beyond header, payload and DEM overhead: prefix, the
/// scheme-tag field and four length prefixes.
pub const ENVELOPE_FRAMING: usize = PREFIX_LEN + (LEN_PREFIX + 1) + 4 * LEN_PREFIX;

/// Conventional file extensions for the CLI.
pub const EXT_PUBLIC: &str = "aben-pub";
pub const EXT_MASTER: &str = "aben-msk";
pub const EXT_KEY: &str = "aben-key";
pub const EXT_CIPHERTEXT: &str = "aben-ct";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Cp,
    Kp,
}

impl Scheme {
    fn tag(self) -> u8 {
        match self {
            Scheme::Cp => 0x01,
            Scheme::Kp => 0x02,
        }
    }

    fn from_tag(b: u8) -> Option<Self> {
        match b {
            0x01 => Some(Scheme::Cp),
            0x02 => Some(Scheme::Kp),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Cp => "cp",
            Scheme::Kp => "kp",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub scheme: Scheme,
    pub level: Option<SecurityLevel>,
    /// Serialized [`CpHeader`] or [`KpHeader`].
    pub header: Vec<u8>,
    pub nonce: [u8; NONCE_LEN],
    pub ciphertext: Vec<u8>,
    pub tag: [u8; TAG_LEN],
}

impl Encode for Envelope {
    fn encode(&self) -> Vec<u8> {
        Writer::new(ObjectType::Envelope, self.level)
            .field(&[self.scheme.tag()])
            .field(&self.header)
            .field(&self.nonce)
            .field(&self.ciphertext)
            .field(&self.tag)
            .finish()
    }
}

impl Decode for Envelope {
    type Context = ();

    fn decode(bytes: &[u8], _: &()) -> Result<Self, FormatError> {
        let (mut r, level_byte) = Reader::open(bytes, ObjectType::Envelope)?;
        let level = match level_byte {
            0 => None,
            b => Some(SecurityLevel::from_bits(b.into()).ok_or_else(|| FormatError {
                what: ObjectType::Envelope.name(),
                offset: 6,
                reason: format!("unknown security level {b}"),
            })?),
        };
        let scheme = match r.field()? {
            [b] => Scheme::from_tag(*b).ok_or_else(|| r.error("unknown scheme tag"))?,
            _ => return Err(r.error("scheme tag must be one byte")),
        };
        let header = r.field()?.to_vec();
        let nonce = r
            .field()?
            .try_into()
            .map_err(|_| r.error("nonce must be 12 bytes"))?;
        let ciphertext = r.field()?.to_vec();
        let tag = r
            .field()?
            .try_into()
            .map_err(|_| r.error("tag must be 16 bytes"))?;
        r.finish()?;
        Ok(Envelope {
            scheme,
            level,
            header,
            nonce,
            ciphertext,
            tag,
        })
    }
}

impl Envelope {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, EnvelopeError> {
        Self::decode(bytes, &()).map_err(EnvelopeError::MalformedEnvelope)
    }

    fn associated_data(&self) -> Vec<u8> {
        let mut aad = Vec::with_capacity(1 + self.header.len());
        aad.push(self.scheme.tag());
        aad.extend_from_slice(&self.header);
        aad
    }

    fn check(&self, scheme: Scheme, params: &GroupParams) -> Result<(), EnvelopeError> {
        if self.scheme != scheme {
            return Err(EnvelopeError::SchemeMismatch {
                expected: scheme.name(),
                found: self.scheme.name(),
            });
        }
        if self.level != params.level() {
            return Err(EnvelopeError::MalformedEnvelope(FormatError {
                what: ObjectType::Envelope.name(),
                offset: 6,
                reason: "security level does not match the public key".into(),
            }));
        }
        Ok(())
    }
}

/// `SHA-256("ABEN-KDF-v1" ‖ k)`.
pub fn derive_key(k: &GtElement) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(KDF_TAG);
    h.update(k.to_bytes());
    h.finalize().into()
}

fn seal_with<R: RngCore + ?Sized>(
    scheme: Scheme,
    params: &GroupParams,
    header: Vec<u8>,
    session: &GtElement,
    payload: &[u8],
    rng: &mut R,
) -> Envelope {
    let mut nonce = [0u8; NONCE_LEN];
    rng.fill_bytes(&mut nonce);
    let mut env = Envelope {
        scheme,
        level: params.level(),
        header,
        nonce,
        ciphertext: payload.to_vec(),
        tag: [0; TAG_LEN],
    };
    let aad = env.associated_data();
    let cipher = Aes256Gcm::new(&derive_key(session).into());
    let tag = cipher
        .encrypt_in_place_detached(Nonce::from_slice(&nonce), &aad, &mut env.ciphertext)
        .expect("payload within AES-GCM length limit");
    env.tag = tag.into();
    env
}

fn open_with(env: &Envelope, session: &GtElement) -> Result<Vec<u8>, EnvelopeError> {
    let cipher = Aes256Gcm::new(&derive_key(session).into());
    let mut plain = env.ciphertext.clone();
    cipher
        .decrypt_in_place_detached(
            Nonce::from_slice(&env.nonce),
            &env.associated_data(),
            &mut plain,
            Tag::from_slice(&env.tag),
        )
        .map_err(|_| EnvelopeError::AuthenticationFailure)?;
    Ok(plain)
}

/// Encrypts `payload` so that keys whose attributes satisfy `policy` can open it.
pub fn seal_cp<R: RngCore + ?Sized>(
    pk: &CpPublicParams,
    policy: &AccessTree,
    payload: &[u8],
    rng: &mut R,
) -> Result<Envelope, EnvelopeError> {
    let (header, session) = cp_encrypt(pk, policy, rng)?;
    let header = (&header, &pk.params).encode();
    Ok(seal_with(Scheme::Cp, &pk.params, header, &session, payload, rng))
}

pub fn open_cp(pk: &CpPublicParams, sk: &CpPrivateKey, env: &Envelope) -> Result<Vec<u8>, EnvelopeError> {
    env.check(Scheme::Cp, &pk.params)?;
    let header = CpHeader::decode(&env.header, &pk.params).map_err(EnvelopeError::MalformedEnvelope)?;
    let session = cp_decrypt(pk, sk, &header)?;
    open_with(env, &session)
}

/// Encrypts `payload` labelled with `attrs`; keys whose policy accepts them can open it.
pub fn seal_kp<R: RngCore + ?Sized>(
    pk: &KpPublicParams,
    attrs: &AttributeSet,
    payload: &[u8],
    rng: &mut R,
) -> Result<Envelope, EnvelopeError> {
    let (header, session) = kp_encrypt(pk, attrs, rng)?;
    let header = (&header, &pk.params).encode();
    Ok(seal_with(Scheme::Kp, &pk.params, header, &session, payload, rng))
}

pub fn open_kp(pk: &KpPublicParams, sk: &KpPrivateKey, env: &Envelope) -> Result<Vec<u8>, EnvelopeError> {
    env.check(Scheme::Kp, &pk.params)?;
    let header = KpHeader::decode(&env.header, &pk.params).map_err(EnvelopeError::MalformedEnvelope)?;
    let session = kp_decrypt(pk, sk, &header)?;
    open_with(env, &session)
}

/// A public key of either scheme, as read from a `.aben-pub` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PublicKey {
    Cp(CpPublicParams),
    Kp(KpPublicParams),
}

impl PublicKey {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, EnvelopeError> {
        let malformed = EnvelopeError::MalformedKey;
        match peek_object_type(bytes).map_err(malformed)? {
            ObjectType::CpPublicKey => Ok(PublicKey::Cp(CpPublicParams::decode(bytes, &()).map_err(malformed)?)),
            ObjectType::KpPublicKey => Ok(PublicKey::Kp(KpPublicParams::decode(bytes, &()).map_err(malformed)?)),
            other => Err(malformed(FormatError {
                what: "public key",
                offset: 5,
                reason: format!("found {}", other.name()),
            })),
        }
    }

    pub fn params(&self) -> &GroupParams {
        match self {
            PublicKey::Cp(pk) => &pk.params,
            PublicKey::Kp(pk) => &pk.params,
        }
    }

    pub fn scheme(&self) -> Scheme {
        match self {
            PublicKey::Cp(_) => Scheme::Cp,
            PublicKey::Kp(_) => Scheme::Kp,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        match self {
            PublicKey::Cp(pk) => pk.encode(),
            PublicKey::Kp(pk) => pk.encode(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpabe::{cp_keygen, cp_setup};
    use crate::kpabe::{kp_keygen, kp_setup};
    use crate::pairing::generate_params;
    use crate::policy::parse_policy;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn cp_fixture() -> (CpPublicParams, CpPrivateKey, ChaCha20Rng) {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let params = generate_params(SecurityLevel::Bits80, &mut rng).unwrap();
        let (pk, mk) = cp_setup(&params, &mut rng).unwrap();
        let sk = cp_keygen(&pk, &mk, &AttributeSet::parse("a,b").unwrap(), &mut rng).unwrap();
        (pk, sk, rng)
    }

    #[test]
    fn kdf_is_deterministic_and_separates_inverses() {
        let params = GroupParams::toy();
        let g = params.generator();
        let e = crate::pairing::pairing(g, g, &params).unwrap();
        assert_eq!(derive_key(&e), derive_key(&e.clone()));
        assert_ne!(derive_key(&e), derive_key(&e.inverse()));
    }

    #[test]
    fn cp_seal_open_and_sizes() {
        let (pk, sk, mut rng) = cp_fixture();
        let policy = parse_policy("a and b").unwrap();
        for payload in [&b""[..], b"hello", &vec![0xa5; 1 << 20]] {
            let env = seal_cp(&pk, &policy, payload, &mut rng).unwrap();
            assert_eq!(env.ciphertext.len(), payload.len());
            let bytes = env.encode();
            assert_eq!(
                bytes.len(),
                env.header.len() + payload.len() + DEM_OVERHEAD + ENVELOPE_FRAMING
            );
            let back = Envelope::from_bytes(&bytes).unwrap();
            assert_eq!(back, env);
            assert_eq!(open_cp(&pk, &sk, &back).unwrap(), payload);
        }
    }

    #[test]
    fn cp_ciphertext_bit_flips_fail_authentication() {
        let (pk, sk, mut rng) = cp_fixture();
        let env = seal_cp(&pk, &parse_policy("a or b").unwrap(), b"attack at dawn", &mut rng).unwrap();
        for bit in 0..env.ciphertext.len() * 8 {
            let mut bad = env.clone();
            bad.ciphertext[bit / 8] ^= 1 << (bit % 8);
            assert_eq!(open_cp(&pk, &sk, &bad), Err(EnvelopeError::AuthenticationFailure));
        }
        let mut bad = env.clone();
        bad.tag[0] ^= 1;
        assert_eq!(open_cp(&pk, &sk, &bad), Err(EnvelopeError::AuthenticationFailure));
    }

    #[test]
    fn unsatisfied_and_mismatched() {
        let (pk, sk, mut rng) = cp_fixture();
        let env = seal_cp(&pk, &parse_policy("a and c").unwrap(), b"x", &mut rng).unwrap();
        assert_eq!(
            open_cp(&pk, &sk, &env),
            Err(EnvelopeError::Abe(crate::error::AbeError::PolicyNotSatisfied))
        );

        let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let (kpk, kmk) = kp_setup(&pk.params, &names, &mut rng).unwrap();
        let ksk = kp_keygen(&kpk, &kmk, &parse_policy("a").unwrap(), &mut rng).unwrap();
        let kenv = seal_kp(&kpk, &AttributeSet::parse("a").unwrap(), b"y", &mut rng).unwrap();
        assert_eq!(open_kp(&kpk, &ksk, &kenv).unwrap(), b"y");
        assert!(matches!(
            open_cp(&pk, &sk, &kenv),
            Err(EnvelopeError::SchemeMismatch { expected: "cp", found: "kp" })
        ));
    }
}
