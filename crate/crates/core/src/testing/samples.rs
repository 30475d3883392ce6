use rand::{Rng, RngCore, SeedableRng};

use crate::cpabe::{cp_encrypt, cp_keygen, cp_setup, CpHeader, CpMasterKey, CpPrivateKey, CpPublicParams};
use crate::envelope::{open_cp, open_kp, seal_cp, seal_kp, Decode, Encode, Envelope, ObjectType};
use crate::error::{EnvelopeError, FormatError, PolicyError};
use crate::kpabe::{kp_encrypt, kp_keygen, kp_setup, KpHeader, KpMasterKey, KpPrivateKey, KpPublicParams};
use crate::pairing::{generate_params, GroupParams, SecurityLevel};
use crate::policy::{is_valid_attribute, AccessNode, AccessTree, AttributeSet};

use super::{random_subset, random_tree};

/// One object of every serializable type, generated together so that keys,
/// headers and envelopes are mutually consistent.
#[derive(Clone, Debug)]
pub struct SampleObjects {
    pub params: GroupParams,
    pub policy: AccessTree,
    pub attrs: AttributeSet,
    pub payload: Vec<u8>,
    pub cp_pk: CpPublicParams,
    pub cp_mk: CpMasterKey,
    pub cp_sk: CpPrivateKey,
    pub cp_header: CpHeader,
    pub cp_envelope: Envelope,
    pub kp_pk: KpPublicParams,
    pub kp_mk: KpMasterKey,
    pub kp_sk: KpPrivateKey,
    pub kp_header: KpHeader,
    pub kp_envelope: Envelope,
}

const SAMPLE_POOL: [&str; 6] = ["admin", "audit", "dept_7", "eng", "Ops", "_x"];

impl SampleObjects {
    /// Random small instance: a universe of 1 to 6 names, a policy of up to
    /// 4 leaves over it, a nonempty attribute set and a short payload.
    pub fn generate<R: RngCore + ?Sized>(params: &GroupParams, rng: &mut R) -> Self {
        let n = rng.gen_range(1..=SAMPLE_POOL.len());
        let pool = &SAMPLE_POOL[..n];
        let universe: Vec<String> = pool.iter().map(|s| s.to_string()).collect();
        let max_fan_out = params.r().try_into().map_or(4, |r: usize| r.min(4));
        let policy = random_tree(rng, 4, max_fan_out.max(2), pool);
        let mut attrs = random_subset(rng, pool);
        if attrs.is_empty() {
            attrs = AttributeSet::new([pool[0]]).expect("valid name");
        }
        let payload: Vec<u8> = (0..rng.gen_range(0..64)).map(|_| rng.gen()).collect();

        let (cp_pk, cp_mk) = cp_setup(params, rng).expect("setup");
        let cp_sk = cp_keygen(&cp_pk, &cp_mk, &attrs, rng).expect("keygen");
        let (cp_header, _) = cp_encrypt(&cp_pk, &policy, rng).expect("encrypt");
        let cp_envelope = seal_cp(&cp_pk, &policy, &payload, rng).expect("seal");
        let (kp_pk, kp_mk) = kp_setup(params, &universe, rng).expect("setup");
        let kp_sk = kp_keygen(&kp_pk, &kp_mk, &policy, rng).expect("keygen");
        let (kp_header, _) = kp_encrypt(&kp_pk, &attrs, rng).expect("encrypt");
        let kp_envelope = seal_kp(&kp_pk, &attrs, &payload, rng).expect("seal");
        Self {
            params: params.clone(),
            policy,
            attrs,
            payload,
            cp_pk,
            cp_mk,
            cp_sk,
            cp_header,
            cp_envelope,
            kp_pk,
            kp_mk,
            kp_sk,
            kp_header,
            kp_envelope,
        }
    }

    /// Every object, serialized, tagged with its type and a file stem.
    pub fn encoded(&self) -> Vec<(ObjectType, &'static str, Vec<u8>)> {
        let p = &self.params;
        vec![
            (ObjectType::GroupParams, "params", p.encode()),
            (ObjectType::CpPublicKey, "cp", self.cp_pk.encode()),
            (ObjectType::CpMasterKey, "cp", (&self.cp_mk, p).encode()),
            (ObjectType::CpPrivateKey, "cp", (&self.cp_sk, p).encode()),
            (ObjectType::CpHeader, "cp", (&self.cp_header, p).encode()),
            (ObjectType::Envelope, "cp", self.cp_envelope.encode()),
            (ObjectType::KpPublicKey, "kp", self.kp_pk.encode()),
            (ObjectType::KpMasterKey, "kp", (&self.kp_mk, p).encode()),
            (ObjectType::KpPrivateKey, "kp", (&self.kp_sk, p).encode()),
            (ObjectType::KpHeader, "kp", (&self.kp_header, p).encode()),
            (ObjectType::Envelope, "kp", self.kp_envelope.encode()),
        ]
    }

    /// Decodes every encoding, compares with the original object and checks
    /// that re-encoding reproduces the bytes.
    pub fn check_round_trip(&self) -> Result<(), String> {
        for (kind, _, bytes) in self.encoded() {
            let again = reencode(kind, &bytes, &self.params).map_err(|e| e.to_string())?;
            if again != bytes {
                return Err(format!("{} re-encodes differently", kind.name()));
            }
        }
        let p = &self.params;
        let same = |ok: bool, what: &str| if ok { Ok(()) } else { Err(format!("{what} changed in round trip")) };
        let enc = |kind| self.encoded().into_iter().find(|(k, _, _)| *k == kind).unwrap().2;
        let fmt = |e: FormatError| e.to_string();
        same(GroupParams::decode(&enc(ObjectType::GroupParams), &()).map_err(fmt)? == *p, "params")?;
        same(CpPublicParams::decode(&enc(ObjectType::CpPublicKey), &()).map_err(fmt)? == self.cp_pk, "cp pk")?;
        same(CpMasterKey::decode(&enc(ObjectType::CpMasterKey), p).map_err(fmt)? == self.cp_mk, "cp msk")?;
        same(CpPrivateKey::decode(&enc(ObjectType::CpPrivateKey), p).map_err(fmt)? == self.cp_sk, "cp sk")?;
        same(CpHeader::decode(&enc(ObjectType::CpHeader), p).map_err(fmt)? == self.cp_header, "cp header")?;
        same(Envelope::decode(&self.cp_envelope.encode(), &()).map_err(fmt)? == self.cp_envelope, "cp envelope")?;
        same(KpPublicParams::decode(&enc(ObjectType::KpPublicKey), &()).map_err(fmt)? == self.kp_pk, "kp pk")?;
        same(KpMasterKey::decode(&enc(ObjectType::KpMasterKey), p).map_err(fmt)? == self.kp_mk, "kp msk")?;
        same(KpPrivateKey::decode(&enc(ObjectType::KpPrivateKey), p).map_err(fmt)? == self.kp_sk, "kp sk")?;
        same(KpHeader::decode(&enc(ObjectType::KpHeader), p).map_err(fmt)? == self.kp_header, "kp header")?;
        same(Envelope::decode(&self.kp_envelope.encode(), &()).map_err(fmt)? == self.kp_envelope, "kp envelope")
    }
}

/// Decodes `bytes` as `kind` and serializes the result again.
pub fn reencode(kind: ObjectType, bytes: &[u8], params: &GroupParams) -> Result<Vec<u8>, FormatError> {
    Ok(match kind {
        ObjectType::GroupParams => GroupParams::decode(bytes, &())?.encode(),
        ObjectType::CpPublicKey => CpPublicParams::decode(bytes, &())?.encode(),
        ObjectType::CpMasterKey => (&CpMasterKey::decode(bytes, params)?, params).encode(),
        ObjectType::CpPrivateKey => (&CpPrivateKey::decode(bytes, params)?, params).encode(),
        ObjectType::CpHeader => (&CpHeader::decode(bytes, params)?, params).encode(),
        ObjectType::KpPublicKey => KpPublicParams::decode(bytes, &())?.encode(),
        ObjectType::KpMasterKey => (&KpMasterKey::decode(bytes, params)?, params).encode(),
        ObjectType::KpPrivateKey => (&KpPrivateKey::decode(bytes, params)?, params).encode(),
        ObjectType::KpHeader => (&KpHeader::decode(bytes, params)?, params).encode(),
        ObjectType::Envelope => Envelope::decode(bytes, &())?.encode(),
    })
}

/// Seed behind the checked-in golden fixtures.
pub const GOLDEN_SEED: u64 = 16;

/// The objects stored as golden fixtures: 80-bit parameters and one
/// sample of every type, all derived from [`GOLDEN_SEED`].
pub fn golden_objects() -> SampleObjects {
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(GOLDEN_SEED);
    let params = generate_params(SecurityLevel::Bits80, &mut rng).expect("parameter generation");
    SampleObjects::generate(&params, &mut rng)
}

/// Attribute names one bit flip away from `name`.
fn one_flip_neighbours(name: &str) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..name.len() {
        for bit in 0..8 {
            let mut b = name.as_bytes().to_vec();
            b[i] ^= 1 << bit;
            if let Ok(s) = String::from_utf8(b) {
                if is_valid_attribute(&s) && !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Seals one CP and one KP envelope, then opens `trials` copies with a
/// single random bit flipped, alternating schemes. Every attempt must end
/// in `AuthenticationFailure` or `MalformedEnvelope`; returns how many
/// ended in each.
pub fn corruption_sweep<R: RngCore + ?Sized>(
    params: &GroupParams,
    trials: usize,
    rng: &mut R,
) -> Result<(usize, usize), String> {
    // Keys also cover every name one flip away, so a flipped policy or
    // attribute that still parses stays satisfiable and only the
    // cryptography can object.
    let mut names: Vec<String> = vec!["dept".into(), "role".into()];
    for n in ["dept", "role"] {
        names.extend(one_flip_neighbours(n));
    }
    let attrs = AttributeSet::new(names.iter()).map_err(|e| e.to_string())?;
    let policy: AccessTree = "dept and role".parse().map_err(|e: PolicyError| e.to_string())?;
    let any_name = AccessTree::new(AccessNode::or(names.iter().map(AccessNode::leaf).collect()))
        .map_err(|e| e.to_string())?;
    let err = |e: crate::error::AbeError| e.to_string();
    let (cpk, cmk) = cp_setup(params, rng).map_err(err)?;
    let csk = cp_keygen(&cpk, &cmk, &attrs, rng).map_err(err)?;
    let (kpk, kmk) = kp_setup(params, &names, rng).map_err(err)?;
    let ksk = kp_keygen(&kpk, &kmk, &any_name, rng).map_err(err)?;
    let dept = AttributeSet::new(["dept"]).map_err(|e| e.to_string())?;
    let cenv = seal_cp(&cpk, &policy, b"the payload", rng).map_err(|e| e.to_string())?.encode();
    let kenv = seal_kp(&kpk, &dept, b"the payload", rng).map_err(|e| e.to_string())?.encode();

    let (mut auth, mut malformed) = (0, 0);
    for i in 0..trials {
        let cp = i % 2 == 0;
        let mut bad = if cp { cenv.clone() } else { kenv.clone() };
        let pos = rng.gen_range(0..bad.len());
        bad[pos] ^= 1 << rng.gen_range(0..8);
        let result = Envelope::from_bytes(&bad).and_then(|env| {
            if cp {
                open_cp(&cpk, &csk, &env)
            } else {
                open_kp(&kpk, &ksk, &env)
            }
        });
        match result {
            Err(EnvelopeError::AuthenticationFailure) => auth += 1,
            Err(EnvelopeError::MalformedEnvelope(_)) => malformed += 1,
            other => {
                let scheme = if cp { "cp" } else { "kp" };
                return Err(format!("{scheme} flip at byte {pos}: {other:?}"));
            }
        }
    }
    Ok((auth, malformed))
}
