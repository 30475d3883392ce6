//! Ciphertext-policy ABE as a key-encapsulation mechanism.
//!
//! Public key `(g, h = g^β, ê(g,g)^α)`, master key `(β, g^α)`. A key for
//! attribute set γ holds `D = g^((α+u)/β)` and, per attribute `j`,
//! `D_j = g^u·H(j)^{u_j}`, `D'_j = g^{u_j}`. Encapsulation under policy A
//! shares a fresh `s` over A and publishes `C = h^s` plus, per leaf y,
//! `C_y = g^{q_y(0)}`, `C'_y = H(att(y))^{q_y(0)}`. The session secret is
//! `ê(g,g)^{αs}`.

use std::collections::BTreeMap;

use rand::RngCore;

use crate::error::AbeError;
use crate::pairing::{hash_to_group, pairing, CurvePoint, GroupParams, GtElement, Scalar};
use crate::policy::{select_satisfying_subtree, share_secret, AccessTree, AttributeSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpPublicParams {
    pub params: GroupParams,
    pub g: CurvePoint,
    /// `g^β`
    pub h: CurvePoint,
    /// `ê(g,g)^α`
    pub egg_alpha: GtElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpMasterKey {
    pub beta: Scalar,
    pub g_alpha: CurvePoint,
}

/// The pair bound to one attribute of a [`CpPrivateKey`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpAttributeKey {
    /// `g^u · H(j)^{u_j}`
    pub d: CurvePoint,
    /// `g^{u_j}`
    pub d_prime: CurvePoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpPrivateKey {
    /// `g^((α+u)/β)`
    pub d: CurvePoint,
    pub components: BTreeMap<String, CpAttributeKey>,
}

impl CpPrivateKey {
    pub fn attributes(&self) -> AttributeSet {
        AttributeSet::new(self.components.keys().cloned()).expect("keys hold valid attributes")
    }

    /// Number of group elements: `2·|attrs| + 1`.
    pub fn element_count(&self) -> usize {
        2 * self.components.len() + 1
    }
}

/// Per-leaf ciphertext components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpLeafComponent {
    /// `g^{q_y(0)}`
    pub c: CurvePoint,
    /// `H(att(y))^{q_y(0)}`
    pub c_prime: CurvePoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpHeader {
    pub policy: AccessTree,
    /// `h^s`
    pub c: CurvePoint,
    /// One entry per policy leaf, by leaf position.
    pub leaves: Vec<CpLeafComponent>,
}

impl CpHeader {
    /// Number of group elements: `2·leaves + 1`.
    pub fn element_count(&self) -> usize {
        2 * self.leaves.len() + 1
    }
}

pub fn cp_setup<R: RngCore + ?Sized>(
    params: &GroupParams,
    rng: &mut R,
) -> Result<(CpPublicParams, CpMasterKey), AbeError> {
    let alpha = params.random_scalar(rng);
    let beta = params.random_nonzero_scalar(rng);
    let g = params.generator().clone();
    let egg = pairing(&g, &g, params)?;
    let pk = CpPublicParams {
        params: params.clone(),
        h: g.mul(beta.value()),
        egg_alpha: egg.pow(&alpha),
        g: g.clone(),
    };
    let mk = CpMasterKey {
        g_alpha: g.mul(alpha.value()),
        beta,
    };
    Ok((pk, mk))
}

pub fn cp_keygen<R: RngCore + ?Sized>(
    pk: &CpPublicParams,
    mk: &CpMasterKey,
    attrs: &AttributeSet,
    rng: &mut R,
) -> Result<CpPrivateKey, AbeError> {
    if attrs.is_empty() {
        return Err(AbeError::EmptyAttributeSet);
    }
    let params = &pk.params;
    let u = params.random_scalar(rng);
    let g_u = pk.g.mul(u.value());
    let mut components = BTreeMap::new();
    for attr in attrs.iter() {
        let u_j = params.random_scalar(rng);
        let hashed = hash_to_group(attr.as_bytes(), params)?;
        components.insert(
            attr.to_string(),
            CpAttributeKey {
                d: g_u.add(&hashed.mul(u_j.value())),
                d_prime: pk.g.mul(u_j.value()),
            },
        );
    }
    let beta_inv = mk.beta.inverse().expect("beta is nonzero");
    let d = mk.g_alpha.add(&g_u).mul(beta_inv.value());
    Ok(CpPrivateKey { d, components })
}

/// Encapsulates a fresh session secret under `policy`.
pub fn cp_encrypt<R: RngCore + ?Sized>(
    pk: &CpPublicParams,
    policy: &AccessTree,
    rng: &mut R,
) -> Result<(CpHeader, GtElement), AbeError> {
    let s = pk.params.random_scalar(rng);
    encapsulate_with_secret(pk, policy, &s, rng)
}

pub(crate) fn encapsulate_with_secret<R: RngCore + ?Sized>(
    pk: &CpPublicParams,
    policy: &AccessTree,
    s: &Scalar,
    rng: &mut R,
) -> Result<(CpHeader, GtElement), AbeError> {
    let shares = share_secret(policy, s, rng)?;
    let mut leaves = Vec::with_capacity(shares.leaf_shares.len());
    for (attr, share) in policy.leaves().into_iter().zip(&shares.leaf_shares) {
        let hashed = hash_to_group(attr.as_bytes(), &pk.params)?;
        leaves.push(CpLeafComponent {
            c: pk.g.mul(share.value()),
            c_prime: hashed.mul(share.value()),
        });
    }
    let header = CpHeader {
        policy: policy.clone(),
        c: pk.h.mul(s.value()),
        leaves,
    };
    Ok((header, pk.egg_alpha.pow(s)))
}

/// Recovers the session secret iff the key's attributes satisfy the policy.
pub fn cp_decrypt(
    pk: &CpPublicParams,
    sk: &CpPrivateKey,
    header: &CpHeader,
) -> Result<GtElement, AbeError> {
    if header.leaves.len() != header.policy.leaf_count() {
        return Err(AbeError::Inconsistent);
    }
    let params = &pk.params;
    let selection = select_satisfying_subtree(&header.policy, &sk.attributes())
        .map_err(|_| AbeError::PolicyNotSatisfied)?;
    // ê(g,g)^{u·s}
    let blinding = selection.fold(
        &mut |position, attr| -> Result<GtElement, AbeError> {
            let key = sk.components.get(attr).ok_or(AbeError::Inconsistent)?;
            let leaf = &header.leaves[position];
            let num = pairing(&key.d, &leaf.c, params)?;
            let den = pairing(&key.d_prime, &leaf.c_prime, params)?;
            Ok(num.mul(&den.inverse()))
        },
        &mut |parts| Ok(gt_interpolate(parts, params)),
        params.order(),
    )?;
    let masked = pairing(&header.c, &sk.d, params)?;
    Ok(masked.mul(&blinding.inverse()))
}

/// `∏ value^coeff`.
pub(crate) fn gt_interpolate(parts: Vec<(GtElement, Scalar)>, params: &GroupParams) -> GtElement {
    parts
        .into_iter()
        .fold(GtElement::one(params), |acc, (v, c)| acc.mul(&v.pow(&c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::{generate_params, SecurityLevel};
    use crate::policy::parse_policy;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::sync::OnceLock;

    fn params80() -> &'static GroupParams {
        static P: OnceLock<GroupParams> = OnceLock::new();
        P.get_or_init(|| {
            generate_params(SecurityLevel::Bits80, &mut ChaCha20Rng::seed_from_u64(80)).unwrap()
        })
    }

    fn attrs(s: &str) -> AttributeSet {
        AttributeSet::parse(s).unwrap()
    }

    #[test]
    fn setup_images_are_consistent() {
        let params = params80();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let (pk, mk) = cp_setup(params, &mut rng).unwrap();
        assert_eq!(pairing(&mk.g_alpha, &pk.g, params).unwrap(), pk.egg_alpha);
        assert_eq!(pk.g.mul(mk.beta.value()), pk.h);
        assert!(!pk.egg_alpha.is_one());
    }

    #[test]
    fn setup_is_seed_deterministic() {
        let params = params80();
        let a = cp_setup(params, &mut ChaCha20Rng::seed_from_u64(5)).unwrap();
        let b = cp_setup(params, &mut ChaCha20Rng::seed_from_u64(5)).unwrap();
        let c = cp_setup(params, &mut ChaCha20Rng::seed_from_u64(6)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.1.beta, c.1.beta);
    }

    #[test]
    fn key_and_header_sizes() {
        let params = params80();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let (pk, mk) = cp_setup(params, &mut rng).unwrap();
        let sk = cp_keygen(&pk, &mk, &attrs("a,b,c,d,e"), &mut rng).unwrap();
        assert_eq!(sk.element_count(), 11);
        let sk = cp_keygen(&pk, &mk, &attrs("a"), &mut rng).unwrap();
        assert_eq!(sk.element_count(), 3);
        let policy = parse_policy("a and b and (c or d or e)").unwrap();
        let (header, _) = cp_encrypt(&pk, &policy, &mut rng).unwrap();
        assert_eq!(header.element_count(), 11);
        assert_eq!(
            cp_keygen(&pk, &mk, &AttributeSet::default(), &mut rng),
            Err(AbeError::EmptyAttributeSet)
        );
    }

    #[test]
    fn single_leaf_share_is_the_secret() {
        let params = params80();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let (pk, _) = cp_setup(params, &mut rng).unwrap();
        let s = params.random_scalar(&mut rng);
        let policy = parse_policy("a").unwrap();
        let (header, _) = encapsulate_with_secret(&pk, &policy, &s, &mut rng).unwrap();
        let egg = pairing(&pk.g, &pk.g, params).unwrap();
        assert_eq!(pairing(&header.leaves[0].c, &pk.g, params).unwrap(), egg.pow(&s));
    }

    #[test]
    fn round_trip_and_rejection() {
        let params = params80();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let (pk, mk) = cp_setup(params, &mut rng).unwrap();
        let policy = parse_policy("(a and b) or c").unwrap();
        let (header, key) = cp_encrypt(&pk, &policy, &mut rng).unwrap();
        for ok in ["a,b", "c", "a,b,c", "c,z"] {
            let sk = cp_keygen(&pk, &mk, &attrs(ok), &mut rng).unwrap();
            assert_eq!(cp_decrypt(&pk, &sk, &header).unwrap(), key, "{ok}");
        }
        for bad in ["a", "b", "z"] {
            let sk = cp_keygen(&pk, &mk, &attrs(bad), &mut rng).unwrap();
            assert_eq!(cp_decrypt(&pk, &sk, &header), Err(AbeError::PolicyNotSatisfied));
        }
    }

    #[test]
    fn colluding_keys_do_not_combine() {
        let params = params80();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let (pk, mk) = cp_setup(params, &mut rng).unwrap();
        let policy = parse_policy("a and b").unwrap();
        let (header, key) = cp_encrypt(&pk, &policy, &mut rng).unwrap();
        let ka = cp_keygen(&pk, &mk, &attrs("a"), &mut rng).unwrap();
        let kb = cp_keygen(&pk, &mk, &attrs("b"), &mut rng).unwrap();
        for base in [&ka, &kb] {
            let mut merged = base.clone();
            merged.components.insert("a".into(), ka.components["a"].clone());
            merged.components.insert("b".into(), kb.components["b"].clone());
            let got = cp_decrypt(&pk, &merged, &header).unwrap();
            assert_ne!(got.to_bytes(), key.to_bytes());
        }
    }

    #[test]
    fn truncated_header_is_inconsistent() {
        let params = params80();
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let (pk, mk) = cp_setup(params, &mut rng).unwrap();
        let (mut header, _) = cp_encrypt(&pk, &parse_policy("a or b").unwrap(), &mut rng).unwrap();
        header.leaves.pop();
        let sk = cp_keygen(&pk, &mk, &attrs("a"), &mut rng).unwrap();
        assert_eq!(cp_decrypt(&pk, &sk, &header), Err(AbeError::Inconsistent));
    }
}
