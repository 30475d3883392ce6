//! Key-policy ABE (small universe) as a key-encapsulation mechanism.
//!
//! Setup fixes an ordered attribute universe with secrets `t_i` and `y`,
//! publishing `T_i = g^{t_i}` and `Y = ê(g,g)^y`. Encapsulation to attribute
//! set γ publishes `E_i = T_i^s` and derives `Y^s`. A key for policy A
//! shares `y` over A and holds `D_x = g^{q_x(0)/t_i}` per leaf x.

use std::collections::BTreeMap;

use rand::RngCore;

use crate::cpabe::gt_interpolate;
use crate::error::AbeError;
use crate::pairing::{pairing, CurvePoint, GroupParams, GtElement, Scalar};
use crate::policy::{
    is_valid_attribute, select_satisfying_subtree, share_secret, AccessTree, AttributeSet,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KpPublicParams {
    pub params: GroupParams,
    pub universe: Vec<String>,
    /// `T_i = g^{t_i}`, aligned with `universe`.
    pub t_images: Vec<CurvePoint>,
    /// `Y = ê(g,g)^y`
    pub y_image: GtElement,
}

impl KpPublicParams {
    /// Index of `attr` in the universe, by exact match.
    pub fn index_of(&self, attr: &str) -> Option<usize> {
        self.universe.iter().position(|u| u == attr)
    }

    /// `|universe|` points plus one GT element.
    pub fn element_count(&self) -> usize {
        self.t_images.len() + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KpMasterKey {
    pub t_values: Vec<Scalar>,
    pub y_value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KpPrivateKey {
    pub policy: AccessTree,
    /// `D_x`, one per policy leaf, by leaf position.
    pub components: Vec<CurvePoint>,
}

impl KpPrivateKey {
    pub fn element_count(&self) -> usize {
        self.components.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KpHeader {
    /// `E_i = T_i^s` keyed by attribute.
    pub components: BTreeMap<String, CurvePoint>,
}

impl KpHeader {
    pub fn attributes(&self) -> AttributeSet {
        AttributeSet::new(self.components.keys().cloned()).expect("keys hold valid attributes")
    }

    pub fn element_count(&self) -> usize {
        self.components.len()
    }
}

pub fn kp_setup<R: RngCore + ?Sized>(
    params: &GroupParams,
    universe: &[String],
    rng: &mut R,
) -> Result<(KpPublicParams, KpMasterKey), AbeError> {
    if universe.is_empty() {
        return Err(AbeError::EmptyUniverse);
    }
    for (i, attr) in universe.iter().enumerate() {
        if !is_valid_attribute(attr) {
            return Err(crate::error::PolicyError::InvalidAttribute(attr.clone()).into());
        }
        if universe[..i].contains(attr) {
            return Err(AbeError::DuplicateUniverseAttribute(attr.clone()));
        }
    }
    let g = params.generator();
    let t_values: Vec<Scalar> = universe
        .iter()
        .map(|_| params.random_nonzero_scalar(rng))
        .collect();
    let y_value = params.random_scalar(rng);
    let t_images = t_values.iter().map(|t| g.mul(t.value())).collect();
    let y_image = pairing(g, g, params)?.pow(&y_value);
    Ok((
        KpPublicParams {
            params: params.clone(),
            universe: universe.to_vec(),
            t_images,
            y_image,
        },
        KpMasterKey { t_values, y_value },
    ))
}

pub fn kp_encrypt<R: RngCore + ?Sized>(
    pk: &KpPublicParams,
    attrs: &AttributeSet,
    rng: &mut R,
) -> Result<(KpHeader, GtElement), AbeError> {
    let s = pk.params.random_scalar(rng);
    encapsulate_with_secret(pk, attrs, &s)
}

pub(crate) fn encapsulate_with_secret(
    pk: &KpPublicParams,
    attrs: &AttributeSet,
    s: &Scalar,
) -> Result<(KpHeader, GtElement), AbeError> {
    if attrs.is_empty() {
        return Err(AbeError::EmptyAttributeSet);
    }
    let mut components = BTreeMap::new();
    for attr in attrs.iter() {
        let i = pk
            .index_of(attr)
            .ok_or_else(|| AbeError::UnknownAttribute(attr.to_string()))?;
        components.insert(attr.to_string(), pk.t_images[i].mul(s.value()));
    }
    Ok((KpHeader { components }, pk.y_image.pow(s)))
}

pub fn kp_keygen<R: RngCore + ?Sized>(
    pk: &KpPublicParams,
    mk: &KpMasterKey,
    policy: &AccessTree,
    rng: &mut R,
) -> Result<KpPrivateKey, AbeError> {
    let indices = policy
        .leaves()
        .into_iter()
        .map(|a| pk.index_of(a).ok_or_else(|| AbeError::UnknownAttribute(a.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let shares = share_secret(policy, &mk.y_value, rng)?;
    let g = pk.params.generator();
    let components = indices
        .into_iter()
        .zip(&shares.leaf_shares)
        .map(|(i, share)| {
            let t_inv = mk.t_values[i].inverse().expect("t_i is nonzero");
            g.mul((share * &t_inv).value())
        })
        .collect();
    Ok(KpPrivateKey {
        policy: policy.clone(),
        components,
    })
}

/// Recovers `Y^s` iff the header's attributes satisfy the key's policy.
pub fn kp_decrypt(
    pk: &KpPublicParams,
    sk: &KpPrivateKey,
    header: &KpHeader,
) -> Result<GtElement, AbeError> {
    if sk.components.len() != sk.policy.leaf_count() {
        return Err(AbeError::Inconsistent);
    }
    let params = &pk.params;
    let selection = select_satisfying_subtree(&sk.policy, &header.attributes())
        .map_err(|_| AbeError::PolicyNotSatisfied)?;
    selection.fold(
        &mut |position, attr| -> Result<GtElement, AbeError> {
            let e = header.components.get(attr).ok_or(AbeError::Inconsistent)?;
            Ok(pairing(&sk.components[position], e, params)?)
        },
        &mut |parts| Ok(gt_interpolate(parts, params)),
        params.order(),
    )
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
            generate_params(SecurityLevel::Bits80, &mut ChaCha20Rng::seed_from_u64(81)).unwrap()
        })
    }

    fn universe(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn attrs(s: &str) -> AttributeSet {
        AttributeSet::parse(s).unwrap()
    }

    #[test]
    fn setup_images() {
        let params = params80();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let names: Vec<String> = (1..=30).map(|i| format!("a{i}")).collect();
        let (pk, mk) = kp_setup(params, &names, &mut rng).unwrap();
        assert_eq!(pk.t_images.len(), 30);
        assert_eq!(pk.element_count(), 31);
        for (t, img) in mk.t_values.iter().zip(&pk.t_images) {
            assert_eq!(&params.g_mul(t), img);
        }
        let egg = pairing(params.generator(), params.generator(), params).unwrap();
        assert_eq!(egg.pow(&mk.y_value), pk.y_image);
    }

    #[test]
    fn setup_rejects_bad_universes() {
        let params = params80();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        assert_eq!(
            kp_setup(params, &universe(&["a", "b", "a"]), &mut rng).unwrap_err(),
            AbeError::DuplicateUniverseAttribute("a".into())
        );
        assert_eq!(kp_setup(params, &[], &mut rng).unwrap_err(), AbeError::EmptyUniverse);
        assert!(kp_setup(params, &universe(&["a b"]), &mut rng).is_err());
    }

    #[test]
    fn encrypt_component_algebra() {
        let params = params80();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let (pk, _) = kp_setup(params, &universe(&["a", "b", "c"]), &mut rng).unwrap();
        let s = params.random_scalar(&mut rng);
        let (header, key) = encapsulate_with_secret(&pk, &attrs("a"), &s).unwrap();
        assert_eq!(header.element_count(), 1);
        let g = params.generator();
        assert_eq!(
            pairing(&header.components["a"], g, params).unwrap(),
            pairing(&pk.t_images[0], g, params).unwrap().pow(&s)
        );
        assert_eq!(key, pk.y_image.pow(&s));
        assert_eq!(
            kp_encrypt(&pk, &attrs("a,zzz"), &mut rng).unwrap_err(),
            AbeError::UnknownAttribute("zzz".into())
        );
    }

    #[test]
    fn single_leaf_key_identity() {
        let params = params80();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let (pk, mk) = kp_setup(params, &universe(&["a", "b"]), &mut rng).unwrap();
        let sk = kp_keygen(&pk, &mk, &parse_policy("a").unwrap(), &mut rng).unwrap();
        assert_eq!(
            pairing(&sk.components[0], &pk.t_images[0], params).unwrap(),
            pk.y_image
        );
        assert_eq!(
            kp_keygen(&pk, &mk, &parse_policy("a or q").unwrap(), &mut rng).unwrap_err(),
            AbeError::UnknownAttribute("q".into())
        );
    }

    #[test]
    fn round_trip_and_rejection() {
        let params = params80();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let (pk, mk) = kp_setup(params, &universe(&["a", "b", "c", "d"]), &mut rng).unwrap();
        let sk = kp_keygen(&pk, &mk, &parse_policy("2 of (a, b, c)").unwrap(), &mut rng).unwrap();
        assert_eq!(sk.element_count(), 3);
        for ok in ["a,b", "b,c", "a,c,d", "a,b,c"] {
            let (header, key) = kp_encrypt(&pk, &attrs(ok), &mut rng).unwrap();
            assert_eq!(kp_decrypt(&pk, &sk, &header).unwrap(), key, "{ok}");
        }
        for bad in ["a", "d", "c,d"] {
            let (header, _) = kp_encrypt(&pk, &attrs(bad), &mut rng).unwrap();
            assert_eq!(kp_decrypt(&pk, &sk, &header), Err(AbeError::PolicyNotSatisfied));
        }
    }
}
