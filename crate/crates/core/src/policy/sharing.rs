//! Polynomial secret sharing down an access tree, and Lagrange
//! reconstruction back up a pruned selection.

use std::sync::Arc;

use num_bigint::BigUint;
use rand::RngCore;

use super::select::Selection;
use super::tree::{AccessNode, AccessTree};
use crate::error::PolicyError;
use crate::pairing::{Modulus, Scalar};

/// Per-leaf shares of a root secret, indexed by leaf position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareMap {
    pub root_secret: Scalar,
    pub leaf_shares: Vec<Scalar>,
}

/// Checks that every gate's evaluation points `1..=n` are distinct mod `r`.
pub fn check_fan_out(tree: &AccessTree, order: &Arc<Modulus>) -> Result<(), PolicyError> {
    let widest = tree.max_fan_out();
    if BigUint::from(widest) > *order.value() {
        return Err(PolicyError::GateTooWide { children: widest });
    }
    Ok(())
}

/// Shares `secret` over `tree`: each gate with threshold k draws a random
/// degree-(k-1) polynomial whose constant term is the inherited value, and
/// child `i` inherits its value at `i`.
pub fn share_secret<R: RngCore + ?Sized>(
    tree: &AccessTree,
    secret: &Scalar,
    rng: &mut R,
) -> Result<ShareMap, PolicyError> {
    let order = secret.modulus();
    check_fan_out(tree, order)?;
    let mut leaf_shares = Vec::with_capacity(tree.leaf_count());
    share_node(tree.root(), secret.clone(), order, rng, &mut leaf_shares);
    Ok(ShareMap {
        root_secret: secret.clone(),
        leaf_shares,
    })
}

fn share_node<R: RngCore + ?Sized>(
    node: &AccessNode,
    value: Scalar,
    order: &Arc<Modulus>,
    rng: &mut R,
    out: &mut Vec<Scalar>,
) {
    match node {
        AccessNode::Leaf(_) => out.push(value),
        AccessNode::Gate {
            threshold,
            children,
        } => {
            let mut coeffs = Vec::with_capacity(*threshold);
            coeffs.push(value);
            coeffs.extend((1..*threshold).map(|_| Scalar::random(order, rng)));
            for (i, child) in children.iter().enumerate() {
                let x = Scalar::from_u64(i as u64 + 1, order);
                share_node(child, eval_poly(&coeffs, &x), order, rng, out);
            }
        }
    }
}

/// Horner evaluation of `coeffs[0] + coeffs[1]·x + …`.
pub fn eval_poly(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero(x.modulus());
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Δ_{i,S}(0) = ∏_{j ∈ S, j ≠ i} (0 - j) / (i - j) mod r.
pub fn lagrange_coeff(i: u64, set: &[u64], order: &Arc<Modulus>) -> Result<Scalar, PolicyError> {
    let reduced: Vec<Scalar> = set.iter().map(|&j| Scalar::from_u64(j, order)).collect();
    for (a, x) in reduced.iter().enumerate() {
        if reduced[..a].contains(x) {
            return Err(PolicyError::DuplicateEvaluationPoint(set[a]));
        }
    }
    if !set.contains(&i) {
        return Err(PolicyError::PointNotInSet(i));
    }
    let xi = Scalar::from_u64(i, order);
    let mut num = Scalar::one(order);
    let mut den = Scalar::one(order);
    for xj in reduced.iter().filter(|xj| **xj != xi) {
        num = &num * &(-xj);
        den = &den * &(&xi - xj);
    }
    let den_inv = den.inverse().expect("points are distinct mod r");
    Ok(&num * &den_inv)
}

/// Recombines leaf shares over a pruned selection, giving the root secret
/// whenever the selection came from a satisfying attribute set.
pub fn reconstruct(selection: &Selection<'_>, shares: &[Scalar], order: &Arc<Modulus>) -> Result<Scalar, PolicyError> {
    selection.fold(
        &mut |position, _| Ok(shares[position].clone()),
        &mut |parts| {
            let mut acc = Scalar::zero(order);
            for (value, coeff) in parts {
                acc = &acc + &(&value * &coeff);
            }
            Ok(acc)
        },
        order,
    )
}
