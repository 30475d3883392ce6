mod common;

use std::sync::Arc;

use aben_core::pairing::{GroupParams, Modulus, Scalar};
use aben_core::policy::{
    lagrange_coeff, parse_policy, reconstruct, select_satisfying_subtree, share_secret, AttributeSet,
};
use aben_core::testing::{
    all_selections, all_subsets, all_trees, random_subset, random_tree, relabel_distinct, truth_table,
};
use num_bigint::BigUint;
use rand::Rng;

const POOL6: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

fn subset_index(attrs: &AttributeSet, pool: &[&str]) -> u32 {
    pool.iter()
        .enumerate()
        .filter(|(_, a)| attrs.contains(a))
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

#[test]
fn satisfies_matches_truth_table() {
    let mut rng = common::rng(21);
    let subsets = all_subsets(&POOL6);
    assert_eq!(subsets.len(), 64);
    for _ in 0..200 {
        let tree = random_tree(&mut rng, 6, 4, &POOL6);
        let table = truth_table(tree.root(), &POOL6);
        for s in &subsets {
            let idx = subset_index(s, &POOL6);
            assert_eq!(tree.satisfies(s), table >> idx & 1 == 1, "{tree} / {s}");
        }
    }
}

#[test]
fn satisfies_is_monotone() {
    let mut rng = common::rng(22);
    for _ in 0..300 {
        let tree = random_tree(&mut rng, 6, 4, &POOL6);
        let s = random_subset(&mut rng, &POOL6);
        if !tree.satisfies(&s) {
            continue;
        }
        for extra in POOL6 {
            let bigger = AttributeSet::new(s.iter().chain([extra])).unwrap();
            assert!(tree.satisfies(&bigger), "{tree}: {s} + {extra}");
        }
    }
}

#[test]
fn parser_round_trips_random_policies() {
    let mut rng = common::rng(23);
    let pool = ["alpha", "beta", "gamma", "d_1", "E2", "_f"];
    for _ in 0..1000 {
        let tree = random_tree(&mut rng, 8, 4, &pool);
        let text = tree.render();
        let back = parse_policy(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
        assert_eq!(back, tree, "{text}");
        assert_eq!(back.render(), text);
    }
}

#[test]
fn parser_accepts_documented_forms() {
    let cases = [
        ("a", "a"),
        ("a and b", "a and b"),
        ("a or b and c", "a or (b and c)"),
        ("(a or b) and c", "(a or b) and c"),
        ("a and b and c", "a and b and c"),
        ("2 of (a, b, c)", "2 of (a, b, c)"),
        ("2 of (a, b and c, d)", "2 of (a, b and c, d)"),
        ("  a   or\tb ", "a or b"),
    ];
    for (input, canonical) in cases {
        assert_eq!(parse_policy(input).unwrap().render(), canonical, "{input}");
    }
    for bad in ["", "a and", "and", "a b", "(a", "4 of (a, b, c)", "0 of (a)", "a or or b", "x-y"] {
        assert!(parse_policy(bad).is_err(), "{bad:?}");
    }
}

#[test]
fn every_pruned_subtree_reconstructs_at_toy_order() {
    let params = GroupParams::toy();
    let order = params.order();
    let mut rng = common::rng(24);
    let shapes = all_trees(4, 3, &["x"]);
    let mut checked = 0usize;
    for shape in &shapes {
        let tree = relabel_distinct(shape);
        let selections = all_selections(&tree);
        for secret in 0..3 {
            let secret = Scalar::from_u64(secret, order);
            for _ in 0..3 {
                let shares = share_secret(&tree, &secret, &mut rng).unwrap();
                assert_eq!(shares.root_secret, secret);
                for sel in &selections {
                    assert_eq!(reconstruct(sel, &shares.leaf_shares, order).unwrap(), secret, "{tree}");
                    checked += 1;
                }
            }
        }
        // the greedy selector picks one of those subtrees whenever the tree is satisfied
        let labels: Vec<String> = (1..=tree.leaf_count()).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        for subset in all_subsets(&refs) {
            let shares = share_secret(&tree, &Scalar::from_u64(2, order), &mut rng).unwrap();
            match select_satisfying_subtree(&tree, &subset) {
                Ok(sel) => {
                    assert!(tree.satisfies(&subset));
                    assert!(sel.leaves().iter().all(|(_, a)| subset.contains(a)));
                    assert_eq!(reconstruct(&sel, &shares.leaf_shares, order).unwrap(), shares.root_secret);
                }
                Err(_) => assert!(!tree.satisfies(&subset)),
            }
        }
    }
    assert!(checked > 1_000, "{checked}");
}

/// Δ_{i,S}(0) via Fermat inversion, independent of the library's field code.
fn lagrange_oracle(i: u64, set: &[u64], r: &BigUint) -> BigUint {
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for &j in set.iter().filter(|&&j| j != i) {
        // (0 - j) / (i - j)
        num = num * (r - BigUint::from(j) % r) % r;
        den = den * ((r + BigUint::from(i) - BigUint::from(j) % r) % r) % r;
    }
    num * den.modpow(&(r - 2u32), r) % r
}

#[test]
fn lagrange_matches_oracle_at_full_order() {
    let params = common::params80();
    let order: &Arc<Modulus> = params.order();
    let mut rng = common::rng(25);
    for _ in 0..100 {
        let n = rng.gen_range(1..=10u64);
        let set: Vec<u64> = (1..=n).collect();
        let i = rng.gen_range(1..=n);
        let got = lagrange_coeff(i, &set, order).unwrap();
        assert_eq!(got.value(), &lagrange_oracle(i, &set, params.r()));
    }
}

#[test]
fn random_reconstruction_at_full_order() {
    let params = common::params80();
    let mut rng = common::rng(26);
    let mut done = 0;
    while done < 100 {
        let tree = random_tree(&mut rng, 8, 5, &POOL6);
        let subset = random_subset(&mut rng, &POOL6);
        let Ok(sel) = select_satisfying_subtree(&tree, &subset) else {
            continue;
        };
        let secret = params.random_scalar(&mut rng);
        let shares = share_secret(&tree, &secret, &mut rng).unwrap();
        assert_eq!(reconstruct(&sel, &shares.leaf_shares, params.order()).unwrap(), secret);
        done += 1;
    }
}
