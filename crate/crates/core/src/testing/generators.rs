use rand::seq::SliceRandom;
use rand::Rng;

use crate::policy::{AccessNode, AccessTree, AttributeSet};

/// Random tree with between 1 and `max_leaves` leaves labelled from `pool`.
/// Gates have 2..=`max_fan_out` children and a uniform threshold.
pub fn random_tree<R: Rng + ?Sized>(
    rng: &mut R,
    max_leaves: usize,
    max_fan_out: usize,
    pool: &[&str],
) -> AccessTree {
    assert!(max_leaves >= 1 && max_fan_out >= 2 && !pool.is_empty());
    let leaves = rng.gen_range(1..=max_leaves);
    AccessTree::new(random_node(rng, leaves, max_fan_out, pool)).expect("generated trees are valid")
}

fn random_node<R: Rng + ?Sized>(
    rng: &mut R,
    leaves: usize,
    max_fan_out: usize,
    pool: &[&str],
) -> AccessNode {
    if leaves == 1 {
        return AccessNode::leaf(*pool.choose(rng).unwrap());
    }
    let n = rng.gen_range(2..=leaves.min(max_fan_out));
    // split `leaves` into n positive parts
    let mut cuts: Vec<usize> = (1..leaves).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(n - 1).collect();
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(n);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(leaves)) {
        parts.push(c - prev);
        prev = c;
    }
    let children = parts
        .into_iter()
        .map(|p| random_node(rng, p, max_fan_out, pool))
        .collect();
    AccessNode::gate(rng.gen_range(1..=n), children)
}

/// Random subset of `pool` (possibly empty).
pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, pool: &[&str]) -> AttributeSet {
    AttributeSet::new(pool.iter().filter(|_| rng.gen_bool(0.5)).copied()).expect("valid names")
}

/// Every subset of `pool`.
pub fn all_subsets(pool: &[&str]) -> Vec<AttributeSet> {
    (0..1u32 << pool.len())
        .map(|mask| {
            AttributeSet::new(
                pool.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, a)| *a),
            )
            .expect("valid names")
        })
        .collect()
}

/// Every tree with `1..=max_leaves` leaves over `pool`, gates of fan-out
/// `2..=max_fan_out`, every threshold.
pub fn all_trees(max_leaves: usize, max_fan_out: usize, pool: &[&str]) -> Vec<AccessTree> {
    let mut out = Vec::new();
    for leaves in 1..=max_leaves {
        for shape in shapes(leaves, max_fan_out) {
            for labels in labelings(leaves, pool) {
                let mut it = labels.into_iter();
                let node = label(&shape, &mut it);
                out.push(AccessTree::new(node).expect("valid"));
            }
        }
    }
    out
}

#[derive(Clone)]
enum Shape {
    Leaf,
    Gate(usize, Vec<Shape>),
}

fn shapes(leaves: usize, max_fan_out: usize) -> Vec<Shape> {
    if leaves == 1 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for parts in compositions(leaves) {
        let n = parts.len();
        if n < 2 || n > max_fan_out {
            continue;
        }
        let mut combos: Vec<Vec<Shape>> = vec![vec![]];
        for &p in &parts {
            let options = shapes(p, max_fan_out);
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    options.iter().map(move |o| {
                        let mut v = prefix.clone();
                        v.push(o.clone());
                        v
                    })
                })
                .collect();
        }
        for children in combos {
            for k in 1..=n {
                out.push(Shape::Gate(k, children.clone()));
            }
        }
    }
    out
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=n)
        .flat_map(|first| {
            compositions(n - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn labelings(leaves: usize, pool: &[&str]) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = vec![vec![]];
    for _ in 0..leaves {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                pool.iter().map(move |a| {
                    let mut v = prefix.clone();
                    v.push(a.to_string());
                    v
                })
            })
            .collect();
    }
    out
}

fn label(shape: &Shape, names: &mut impl Iterator<Item = String>) -> AccessNode {
    match shape {
        Shape::Leaf => AccessNode::Leaf(names.next().expect("enough labels")),
        Shape::Gate(k, children) => {
            AccessNode::gate(*k, children.iter().map(|c| label(c, names)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn enumeration_counts() {
        // shapes with 1, 2, 3 leaves: 1, 2, 3 + 2·2·2 = 11
        let counts: Vec<usize> = (1..=3).map(|l| shapes(l, 3).len()).collect();
        assert_eq!(counts, vec![1, 2, 11]);
        assert_eq!(all_trees(3, 3, &["a", "b"]).len(), 2 + 2 * 4 + 11 * 8);
        assert_eq!(all_subsets(&["a", "b", "c"]).len(), 8);
    }

    #[test]
    fn random_trees_respect_bounds() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..200 {
            let t = random_tree(&mut rng, 6, 3, &["a", "b", "c"]);
            assert!((1..=6).contains(&t.leaf_count()));
            assert!(t.max_fan_out() <= 3);
        }
    }
}
