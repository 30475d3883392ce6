use crate::policy::{AccessNode, AccessTree, Selection};

/// Index sets of size `k` drawn from `0..n`, as sorted vectors.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    assert!(n < 32);
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|j| m >> j & 1 == 1).collect())
        .collect()
}

/// Truth table of `node` over the subsets of `pool` (at most 6 names): bit
/// `s` is set iff the subset with membership mask `s` satisfies the node.
/// Each k-of-n gate is expanded into an OR over k-combinations of ANDs,
/// independently of the library's own evaluator.
pub fn truth_table(node: &AccessNode, pool: &[&str]) -> u64 {
    assert!(pool.len() <= 6);
    let rows = 1u32 << pool.len();
    let full = if rows == 64 { u64::MAX } else { (1u64 << rows) - 1 };
    match node {
        AccessNode::Leaf(name) => {
            let i = pool.iter().position(|p| p == name).expect("leaf drawn from pool");
            (0..rows).filter(|s| s >> i & 1 == 1).fold(0, |acc, s| acc | 1 << s)
        }
        AccessNode::Gate {
            threshold,
            children,
        } => {
            let tables: Vec<u64> = children.iter().map(|c| truth_table(c, pool)).collect();
            combinations(tables.len(), *threshold)
                .into_iter()
                .map(|combo| combo.iter().fold(full, |acc, &j| acc & tables[j]))
                .fold(0, |acc, t| acc | t)
        }
    }
}

/// Same shape with leaves renamed `x1..xL` in DFS order.
pub fn relabel_distinct(tree: &AccessTree) -> AccessTree {
    fn go(node: &AccessNode, next: &mut usize) -> AccessNode {
        match node {
            AccessNode::Leaf(_) => {
                *next += 1;
                AccessNode::leaf(format!("x{next}"))
            }
            AccessNode::Gate {
                threshold,
                children,
            } => AccessNode::gate(*threshold, children.iter().map(|c| go(c, next)).collect()),
        }
    }
    AccessTree::new(go(tree.root(), &mut 0)).expect("relabelled tree is valid")
}

/// Every pruned satisfying subtree of `tree`: each gate keeps any `k` of
/// its children, recursively.
pub fn all_selections(tree: &AccessTree) -> Vec<Selection<'_>> {
    fn go<'a>(node: &'a AccessNode, position: &mut usize) -> Vec<Selection<'a>> {
        match node {
            AccessNode::Leaf(name) => {
                let p = *position;
                *position += 1;
                vec![Selection::Leaf {
                    position: p,
                    attribute: name,
                }]
            }
            AccessNode::Gate {
                threshold,
                children,
            } => {
                let per_child: Vec<Vec<Selection<'a>>> = children.iter().map(|c| go(c, position)).collect();
                let mut out = Vec::new();
                for combo in combinations(children.len(), *threshold) {
                    let mut partial: Vec<Vec<(u64, Selection<'a>)>> = vec![vec![]];
                    for &j in &combo {
                        partial = partial
                            .into_iter()
                            .flat_map(|prefix| {
                                per_child[j].iter().map(move |sel| {
                                    let mut v = prefix.clone();
                                    v.push((j as u64 + 1, sel.clone()));
                                    v
                                })
                            })
                            .collect();
                    }
                    out.extend(partial.into_iter().map(|children| Selection::Gate { children }));
                }
                out
            }
        }
    }
    go(tree.root(), &mut 0)
}
