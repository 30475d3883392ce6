use std::sync::Arc;

use super::sharing::lagrange_coeff;
use super::tree::{AccessNode, AccessTree, AttributeSet};
use crate::error::PolicyError;
use crate::pairing::{Modulus, Scalar};

/// A pruned satisfying subtree: every gate keeps exactly `threshold`
/// satisfied children, tagged with their original 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection<'a> {
    Leaf {
        /// Depth-first leaf position in the original tree.
        position: usize,
        attribute: &'a str,
    },
    Gate {
        children: Vec<(u64, Selection<'a>)>,
    },
}

impl<'a> Selection<'a> {
    /// Leaves of the selection as `(position, attribute)`, depth first.
    pub fn leaves(&self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<(usize, &'a str)>) {
        match self {
            Selection::Leaf {
                position,
                attribute,
            } => out.push((*position, attribute)),
            Selection::Gate { children } => children.iter().for_each(|(_, c)| c.collect(out)),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Selection::Leaf { .. } => 1,
            Selection::Gate { children } => children.iter().map(|(_, c)| c.leaf_count()).sum(),
        }
    }

    /// Bottom-up evaluation: `leaf` produces a value per selected leaf and
    /// `combine` merges a gate's children paired with their Lagrange
    /// coefficients over the gate's selected indices.
    pub fn fold<T, E>(
        &self,
        leaf: &mut impl FnMut(usize, &'a str) -> Result<T, E>,
        combine: &mut impl FnMut(Vec<(T, Scalar)>) -> Result<T, E>,
        order: &Arc<Modulus>,
    ) -> Result<T, E>
    where
        E: From<PolicyError>,
    {
        match self {
            Selection::Leaf {
                position,
                attribute,
            } => leaf(*position, attribute),
            Selection::Gate { children } => {
                let indices: Vec<u64> = children.iter().map(|(i, _)| *i).collect();
                let mut parts = Vec::with_capacity(children.len());
                for (i, child) in children {
                    let value = child.fold(leaf, combine, order)?;
                    parts.push((value, lagrange_coeff(*i, &indices, order)?));
                }
                combine(parts)
            }
        }
    }
}

/// Prunes `tree` to a minimal-per-gate satisfying selection.
///
/// At each gate the `k` satisfied children with the fewest selected leaves
/// are kept, ties going to the lower child index.
pub fn select_satisfying_subtree<'a>(
    tree: &'a AccessTree,
    attrs: &AttributeSet,
) -> Result<Selection<'a>, PolicyError> {
    let mut position = 0;
    select_node(tree.root(), attrs, &mut position)
        .map(|(sel, _)| sel)
        .ok_or(PolicyError::NotSatisfied)
}

fn select_node<'a>(
    node: &'a AccessNode,
    attrs: &AttributeSet,
    position: &mut usize,
) -> Option<(Selection<'a>, usize)> {
    match node {
        AccessNode::Leaf(name) => {
            let here = *position;
            *position += 1;
            attrs.contains(name).then_some((
                Selection::Leaf {
                    position: here,
                    attribute: name,
                },
                1,
            ))
        }
        AccessNode::Gate {
            threshold,
            children,
        } => {
            // every child is visited so leaf positions stay aligned
            let mut candidates: Vec<(u64, Selection<'a>, usize)> = children
                .iter()
                .enumerate()
                .filter_map(|(i, c)| {
                    select_node(c, attrs, position).map(|(s, n)| (i as u64 + 1, s, n))
                })
                .collect();
            if candidates.len() < *threshold {
                return None;
            }
            candidates.sort_by_key(|(i, _, n)| (*n, *i));
            candidates.truncate(*threshold);
            candidates.sort_by_key(|(i, _, _)| *i);
            let count = candidates.iter().map(|(_, _, n)| n).sum();
            let children = candidates.into_iter().map(|(i, s, _)| (i, s)).collect();
            Some((Selection::Gate { children }, count))
        }
    }
}
