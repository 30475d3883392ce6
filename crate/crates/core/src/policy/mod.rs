//! Access policies: the infix policy language, threshold-gate trees,
//! satisfiability, secret sharing and Lagrange reconstruction.

mod parser;
mod select;
mod sharing;
mod tree;

pub use parser::parse_policy;
pub use select::{select_satisfying_subtree, Selection};
pub use sharing::{check_fan_out, eval_poly, lagrange_coeff, reconstruct, share_secret, ShareMap};
pub use tree::{is_valid_attribute, AccessNode, AccessTree, AttributeSet};

/// Evaluates `tree` against `attrs`.
pub fn satisfies(tree: &AccessTree, attrs: &AttributeSet) -> bool {
    tree.satisfies(attrs)
}
