use std::collections::BTreeSet;
use std::fmt;

use crate::error::PolicyError;

/// Whether `name` matches `[A-Za-z_][A-Za-z0-9_]*` and is not a keyword.
pub fn is_valid_attribute(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    head_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !super::parser::is_keyword(name)
}

/// A node of a threshold-gate access tree.
///
/// Children of a gate are implicitly indexed `1..=n`; the index is the
/// evaluation point of that child's share.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AccessNode {
    Leaf(String),
    Gate {
        threshold: usize,
        children: Vec<AccessNode>,
    },
}

impl AccessNode {
    pub fn leaf(attribute: impl Into<String>) -> Self {
        AccessNode::Leaf(attribute.into())
    }

    pub fn gate(threshold: usize, children: Vec<AccessNode>) -> Self {
        AccessNode::Gate {
            threshold,
            children,
        }
    }

    pub fn and(children: Vec<AccessNode>) -> Self {
        Self::gate(children.len(), children)
    }

    pub fn or(children: Vec<AccessNode>) -> Self {
        Self::gate(1, children)
    }

    fn validate(&self) -> Result<(), PolicyError> {
        match self {
            AccessNode::Leaf(name) if is_valid_attribute(name) => Ok(()),
            AccessNode::Leaf(name) => Err(PolicyError::InvalidAttribute(name.clone())),
            AccessNode::Gate {
                threshold,
                children,
            } => {
                if *threshold < 1 || *threshold > children.len() {
                    return Err(PolicyError::ThresholdOutOfRange {
                        threshold: *threshold,
                        children: children.len(),
                    });
                }
                children.iter().try_for_each(AccessNode::validate)
            }
        }
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            AccessNode::Leaf(name) => out.push(name),
            AccessNode::Gate { children, .. } => {
                children.iter().for_each(|c| c.collect_leaves(out))
            }
        }
    }

    pub fn satisfied_by(&self, attrs: &AttributeSet) -> bool {
        match self {
            AccessNode::Leaf(name) => attrs.contains(name),
            AccessNode::Gate {
                threshold,
                children,
            } => children.iter().filter(|c| c.satisfied_by(attrs)).count() >= *threshold,
        }
    }
}

/// A validated access policy.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AccessTree {
    root: AccessNode,
}

impl AccessTree {
    pub fn new(root: AccessNode) -> Result<Self, PolicyError> {
        root.validate()?;
        Ok(Self { root })
    }

    pub fn root(&self) -> &AccessNode {
        &self.root
    }

    /// Leaf attributes in depth-first order. A leaf's index in this list is
    /// its position, which keys shares and header components.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.root.collect_leaves(&mut out);
        out
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().len()
    }

    /// Largest fan-out of any gate, 0 for a lone leaf.
    pub fn max_fan_out(&self) -> usize {
        fn walk(node: &AccessNode) -> usize {
            match node {
                AccessNode::Leaf(_) => 0,
                AccessNode::Gate { children, .. } => children
                    .iter()
                    .map(walk)
                    .max()
                    .unwrap_or(0)
                    .max(children.len()),
            }
        }
        walk(&self.root)
    }

    pub fn satisfies(&self, attrs: &AttributeSet) -> bool {
        self.root.satisfied_by(attrs)
    }

    /// Canonical infix text; parses back to an identical tree.
    pub fn render(&self) -> String {
        let mut out = String::new();
        render_node(&self.root, &mut out);
        out
    }
}

impl fmt::Display for AccessTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::str::FromStr for AccessTree {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse_policy(s)
    }
}

fn render_node(node: &AccessNode, out: &mut String) {
    match node {
        AccessNode::Leaf(name) => out.push_str(name),
        AccessNode::Gate {
            threshold,
            children,
        } => {
            let n = children.len();
            let joiner = if n >= 2 && *threshold == n {
                Some(" and ")
            } else if n >= 2 && *threshold == 1 {
                Some(" or ")
            } else {
                None
            };
            match joiner {
                Some(joiner) => {
                    for (i, child) in children.iter().enumerate() {
                        if i > 0 {
                            out.push_str(joiner);
                        }
                        if matches!(child, AccessNode::Gate { .. }) {
                            out.push('(');
                            render_node(child, out);
                            out.push(')');
                        } else {
                            render_node(child, out);
                        }
                    }
                }
                None => {
                    out.push_str(&threshold.to_string());
                    out.push_str(" of (");
                    for (i, child) in children.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        render_node(child, out);
                    }
                    out.push(')');
                }
            }
        }
    }
}

/// A set of distinct, valid attribute names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AttributeSet(BTreeSet<String>);

impl AttributeSet {
    pub fn new<I, S>(attrs: I) -> Result<Self, PolicyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = BTreeSet::new();
        for a in attrs {
            let a = a.into();
            if !is_valid_attribute(&a) {
                return Err(PolicyError::InvalidAttribute(a));
            }
            set.insert(a);
        }
        Ok(Self(set))
    }

    /// Parses a comma-separated list such as `"a, b,c"`.
    pub fn parse(text: &str) -> Result<Self, PolicyError> {
        Self::new(text.split(',').map(str::trim).filter(|s| !s.is_empty()))
    }

    pub fn contains(&self, attr: &str) -> bool {
        self.0.contains(attr)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Attributes in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn is_subset(&self, other: &AttributeSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl fmt::Display for AttributeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<&str> = self.iter().collect();
        f.write_str(&list.join(","))
    }
}
