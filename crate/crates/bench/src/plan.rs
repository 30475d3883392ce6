use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use aben_core::pairing::SecurityLevel;
use serde::{Deserialize, Serialize};

use crate::BenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Cp,
    Kp,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Cp => "cp",
            Scheme::Kp => "kp",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Scheme selection on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeChoice {
    Cp,
    Kp,
    Both,
}

impl SchemeChoice {
    pub fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeChoice::Cp => vec![Scheme::Cp],
            SchemeChoice::Kp => vec![Scheme::Kp],
            SchemeChoice::Both => vec![Scheme::Cp, Scheme::Kp],
        }
    }
}

impl FromStr for SchemeChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cp" => Ok(SchemeChoice::Cp),
            "kp" => Ok(SchemeChoice::Kp),
            "both" => Ok(SchemeChoice::Both),
            _ => Err(format!("unknown scheme {s:?} (expected cp, kp or both)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Setup,
    Keygen,
    Encrypt,
    Decrypt,
}

impl Op {
    pub const ALL: [Op; 4] = [Op::Setup, Op::Keygen, Op::Encrypt, Op::Decrypt];

    pub fn as_str(self) -> &'static str {
        match self {
            Op::Setup => "setup",
            Op::Keygen => "keygen",
            Op::Encrypt => "encrypt",
            Op::Decrypt => "decrypt",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Op {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Op::ALL
            .into_iter()
            .find(|op| op.as_str() == s)
            .ok_or_else(|| format!("unknown operation {s:?}"))
    }
}

// Rows sort by the text that appears in the CSV.
impl Ord for Op {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.as_str().cmp(other.as_str())
    }
}

impl PartialOrd for Op {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// How the N attributes of a cell become a policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `a1 and a2 and ... and aN`
    AndChain,
    /// `min(k, N) of (a1, ..., aN)`
    KOfN { k: usize },
}

impl Shape {
    pub fn describe(self) -> String {
        match self {
            Shape::AndChain => "and".into(),
            Shape::KOfN { k } => format!("kofn(k={k})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchPlan {
    pub schemes: Vec<Scheme>,
    pub ops: Vec<Op>,
    pub attr_counts: Vec<usize>,
    pub levels: Vec<SecurityLevel>,
    pub reps: usize,
    pub warmup: usize,
    pub seed: u64,
    pub shape: Shape,
    pub out: Option<PathBuf>,
}

impl Default for BenchPlan {
    fn default() -> Self {
        Self {
            schemes: vec![Scheme::Cp, Scheme::Kp],
            ops: Op::ALL.to_vec(),
            attr_counts: (1..=30).collect(),
            levels: vec![SecurityLevel::Bits80],
            reps: 100,
            warmup: 0,
            seed: 0,
            shape: Shape::AndChain,
            out: None,
        }
    }
}

impl BenchPlan {
    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: &str| Err(BenchError::InvalidPlan(msg.into()));
        if self.reps == 0 {
            return bad("repetitions must be at least 1");
        }
        if self.attr_counts.contains(&0) {
            return bad("attribute counts must be at least 1");
        }
        if self.schemes.is_empty() || self.ops.is_empty() || self.attr_counts.is_empty() || self.levels.is_empty() {
            return bad("plan has an empty axis");
        }
        if let Shape::KOfN { k: 0 } = self.shape {
            return bad("k must be at least 1");
        }
        Ok(())
    }

    /// Number of (scheme, op, level, N) cells.
    pub fn cell_count(&self) -> usize {
        self.schemes.len() * self.ops.len() * self.levels.len() * self.attr_counts.len()
    }
}

/// Parses `1..30`, `1..=30`, `5` or comma-separated mixes like `1,5,10..12`.
pub fn parse_counts(text: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad count {s:?}"));
        if let Some((lo, hi)) = part.split_once("..") {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(format!("empty range {part:?}"));
            }
            out.extend(lo..=hi);
        } else {
            out.push(num(part)?);
        }
    }
    Ok(out)
}

pub fn parse_levels(text: &str) -> Result<Vec<SecurityLevel>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<SecurityLevel>().map_err(|e| e.to_string()))
        .collect()
}

pub fn parse_ops(text: &str) -> Result<Vec<Op>, String> {
    text.split(',').map(|s| s.trim().parse()).collect()
}
