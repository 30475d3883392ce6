use thiserror::Error;

/// Failures of the pairing layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error("parameter search exhausted after {0} candidates")]
    ParameterSearchExhausted(u64),
    #[error("point is not in the order-r subgroup")]
    NotInSubgroup,
    #[error("hash-to-group gave up after {0} counters")]
    HashToPointFailure(u32),
    #[error("invalid group parameters: {0}")]
    InvalidParams(String),
}

/// Failures while parsing or evaluating access policies.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("syntax error at byte {position}: expected one of {}", expected.join(", "))]
    SyntaxError {
        position: usize,
        expected: Vec<String>,
    },
    #[error("threshold {threshold} out of range for {children} children")]
    ThresholdOutOfRange { threshold: usize, children: usize },
    #[error("invalid attribute name {0:?}")]
    InvalidAttribute(String),
    #[error("duplicate evaluation point {0}")]
    DuplicateEvaluationPoint(u64),
    #[error("evaluation point {0} is not in the interpolation set")]
    PointNotInSet(u64),
    #[error("gate with {children} children needs more evaluation points than the group order allows")]
    GateTooWide { children: usize },
    #[error("attribute set does not satisfy the policy")]
    NotSatisfied,
}

/// Failures of the CP-ABE and KP-ABE schemes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbeError {
    #[error("attribute set does not satisfy the access policy")]
    PolicyNotSatisfied,
    #[error("attribute set is empty")]
    EmptyAttributeSet,
    #[error("attribute {0:?} is not in the universe")]
    UnknownAttribute(String),
    #[error("attribute {0:?} appears twice in the universe")]
    DuplicateUniverseAttribute(String),
    #[error("universe is empty")]
    EmptyUniverse,
    #[error("key material does not match the ciphertext header")]
    Inconsistent,
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
}

/// Byte-level decoding failure, carrying the offset where parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed {what} at byte {offset}: {reason}")]
pub struct FormatError {
    pub what: &'static str,
    pub offset: usize,
    pub reason: String,
}

/// Failures of the hybrid envelope layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("authentication failed: payload tampered or wrong session key")]
    AuthenticationFailure,
    #[error("malformed envelope: {0}")]
    MalformedEnvelope(FormatError),
    #[error("malformed key: {0}")]
    MalformedKey(FormatError),
    #[error("envelope was sealed for the {found} scheme, not {expected}")]
    SchemeMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error(transparent)]
    Abe(#[from] AbeError),
}

impl From<PolicyError> for EnvelopeError {
    fn from(e: PolicyError) -> Self {
        EnvelopeError::Abe(e.into())
    }
}
