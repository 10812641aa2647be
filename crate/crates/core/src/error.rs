use thiserror::Error;

use crate::quiver::Violation;

/// Everything that can go wrong while building or checking a skew quiver.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    // --- group machinery
    #[error("cayley table is malformed: {0}")]
    MalformedTable(String),
    #[error("table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("closure exceeded the cap of {0} elements")]
    ClosureCapExceeded(usize),
    #[error("subgroups belong to different groups")]
    DifferentParents,
    #[error("not a right action: (x^g)^h != x^(gh) for g={g}, h={h}, x={point}")]
    NotAnAction { g: usize, h: usize, point: usize },
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    // --- scalars and linear algebra
    #[error("cannot parse cyclotomic literal {0:?}: {1}")]
    Parse(String, String),
    #[error("denominator {0} is not invertible modulo {1}")]
    DenominatorNotInvertible(String, u64),
    #[error("no suitable prime below 2^31 for level {0}")]
    SearchExhausted(u64),
    #[error("prime {0} is not usable: {1}")]
    BadPrime(u64, String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    // --- characters
    #[error("class-algebra eigenspaces did not split into lines ({0})")]
    SplitFailure(String),
    #[error("conjugation by {0} does not carry the source subgroup onto the target")]
    ConjugationMismatch(usize),
    #[error("matrices do not form a representation: {0}")]
    NotARepresentation(String),

    // --- quivers and actions
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("invalid action ({} violation(s)); first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    InvalidAction(Vec<Violation>),
    #[error("arrow block ({0},{1}) is not stable under its stabilizer")]
    BlockNotStable(usize, usize),
    #[error("multiplicity {0} reached the prime {1}")]
    InternalBoundExceeded(u64, u64),

    // --- double quivers
    #[error("invalid arrow pairing: {0}")]
    InvalidPairing(String),
    #[error("preprojective relation is not invariant: element {element} breaks the form at ({row},{col})")]
    NotInvariant {
        element: usize,
        row: usize,
        col: usize,
    },
    #[error("folded double quiver is not symmetric at ({0},{1})")]
    AsymmetricFold(usize, usize),
    #[error("folded double quiver has an odd number of loops at vertex {0}")]
    OddLoop(usize),
    #[error("fold of the double does not equal fold + transpose at ({0},{1})")]
    DoubleMismatch(usize, usize),

    // --- oracle
    #[error("isotypic rank {rank} is not divisible by {divisor}")]
    NonIntegerCount { rank: u64, divisor: u64 },
    #[error("bilinear form is degenerate")]
    DegenerateForm,

    // --- mckay
    #[error("generator {0} does not have determinant one")]
    DeterminantNotOne(usize),
    #[error("graph is not an affine Dynkin diagram: {0}")]
    UnrecognizedShape(String),

    #[error("check failed: {0}")]
    CheckFailed(String),

    // --- io
    #[error("instance file error: {0}")]
    Instance(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input or an action that fails validation.
    Input,
    /// The input is well formed but a theorem hypothesis does not hold.
    Hypothesis,
    /// An internal consistency guard tripped.
    Guard,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NotInvariant { .. } => ErrorClass::Hypothesis,
            Error::SplitFailure(_)
            | Error::InternalBoundExceeded(..)
            | Error::AsymmetricFold(..)
            | Error::OddLoop(_)
            | Error::DoubleMismatch(..)
            | Error::NonIntegerCount { .. }
            | Error::BlockNotStable(..)
            | Error::UnrecognizedShape(_)
            | Error::CheckFailed(_) => ErrorClass::Guard,
            _ => ErrorClass::Input,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
