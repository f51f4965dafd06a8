use thiserror::Error;

/// Which certification step rejected a point-count interpolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountFailure {
    Integrality,
    Consistency,
}

impl std::fmt::Display for CountFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CountFailure::Integrality => f.write_str("integrality"),
            CountFailure::Consistency => f.write_str("consistency"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix not invertible")]
    NotInvertible,
    #[error("not polynomial-count ({0})")]
    NotPolynomialCount(CountFailure),
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("sample primes must be pairwise distinct (repeated {0})")]
    DuplicatePrime(u64),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("negative frame exponent unsupported")]
    NegativeFrameExponent,
    #[error("division failed: Laurent phenomenon violated (likely input bug)")]
    DivisionFailed,
    #[error("minimal degree not unique")]
    MinimalDegreeNotUnique,
    #[error("not a cluster-monomial expansion")]
    NotClusterMonomial,
    #[error("F support not an interval under componentwise order")]
    FSupportNotInterval,
    #[error("extended matrix singular")]
    ExtendedSingular,
    #[error("Λ not integral")]
    LambdaNotIntegral,
    #[error("pair not unitally compatible")]
    NotCompatible,
    #[error("cannot mutate frozen/invalid vertex {0}")]
    InvalidVertex(usize),
    #[error("no rigid representation found (dimension vector may not be a rigid class, or field too small)")]
    NoRigidRep,
    #[error("instance too large: estimated work {estimate} exceeds ceiling {ceiling}")]
    InstanceTooLarge { estimate: u128, ceiling: u128 },
    #[error("term count ceiling {0} exceeded")]
    TermCeiling(usize),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("principal part not acyclic")]
    NotAcyclic,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("counting polynomial has a negative coefficient (input not rigid?)")]
    NegativeCoefficient,
    #[error("prime budget exhausted after {tried} primes with {usable} usable samples")]
    PrimeBudgetExhausted { tried: usize, usable: usize },
    #[error("no two of {draws} draws over F_{prime} gave the same count")]
    NoAgreement { prime: u64, draws: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
