//! Crate-wide error type.

use std::fmt;

use crate::subset::Subset;

/// Everything that can go wrong across the solver stack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Ground set size out of the supported 1..=30 range.
    GroundSetSize(usize),
    /// Two elements share a label.
    DuplicateLabel(String),
    /// Declared distance parameter violates 2 <= k <= n.
    DistanceOutOfRange { k: usize, n: usize },
    /// An exhaustive check was asked on an instance above its size guard.
    InstanceTooLarge { n: usize, guard: usize },
    /// Rational string that is not "p" or "p/q" with q != 0.
    MalformedRational(String),
    /// A vector argument does not have one entry per ground-set element.
    DimensionMismatch { expected: usize, got: usize },
    /// Negative entry where a nonnegative vector is required.
    NegativeWeight(usize),
    /// Negative shift passed to the nonempty-shift transform.
    NegativeShift,
    /// Operation requires f(empty) = 0.
    NotNormalized,
    /// Operation requires an integer-valued function.
    NotIntegerValued(Subset),
    /// Perturbation bound must be positive.
    ZeroValueBound,
    /// Linear-program matrix/vector dimensions are inconsistent.
    LpShape(String),
    /// Requested basis does not determine a unique point.
    SingularBasis,
    /// p/q parameters outside the tractable regime.
    IntractableRegime { p: u64, q: u64 },
    /// p/q parameters invalid (q < 3 or p > C(q,2)).
    BadPqParameters { p: u64, q: u64 },
    /// Cut-function weight condition fails at a vertex.
    CutConditionViolated { vertex: usize, edge_set_size: usize },
    /// Matroid construction rejected.
    InvalidMatroid(String),
    /// Matroid pair does not satisfy the near-uniform hypothesis.
    HypothesisViolated { matroid: usize, set: Subset },
    /// Matroid ranks differ where equality is required.
    RankMismatch { r1: usize, r2: usize },
    /// Random generation did not produce a valid instance within its budget.
    RejectionBudgetExhausted { tries: usize },
    /// Generation strategy cannot produce the requested (n, k).
    UnsupportedStrategy(String),
    /// File or serialized instance is malformed.
    Format(String),
    /// An internal exactness invariant failed; indicates a bug or an
    /// instance that violates its declared distance parameter.
    InternalConsistency(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GroundSetSize(n) => write!(f, "ground set size {n} not in 1..=30"),
            Error::DuplicateLabel(l) => write!(f, "duplicate element label {l:?}"),
            Error::DistanceOutOfRange { k, n } => {
                write!(f, "distance parameter k={k} must satisfy 2 <= k <= n={n}")
            }
            Error::InstanceTooLarge { n, guard } => {
                write!(f, "instance too large for exhaustive check: n={n} > guard {guard}")
            }
            Error::MalformedRational(s) => write!(f, "malformed rational {s:?}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "expected a vector of length {expected}, got {got}")
            }
            Error::NegativeWeight(i) => {
                write!(f, "weight vector must be nonnegative (entry {})", i + 1)
            }
            Error::NegativeShift => write!(f, "nonempty shift requires c >= 0"),
            Error::NotNormalized => write!(f, "operation requires f(empty) = 0; normalize first"),
            Error::NotIntegerValued(s) => {
                write!(f, "operation requires integer values; f({s:?}) is fractional")
            }
            Error::ZeroValueBound => write!(f, "value bound must be positive"),
            Error::LpShape(msg) => write!(f, "inconsistent LP dimensions: {msg}"),
            Error::SingularBasis => write!(f, "basis incidence vectors are linearly dependent"),
            Error::IntractableRegime { p, q } => write!(
                f,
                "{p}/{q}-submodular minimization is in the intractable regime (p <= C(q-1,2))"
            ),
            Error::BadPqParameters { p, q } => {
                write!(f, "invalid p/q parameters p={p}, q={q}")
            }
            Error::CutConditionViolated { vertex, edge_set_size } => write!(
                f,
                "cut weight condition fails at vertex {vertex}: some {edge_set_size} incident edges sum below zero"
            ),
            Error::InvalidMatroid(msg) => write!(f, "invalid matroid: {msg}"),
            Error::HypothesisViolated { matroid, set } => write!(
                f,
                "matroid {matroid} violates the near-uniform rank hypothesis at {set:?}"
            ),
            Error::RankMismatch { r1, r2 } => {
                write!(f, "matroids must have equal rank: r1={r1}, r2={r2}")
            }
            Error::RejectionBudgetExhausted { tries } => {
                write!(f, "no valid instance found after {tries} rejection attempts")
            }
            Error::UnsupportedStrategy(msg) => write!(f, "unsupported generation request: {msg}"),
            Error::Format(msg) => write!(f, "{msg}"),
            Error::InternalConsistency(msg) => write!(f, "internal consistency failure: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
