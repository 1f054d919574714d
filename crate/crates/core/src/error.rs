use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed PD code: {0}")]
    MalformedPd(String),

    #[error("edge {edge} appears {count} time(s), expected exactly 2")]
    EdgeMultiplicity { edge: i64, count: usize },

    #[error("inconsistent orientation at edge {0}")]
    InconsistentOrientation(i64),

    #[error("malformed braid word: {0}")]
    MalformedBraid(String),

    #[error("braid letter {letter} out of range for {strands} strands")]
    BraidLetterOutOfRange { letter: i32, strands: u32 },

    #[error("pretzel link needs at least two nonzero parameters, got {0:?}")]
    BadPretzel(Vec<i32>),

    #[error("state has {got} markers but the diagram has {expected} crossings")]
    StateLength { expected: usize, got: usize },

    #[error("crossing index {index} out of range (diagram has {count} crossings)")]
    CrossingIndex { index: usize, count: usize },

    #[error("diagram has {0} crossings; at most 63 are supported")]
    TooManyCrossings(usize),

    #[error("marker at crossing {0} is not positive")]
    MarkerNotPositive(usize),

    #[error("states are not adjacent")]
    NotAdjacent,

    #[error("reduced complex requested but the diagram has no base point")]
    MissingBasePoint,

    #[error("base point component {component} out of range")]
    BadBasePoint { component: usize },

    #[error("expected a knot, diagram has {0} components")]
    NotAKnot(usize),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("d^2 != 0: {0}")]
    DSquaredNonZero(String),

    #[error("face is neither commuting nor anticommuting at state {state:#b}, crossings {first} and {second}")]
    FaceClassification { state: u64, first: usize, second: usize },

    #[error("edge sign system is inconsistent at state {0:#b}")]
    InconsistentSigns(u64),

    #[error("skein recursion exceeded depth bound {0}")]
    SkeinDepth(usize),

    #[error("Lee homology check failed: {0}")]
    LeeStructure(String),

    #[error("homology table is empty")]
    EmptyTable,

    #[error("polynomial {0} is not divisible by q + q^-1")]
    NotDivisible(String),

    #[error("determinant evaluation {0} is not real or purely imaginary")]
    BadDeterminant(String),

    #[error("unknown variant `{0}`")]
    UnknownVariant(String),

    #[error("unknown ring `{0}`")]
    UnknownRing(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),
}
