use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^31")]
    InvalidPrime(u32),

    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("insufficient rational points: wanted {wanted}, found {found}")]
    InsufficientRationalPoints { wanted: usize, found: usize },

    #[error("multiplication map degenerate: product span has dimension {0}")]
    MultiplicationMapDegenerate(usize),

    #[error("unexpected scroll type {0:?}")]
    UnexpectedScrollType(Vec<u32>),

    #[error("sample disagreement in slice ({a},{b})")]
    SampleDisagreement { a: u32, b: i32 },

    #[error("window exhausted: new generators at boundary slice ({a},{b}) of level {level}")]
    WindowExhausted { level: usize, a: u32, b: i32 },

    #[error("unexpected generators at level {level} in H-degree {a}")]
    UnexpectedLevel { level: usize, a: u32 },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("wrong dimension for {what}: expected {expected}, found {found}")]
    WrongDimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("syzygy has rank {0} < 4, no syzygy scheme")]
    RankDeficient(usize),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("not a 5x5 shape: {0}")]
    NotFiveByFive(String),

    #[error("matrix is not skew-symmetric")]
    NotSkew,

    #[error("inconsistent system: {0}")]
    InconsistentSystem(&'static str),

    #[error("Euler characteristic is not quadratic on the grid")]
    NonQuadratic,

    #[error("basepoint hit by a sample point")]
    BasepointHit,

    #[error("unexpected net dimension {0}")]
    UnexpectedNetDimension(usize),

    #[error("relation space has dimension {0}, expected 1")]
    RelationSpaceDimension(usize),

    #[error("degree too low: a curve of degree {0} fits the samples")]
    DegreeTooLow(usize),

    #[error("no cubic through the samples")]
    NoCubic,

    #[error("singular point not rational")]
    SingularPointNotRational,

    #[error("unexpected singular count {0}")]
    UnexpectedSingularCount(usize),

    #[error("preimage count {0} differs from 2")]
    PreimageCount(usize),

    #[error("resultant degenerate after retries")]
    ResultantDegenerate,

    #[error("anchor class is not positive")]
    AnchorNotPositive,

    #[error("orthogonal complement of the anchor is not negative definite")]
    IndefiniteComplement,

    #[error("class is not a root")]
    NotARoot,

    #[error("bound computation failed: {0}")]
    BoundComputationFailed(&'static str),

    #[error("not unimodular: determinant {0}")]
    NotUnimodular(i128),

    #[error("gram mismatch")]
    GramMismatch,

    #[error("not primitive: elementary divisors {0:?}")]
    NotPrimitive(Vec<i128>),

    #[error("non-unique: {0} solutions")]
    NonUnique(usize),

    #[error("class is not nef")]
    NotNef,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
