use thiserror::Error;

/// A standing assumption or theorem hypothesis that an input failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Hypothesis {
    #[error("dimensions: need dim A = dim B = p, dim C = dim D = q, p + q = n, 1 <= p <= q")]
    Dimensions,
    #[error("improper intersection: {0} is nonzero")]
    ImproperIntersection(&'static str),
    #[error("C + D does not span the ambient space")]
    NotSpanning,
    #[error("no complements C', D' with <A,B> inside C' + D' found by the constructor")]
    Complements,
    #[error("projected lattices onto {0} are not equivalent")]
    LatticesNotEquivalent(&'static str),
    #[error("pushed-forward metrics onto {0} are not proportional")]
    MetricsNotProportional(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("columns are linearly dependent")]
    DependentColumns,
    #[error("basis is rank deficient")]
    RankDeficient,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("subspaces are not complementary")]
    NotComplementary,
    #[error("vertex is not on the geodesic")]
    NotOnGeodesic,
    #[error("no gate vertex found in window [{0}, {1}]")]
    GateNotFound(i64, i64),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is not a Hermitian trace-free tangent vector")]
    NotTangent,
    #[error("projection is singular on the source subspace")]
    SingularProjection,
    #[error("metrics are not proportional")]
    NotProportional,
    #[error("orthogonality function has no sign change on [{0}, {1}]")]
    NoRoot(f64, f64),
    #[error("operation requires p = 1, got p = {0}")]
    WrongCodimension(usize),
    #[error("hypothesis failed: {0}")]
    HypothesesFailed(Hypothesis),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<Hypothesis> for Error {
    fn from(h: Hypothesis) -> Self {
        Error::HypothesesFailed(h)
    }
}
