use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rows of unequal length")]
    Ragged,
    #[error("subspaces are not nested")]
    NotNested,
    #[error("filtration has a repeated index")]
    DuplicateIndex,
    #[error("vector is not in the subspace")]
    NotInSubspace,
    #[error("map does not respect the filtration steps")]
    NotFiltered,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("subspaces do not form a direct sum decomposition of the space")]
    NotADecomposition,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("nilpotents do not commute")]
    NonCommuting,
    #[error("cone coefficients must be positive")]
    NonPositiveCoefficient,
    #[error("coefficient list length {found} does not match {expected} nilpotents")]
    CoefficientCount { expected: usize, found: usize },
    #[error("weight filtration axiom failed: {0}")]
    AxiomViolation(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Sl2Error {
    #[error("invalid model parameters: {0}")]
    InvalidParameters(String),
    #[error("bigrading does not decompose the space: {0}")]
    NotADecomposition(String),
    #[error("no sl2 triple completes the given data")]
    NoSolution,
    #[error("action is not horizontal: {0}")]
    NotHorizontal(String),
    #[error("action does not preserve the polarization")]
    NotIsometric,
    #[error("induced form on the lowest weight space is degenerate")]
    DegenerateForm,
    #[error("operators are not simultaneously diagonalizable with integer eigenvalues")]
    NotSemisimple,
    #[error("sl2 bracket relations fail: {0}")]
    BracketFailure(String),
    #[error("factor is not of symmetric kind")]
    WrongKind,
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HodgeError {
    #[error("not a Hodge filtration of weight {weight}: {detail}")]
    NotAHodgeFiltration { weight: i64, detail: String },
    #[error("form does not polarize the Hodge structure: {0}")]
    NotPolarized(String),
    #[error("weight filtration is not defined over the reals")]
    WeightNotReal,
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrowthError {
    #[error("stated weights ({0}, {1}) do not match filtration membership")]
    InconsistentWeights(i64, i64),
    #[error("frame does not span the space")]
    FrameNotSpanning,
    #[error("the two bases do not span the same space")]
    SpanMismatch,
    #[error("bases are indexed differently")]
    IndexMismatch,
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum L2Error {
    #[error("nilpotents do not commute")]
    NonCommuting,
    #[error("t-orders must be nonnegative")]
    NegativeOrder,
    #[error("frame missing or incomplete: {0}")]
    FrameMissing(String),
    #[error("differential leaves the complex: {0}")]
    NotWellDefined(String),
    #[error("double complex relation fails: {0}")]
    IllFormed(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}
