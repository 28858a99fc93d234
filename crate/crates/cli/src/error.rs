use limithodge_core::serial::SerialError;
use limithodge_core::{GrowthError, HodgeError, L2Error, LinAlgError, Sl2Error, WeightError};
use limithodge_dbar::DbarError;
use serde_json::{json, Value};

/// Failure category; the discriminant is the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    InvalidInput = 2,
    Precondition = 3,
    ExcludedExponent = 4,
    Internal = 5,
}

impl ErrorKind {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorKind::InvalidInput => "invalid_input",
            ErrorKind::Precondition => "precondition_violated",
            ErrorKind::ExcludedExponent => "excluded_exponent",
            ErrorKind::Internal => "internal_failure",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    pub input: Option<String>,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        CliError { kind, message: message.into(), input: None }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::InvalidInput, message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Internal, message)
    }

    pub fn with_input(mut self, input: &str) -> Self {
        self.input.get_or_insert_with(|| input.to_string());
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "error": {
                "kind": self.kind.name(),
                "code": self.kind.code(),
                "message": self.message,
                "input": self.input,
            }
        })
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind.name(), self.message)
    }
}

impl std::error::Error for CliError {}

impl From<SerialError> for CliError {
    fn from(e: SerialError) -> Self {
        CliError::invalid(e.to_string())
    }
}

fn lin_alg_kind(e: &LinAlgError) -> ErrorKind {
    match e {
        LinAlgError::DimensionMismatch { .. } | LinAlgError::Ragged => ErrorKind::InvalidInput,
        LinAlgError::NotNilpotent => ErrorKind::Precondition,
        _ => ErrorKind::Internal,
    }
}

fn weight_kind(e: &WeightError) -> ErrorKind {
    match e {
        WeightError::NotNilpotent | WeightError::NonCommuting | WeightError::NonPositiveCoefficient => ErrorKind::Precondition,
        WeightError::CoefficientCount { .. } => ErrorKind::InvalidInput,
        WeightError::AxiomViolation(_) => ErrorKind::Internal,
        WeightError::LinAlg(e) => lin_alg_kind(e),
    }
}

fn hodge_kind(e: &HodgeError) -> ErrorKind {
    match e {
        HodgeError::NotAHodgeFiltration { .. } | HodgeError::NotPolarized(_) | HodgeError::WeightNotReal => ErrorKind::Precondition,
        HodgeError::LinAlg(e) => lin_alg_kind(e),
    }
}

fn sl2_kind(e: &Sl2Error) -> ErrorKind {
    match e {
        Sl2Error::InvalidParameters(_) => ErrorKind::InvalidInput,
        Sl2Error::NoSolution
        | Sl2Error::NotHorizontal(_)
        | Sl2Error::NotIsometric
        | Sl2Error::DegenerateForm
        | Sl2Error::NotSemisimple
        | Sl2Error::WrongKind => ErrorKind::Precondition,
        Sl2Error::NotADecomposition(_) | Sl2Error::BracketFailure(_) => ErrorKind::Internal,
        Sl2Error::Weight(e) => weight_kind(e),
        Sl2Error::Hodge(e) => hodge_kind(e),
        Sl2Error::LinAlg(e) => lin_alg_kind(e),
    }
}

fn growth_kind(e: &GrowthError) -> ErrorKind {
    match e {
        GrowthError::InconsistentWeights(..) | GrowthError::FrameNotSpanning | GrowthError::SpanMismatch | GrowthError::IndexMismatch => {
            ErrorKind::Precondition
        }
        GrowthError::Weight(e) => weight_kind(e),
        GrowthError::Sl2(e) => sl2_kind(e),
        GrowthError::LinAlg(e) => lin_alg_kind(e),
    }
}

fn l2_kind(e: &L2Error) -> ErrorKind {
    match e {
        L2Error::NonCommuting | L2Error::FrameMissing(_) => ErrorKind::Precondition,
        L2Error::NegativeOrder => ErrorKind::InvalidInput,
        L2Error::NotWellDefined(_) | L2Error::IllFormed(_) => ErrorKind::Internal,
        L2Error::Weight(e) => weight_kind(e),
        L2Error::Sl2(e) => sl2_kind(e),
        L2Error::Growth(e) => growth_kind(e),
        L2Error::LinAlg(e) => lin_alg_kind(e),
    }
}

fn dbar_kind(e: &DbarError) -> ErrorKind {
    match e {
        DbarError::ExcludedExponent { .. } => ErrorKind::ExcludedExponent,
        DbarError::IncompatibleInput { .. } | DbarError::NonIntegrable { .. } | DbarError::DivergentNorm { .. } => ErrorKind::Precondition,
        DbarError::InvalidRadius(_) | DbarError::WrongDegree { .. } | DbarError::NotDifferentiable(_) | DbarError::InvalidProfile(_) => {
            ErrorKind::InvalidInput
        }
    }
}

macro_rules! classified {
    ($($ty:ty => $kind:ident),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::new($kind(&e), e.to_string())
            }
        })*
    };
}

classified! {
    LinAlgError => lin_alg_kind,
    WeightError => weight_kind,
    HodgeError => hodge_kind,
    Sl2Error => sl2_kind,
    GrowthError => growth_kind,
    L2Error => l2_kind,
    DbarError => dbar_kind,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_errors_keep_their_category() {
        let e: CliError = L2Error::Growth(GrowthError::Weight(WeightError::NonCommuting)).into();
        assert_eq!(e.kind, ErrorKind::Precondition);
        let e: CliError = Sl2Error::LinAlg(LinAlgError::Ragged).into();
        assert_eq!(e.kind, ErrorKind::InvalidInput);
        let e: CliError = DbarError::ExcludedExponent { k: 1.0, l: 0.0 }.into();
        assert_eq!(e.kind.code(), 4);
    }
}
