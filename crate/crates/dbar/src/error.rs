use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DbarError {
    #[error("metric exponents k = {k}, l = {l}: the solver requires k != 1 and l != 1")]
    ExcludedExponent { k: f64, l: f64 },
    #[error("input is not dbar-closed: relative compatibility residual {residual:e}")]
    IncompatibleInput { residual: f64 },
    #[error("radius must lie in (0, 1), got {0}")]
    InvalidRadius(f64),
    #[error("form has degree {found}, expected {expected}")]
    WrongDegree { expected: &'static str, found: &'static str },
    #[error("profile cannot be differentiated analytically: {0}")]
    NotDifferentiable(String),
    #[error("path integral diverges at the origin for mode ({m}, {n})")]
    NonIntegrable { m: i32, n: i32 },
    #[error("{which} norm diverges: refinement changed it by a factor {factor:.3}")]
    DivergentNorm { which: &'static str, factor: f64 },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
}
