//! Fourier-mode solver for the weighted `L²` `∂̄`-problem on the punctured
//! bidisc with a line bundle metric `‖σ‖² = (-log|t₁|)^k (-log|t₂|)^l`.
//!
//! Forms are finite Fourier sums whose radial profiles are sums of separable
//! terms. The solver integrates each mode along a radial path whose corner
//! depends on the signs of the mode indices and on `k`, `l`; the verifier
//! measures the residual of `∂̄u = φ` by finite differences and the ratio of
//! weighted norms by quadrature under grid refinement.

pub mod bound;
pub mod error;
pub mod form;
pub mod oracle;
pub mod profile;
pub mod quadrature;
pub mod region;
pub mod solver;
pub mod suite;

pub use bound::{verify_bound, weighted_sq_norm, BoundConstant, BoundLevel, BoundReport};
pub use error::DbarError;
pub use form::{FourierForm, Mode, Modes};
pub use oracle::{integrability_oracle, IntegrabilityVerdict, LogDomain, LogPowerIntegrand, ShellTest};
pub use profile::{Anchor, AxisFn, ModeProfile, SeparableTerm};
pub use quadrature::RadialGrid;
pub use region::hormander_region;
pub use solver::{
    anchor, check_integrability, dbar_residual, default_radius, path_corner, solve_dbar_01, solve_dbar_02, Corner, IntegrabilityReport, Polydisc,
    ResidualReport, Solution01, Solution02, WeightedLineBundle,
};
