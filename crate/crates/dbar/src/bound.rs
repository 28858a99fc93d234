//! Weighted `L²` norms against the Poincaré-like volume and the measured
//! constant in `‖ψ σ‖² ≤ C ‖φ σ‖²`.

use crate::error::DbarError;
use crate::form::{FourierForm, Modes};
use crate::profile::AxisOp;
use crate::quadrature::RadialGrid;
use crate::solver::{grid_sq_norm, WeightedLineBundle};

/// Squared weighted norm of a form. With `σᵢ = -ln rᵢ` the Poincaré-like
/// volume is `dσ₁ dσ₂` (angles dropped) and each `dt̄ᵢ` has squared length
/// `rᵢ² σᵢ²`, so a function carries `σ₁^{k-2} σ₂^{l-2}`, a `dt̄₁` component
/// `r₁² σ₁^k σ₂^{l-2}`, and so on.
pub fn weighted_sq_norm(form: &FourierForm, bundle: &WeightedLineBundle, grid: &RadialGrid) -> f64 {
    let (k, l) = (bundle.k(), bundle.l());
    let part = |modes: &Modes, scale: (i32, i32), e: (f64, f64)| -> f64 {
        modes
            .values()
            .map(|p| {
                let v = p.tabulate([AxisOp::Value { scale: scale.0 }, AxisOp::Value { scale: scale.1 }], &grid.sigma, &grid.sigma);
                grid_sq_norm(&v, grid, |s1, s2| s1.powf(e.0) * s2.powf(e.1))
            })
            .sum()
    };
    match form {
        FourierForm::Function(u) => part(u, (0, 0), (k - 2.0, l - 2.0)),
        FourierForm::ZeroOne { f1, f2 } => part(f1, (1, 0), (k, l - 2.0)) + part(f2, (0, 1), (k - 2.0, l)),
        FourierForm::ZeroTwo(f) => part(f, (1, 1), (k, l)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundConstant {
    Measured(f64),
    /// Both norms vanish.
    Undefined,
}

impl BoundConstant {
    pub fn value(&self) -> Option<f64> {
        match self {
            BoundConstant::Measured(c) => Some(*c),
            BoundConstant::Undefined => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundLevel {
    pub points: usize,
    pub solution_sq_norm: f64,
    pub data_sq_norm: f64,
    pub constant: BoundConstant,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    pub coarse: BoundLevel,
    pub fine: BoundLevel,
}

impl BoundReport {
    pub fn constant(&self) -> BoundConstant {
        self.fine.constant
    }

    /// Relative change of the constant under one refinement; zero when
    /// the constant is undefined at both levels.
    pub fn refinement_change(&self) -> f64 {
        match (self.coarse.constant, self.fine.constant) {
            (BoundConstant::Measured(a), BoundConstant::Measured(b)) => (b - a).abs() / b.abs().max(f64::MIN_POSITIVE),
            (BoundConstant::Undefined, BoundConstant::Undefined) => 0.0,
            _ => f64::INFINITY,
        }
    }

    pub fn stable(&self, tolerance: f64) -> bool {
        self.refinement_change() < tolerance
    }
}

/// Factor by which a norm may change under refinement before it is
/// declared divergent.
pub const DIVERGENCE_FACTOR: f64 = 1.5;

pub fn verify_bound(phi: &FourierForm, solution: &FourierForm, bundle: &WeightedLineBundle, grid: &RadialGrid) -> Result<BoundReport, DbarError> {
    let level = |g: &RadialGrid| {
        let s = weighted_sq_norm(solution, bundle, g);
        let d = weighted_sq_norm(phi, bundle, g);
        let constant = if s == 0.0 && d == 0.0 { BoundConstant::Undefined } else { BoundConstant::Measured(s / d) };
        BoundLevel { points: g.len(), solution_sq_norm: s, data_sq_norm: d, constant }
    };
    let coarse = level(grid);
    let fine = level(&grid.refined());
    for (which, a, b) in [("solution", coarse.solution_sq_norm, fine.solution_sq_norm), ("data", coarse.data_sq_norm, fine.data_sq_norm)] {
        if !b.is_finite() {
            return Err(DbarError::DivergentNorm { which, factor: f64::INFINITY });
        }
        if a > 0.0 && b > 0.0 {
            let factor = (b / a).max(a / b);
            if factor > DIVERGENCE_FACTOR {
                return Err(DbarError::DivergentNorm { which, factor });
            }
        }
    }
    Ok(BoundReport { coarse, fine })
}
