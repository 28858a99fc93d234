//! Finite Fourier expansions of forms on the punctured bidisc.
//!
//! A mode `(m, n)` stands for `f_{m,n}(r₁, r₂) e^{i(mθ₁ + nθ₂)}`. Since
//! `∂/∂t̄ᵢ = ½ e^{iθᵢ}(∂_{rᵢ} + (i/rᵢ)∂_{θᵢ})`, the mode `(m, n)` of a
//! function contributes `½(∂_{r₁} - m/r₁)` of itself to mode `(m+1, n)` of
//! the `dt̄₁` component.

use std::collections::BTreeMap;

use crate::error::DbarError;
use crate::profile::{AxisFn, ModeProfile, SeparableTerm};

pub type Mode = (i32, i32);
pub type Modes = BTreeMap<Mode, ModeProfile>;

#[derive(Clone, Debug, PartialEq)]
pub enum FourierForm {
    /// A function `u`.
    Function(Modes),
    /// `f¹ dt̄₁ + f² dt̄₂`.
    ZeroOne { f1: Modes, f2: Modes },
    /// `f dt̄₁ ∧ dt̄₂`.
    ZeroTwo(Modes),
}

impl FourierForm {
    pub fn degree(&self) -> &'static str {
        match self {
            FourierForm::Function(_) => "(0,0)",
            FourierForm::ZeroOne { .. } => "(0,1)",
            FourierForm::ZeroTwo(_) => "(0,2)",
        }
    }

    pub fn components(&self) -> Vec<&Modes> {
        match self {
            FourierForm::Function(u) => vec![u],
            FourierForm::ZeroOne { f1, f2 } => vec![f1, f2],
            FourierForm::ZeroTwo(f) => vec![f],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.values().all(|p| p.is_empty()))
    }

    pub fn mode_count(&self) -> usize {
        self.components().iter().map(|c| c.len()).sum()
    }

    /// `∂̄u` in closed form, for a function with differentiable profiles.
    pub fn dbar_of_function(u: &Modes) -> Result<FourierForm, DbarError> {
        let mut f1 = Modes::new();
        let mut f2 = Modes::new();
        for (&(m, n), profile) in u {
            for t in &profile.terms {
                let [a, b] = &t.axes;
                f1.entry((m + 1, n)).or_default().push(SeparableTerm::new(0.5 * t.coef, twist(a, m)?, b.clone()));
                f2.entry((m, n + 1)).or_default().push(SeparableTerm::new(0.5 * t.coef, a.clone(), twist(b, n)?));
            }
        }
        Ok(FourierForm::ZeroOne { f1, f2 })
    }

    /// `∂̄(u¹ dt̄₁ + u² dt̄₂) = (∂u²/∂t̄₁ - ∂u¹/∂t̄₂) dt̄₁ ∧ dt̄₂` in closed
    /// form.
    pub fn dbar_of_zero_one(u1: &Modes, u2: &Modes) -> Result<FourierForm, DbarError> {
        let mut f = Modes::new();
        for (&(m, n), profile) in u2 {
            for t in &profile.terms {
                let [a, b] = &t.axes;
                f.entry((m + 1, n)).or_default().push(SeparableTerm::new(0.5 * t.coef, twist(a, m)?, b.clone()));
            }
        }
        for (&(m, n), profile) in u1 {
            for t in &profile.terms {
                let [a, b] = &t.axes;
                f.entry((m, n + 1)).or_default().push(SeparableTerm::new(-0.5 * t.coef, a.clone(), twist(b, n)?));
            }
        }
        Ok(FourierForm::ZeroTwo(f))
    }
}

fn twist(f: &AxisFn, j: i32) -> Result<AxisFn, DbarError> {
    f.twisted(j).ok_or_else(|| DbarError::NotDifferentiable(format!("{f:?}")))
}

/// A single separable mode `coef · a(r₁) b(r₂)`.
pub fn single_mode(mode: Mode, coef: f64, first: AxisFn, second: AxisFn) -> Modes {
    let mut modes = Modes::new();
    modes.insert(mode, ModeProfile::single(coef, first, second));
    modes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dbar_of_conjugate_coordinate() {
        // u = t̄₂ is the mode (0,-1) with profile r₂; ∂̄u = dt̄₂
        let u = single_mode((0, -1), 1.0, AxisFn::constant(1.0), AxisFn::power(1));
        let FourierForm::ZeroOne { f1, f2 } = FourierForm::dbar_of_function(&u).unwrap() else { panic!() };
        assert!(f1[&(1, -1)].eval(2.0, 3.0).abs() < 1e-15);
        assert!((f2[&(0, 0)].eval(2.0, 3.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn holomorphic_modes_are_closed() {
        // u = t₁ t₂: mode (1,1), profile r₁ r₂
        let u = single_mode((1, 1), 1.0, AxisFn::power(1), AxisFn::power(1));
        let phi = FourierForm::dbar_of_function(&u).unwrap();
        for c in phi.components() {
            for p in c.values() {
                assert_eq!(p.eval(1.5, 2.5), 0.0);
            }
        }
    }
}
