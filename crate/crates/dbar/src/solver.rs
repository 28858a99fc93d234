//! Mode-wise solution of `∂̄u = φ` by radial path integrals.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::DbarError;
use crate::form::{FourierForm, Mode, Modes};
use crate::profile::{Anchor, AxisFn, AxisOp, ModeProfile, SeparableTerm};
use crate::quadrature::RadialGrid;

/// Default outer radius `A = 1/e`, so that `-ln r ≥ 1` on the domain.
pub fn default_radius() -> f64 {
    (-1.0f64).exp()
}

/// Step of the central differences used by the residual checks.
pub const DIFFERENCE_STEP: f64 = 4e-3;

/// Line bundle with `‖σ‖² = (-log|t₁|)^k (-log|t₂|)^l`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedLineBundle {
    k: f64,
    l: f64,
}

impl WeightedLineBundle {
    pub fn new(k: f64, l: f64) -> Result<Self, DbarError> {
        if k == 1.0 || l == 1.0 || !k.is_finite() || !l.is_finite() {
            return Err(DbarError::ExcludedExponent { k, l });
        }
        Ok(WeightedLineBundle { k, l })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn l(&self) -> f64 {
        self.l
    }
}

/// The polydisc `{|tᵢ| < A}`, described by `σ_A = -ln A`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Polydisc {
    radius: f64,
}

impl Polydisc {
    pub fn new(radius: f64) -> Result<Self, DbarError> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(DbarError::InvalidRadius(radius));
        }
        Ok(Polydisc { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn sigma_rim(&self) -> f64 {
        -self.radius.ln()
    }

    pub fn grid(&self) -> RadialGrid {
        RadialGrid::standard(self.sigma_rim())
    }
}

impl Default for Polydisc {
    fn default() -> Self {
        Polydisc { radius: default_radius() }
    }
}

/// Start of the radial integral along one axis: the origin when the mode
/// index is negative, or zero with exponent above one; the rim otherwise.
pub fn anchor(index: i32, exponent: f64) -> Anchor {
    if index < 0 || (index == 0 && exponent > 1.0) {
        Anchor::Origin
    } else {
        Anchor::Rim
    }
}

/// Start point of the path for the mode `(m, n)` of `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Corner {
    pub first: Anchor,
    pub second: Anchor,
}

impl Corner {
    pub const ALL: [Corner; 4] = [
        Corner { first: Anchor::Origin, second: Anchor::Origin },
        Corner { first: Anchor::Origin, second: Anchor::Rim },
        Corner { first: Anchor::Rim, second: Anchor::Origin },
        Corner { first: Anchor::Rim, second: Anchor::Rim },
    ];

    pub fn label(&self) -> String {
        format!("({}, {})", self.first.label(), self.second.label())
    }
}

pub fn path_corner(mode: Mode, bundle: &WeightedLineBundle) -> Corner {
    Corner { first: anchor(mode.0, bundle.k), second: anchor(mode.1, bundle.l) }
}

/// Solution of the `(0,1)` problem with the corner used for each mode.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution01 {
    pub u: FourierForm,
    pub corners: BTreeMap<Mode, Corner>,
}

/// Solution `ψ = u¹ dt̄₁ + u² dt̄₂` of the `(0,2)` problem, with the anchors
/// chosen for `u¹` (second axis) and `u²` (first axis).
#[derive(Clone, Debug, PartialEq)]
pub struct Solution02 {
    pub psi: FourierForm,
    pub u1_anchors: BTreeMap<Mode, Anchor>,
    pub u2_anchors: BTreeMap<Mode, Anchor>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrabilityReport {
    /// `‖L - R‖ / max(‖L‖, ‖R‖)` for the mode-wise compatibility equation.
    pub relative_residual: f64,
    pub compatible: bool,
    /// Whether the grid norm of the input is stable under refinement.
    pub grid_resolved: bool,
}

/// Relative change of the input norm under refinement up to which the grid
/// counts as resolving the input.
pub const RESOLUTION_TOLERANCE: f64 = 1e-3;

/// Mode-wise check of `∂f¹/∂t̄₂ = ∂f²/∂t̄₁` by finite differences on the
/// grid.
pub fn check_integrability(phi: &FourierForm, grid: &RadialGrid, tolerance: f64) -> Result<IntegrabilityReport, DbarError> {
    let FourierForm::ZeroOne { f1, f2 } = phi else {
        return Err(DbarError::WrongDegree { expected: "(0,1)", found: phi.degree() });
    };
    let h = DIFFERENCE_STEP;
    let mut keys: BTreeSet<Mode> = f1.keys().map(|&(a, b)| (a - 1, b)).collect();
    keys.extend(f2.keys().map(|&(a, b)| (a, b - 1)));
    let (mut diff, mut left, mut right) = (0.0, 0.0, 0.0);
    for (m, n) in keys {
        // r₁r₂ ½(∂_{r₂} - n/r₂) f¹_{m+1,n}  and  r₁r₂ ½(∂_{r₁} - m/r₁) f²_{m,n+1}
        let l = table(f1.get(&(m + 1, n)), [AxisOp::Value { scale: 1 }, AxisOp::HalfTwistedDifference { twist: n, h }], grid);
        let r = table(f2.get(&(m, n + 1)), [AxisOp::HalfTwistedDifference { twist: m, h }, AxisOp::Value { scale: 1 }], grid);
        let d: Vec<f64> = l.iter().zip(&r).map(|(a, b)| a - b).collect();
        diff += grid_sq_norm(&d, grid, |_, _| 1.0);
        left += grid_sq_norm(&l, grid, |_, _| 1.0);
        right += grid_sq_norm(&r, grid, |_, _| 1.0);
    }
    let scale = left.max(right).sqrt();
    let relative_residual = if scale == 0.0 { 0.0 } else { diff.sqrt() / scale };
    let coarse = plain_norm(phi, grid);
    let fine = plain_norm(phi, &grid.refined());
    let grid_resolved = (coarse - fine).abs() <= RESOLUTION_TOLERANCE * fine.max(f64::MIN_POSITIVE);
    Ok(IntegrabilityReport { relative_residual, compatible: relative_residual <= tolerance, grid_resolved })
}

fn plain_norm(phi: &FourierForm, grid: &RadialGrid) -> f64 {
    phi.components()
        .iter()
        .flat_map(|c| c.values())
        .map(|p| grid_sq_norm(&p.tabulate([AxisOp::Value { scale: 1 }, AxisOp::Value { scale: 1 }], &grid.sigma, &grid.sigma), grid, |_, _| 1.0))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn table(profile: Option<&ModeProfile>, ops: [AxisOp; 2], grid: &RadialGrid) -> Vec<f64> {
    match profile {
        Some(p) => p.tabulate(ops, &grid.sigma, &grid.sigma),
        None => vec![0.0; grid.len() * grid.len()],
    }
}

/// `Σᵢⱼ wᵢ wⱼ |vᵢⱼ|² ω(σᵢ, σⱼ)`.
pub(crate) fn grid_sq_norm(values: &[f64], grid: &RadialGrid, weight: impl Fn(f64, f64) -> f64) -> f64 {
    let n = grid.len();
    let mut total = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            let v = values[i * n + j];
            if v != 0.0 {
                row += grid.weights[j] * v * v * weight(grid.sigma[i], grid.sigma[j]);
            }
        }
        total += grid.weights[i] * row;
    }
    total
}

/// Solves `∂̄u = φ` for a `(0,1)` form, mode by mode:
/// `u_{m,n} = 2 r₁^m r₂^n ∫_L ρ₁^{-m} ρ₂^{-n} (f¹_{m+1,n} dρ₁ + f²_{m,n+1} dρ₂)`
/// along `(c₁,c₂) → (c₁,r₂) → (r₁,r₂)` from the corner selected by
/// [`path_corner`].
pub fn solve_dbar_01(phi: &FourierForm, bundle: &WeightedLineBundle, domain: &Polydisc) -> Result<Solution01, DbarError> {
    let FourierForm::ZeroOne { f1, f2 } = phi else {
        return Err(DbarError::WrongDegree { expected: "(0,1)", found: phi.degree() });
    };
    let report = check_integrability(phi, &domain.grid(), 1e-8)?;
    if !report.compatible {
        return Err(DbarError::IncompatibleInput { residual: report.relative_residual });
    }
    let sigma_rim = domain.sigma_rim();
    let mut keys: BTreeSet<Mode> = f1.keys().map(|&(a, b)| (a - 1, b)).collect();
    keys.extend(f2.keys().map(|&(a, b)| (a, b - 1)));
    let mut u = Modes::new();
    let mut corners = BTreeMap::new();
    for (m, n) in keys {
        let corner = path_corner((m, n), bundle);
        corners.insert((m, n), corner);
        let nonintegrable = || DbarError::NonIntegrable { m, n };
        let mut profile = ModeProfile::default();
        // first leg at r₁ = c₁ along the second axis
        if let Some(p) = f2.get(&(m, n + 1)) {
            for t in &p.terms {
                let start = match corner.first {
                    Anchor::Origin if m < 0 => 0.0,
                    Anchor::Origin => t.axes[0].value_at_origin().ok_or_else(nonintegrable)?,
                    Anchor::Rim => (m as f64 * sigma_rim).exp() * t.axes[0].eval(sigma_rim),
                };
                if start == 0.0 {
                    continue;
                }
                let leg = AxisFn::path_integral(&t.axes[1], n, -n, corner.second, sigma_rim).ok_or_else(nonintegrable)?;
                profile.push(SeparableTerm::new(2.0 * t.coef * start, AxisFn::power(m), leg));
            }
        }
        // second leg along the first axis at height r₂
        if let Some(p) = f1.get(&(m + 1, n)) {
            for t in &p.terms {
                let leg = AxisFn::path_integral(&t.axes[0], m, -m, corner.first, sigma_rim).ok_or_else(nonintegrable)?;
                profile.push(SeparableTerm::new(2.0 * t.coef, leg, t.axes[1].clone()));
            }
        }
        u.insert((m, n), profile);
    }
    Ok(Solution01 { u: FourierForm::Function(u), corners })
}

/// Solves `∂̄ψ = φ` for a `(0,2)` form `φ = f dt̄₁ ∧ dt̄₂`, splitting `f`
/// evenly between
/// `u¹_{m,n} = -r₂^n ∫_{c(n,l)}^{r₂} ρ^{-n} f_{m,n+1}(r₁, ρ) dρ` and
/// `u²_{m,n} = r₁^m ∫_{c(m,k)}^{r₁} ρ^{-m} f_{m+1,n}(ρ, r₂) dρ`.
pub fn solve_dbar_02(phi: &FourierForm, bundle: &WeightedLineBundle, domain: &Polydisc) -> Result<Solution02, DbarError> {
    let FourierForm::ZeroTwo(f) = phi else {
        return Err(DbarError::WrongDegree { expected: "(0,2)", found: phi.degree() });
    };
    let sigma_rim = domain.sigma_rim();
    let (mut u1, mut u2) = (Modes::new(), Modes::new());
    let (mut u1_anchors, mut u2_anchors) = (BTreeMap::new(), BTreeMap::new());
    for (&(a, b), p) in f {
        let (m, n) = (a, b - 1);
        let start = anchor(n, bundle.l);
        u1_anchors.insert((m, n), start);
        let entry: &mut ModeProfile = u1.entry((m, n)).or_default();
        for t in &p.terms {
            let leg = AxisFn::path_integral(&t.axes[1], n, -n, start, sigma_rim).ok_or(DbarError::NonIntegrable { m, n })?;
            entry.push(SeparableTerm::new(-t.coef, t.axes[0].clone(), leg));
        }
        let (m, n) = (a - 1, b);
        let start = anchor(m, bundle.k);
        u2_anchors.insert((m, n), start);
        let entry: &mut ModeProfile = u2.entry((m, n)).or_default();
        for t in &p.terms {
            let leg = AxisFn::path_integral(&t.axes[0], m, -m, start, sigma_rim).ok_or(DbarError::NonIntegrable { m, n })?;
            entry.push(SeparableTerm::new(t.coef, leg, t.axes[1].clone()));
        }
    }
    Ok(Solution02 { psi: FourierForm::ZeroOne { f1: u1, f2: u2 }, u1_anchors, u2_anchors })
}

/// Weighted residual of `∂̄(solution) - φ`, in the norm of `φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualReport {
    pub absolute: f64,
    pub reference: f64,
    pub relative: f64,
}

pub fn dbar_residual(phi: &FourierForm, solution: &FourierForm, bundle: &WeightedLineBundle, grid: &RadialGrid) -> Result<ResidualReport, DbarError> {
    let h = DIFFERENCE_STEP;
    let (k, l) = (bundle.k, bundle.l);
    let (absolute, reference) = match (phi, solution) {
        (FourierForm::ZeroOne { f1, f2 }, FourierForm::Function(u)) => {
            let w1 = |s1: f64, s2: f64| s1.powf(k) * s2.powf(l - 2.0);
            let w2 = |s1: f64, s2: f64| s1.powf(k - 2.0) * s2.powf(l);
            let mut keys1: BTreeSet<Mode> = f1.keys().copied().collect();
            keys1.extend(u.keys().map(|&(m, n)| (m + 1, n)));
            let mut keys2: BTreeSet<Mode> = f2.keys().copied().collect();
            keys2.extend(u.keys().map(|&(m, n)| (m, n + 1)));
            let (mut abs, mut refn) = (0.0, 0.0);
            for (a, b) in keys1 {
                let du = table(u.get(&(a - 1, b)), [AxisOp::HalfTwistedDifference { twist: a - 1, h }, AxisOp::Value { scale: 0 }], grid);
                let f = table(f1.get(&(a, b)), [AxisOp::Value { scale: 1 }, AxisOp::Value { scale: 0 }], grid);
                abs += grid_sq_norm(&difference(&du, &f), grid, w1);
                refn += grid_sq_norm(&f, grid, w1);
            }
            for (a, b) in keys2 {
                let du = table(u.get(&(a, b - 1)), [AxisOp::Value { scale: 0 }, AxisOp::HalfTwistedDifference { twist: b - 1, h }], grid);
                let f = table(f2.get(&(a, b)), [AxisOp::Value { scale: 0 }, AxisOp::Value { scale: 1 }], grid);
                abs += grid_sq_norm(&difference(&du, &f), grid, w2);
                refn += grid_sq_norm(&f, grid, w2);
            }
            (abs, refn)
        }
        (FourierForm::ZeroTwo(f), FourierForm::ZeroOne { f1: u1, f2: u2 }) => {
            let w = |s1: f64, s2: f64| s1.powf(k) * s2.powf(l);
            let mut keys: BTreeSet<Mode> = f.keys().copied().collect();
            keys.extend(u2.keys().map(|&(m, n)| (m + 1, n)));
            keys.extend(u1.keys().map(|&(m, n)| (m, n + 1)));
            let (mut abs, mut refn) = (0.0, 0.0);
            for (a, b) in keys {
                let d2 = table(u2.get(&(a - 1, b)), [AxisOp::HalfTwistedDifference { twist: a - 1, h }, AxisOp::Value { scale: 1 }], grid);
                let d1 = table(u1.get(&(a, b - 1)), [AxisOp::Value { scale: 1 }, AxisOp::HalfTwistedDifference { twist: b - 1, h }], grid);
                let fv = table(f.get(&(a, b)), [AxisOp::Value { scale: 1 }, AxisOp::Value { scale: 1 }], grid);
                let res: Vec<f64> = d2.iter().zip(&d1).zip(&fv).map(|((x, y), z)| x - y - z).collect();
                abs += grid_sq_norm(&res, grid, w);
                refn += grid_sq_norm(&fv, grid, w);
            }
            (abs, refn)
        }
        _ => return Err(DbarError::WrongDegree { expected: "(0,1) with a function or (0,2) with a (0,1) form", found: phi.degree() }),
    };
    let (absolute, reference) = (absolute.sqrt(), reference.sqrt());
    let relative = if reference == 0.0 { if absolute == 0.0 { 0.0 } else { f64::INFINITY } } else { absolute / reference };
    Ok(ResidualReport { absolute, reference, relative })
}

fn difference(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::single_mode;

    #[test]
    fn excluded_exponents() {
        assert!(matches!(WeightedLineBundle::new(1.0, 0.0), Err(DbarError::ExcludedExponent { .. })));
        assert!(matches!(WeightedLineBundle::new(0.0, 1.0), Err(DbarError::ExcludedExponent { .. })));
        assert!(WeightedLineBundle::new(0.5, 2.0).is_ok());
    }

    #[test]
    fn conjugate_coordinate_is_recovered() {
        // φ = dt̄₂ (f² = 1 in mode (0,0)); u = t̄₂ = r₂ e^{-iθ₂}
        let phi = FourierForm::ZeroOne { f1: Modes::new(), f2: single_mode((0, 0), 1.0, AxisFn::constant(1.0), AxisFn::constant(1.0)) };
        let bundle = WeightedLineBundle::new(0.5, -1.0).unwrap();
        let domain = Polydisc::default();
        let sol = solve_dbar_01(&phi, &bundle, &domain).unwrap();
        let FourierForm::Function(u) = &sol.u else { panic!() };
        let p = &u[&(0, -1)];
        for (s1, s2) in [(1.5, 2.0f64), (3.0, 7.5)] {
            assert!((p.eval(s1, s2) - (-s2).exp()).abs() < 1e-14);
        }
        let res = dbar_residual(&phi, &sol.u, &bundle, &domain.grid()).unwrap();
        assert!(res.relative < 1e-10, "{res:?}");
    }

    #[test]
    fn incompatible_input_is_rejected() {
        let phi = FourierForm::ZeroOne { f1: single_mode((1, 0), 1.0, AxisFn::bump(3.0, 1.0), AxisFn::bump(3.0, 1.0)), f2: Modes::new() };
        let bundle = WeightedLineBundle::new(0.5, 0.5).unwrap();
        assert!(matches!(solve_dbar_01(&phi, &bundle, &Polydisc::default()), Err(DbarError::IncompatibleInput { .. })));
    }
}
