//! Standard solver inputs: single- and multi-mode forms built as `∂̄` of
//! explicit potentials, covering all four path corners and exponents in
//! `{-2, -1, 0, 1/2, 2}`.

use crate::error::DbarError;
use crate::form::{single_mode, FourierForm, Mode, Modes};
use crate::profile::{AxisFn, ModeProfile, SeparableTerm};
use crate::solver::WeightedLineBundle;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteCase {
    pub name: String,
    pub bundle: WeightedLineBundle,
    pub phi: FourierForm,
}

impl SuiteCase {
    /// `(p, q)` type of the input form.
    pub fn form_type(&self) -> (usize, usize) {
        match self.phi {
            FourierForm::Function(_) => (0, 0),
            FourierForm::ZeroOne { .. } => (0, 1),
            FourierForm::ZeroTwo(_) => (0, 2),
        }
    }
}

/// `coef · bump(σ₁) bump(σ₂)` with centers and widths in `σ = -ln r`.
pub fn bump_mode(coef: f64, first: (f64, f64), second: (f64, f64)) -> ModeProfile {
    ModeProfile::single(coef, AxisFn::bump(first.0, first.1), AxisFn::bump(second.0, second.1))
}

fn modes(entries: Vec<(Mode, ModeProfile)>) -> Modes {
    let mut out = Modes::new();
    for (mode, p) in entries {
        out.entry(mode).or_default().terms.extend(p.terms);
    }
    out
}

fn bundle(k: f64, l: f64) -> WeightedLineBundle {
    WeightedLineBundle::new(k, l).expect("suite exponents avoid 1")
}

fn closed_01(name: &str, k: f64, l: f64, potential: Modes) -> Result<SuiteCase, DbarError> {
    Ok(SuiteCase { name: name.into(), bundle: bundle(k, l), phi: FourierForm::dbar_of_function(&potential)? })
}

fn closed_02(name: &str, k: f64, l: f64, u1: Modes, u2: Modes) -> Result<SuiteCase, DbarError> {
    Ok(SuiteCase { name: name.into(), bundle: bundle(k, l), phi: FourierForm::dbar_of_zero_one(&u1, &u2)? })
}

pub fn solver_suite() -> Vec<SuiteCase> {
    let b = |mode: Mode, c: f64| -> Modes { modes(vec![(mode, bump_mode(c, (3.0, 1.0), (2.6, 0.9)))]) };
    let cases: Vec<Result<SuiteCase, DbarError>> = vec![
        closed_01("bump (-1,-1)", -2.0, -1.0, b((-1, -1), 1.0)),
        closed_01("bump (-1,0)", 0.5, 0.5, b((-1, 0), 1.0)),
        closed_01("bump (1,-1)", 2.0, 0.0, b((1, -1), 1.0)),
        closed_01("bump (1,1)", 0.5, 0.5, b((1, 1), 1.0)),
        closed_01("bump (0,0) k=2 l=2", 2.0, 2.0, b((0, 0), 1.0)),
        closed_01("bump (0,0) k=-1 l=2", -1.0, 2.0, b((0, 0), 1.0)),
        closed_01("bump (0,0) k=2 l=-2", 2.0, -2.0, b((0, 0), 1.0)),
        closed_01("bump (0,0) k=0 l=0", 0.0, 0.0, b((0, 0), 1.0)),
        closed_01("bump (2,-3)", -1.0, 0.5, b((2, -3), 1.0)),
        closed_01("bump (-2,3)", 0.0, 2.0, b((-2, 3), 1.0)),
        closed_01(
            "three bumps",
            0.5,
            -1.0,
            modes(vec![
                ((-1, 0), bump_mode(1.0, (2.5, 0.8), (3.0, 1.2))),
                ((1, 1), bump_mode(-0.7, (3.5, 1.0), (2.2, 0.7))),
                ((0, -2), bump_mode(0.4, (4.0, 1.5), (3.0, 1.0))),
            ]),
        ),
        closed_01(
            "three bumps, mixed signs",
            2.0,
            0.0,
            modes(vec![
                ((0, 0), bump_mode(1.0, (3.0, 1.0), (3.0, 1.0))),
                ((3, -1), bump_mode(0.5, (2.4, 0.9), (4.0, 1.1))),
                ((-1, 2), bump_mode(-1.5, (3.2, 0.8), (2.8, 1.0))),
            ]),
        ),
        closed_01(
            "high modes",
            -2.0,
            2.0,
            modes(vec![
                ((-8, 8), bump_mode(1.0, (3.0, 1.0), (3.0, 1.0))),
                ((8, -8), bump_mode(0.3, (2.5, 0.9), (3.5, 1.0))),
                ((5, 5), bump_mode(-0.6, (4.0, 1.2), (2.5, 0.8))),
                ((-4, -6), bump_mode(2.0, (3.0, 1.4), (3.0, 1.4))),
            ]),
        ),
        Ok(SuiteCase {
            name: "dt2 (constant f2)".into(),
            bundle: bundle(0.5, -1.0),
            phi: FourierForm::ZeroOne { f1: Modes::new(), f2: single_mode((0, 0), 1.0, AxisFn::constant(1.0), AxisFn::constant(1.0)) },
        }),
        closed_01("conj(t1) conj(t2)^2", 2.0, 0.5, single_mode((-1, -2), 1.0, AxisFn::power(1), AxisFn::power(2))),
        closed_01("r1^2 in mode (1,0)", 2.0, -2.0, single_mode((1, 0), 1.0, AxisFn::power(2), AxisFn::constant(1.0))),
        closed_01("r2^3 in mode (0,1)", 0.0, 2.0, single_mode((0, 1), 1.0, AxisFn::constant(1.0), AxisFn::power(3))),
        closed_01("bump times r2^2 in mode (1,1)", -2.0, 0.0, single_mode((1, 1), 1.0, AxisFn::bump(3.0, 1.0), AxisFn::power(2))),
        closed_01("conj(t1)", -1.0, 0.5, single_mode((-1, 0), 1.0, AxisFn::power(1), AxisFn::constant(1.0))),
        closed_02("(0,2) from u1 in mode (0,-1)", 0.5, -1.0, b((0, -1), 1.0), Modes::new()),
        closed_02("(0,2) from u2 in mode (0,0)", 0.5, 2.0, Modes::new(), b((0, 0), 1.0)),
        Ok(SuiteCase {
            name: "(0,2) constant".into(),
            bundle: bundle(-2.0, -1.0),
            phi: FourierForm::ZeroTwo(single_mode((0, 0), 1.0, AxisFn::constant(1.0), AxisFn::constant(1.0))),
        }),
        closed_02(
            "(0,2) four modes",
            2.0,
            0.5,
            modes(vec![((1, 1), bump_mode(1.0, (3.0, 1.0), (2.5, 0.8))), ((-2, 0), bump_mode(0.5, (2.2, 0.7), (3.4, 1.2)))]),
            modes(vec![((2, -1), bump_mode(-0.8, (3.6, 1.1), (3.0, 1.0))), ((0, 3), bump_mode(1.2, (2.8, 0.9), (2.0, 0.6)))]),
        ),
        closed_02("(0,2) from u1 in mode (3,2)", -1.0, -2.0, b((3, 2), 1.0), Modes::new()),
        closed_01(
            "polynomial and bump",
            0.0,
            -1.0,
            modes(vec![
                ((-1, -1), ModeProfile::single(1.0, AxisFn::power(1), AxisFn::power(1))),
                ((2, 2), ModeProfile { terms: vec![SeparableTerm::new(0.5, AxisFn::bump(3.0, 1.0), AxisFn::bump(2.5, 1.0))] }),
            ]),
        ),
    ];
    cases.into_iter().map(|c| c.expect("suite potentials are differentiable")).collect()
}
