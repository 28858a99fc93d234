//! Solver, region and oracle commands.

use std::collections::BTreeMap;

use limithodge_core::l2complex::{classify_l2, FormDegree, Weights};
use limithodge_dbar::{
    check_integrability, dbar_residual, hormander_region, integrability_oracle, solve_dbar_01, solve_dbar_02, verify_bound, AxisFn,
    BoundLevel, FourierForm, LogDomain, LogPowerIntegrand, Mode, ModeProfile, Modes, Polydisc, SeparableTerm, ShellTest,
    WeightedLineBundle,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::{CommandOutput, Options, RegionChoice};

/// Tolerance on the compatibility residual of `(0,1)` inputs.
const COMPATIBILITY_TOLERANCE: f64 = 1e-8;

/// Bound constants varying more than this under refinement are flagged.
const STABILITY_TOLERANCE: f64 = 0.1;

/// A float rounded to 15 significant digits; non-finite values as strings.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
        json!(rounded)
    } else {
        json!(x.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Component {
    Potential,
    F1,
    F2,
    Top,
    U1,
    U2,
}

impl Component {
    fn parse(s: &str, path: &str) -> Result<Self, CliError> {
        Ok(match s {
            "u" => Component::Potential,
            "f1" => Component::F1,
            "f2" => Component::F2,
            "f" => Component::Top,
            "u1" => Component::U1,
            "u2" => Component::U2,
            other => return Err(CliError::invalid(format!("{path}.component: unknown component {other:?}"))),
        })
    }
}

/// A parsed `dbar-solve` input.
pub struct DbarProblem {
    pub bundle: WeightedLineBundle,
    pub domain: Polydisc,
    pub phi: FourierForm,
}

fn number(v: &Value, path: &str) -> Result<f64, CliError> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| CliError::invalid(format!("{path}: expected a finite number")))
}

fn pair_of(v: Option<&Value>, path: &str) -> Result<[f64; 2], CliError> {
    match v.and_then(Value::as_array).map(Vec::as_slice) {
        Some([a, b]) => Ok([number(a, path)?, number(b, path)?]),
        _ => Err(CliError::invalid(format!("{path}: expected two numbers"))),
    }
}

fn profile(v: &Value, path: &str) -> Result<SeparableTerm, CliError> {
    let kind = v.get("profile").and_then(Value::as_str).ok_or_else(|| CliError::invalid(format!("{path}.profile: expected \"bump\" or \"poly\"")))?;
    let params = v.get("params").ok_or_else(|| CliError::invalid(format!("{path}.params: missing")))?;
    let ppath = format!("{path}.params");
    let coef = match params.get("coef") {
        Some(c) => number(c, &format!("{ppath}.coef"))?,
        None => 1.0,
    };
    match kind {
        "bump" => {
            let centers = pair_of(params.get("centers"), &format!("{ppath}.centers"))?;
            let widths = pair_of(params.get("widths"), &format!("{ppath}.widths"))?;
            if widths.iter().any(|w| *w <= 0.0) {
                return Err(CliError::invalid(format!("{ppath}.widths: must be positive")));
            }
            Ok(SeparableTerm::new(coef, AxisFn::bump(centers[0], widths[0]), AxisFn::bump(centers[1], widths[1])))
        }
        "poly" => {
            let powers = match params.get("powers").and_then(Value::as_array).map(Vec::as_slice) {
                Some([a, b]) => [a, b].map(|p| p.as_i64().and_then(|p| i32::try_from(p).ok())),
                _ => [None, None],
            };
            let [Some(a), Some(b)] = powers else {
                return Err(CliError::invalid(format!("{ppath}.powers: expected two integers")));
            };
            Ok(SeparableTerm::new(coef, AxisFn::power(a), AxisFn::power(b)))
        }
        other => Err(CliError::invalid(format!("{path}.profile: unknown profile {other:?}"))),
    }
}

fn index(v: &Value, key: &str, path: &str) -> Result<i32, CliError> {
    v.get(key)
        .and_then(Value::as_i64)
        .and_then(|x| i32::try_from(x).ok())
        .ok_or_else(|| CliError::invalid(format!("{path}.{key}: expected an integer")))
}

/// `{"k", "l", "A"?, "modes": [{"m", "n", "component", "profile", "params"}]}`.
/// Components `u`, `u1`, `u2` are potentials whose `∂̄` is the input form.
pub fn parse_problem(v: &Value) -> Result<DbarProblem, CliError> {
    let k = number(v.get("k").unwrap_or(&Value::Null), "$.k")?;
    let l = number(v.get("l").unwrap_or(&Value::Null), "$.l")?;
    let domain = match v.get("A") {
        Some(a) => Polydisc::new(number(a, "$.A")?)?,
        None => Polydisc::default(),
    };
    let items = v.get("modes").and_then(Value::as_array).ok_or_else(|| CliError::invalid("$.modes: expected an array"))?;
    let mut parts: BTreeMap<(u8, Mode), ModeProfile> = BTreeMap::new();
    let mut kinds = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let path = format!("$.modes[{i}]");
        let mode = (index(item, "m", &path)?, index(item, "n", &path)?);
        let component = match item.get("component") {
            Some(c) => Component::parse(c.as_str().unwrap_or(""), &path)?,
            None => Component::Potential,
        };
        kinds.push(component);
        parts.entry((component as u8, mode)).or_default().push(profile(item, &path)?);
    }
    let take = |c: Component| -> Modes { parts.iter().filter(|((tag, _), _)| *tag == c as u8).map(|((_, m), p)| (*m, p.clone())).collect() };
    let has = |cs: &[Component]| kinds.iter().any(|k| cs.contains(k));
    let groups = [has(&[Component::Potential]), has(&[Component::F1, Component::F2]), has(&[Component::Top, Component::U1, Component::U2])];
    if groups.iter().filter(|g| **g).count() > 1 {
        return Err(CliError::invalid("$.modes: components mix form degrees"));
    }
    let phi = if groups[0] {
        FourierForm::dbar_of_function(&take(Component::Potential))?
    } else if groups[1] {
        FourierForm::ZeroOne { f1: take(Component::F1), f2: take(Component::F2) }
    } else {
        let mut f = take(Component::Top);
        if has(&[Component::U1, Component::U2]) {
            let FourierForm::ZeroTwo(exact) = FourierForm::dbar_of_zero_one(&take(Component::U1), &take(Component::U2))? else {
                return Err(CliError::internal("dbar of a (0,1) form is not a (0,2) form"));
            };
            for (mode, p) in exact {
                f.entry(mode).or_default().terms.extend(p.terms);
            }
        }
        FourierForm::ZeroTwo(f)
    };
    let bundle = WeightedLineBundle::new(k, l)?;
    Ok(DbarProblem { bundle, domain, phi })
}

fn level_json(level: &BoundLevel) -> Value {
    json!({
        "points": level.points,
        "solution_sq_norm": float(level.solution_sq_norm),
        "data_sq_norm": float(level.data_sq_norm),
        "C": level.constant.value().map(float),
    })
}

pub fn dbar_solve(opts: &Options, v: &Value) -> Result<CommandOutput, CliError> {
    if opts.tolerance.is_nan() || opts.tolerance <= 0.0 {
        return Err(CliError::invalid("--tolerance must be positive"));
    }
    let problem = parse_problem(v)?;
    let DbarProblem { bundle, domain, phi } = &problem;
    let grid = domain.grid();
    let mut out = CommandOutput::default();
    let mut results = json!({
        "degree": phi.degree(),
        "k": float(bundle.k()),
        "l": float(bundle.l()),
        "A": float(domain.radius()),
        "modes": phi.mode_count(),
    });
    let (solution, q) = match phi {
        FourierForm::ZeroOne { .. } => {
            let compat = check_integrability(phi, &grid, COMPATIBILITY_TOLERANCE)?;
            results["compatibility"] =
                json!({ "relative_residual": float(compat.relative_residual), "compatible": compat.compatible, "grid_resolved": compat.grid_resolved });
            if !compat.grid_resolved {
                out.warn("input profiles are not resolved by the grid");
            }
            let sol = solve_dbar_01(phi, bundle, domain)?;
            let corners: Vec<Value> = sol.corners.iter().map(|(&(m, n), c)| json!({ "m": m, "n": n, "corner": c.label() })).collect();
            results["corners"] = Value::Array(corners);
            (sol.u, 1)
        }
        FourierForm::ZeroTwo(_) => {
            let sol = solve_dbar_02(phi, bundle, domain)?;
            let anchors = |a: &BTreeMap<Mode, limithodge_dbar::Anchor>| -> Value {
                a.iter().map(|(&(m, n), x)| json!({ "m": m, "n": n, "anchor": x.label() })).collect()
            };
            results["anchors"] = json!({ "u1": anchors(&sol.u1_anchors), "u2": anchors(&sol.u2_anchors) });
            (sol.psi, 2)
        }
        FourierForm::Function(_) => return Err(CliError::invalid("the input must be a (0,1) or (0,2) form")),
    };
    let residual = dbar_residual(phi, &solution, bundle, &grid)?;
    let bound = verify_bound(phi, &solution, bundle, &grid)?;
    let within = residual.relative < opts.tolerance;
    let stable = bound.stable(STABILITY_TOLERANCE);
    results["residual"] = json!({
        "absolute": float(residual.absolute),
        "reference": float(residual.reference),
        "relative": float(residual.relative),
        "tolerance": float(opts.tolerance),
        "within_tolerance": within,
    });
    results["bound"] = json!({
        "C": bound.constant().value().map(float),
        "coarse": level_json(&bound.coarse),
        "fine": level_json(&bound.fine),
        "refinement_change": float(bound.refinement_change()),
        "stable": stable,
    });
    results["form_type"] = json!([0, q]);
    results["hormander_covered"] = json!(hormander_region(0, q, bundle.k(), bundle.l()));
    if !within {
        out.warn(format!("relative residual {:.3e} exceeds the tolerance", residual.relative));
    }
    if !stable {
        out.warn("bound constant is not stable under refinement");
    }
    if bound.constant().value().is_none() {
        out.warn("both norms vanish; the bound constant is undefined");
    }
    out.results = results;
    Ok(out)
}

pub fn dbar_region(p: usize, q: usize, k: f64, l: f64) -> Result<CommandOutput, CliError> {
    if p > 2 || q > 2 {
        return Err(CliError::invalid("form type (p, q) must satisfy 0 <= p, q <= 2"));
    }
    if !k.is_finite() || !l.is_finite() {
        return Err(CliError::invalid("exponents must be finite"));
    }
    Ok(CommandOutput::new(json!({ "p": p, "q": q, "k": float(k), "l": float(l), "covered": hormander_region(p, q, k, l) })))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OracleDomain {
    Sector,
    Polydisc,
}

/// Symbolic `D_eps` verdicts against the numerical shell test on the grid
/// of components, orders `{0,1}²` and weights `[-4, 4]²`.
pub fn oracle_compare(opts: &Options, domain: OracleDomain, eps: f64, start: f64) -> Result<CommandOutput, CliError> {
    if opts.region.is_some_and(|r| r != RegionChoice::DEps) {
        return Err(CliError::invalid("oracle-compare is defined for --region d-eps only"));
    }
    if !(eps > 0.0 && eps.is_finite() && start > 0.0 && start.is_finite()) {
        return Err(CliError::invalid("--eps and --start must be positive"));
    }
    let log_domain = match domain {
        OracleDomain::Sector => LogDomain::Sector { eps, start },
        OracleDomain::Polydisc => LogDomain::Polydisc { start },
    };
    let mut cells = Vec::new();
    for component in FormDegree::ALL {
        for n1 in 0..=1u32 {
            for n2 in 0..=1u32 {
                for l1 in -4..=4i64 {
                    for l2 in -4..=4i64 {
                        cells.push((component, (n1, n2), (l1, l2)));
                    }
                }
            }
        }
    }
    let verdicts = cells
        .par_iter()
        .map(|&(component, (n1, n2), (l1, l2))| {
            let symbolic = classify_l2(component, (n1 as i64, n2 as i64), Weights::new(l1, l2, None))?.d_eps;
            let (j1, j2) = (component.dt1 as i64, component.dt2 as i64);
            let f = LogPowerIntegrand { t_orders: (n1, n2), log_powers: ((l1 + 2 * j1 - 2) as f64, (l2 - l1 + 2 * j2 - 2) as f64) };
            let numeric = integrability_oracle(&f, log_domain, ShellTest::default());
            Ok((symbolic, numeric.finite, numeric.tail_ratio))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut disagreements = Vec::new();
    let mut agree = 0usize;
    for (&(component, (n1, n2), (l1, l2)), verdict) in cells.iter().zip(verdicts) {
        let (symbolic, numeric, ratio) = verdict;
        if symbolic == numeric {
            agree += 1;
        } else {
            disagreements.push(json!({
                "component": component.label(),
                "t_orders": [n1, n2],
                "weights": [l1, l2],
                "symbolic": symbolic,
                "numeric": numeric,
                "tail_ratio": ratio.map(float),
            }));
        }
    }
    let mut domain_json = Map::new();
    domain_json.insert("kind".into(), json!(if domain == OracleDomain::Sector { "sector" } else { "polydisc" }));
    if domain == OracleDomain::Sector {
        domain_json.insert("eps".into(), float(eps));
    }
    domain_json.insert("start".into(), float(start));
    let mut out = CommandOutput::new(json!({
        "region": RegionChoice::DEps.name(),
        "domain": Value::Object(domain_json),
        "cells": cells.len(),
        "agree": agree,
        "disagreements": disagreements,
    }));
    if agree != cells.len() {
        out.warn(format!("{} of {} cells disagree with the numerical test", cells.len() - agree, cells.len()));
    }
    Ok(out)
}
