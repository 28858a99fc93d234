//! Commands over exact monodromy data and sl2 models.

use num_traits::Zero;
use limithodge_core::growth::{hodge_norm_class, theta_apply_class, NilpotentPair, Region, ThetaOutcome};
use limithodge_core::hodgestruct::{deligne_bigrading, mhs_check, polarized_mhs_check, r_split_check, MixedHodge, PolarizationForm};
use limithodge_core::l2complex::{
    build_stalk_complex, classify_l2, end_datum, generators, hypercohomology, subspace_dims, theta_image_check, truncated_global_model,
    FormDegree, L2Verdict, StalkMode,
};
use limithodge_core::serial::{factor_kind_to_json, filtration_to_json, rational_to_json, vector_to_json, weights_to_json};
use limithodge_core::sl2rep::{alpha_basis, decompose_theorem6, AlphaBasis, FactorKind, IrreducibleFactor};
use limithodge_core::weightfilt::{cone_independence, monodromy_weight_filtration, WeightFiltration};
use limithodge_core::{Qi, QiMatrix};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::{datum_file, experiment, Experiment};
use crate::{CommandOutput, Options, RegionChoice};

fn graded_dims_json(w: &WeightFiltration<Qi>) -> Value {
    Value::Array(w.graded_dims().into_iter().map(|(index, dim)| json!({ "index": index, "dim": dim })).collect())
}

fn weight_filtration_json(label: &str, n: &QiMatrix, center: i64) -> Result<Value, CliError> {
    let w = monodromy_weight_filtration(n, center)?;
    w.verify()?;
    Ok(json!({
        "operator": label,
        "center": center,
        "steps": filtration_to_json(&w.filtration()),
        "graded_dims": graded_dims_json(&w),
    }))
}

pub fn weight_filtration(opts: &Options, v: &Value) -> Result<CommandOutput, CliError> {
    let file = datum_file(v)?;
    let datum = file.to_datum()?;
    let [n1, n2] = &datum.n;
    let filtrations = vec![
        weight_filtration_json("N1", n1, opts.center)?,
        weight_filtration_json("N2", n2, opts.center)?,
        weight_filtration_json("N1+N2", &(n1 + n2), opts.center)?,
    ];
    Ok(CommandOutput::new(json!({ "name": datum.name, "dimension": datum.dim(), "filtrations": filtrations })))
}

pub fn cone_check(opts: &Options, samples: usize, v: &Value) -> Result<CommandOutput, CliError> {
    let datum = datum_file(v)?.to_datum()?;
    let report = cone_independence(&datum.n, samples, opts.seed)?;
    let lambdas: Vec<Value> = report.samples.iter().map(|lam| Value::Array(lam.iter().map(qi_scalar_json).collect())).collect();
    let mut out = CommandOutput::new(json!({
        "name": datum.name,
        "independent": report.independent(),
        "samples": lambdas,
        "mismatches": report.mismatches,
        "reference": {
            "steps": filtration_to_json(report.reference.centered()),
            "graded_dims": graded_dims_json(&report.reference),
        },
    }));
    if !report.independent() {
        out.warn(format!("{} cone points give a different filtration", report.mismatches.len()));
    }
    Ok(out)
}

/// Cone coefficients are rational; print them as rationals.
fn qi_scalar_json(x: &Qi) -> Value {
    if x.im.is_zero() {
        rational_to_json(&x.re)
    } else {
        limithodge_core::serial::qi_to_json(x)
    }
}

fn factors_of(e: &Experiment) -> Result<Vec<IrreducibleFactor>, CliError> {
    Ok(decompose_theorem6(&e.model.hodge, &e.model.action, Some(&e.model.polarization))?)
}

pub fn decompose(opts: &Options, v: &Value) -> Result<CommandOutput, CliError> {
    let e = experiment(v, opts.seed)?;
    let factors = factors_of(&e)?;
    let s = &e.model.polarization;
    let mut orthogonal = true;
    for (a, fa) in factors.iter().enumerate() {
        for fb in &factors[a + 1..] {
            for u in fa.embedding.columns() {
                for w in fb.embedding.columns() {
                    orthogonal &= s.eval(&u, &w).is_zero();
                }
            }
        }
    }
    let mut found: Vec<FactorKind> = factors.iter().map(|f| f.kind).collect();
    found.sort();
    let mut requested = e.factors.clone();
    requested.sort();
    let listed: Vec<Value> = factors
        .iter()
        .map(|f| {
            json!({
                "kind": factor_kind_to_json(&f.kind),
                "dim": f.embedding.cols(),
                "lowest": f.lowest.iter().map(|x| vector_to_json(x)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut out = CommandOutput::new(json!({
        "dimension": e.model.hodge.ambient(),
        "weight": e.model.hodge.weight(),
        "conjugated": e.conjugated,
        "factors": listed,
        "matches_input": found == requested,
        "orthogonal": orthogonal,
    }));
    if found != requested {
        out.warn("recovered factor kinds differ from the assembled ones");
    }
    Ok(out)
}

/// Alpha bases of the symmetric factors, with the pair of lowering
/// operators of the model.
fn alpha_bases(e: &Experiment, out: &mut CommandOutput) -> Result<(NilpotentPair, Vec<(FactorKind, AlphaBasis)>), CliError> {
    let factors = factors_of(e)?;
    let pair = NilpotentPair::new(&e.model.action.n_minus[0], &e.model.action.n_minus[1])?;
    let mut bases = Vec::new();
    for f in &factors {
        if let FactorKind::EType { .. } = f.kind {
            out.warn(format!("{:?} has no alpha basis and is skipped", f.kind));
            continue;
        }
        bases.push((f.kind, alpha_basis(f, &e.model.action)?));
    }
    Ok((pair, bases))
}

pub fn alpha(opts: &Options, v: &Value) -> Result<CommandOutput, CliError> {
    let e = experiment(v, opts.seed)?;
    let mut out = CommandOutput::default();
    let (pair, bases) = alpha_bases(&e, &mut out)?;
    let mut listed = Vec::new();
    let mut consistent = true;
    for (kind, basis) in &bases {
        let mut vectors = Vec::new();
        for (&(k, l), vec) in &basis.vectors {
            let weights = pair.weights_of(vec).ok_or_else(|| CliError::internal("alpha vector is zero"))?;
            let expected = basis.expected_weights(k, l);
            consistent &= weights == expected;
            vectors.push(json!({
                "k": k,
                "l": l,
                "vector": vector_to_json(vec),
                "weights": [weights.0, weights.1],
                "expected_weights": [expected.0, expected.1],
                "second_weight": pair.second_weight_of(vec),
            }));
        }
        listed.push(json!({ "factor": factor_kind_to_json(kind), "vectors": vectors }));
    }
    if !consistent {
        out.warn("some alpha vectors have weights other than the expected ones");
    }
    out.results = json!({ "dimension": e.model.hodge.ambient(), "conjugated": e.conjugated, "bases": listed, "weights_as_expected": consistent });
    Ok(out)
}

pub fn norm_class(opts: &Options, v: &Value) -> Result<CommandOutput, CliError> {
    let e = experiment(v, opts.seed)?;
    let mut out = CommandOutput::default();
    let (pair, bases) = alpha_bases(&e, &mut out)?;
    let regions = opts.region.unwrap_or(RegionChoice::Global).regions();
    let mut listed = Vec::new();
    for (kind, basis) in &bases {
        let mut classes = Vec::new();
        for (&(k, l), vec) in &basis.vectors {
            let s = pair.section(vec.clone(), Some((k, l))).ok_or_else(|| CliError::internal("alpha vector is zero"))?;
            let mut entry = json!({ "k": k, "l": l, "weights": [s.weights.0, s.weights.1] });
            for &r in &regions {
                entry[r.name()] = hodge_norm_class(&pair, &s, r)?.to_json();
            }
            classes.push(entry);
        }
        listed.push(json!({ "factor": factor_kind_to_json(kind), "classes": classes }));
    }
    out.results = json!({ "regions": regions.iter().map(Region::name).collect::<Vec<_>>(), "factors": listed });
    Ok(out)
}

fn outcome_json(o: &ThetaOutcome) -> Value {
    match o {
        ThetaOutcome::Zero => json!({ "zero": true, "bounded": true }),
        ThetaOutcome::Class { form, source, bounded, sharp } => json!({
            "zero": false,
            "form": form.to_json(),
            "source": source.to_json(),
            "bounded": bounded,
            "sharp": sharp,
        }),
    }
}

pub fn theta_bound(opts: &Options, v: &Value) -> Result<CommandOutput, CliError> {
    let e = experiment(v, opts.seed)?;
    let mut out = CommandOutput::default();
    let (pair, bases) = alpha_bases(&e, &mut out)?;
    let regions = opts.region.unwrap_or(RegionChoice::Global).regions();
    let (mut all_bounded, mut nonzero) = (true, 0usize);
    let mut listed = Vec::new();
    for (kind, basis) in &bases {
        let mut images = Vec::new();
        for (&(k, l), vec) in &basis.vectors {
            let s = pair.section(vec.clone(), Some((k, l))).ok_or_else(|| CliError::internal("alpha vector is zero"))?;
            for i in [1, 2] {
                let mut entry = json!({ "k": k, "l": l, "direction": i });
                for &r in &regions {
                    let o = theta_apply_class(&pair, &s, i, r)?;
                    all_bounded &= o.is_bounded();
                    nonzero += (o != ThetaOutcome::Zero) as usize;
                    entry[r.name()] = outcome_json(&o);
                }
                images.push(entry);
            }
        }
        listed.push(json!({ "factor": factor_kind_to_json(kind), "images": images }));
    }
    if !all_bounded {
        out.warn("some Higgs field images are not bounded by their source");
    }
    out.results = json!({
        "regions": regions.iter().map(Region::name).collect::<Vec<_>>(),
        "factors": listed,
        "nonzero_images": nonzero,
        "all_bounded": all_bounded,
    });
    Ok(out)
}

pub fn mhs(_opts: &Options, v: &Value) -> Result<CommandOutput, CliError> {
    let file = datum_file(v)?;
    let datum = file.to_datum()?;
    let f = file.f.clone().ok_or_else(|| CliError::invalid("$.F: mhs-check needs a Hodge filtration"))?;
    let total = &datum.n[0] + &datum.n[1];
    let w = monodromy_weight_filtration(&total, file.weight)?.filtration();
    let m = MixedHodge::new(w.clone(), f)?;
    let report = mhs_check(&m);
    let mut out = CommandOutput::default();
    let mut results = json!({
        "name": datum.name,
        "weight": file.weight,
        "W": filtration_to_json(&w),
        "is_mhs": report.is_mhs(),
        "w_real": report.w_real,
        "graded_pieces": report.pieces.iter().map(|(l, ok)| json!({ "index": l, "hodge": ok })).collect::<Vec<_>>(),
    });
    if report.is_mhs() {
        let bigrading = deligne_bigrading(&m);
        let dims: Vec<Value> = bigrading.iter().map(|((p, q), s)| json!({ "p": p, "q": q, "dim": s.dim() })).collect();
        results["deligne_bigrading"] = Value::Array(dims);
        results["r_split"] = json!(r_split_check(&m));
        if let Some(h) = &file.hodge_numbers {
            let found: std::collections::BTreeMap<(i64, i64), usize> =
                bigrading.iter().map(|(&pq, s)| (pq, s.dim())).filter(|(_, d)| *d > 0).collect();
            let stated: std::collections::BTreeMap<(i64, i64), usize> = h.iter().map(|(&pq, &d)| (pq, d)).filter(|(_, d)| *d > 0).collect();
            results["hodge_numbers_match"] = json!(found == stated);
            if found != stated {
                out.warn("stated hodge_numbers differ from the Deligne bigrading");
            }
        }
    } else {
        out.warn("(W(N1+N2)[-k], F) is not a mixed Hodge structure");
    }
    match &file.s {
        Some(s) => {
            let form = PolarizationForm::new(s.clone(), file.weight)?;
            let p = polarized_mhs_check(&m, &total, &form, file.weight);
            results["polarized"] = json!({
                "all_pass": p.all_pass(),
                "nilpotency": p.nilpotency,
                "weight_is_monodromy": p.weight_is_monodromy,
                "f_isotropic": p.f_isotropic,
                "transversal": p.transversal,
                "primitive_polarized": p.primitive_polarized,
                "notes": p.notes,
            });
        }
        None => out.warn("no polarization S supplied; polarized checks skipped"),
    }
    out.results = results;
    Ok(out)
}

fn verdict_json(v: &L2Verdict) -> Value {
    json!({
        "component": v.component.label(),
        "t_orders": [v.t_orders.0, v.t_orders.1],
        "weights": weights_to_json(&v.weights),
        "D_eps": v.d_eps,
        "D_eps_prime": v.d_eps_prime,
        "global": v.global(),
    })
}

fn selected(v: &L2Verdict, region: RegionChoice) -> Option<bool> {
    match region {
        RegionChoice::DEps => Some(v.d_eps),
        RegionChoice::DEpsPrime => v.d_eps_prime,
        RegionChoice::Global => Some(v.global()),
    }
}

pub fn l2_classify(opts: &Options, mode: StalkMode, v: &Value) -> Result<CommandOutput, CliError> {
    let datum = datum_file(v)?.to_datum()?;
    let region = opts.region.unwrap_or(RegionChoice::Global);
    let mut out = CommandOutput::default();
    let mut listed = Vec::new();
    for (i, (vec, weights)) in generators(&datum, mode)?.iter().enumerate() {
        let mut components = Vec::new();
        for component in FormDegree::ALL {
            let verdict = classify_l2(component, (0, 0), *weights)?;
            if verdict.d_eps_prime.is_some_and(|p| p != verdict.d_eps) {
                out.warn(format!("generator {i} component {}: the two orderings disagree", component.label()));
            }
            if verdict.d_eps_prime.is_none() && region != RegionChoice::DEps {
                out.warn(format!("generator {i}: no W(N2) weight, D_eps_prime verdict unavailable"));
            }
            let mut entry = verdict_json(&verdict);
            entry["l2"] = json!(selected(&verdict, region));
            components.push(entry);
        }
        listed.push(json!({ "vector": vector_to_json(vec), "weights": weights_to_json(weights), "components": components }));
    }
    out.warnings.dedup();
    out.results = json!({ "name": datum.name, "region": region.name(), "generators": listed });
    Ok(out)
}

pub fn stalk_cohomology(opts: &Options, mode: StalkMode, v: &Value) -> Result<CommandOutput, CliError> {
    let datum = datum_file(v)?.to_datum()?;
    let complex = build_stalk_complex(&datum, mode)?;
    let h = hypercohomology(&complex)?;
    let truncated = truncated_global_model(&datum, opts.truncation_degree, mode)?;
    let (k0, k1, k2) = complex.dims();
    let mut out = CommandOutput::new(json!({
        "name": datum.name,
        "model": "stalk",
        "h": h,
        "dims": [k0, k1, k2],
        "subspace_dims": subspace_dims(&complex),
        "euler_characteristic": complex.euler_characteristic(),
        "truncated": { "model": "truncated", "d": opts.truncation_degree, "h": truncated },
        "agrees": h == truncated,
    }));
    if h != truncated {
        out.warn(format!("truncated model of degree {} differs from the stalk complex", opts.truncation_degree));
    }
    Ok(out)
}

pub fn end_check(_opts: &Options, v: &Value) -> Result<CommandOutput, CliError> {
    let datum = datum_file(v)?.to_datum()?;
    let end = end_datum(&datum)?;
    let report = theta_image_check(&datum)?;
    let mut ad = Vec::new();
    for (i, n) in end.n.iter().enumerate() {
        let w = monodromy_weight_filtration(n, 0)?;
        ad.push(json!({
            "operator": format!("ad(N{})", i + 1),
            "graded_dims": graded_dims_json(&w),
            "class": report.classes[i].as_ref().map(verdict_json),
        }));
    }
    let mut out = CommandOutput::new(json!({
        "name": datum.name,
        "end_dimension": end.dim(),
        "commuting": report.commuting,
        "operators": ad,
        "passes": report.passes(),
    }));
    if !report.passes() {
        out.warn("some N_i does not define an L2 class in the End complex");
    }
    Ok(out)
}
