//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use limithodge_core::corpus;
use limithodge_core::exactla;
use limithodge_core::growth::{hodge_norm_class, ordering_change_both, theta_apply_class, NilpotentPair, Region, ThetaOutcome};
use limithodge_core::l2complex::{
    build_stalk_complex, classify_l2, hypercohomology, random_two_chart_model, truncated_global_model, FormDegree, StalkMode, Weights,
};
use limithodge_core::random;
use limithodge_core::sl2rep::{alpha_basis, build_model, decompose_theorem6, sl2_pair_for_ordering, FactorKind, Model};
use limithodge_core::weightfilt::{cone_independence, monodromy_weight_filtration};
use limithodge_core::{Matrix, Qi, QiMatrix, Rational};
use limithodge_dbar::suite::solver_suite;
use limithodge_dbar::{
    dbar_residual, hormander_region, integrability_oracle, solve_dbar_01, solve_dbar_02, verify_bound, FourierForm, LogDomain,
    LogPowerIntegrand, Polydisc, ShellTest,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Axioms checked directly: `N W_l ⊆ W_{l-2}`, and for `l ≥ 1` the map
/// `N^l : Gr_l → Gr_{-l}` is injective between spaces of equal dimension.
fn weight_axioms_hold(n: &Matrix<Rational>) -> bool {
    let Ok(w) = monodromy_weight_filtration(n, 0) else { return false };
    let d = n.rows();
    let top = d as i64;
    for l in -top - 1..=top + 1 {
        if !w.at(l).image_under(n).is_subspace_of(&w.at(l - 2)) {
            return false;
        }
    }
    for l in 1..=top {
        let dim = |k: i64| w.at(k).dim() - w.at(k - 1).dim();
        if dim(l) != dim(-l) {
            return false;
        }
        let kernel_part = exactla::preimage(&n.pow(l as u32), &w.at(-l - 1)).and_then(|p| exactla::intersect(&p, &w.at(l)));
        match kernel_part {
            Ok(k) if k.is_subspace_of(&w.at(l - 1)) => {}
            _ => return false,
        }
    }
    w.at(-top - 1).is_zero() && w.at(top).is_full()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = 0;
    for _ in 0..200 {
        let d = rng.gen_range(1..=8);
        let n = random::conjugated_nilpotent::<Rational, _>(d, &mut rng);
        if !weight_axioms_hold(&n) {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(failures == 0 && elapsed < Duration::from_secs(30), format!("200 nilpotents, {failures} failures, {:.1}s", elapsed.as_secs_f64()))
}

fn random_models(count: usize, max_dim: usize, seed: u64) -> Vec<(Vec<FactorKind>, Model)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut kinds = corpus::random_factor_list(max_dim, &mut rng);
            let dim: usize = kinds.iter().map(FactorKind::dim).sum();
            let g: QiMatrix = random::unimodular(dim, 3 * dim, &mut rng);
            let model = corpus::assembled_model(&kinds, Some(&g)).expect("assembled model");
            kinds.sort();
            (kinds, model)
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let mut failures = 0;
    for (i, (_, model)) in random_models(50, 8, 2).iter().enumerate() {
        let ns = [model.action.n_minus[0].clone(), model.action.n_minus[1].clone()];
        match cone_independence(&ns, 10, 100 + i as u64) {
            Ok(r) if r.independent() && r.samples.len() == 10 => {}
            _ => failures += 1,
        }
    }
    outcome(failures == 0, format!("50 pairs x 10 cone points, {failures} pairs with differing filtrations"))
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    for (i, (kinds, model)) in random_models(30, 12, 3).iter().enumerate() {
        let Ok(factors) = decompose_theorem6(&model.hodge, &model.action, Some(&model.polarization)) else {
            failures.push(format!("#{i} decomposition failed"));
            continue;
        };
        let mut found: Vec<FactorKind> = factors.iter().map(|f| f.kind).collect();
        found.sort();
        let dims: usize = factors.iter().map(|f| f.embedding.cols()).sum();
        let mut orthogonal = true;
        for (a, fa) in factors.iter().enumerate() {
            for fb in &factors[a + 1..] {
                for u in fa.embedding.columns() {
                    for v in fb.embedding.columns() {
                        orthogonal &= model.polarization.eval(&u, &v).is_zero();
                    }
                }
            }
        }
        if found != *kinds || dims != model.hodge.ambient() || !orthogonal {
            failures.push(format!("#{i} {kinds:?} -> {found:?}"));
        }
    }
    outcome(failures.is_empty(), format!("30 representations, {} mismatches {:?}", failures.len(), failures))
}

/// `((m, n), pair, [((k, l), vector)])`.
type AlphaCase = ((usize, usize), NilpotentPair, Vec<((usize, usize), Vec<Qi>)>);

/// One case for every `S(m)⊗S(n)`, `m, n ≤ 4`.
fn alpha_corpus() -> Vec<AlphaCase> {
    let mut out = Vec::new();
    for m in 0..=4 {
        for n in 0..=4 {
            let model = build_model(FactorKind::symmetric(0, m, n)).expect("model");
            let factors = decompose_theorem6(&model.hodge, &model.action, None).expect("decomposition");
            let alpha = alpha_basis(&factors[0], &model.action).expect("alpha basis");
            let pair = NilpotentPair::new(&model.action.n_minus[0], &model.action.n_minus[1]).expect("commuting");
            out.push(((m, n), pair, alpha.vectors.into_iter().collect()));
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for ((m, n), pair, vectors) in alpha_corpus() {
        for ((k, l), v) in vectors {
            let want = (2 * k as i64 - m as i64, 2 * l as i64 - n as i64);
            let s = pair.section(v, Some((k, l))).expect("nonzero");
            for region in [Region::DEps, Region::DEpsPrime] {
                checked += 1;
                match hodge_norm_class(&pair, &s, region) {
                    Ok(c) if c.log_exps == want && c.t_orders == (0, 0) => {}
                    other => failures.push(format!("S({m})xS({n}) alpha_({k},{l}) {}: {other:?}", region.name())),
                }
            }
        }
    }
    outcome(failures.is_empty(), format!("{checked} classes, {} mismatches {:?}", failures.len(), failures))
}

fn criterion_5() -> Outcome {
    let (mut applicable, mut exceptions) = (0, Vec::new());
    for ((m, n), pair, vectors) in alpha_corpus() {
        for ((k, l), v) in vectors {
            let s = pair.section(v, Some((k, l))).expect("nonzero");
            for i in [1, 2] {
                let outcomes: Vec<ThetaOutcome> =
                    [Region::DEps, Region::DEpsPrime].iter().map(|&r| theta_apply_class(&pair, &s, i, r).expect("consistent weights")).collect();
                if outcomes.iter().all(|o| *o == ThetaOutcome::Zero) {
                    continue;
                }
                applicable += 1;
                if !outcomes.iter().all(ThetaOutcome::is_bounded) {
                    exceptions.push(format!("S({m})xS({n}) alpha_({k},{l}) N{i}"));
                }
            }
        }
    }
    outcome(exceptions.is_empty() && applicable > 0, format!("{applicable} nonzero images, {} exceptions {:?}", exceptions.len(), exceptions))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let sector = LogDomain::Sector { eps: 0.1, start: 10.0 };
    let polydisc = LogDomain::Polydisc { start: 10.0 };
    let (mut cells, mut agree, mut agree_polydisc) = (0, 0, 0);
    let mut disagreements = Vec::new();
    for component in FormDegree::ALL {
        for n1 in 0..=1u32 {
            for n2 in 0..=1u32 {
                for l1 in -4..=4i64 {
                    for l2 in -4..=4i64 {
                        cells += 1;
                        let symbolic = classify_l2(component, (n1 as i64, n2 as i64), Weights::new(l1, l2, None)).expect("orders").d_eps;
                        let (j1, j2) = (component.dt1 as i64, component.dt2 as i64);
                        let f = LogPowerIntegrand {
                            t_orders: (n1, n2),
                            log_powers: ((l1 + 2 * j1 - 2) as f64, (l2 - l1 + 2 * j2 - 2) as f64),
                        };
                        let on_sector = integrability_oracle(&f, sector, ShellTest::default()).finite;
                        let on_polydisc = integrability_oracle(&f, polydisc, ShellTest::default()).finite;
                        agree += (on_sector == symbolic) as usize;
                        agree_polydisc += (on_polydisc == symbolic) as usize;
                        if on_sector != symbolic && disagreements.len() < 6 {
                            disagreements.push(format!("J={} n=({n1},{n2}) l=({l1},{l2}) symbolic={symbolic}", component.label()));
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        agree == cells && elapsed < Duration::from_secs(300),
        format!(
            "{agree}/{cells} cells agree on the eps=0.1 sector ({agree_polydisc}/{cells} on the polydisc), {:.1}s; first disagreements: {disagreements:?}",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let mut trivial = None;
    for datum in corpus::standard() {
        let stalk = build_stalk_complex(&datum, StalkMode::LocalSystem).and_then(|c| hypercohomology(&c));
        let Ok(stalk) = stalk else {
            failures.push(format!("{}: stalk model failed", datum.name));
            continue;
        };
        if datum.name == "trivial" {
            trivial = Some(stalk);
        }
        for degree in 2..=4 {
            match truncated_global_model(&datum, degree, StalkMode::LocalSystem) {
                Ok(h) if h == stalk => {}
                other => failures.push(format!("{} d={degree}: {other:?} vs {stalk:?}", datum.name)),
            }
        }
    }
    let pass = failures.is_empty() && trivial == Some([1, 0, 0]);
    outcome(pass, format!("{} data x 3 degrees, trivial {trivial:?}, {} mismatches {:?}", corpus::standard().len(), failures.len(), failures))
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let cases = corpus::ordering_cases(20, 8);
    for case in &cases {
        let forward = sl2_pair_for_ordering(&case.n[0], &case.n[1], &case.y_total);
        let swapped = sl2_pair_for_ordering(&case.n[1], &case.n[0], &case.y_total);
        let result = match (forward, swapped) {
            (Ok(a), Ok(b)) => ordering_change_both(&a, &b).map_err(|e| e.to_string()),
            (a, b) => Err(format!("{:?} {:?}", a.err(), b.err())),
        };
        match result {
            Ok(reports) if reports.iter().all(|(x, y)| x.triangular() && y.triangular()) => {}
            Ok(_) => failures.push(format!("{}: not triangular", case.name)),
            Err(e) => failures.push(format!("{}: {e}", case.name)),
        }
    }
    outcome(failures.is_empty(), format!("{} pairs, {} failures {:?}", cases.len(), failures.len(), failures))
}

fn criterion_9() -> Outcome {
    let domain = Polydisc::default();
    let grid = domain.grid();
    let suite = solver_suite();
    let mut failures = Vec::new();
    let mut corners = BTreeSet::new();
    let (mut outside, mut worst_residual, mut worst_change) = (0, 0.0f64, 0.0f64);
    for case in &suite {
        let solution = match &case.phi {
            FourierForm::ZeroOne { .. } => solve_dbar_01(&case.phi, &case.bundle, &domain).map(|s| {
                corners.extend(s.corners.values().copied());
                s.u
            }),
            FourierForm::ZeroTwo(_) => solve_dbar_02(&case.phi, &case.bundle, &domain).map(|s| s.psi),
            FourierForm::Function(_) => {
                failures.push(format!("{}: not a form", case.name));
                continue;
            }
        };
        let checked = solution.and_then(|u| Ok((dbar_residual(&case.phi, &u, &case.bundle, &grid)?, verify_bound(&case.phi, &u, &case.bundle, &grid)?)));
        match checked {
            Ok((res, bound)) => {
                worst_residual = worst_residual.max(res.relative);
                worst_change = worst_change.max(bound.refinement_change());
                if res.relative >= 1e-6 || !bound.stable(0.1) {
                    failures.push(format!("{}: residual {:.2e}, change {:.2e}", case.name, res.relative, bound.refinement_change()));
                    continue;
                }
                let (p, q) = case.form_type();
                if !hormander_region(p, q, case.bundle.k(), case.bundle.l()) {
                    outside += 1;
                }
            }
            Err(e) => failures.push(format!("{}: {e}", case.name)),
        }
    }
    let pass = failures.is_empty() && suite.len() == 25 && corners.len() == 4 && outside >= 5;
    outcome(
        pass,
        format!(
            "{} inputs, {} corners, worst residual {worst_residual:.2e}, worst C change {worst_change:.2e}, {outside} outside the classical region, failures {failures:?}",
            suite.len(),
            corners.len()
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut failures, mut seen) = (Vec::new(), Vec::new());
    for i in 0..10 {
        let top = rng.gen_range(2..=4);
        let model = random_two_chart_model::<Rational, _>(top, &mut rng);
        let dc = model.cech_double_complex();
        let total = dc.check().and_then(|_| dc.total_cohomology());
        let global = model.global_section_cohomology();
        seen.push(global.clone());
        match total {
            Ok(t) if t[..global.len()] == global[..] && t[global.len()..].iter().all(|&x| x == 0) => {}
            other => failures.push(format!("#{i}: {other:?} vs {global:?}")),
        }
    }
    outcome(failures.is_empty(), format!("10 models with cohomology {seen:?}, {} mismatches {:?}", failures.len(), failures))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("weight filtration axioms", criterion_1),
        ("cone independence", criterion_2),
        ("factor decomposition", criterion_3),
        ("norm exponents", criterion_4),
        ("Higgs field boundedness", criterion_5),
        ("classifier vs quadrature", criterion_6),
        ("stalk vs truncated model", criterion_7),
        ("ordering change triangularity", criterion_8),
        ("dbar solver suite", criterion_9),
        ("two-chart double complex", criterion_10),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        println!(
            "criterion {:>2} {:<30} {} ({:.1}s) {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
        failed += !o.pass as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
