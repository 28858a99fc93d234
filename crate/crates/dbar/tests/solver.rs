use limithodge_dbar::form::single_mode;
use limithodge_dbar::suite::solver_suite;
use limithodge_dbar::*;

fn solve(case_phi: &FourierForm, bundle: &WeightedLineBundle) -> FourierForm {
    let domain = Polydisc::default();
    match case_phi {
        FourierForm::ZeroOne { .. } => solve_dbar_01(case_phi, bundle, &domain).unwrap().u,
        FourierForm::ZeroTwo(_) => solve_dbar_02(case_phi, bundle, &domain).unwrap().psi,
        FourierForm::Function(_) => panic!("functions are not solver inputs"),
    }
}

#[test]
fn suite_residuals_and_bounds() {
    let grid = Polydisc::default().grid();
    for case in solver_suite() {
        let sol = solve(&case.phi, &case.bundle);
        let res = dbar_residual(&case.phi, &sol, &case.bundle, &grid).unwrap();
        let bound = verify_bound(&case.phi, &sol, &case.bundle, &grid).unwrap();
        println!("{:<34} residual {:.2e}  C {:?}  change {:.2e}", case.name, res.relative, bound.constant(), bound.refinement_change());
        assert!(res.relative < 1e-6, "{}: {res:?}", case.name);
        assert!(bound.stable(0.1), "{}: {bound:?}", case.name);
    }
}

#[test]
fn suite_spans_corners_and_leaves_the_classical_region() {
    let mut corners = std::collections::BTreeSet::new();
    let mut outside = 0;
    for case in solver_suite() {
        if let FourierForm::ZeroOne { .. } = case.phi {
            let sol = solve_dbar_01(&case.phi, &case.bundle, &Polydisc::default()).unwrap();
            corners.extend(sol.corners.values().copied());
        }
        let (p, q) = case.form_type();
        if !hormander_region(p, q, case.bundle.k(), case.bundle.l()) {
            outside += 1;
        }
    }
    assert_eq!(corners.len(), 4);
    assert!(outside >= 5, "{outside}");
}

#[test]
fn conjugate_coordinate_closed_form() {
    let phi = FourierForm::ZeroOne { f1: Modes::new(), f2: single_mode((0, 0), 1.0, AxisFn::constant(1.0), AxisFn::constant(1.0)) };
    for (k, l) in [(0.5, -1.0), (-2.0, 2.0)] {
        let bundle = WeightedLineBundle::new(k, l).unwrap();
        let sol = solve_dbar_01(&phi, &bundle, &Polydisc::default()).unwrap();
        let FourierForm::Function(u) = &sol.u else { panic!() };
        assert_eq!(u.len(), 1);
        for s in [1.0, 2.0, 5.0, 40.0] {
            assert!((u[&(0, -1)].eval(3.0, s) - (-s).exp()).abs() < 1e-15);
        }
        let res = dbar_residual(&phi, &sol.u, &bundle, &Polydisc::default().grid()).unwrap();
        assert!(res.relative < 1e-10, "{res:?}");
    }
}

#[test]
fn mode_minus_one_zero_with_small_exponents() {
    let bundle = WeightedLineBundle::new(0.5, 0.5).unwrap();
    let potential = single_mode((-1, 0), 1.0, AxisFn::bump(3.0, 1.0), AxisFn::bump(2.5, 0.8));
    let phi = FourierForm::dbar_of_function(&potential).unwrap();
    let sol = solve_dbar_01(&phi, &bundle, &Polydisc::default()).unwrap();
    assert_eq!(sol.corners[&(-1, 0)], Corner { first: Anchor::Origin, second: Anchor::Rim });
    let grid = Polydisc::default().grid();
    assert!(dbar_residual(&phi, &sol.u, &bundle, &grid).unwrap().relative < 1e-6);
    let bound = verify_bound(&phi, &sol.u, &bundle, &grid).unwrap();
    assert!(bound.constant().value().unwrap().is_finite());
    assert!(bound.stable(0.1));
}

#[test]
fn mode_one_one_starts_at_the_outer_corner() {
    let bundle = WeightedLineBundle::new(0.5, 0.5).unwrap();
    let potential = single_mode((1, 1), 1.0, AxisFn::bump(3.0, 1.0), AxisFn::bump(2.5, 0.8));
    let phi = FourierForm::dbar_of_function(&potential).unwrap();
    let sol = solve_dbar_01(&phi, &bundle, &Polydisc::default()).unwrap();
    assert_eq!(sol.corners[&(1, 1)], Corner { first: Anchor::Rim, second: Anchor::Rim });
    assert!(dbar_residual(&phi, &sol.u, &bundle, &Polydisc::default().grid()).unwrap().relative < 1e-6);
}

#[test]
fn compact_potentials_are_recovered() {
    // a compactly supported closed form has a unique compactly supported
    // primitive in each mode, whichever corner the path starts from
    let potential = single_mode((2, -1), 1.0, AxisFn::bump(3.0, 1.0), AxisFn::bump(2.5, 0.8));
    let phi = FourierForm::dbar_of_function(&potential).unwrap();
    for (k, l) in [(-2.0, -2.0), (2.0, 2.0), (0.5, 2.0)] {
        let sol = solve_dbar_01(&phi, &WeightedLineBundle::new(k, l).unwrap(), &Polydisc::default()).unwrap();
        let FourierForm::Function(u) = &sol.u else { panic!() };
        for (s1, s2) in [(2.5, 2.5), (3.3, 2.0), (1.5, 3.0), (4.5, 2.4)] {
            let expected = potential[&(2, -1)].eval(s1, s2);
            assert!((u[&(2, -1)].eval(s1, s2) - expected).abs() < 1e-10, "{k} {l} {s1} {s2}");
        }
    }
}

#[test]
fn rim_anchor_adds_a_holomorphic_correction() {
    // u₀ = r₁² in mode (1,0); the rim path gives r₁² - A r₁
    let bundle = WeightedLineBundle::new(2.0, -2.0).unwrap();
    let potential = single_mode((1, 0), 1.0, AxisFn::power(2), AxisFn::constant(1.0));
    let phi = FourierForm::dbar_of_function(&potential).unwrap();
    let sol = solve_dbar_01(&phi, &bundle, &Polydisc::default()).unwrap();
    let FourierForm::Function(u) = &sol.u else { panic!() };
    let a = default_radius();
    for s in [1.0f64, 2.0, 6.0] {
        let r = (-s).exp();
        assert!((u[&(1, 0)].eval(s, 3.0) - (r * r - a * r)).abs() < 1e-15);
    }
}

#[test]
fn zero_two_branches() {
    let domain = Polydisc::default();
    let grid = domain.grid();
    // n < 0: u¹ from the origin
    let bundle = WeightedLineBundle::new(0.5, -1.0).unwrap();
    let u1 = single_mode((0, -1), 1.0, AxisFn::bump(3.0, 1.0), AxisFn::bump(2.6, 0.9));
    let phi = FourierForm::dbar_of_zero_one(&u1, &Modes::new()).unwrap();
    let sol = solve_dbar_02(&phi, &bundle, &domain).unwrap();
    assert_eq!(sol.u1_anchors[&(0, -1)], Anchor::Origin);
    assert!(dbar_residual(&phi, &sol.psi, &bundle, &grid).unwrap().relative < 1e-6);
    // m = 0, k < 1: u² from the rim
    let bundle = WeightedLineBundle::new(0.5, 2.0).unwrap();
    let u2 = single_mode((0, 0), 1.0, AxisFn::bump(3.0, 1.0), AxisFn::bump(2.6, 0.9));
    let phi = FourierForm::dbar_of_zero_one(&Modes::new(), &u2).unwrap();
    let sol = solve_dbar_02(&phi, &bundle, &domain).unwrap();
    assert_eq!(sol.u2_anchors[&(0, 0)], Anchor::Rim);
    assert!(dbar_residual(&phi, &sol.psi, &bundle, &grid).unwrap().relative < 1e-6);
}

#[test]
fn zero_data_zero_solution() {
    let bundle = WeightedLineBundle::new(0.0, -1.0).unwrap();
    let phi = FourierForm::ZeroTwo(Modes::new());
    let sol = solve_dbar_02(&phi, &bundle, &Polydisc::default()).unwrap();
    assert!(sol.psi.is_zero());
    let bound = verify_bound(&phi, &sol.psi, &bundle, &Polydisc::default().grid()).unwrap();
    assert_eq!(bound.constant(), BoundConstant::Undefined);
}

#[test]
fn integrability_examples() {
    let grid = Polydisc::default().grid();
    // exact gradient of conj(t₁ t₂) times a bump
    let u = single_mode((-1, -1), 1.0, AxisFn::Product(vec![AxisFn::power(1), AxisFn::bump(3.0, 1.0)]), AxisFn::Product(vec![AxisFn::power(1), AxisFn::bump(2.5, 1.0)]));
    let phi = FourierForm::dbar_of_function(&u).unwrap();
    let rep = check_integrability(&phi, &grid, 1e-8).unwrap();
    assert!(rep.compatible, "{rep:?}");
    // a bump in f¹ alone is not closed
    let phi = FourierForm::ZeroOne { f1: single_mode((1, 0), 1.0, AxisFn::bump(3.0, 1.0), AxisFn::bump(3.0, 1.0)), f2: Modes::new() };
    assert!(!check_integrability(&phi, &grid, 1e-8).unwrap().compatible);
}

#[test]
fn single_mode_pair_from_the_radial_identity() {
    // f¹_{m+1,n} = a'(r₁)·r₂ⁿ·g, f²_{m,n+1} = r₁^m·… built so that
    // ∂_{r₂}(r₁^{-m}r₂^{-n}f¹) = ∂_{r₁}(r₁^{-m}r₂^{-n}f²) holds mode-wise:
    // take F = r₁^m r₂^n B(r₁)C(r₂), f¹ = ½ r₁^m r₂^n B'C, f² = ½ r₁^m r₂^n B C'.
    let (m, n) = (2, -1);
    let b = AxisFn::bump(3.0, 1.0);
    let c = AxisFn::bump(2.5, 0.8);
    let rm = AxisFn::power(m);
    let rn = AxisFn::power(n);
    let db = AxisFn::Twisted { base: Box::new(b.clone()), twist: 0 };
    let dc = AxisFn::Twisted { base: Box::new(c.clone()), twist: 0 };
    let f1 = single_mode((m + 1, n), 0.5, AxisFn::Product(vec![rm.clone(), db]), AxisFn::Product(vec![rn.clone(), c]));
    let f2 = single_mode((m, n + 1), 0.5, AxisFn::Product(vec![rm, b]), AxisFn::Product(vec![rn, dc]));
    let phi = FourierForm::ZeroOne { f1, f2 };
    let rep = check_integrability(&phi, &Polydisc::default().grid(), 1e-8).unwrap();
    assert!(rep.compatible && rep.relative_residual < 1e-8, "{rep:?}");
}

#[test]
fn data_reaching_the_rim_keep_the_residual_small() {
    let axis = || AxisFn::bump(2.0, 1.1174538377336047);
    let bundle = WeightedLineBundle::new(-2.0, -2.0).unwrap();
    let grid = Polydisc::default().grid();
    let phi = FourierForm::dbar_of_function(&single_mode((0, 0), 1.0, axis(), axis())).unwrap();
    let u = solve(&phi, &bundle);
    let res = dbar_residual(&phi, &u, &bundle, &grid).unwrap();
    assert!(res.relative < 1e-6, "{res:?}");
    let phi = FourierForm::ZeroTwo(single_mode((1, 0), 1.0, axis(), axis()));
    let psi = solve(&phi, &bundle);
    let res = dbar_residual(&phi, &psi, &bundle, &grid).unwrap();
    assert!(res.relative < 1e-6, "{res:?}");
}
