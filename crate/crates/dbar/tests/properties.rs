use limithodge_dbar::form::single_mode;
use limithodge_dbar::*;
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![-2.0, -1.0, 0.0, 0.5, 2.0])
}

fn bump_axis() -> impl Strategy<Value = AxisFn> {
    (2.0f64..4.0, 0.6f64..1.2).prop_map(|(c, w)| AxisFn::bump(c, w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn residual_contract_for_bump_potentials(
        m in -8i32..=8, n in -8i32..=8, k in exponent(), l in exponent(),
        a in bump_axis(), b in bump_axis(), coef in -2.0f64..2.0,
    ) {
        prop_assume!(coef.abs() > 1e-3);
        let bundle = WeightedLineBundle::new(k, l).unwrap();
        let phi = FourierForm::dbar_of_function(&single_mode((m, n), coef, a, b)).unwrap();
        let sol = solve_dbar_01(&phi, &bundle, &Polydisc::default()).unwrap();
        let grid = Polydisc::default().grid();
        let res = dbar_residual(&phi, &sol.u, &bundle, &grid).unwrap();
        prop_assert!(res.relative < 1e-6, "{:?}", res);
        let bound = verify_bound(&phi, &sol.u, &bundle, &grid).unwrap();
        prop_assert!(bound.stable(0.1), "{:?}", bound);
    }

    #[test]
    fn residual_contract_for_top_forms(
        m in -8i32..=8, n in -8i32..=8, k in exponent(), l in exponent(),
        a in bump_axis(), b in bump_axis(),
    ) {
        let bundle = WeightedLineBundle::new(k, l).unwrap();
        let phi = FourierForm::ZeroTwo(single_mode((m, n), 1.0, a, b));
        let sol = solve_dbar_02(&phi, &bundle, &Polydisc::default()).unwrap();
        let res = dbar_residual(&phi, &sol.psi, &bundle, &Polydisc::default().grid()).unwrap();
        prop_assert!(res.relative < 1e-6, "{:?}", res);
    }

    #[test]
    fn solver_is_linear(
        m in -4i32..=4, n in -4i32..=4, a in bump_axis(), b in bump_axis(), scale in 0.1f64..5.0,
    ) {
        let bundle = WeightedLineBundle::new(0.5, -1.0).unwrap();
        let domain = Polydisc::default();
        let phi = FourierForm::dbar_of_function(&single_mode((m, n), 1.0, a.clone(), b.clone())).unwrap();
        let scaled = FourierForm::dbar_of_function(&single_mode((m, n), scale, a, b)).unwrap();
        let FourierForm::Function(u) = solve_dbar_01(&phi, &bundle, &domain).unwrap().u else { unreachable!() };
        let FourierForm::Function(v) = solve_dbar_01(&scaled, &bundle, &domain).unwrap().u else { unreachable!() };
        for (s1, s2) in [(2.5, 3.0), (3.3, 2.2), (1.5, 4.5)] {
            let (x, y) = (u[&(m, n)].eval(s1, s2), v[&(m, n)].eval(s1, s2));
            prop_assert!((scale * x - y).abs() <= 1e-12 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn exact_gradients_are_compatible(m in -8i32..=8, n in -8i32..=8, a in bump_axis(), b in bump_axis()) {
        let phi = FourierForm::dbar_of_function(&single_mode((m, n), 1.0, a, b)).unwrap();
        let rep = check_integrability(&phi, &Polydisc::default().grid(), 1e-8).unwrap();
        prop_assert!(rep.compatible, "{:?}", rep);
    }
}
