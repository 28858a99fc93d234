//! Property tests for the structural invariants of the core crate.

use limithodge_core::corpus;
use limithodge_core::exactla::{self, Direction, Filtration, Matrix, Quotient, Subspace};
use limithodge_core::growth::{hodge_norm_class, ordering_change_both, NilpotentPair, Region};
use limithodge_core::hodgestruct::{deligne_bigrading, filtration_to_bigrading, is_positive_definite_hermitian, weil_and_metric};
use limithodge_core::l2complex::{
    build_stalk_complex, classify_l2, hypercohomology, theta_image_check, truncated_global_model, FormDegree, MonodromyDatum,
    StalkMode, Weights,
};
use limithodge_core::random;
use limithodge_core::sl2rep::{alpha_basis, decompose_theorem6, sl2_pair_for_ordering, FactorKind, Model};
use limithodge_core::weightfilt::{cone_independence, monodromy_weight_filtration};
use limithodge_core::{q, Qi, QiMatrix, Rational};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec(-3i64..=3, rows * cols)
        .prop_map(move |xs| Matrix::from_fn(rows, cols, |r, c| q(xs[r * cols + c], 1)))
}

fn span(ambient: usize) -> impl Strategy<Value = Subspace<Rational>> {
    (0..=ambient).prop_flat_map(move |k| int_matrix(k, ambient)).prop_map(move |m| Subspace::span(ambient, &m.to_rows()))
}

/// A direct sum of models of one weight with total dimension at most 8,
/// optionally moved by a seeded unimodular change of basis.
fn model() -> impl Strategy<Value = Model> {
    (0i64..=2, prop::collection::vec(any::<prop::sample::Index>(), 1..=3), any::<u64>(), any::<bool>()).prop_filter_map(
        "dimension cap",
        |(weight, picks, seed, conjugate)| {
            let pool: Vec<FactorKind> = corpus::kinds_of_weight(weight).into_iter().filter(|k| k.dim() <= 6).collect();
            let kinds: Vec<FactorKind> = picks.iter().map(|i| *i.get(&pool)).collect();
            let dim: usize = kinds.iter().map(FactorKind::dim).sum();
            if dim > 8 {
                return None;
            }
            let g: Option<QiMatrix> = conjugate.then(|| random::unimodular(dim, 3 * dim, &mut ChaCha8Rng::seed_from_u64(seed)));
            corpus::assembled_model(&kinds, g.as_ref()).ok()
        },
    )
}

fn symmetric_model() -> impl Strategy<Value = Model> {
    (0usize..=2, 0usize..=2, -1i64..=1).prop_map(|(m, n, l)| corpus::assembled_model(&[FactorKind::symmetric(l, m, n)], None).unwrap())
}

fn is_zero_vec(v: &[Qi]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn weights() -> impl Strategy<Value = Weights> {
    (-4i64..=4, -6i64..=6, prop::option::of(-4i64..=4)).prop_map(|(a, b, c)| Weights::new(a, b, c))
}

fn component() -> impl Strategy<Value = FormDegree> {
    prop::sample::select(FormDegree::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_nullity(rows in 0usize..=5, cols in 0usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Matrix::<Rational>::from_fn(rows, cols, |_, _| q(rng.gen_range(-2..=2), 1));
        prop_assert_eq!(m.kernel().dim() + m.image().dim(), cols);
        prop_assert_eq!(m.image().dim(), m.rank());
    }

    #[test]
    fn intersection_and_sum_dimensions(a in span(5), b in span(5)) {
        let meet = exactla::intersect(&a, &b).unwrap();
        let join = exactla::sum(&a, &b).unwrap();
        prop_assert_eq!(a.dim() + b.dim(), meet.dim() + join.dim());
        prop_assert!(meet.is_subspace_of(&a) && meet.is_subspace_of(&b));
        prop_assert!(a.is_subspace_of(&join) && b.is_subspace_of(&join));
    }

    #[test]
    fn canonical_basis_is_idempotent(s in span(5)) {
        let again = Subspace::span(s.ambient(), s.basis());
        prop_assert_eq!(&again, &s);
        prop_assert_eq!(Subspace::span(s.ambient(), again.basis()), again);
    }

    #[test]
    fn weight_filtration_is_rebuilt_from_its_steps(d in 1usize..=6, seed in any::<u64>()) {
        let n = random::conjugated_nilpotent::<Rational, _>(d, &mut ChaCha8Rng::seed_from_u64(seed));
        let w = monodromy_weight_filtration(&n, 0).unwrap();
        let steps = w.centered().steps().to_vec();
        let rebuilt = Filtration::new(d, Direction::Increasing, steps).unwrap();
        prop_assert_eq!(&rebuilt, w.centered());
        prop_assert_eq!(w.graded_dims().values().sum::<usize>(), d);
        let again = monodromy_weight_filtration(&n, 0).unwrap();
        prop_assert_eq!(again.centered(), w.centered());
    }

    #[test]
    fn weight_filtration_is_conjugation_equivariant(blocks in prop::collection::vec(1usize..=3, 1..=3), seed in any::<u64>()) {
        let j = random::jordan_nilpotent::<Rational>(&blocks);
        let d = j.rows();
        let g = random::unimodular::<Rational, _>(d, 3 * d, &mut ChaCha8Rng::seed_from_u64(seed));
        let g_inv = g.inverse().unwrap();
        let w = monodromy_weight_filtration(&j, 0).unwrap();
        let wg = monodromy_weight_filtration(&(&(&g * &j) * &g_inv), 0).unwrap();
        for l in -4..=4 {
            prop_assert_eq!(wg.at(l), w.at(l).image_under(&g));
        }
    }

    #[test]
    fn shift_reindexes(d in 1usize..=5, seed in any::<u64>(), k in -4i64..=4) {
        let n = random::conjugated_nilpotent::<Rational, _>(d, &mut ChaCha8Rng::seed_from_u64(seed));
        let w = monodromy_weight_filtration(&n, 0).unwrap();
        let shifted = w.shift(-k);
        for l in -6..=6 {
            prop_assert_eq!(shifted.at(l), w.at(l + k));
        }
    }

    #[test]
    fn classify_l2_is_monotone(c in component(), n1 in 0i64..=3, n2 in 0i64..=3, w in weights(), step in 0usize..4) {
        let base = classify_l2(c, (n1, n2), w).unwrap();
        let (orders, moved) = match step {
            0 => ((n1 + 1, n2), w),
            1 => ((n1, n2 + 1), w),
            2 => ((n1, n2), Weights::new(w.first - 1, w.total - 1, w.second)),
            _ => ((n1, n2), Weights::new(w.first, w.total - 1, w.second.map(|s| s - 1))),
        };
        let better = classify_l2(c, orders, moved).unwrap();
        if base.global() {
            prop_assert!(better.global(), "{:?} -> {:?}", base, better);
        }
    }

    #[test]
    fn classify_l2_global_verdict_is_symmetric(c in component(), n1 in 0i64..=2, n2 in 0i64..=2, l1 in -3i64..=3, l1p in -3i64..=3, total in -4i64..=4) {
        let forward = classify_l2(c, (n1, n2), Weights::new(l1, total, Some(l1p))).unwrap();
        let swapped = classify_l2(c.swapped(), (n2, n1), Weights::new(l1p, total, Some(l1))).unwrap();
        prop_assert_eq!(forward.global(), swapped.global());
        prop_assert_eq!(forward.d_eps, swapped.d_eps_prime.unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn model_brackets_hold(m in model()) {
        prop_assert!(m.action.verify().is_ok());
    }

    #[test]
    fn decomposition_is_invariant_and_orthogonal(m in model()) {
        let d = m.hodge.ambient();
        let factors = decompose_theorem6(&m.hodge, &m.action, Some(&m.polarization)).unwrap();
        prop_assert_eq!(factors.iter().map(|f| f.kind.dim()).sum::<usize>(), d);
        let spans: Vec<_> = factors.iter().map(|f| f.span()).collect();
        for s in &spans {
            for op in m.action.operators() {
                prop_assert!(s.is_invariant_under(op));
            }
        }
        for (i, a) in spans.iter().enumerate() {
            for b in &spans[i + 1..] {
                for u in a.basis() {
                    for v in b.basis() {
                        prop_assert!(m.polarization.eval(u, v).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn alpha_vectors_sit_in_the_expected_weights(m in symmetric_model()) {
        let factors = decompose_theorem6(&m.hodge, &m.action, None).unwrap();
        let alpha = alpha_basis(&factors[0], &m.action).unwrap();
        let n1 = &m.action.n_minus[0];
        let w1 = monodromy_weight_filtration(n1, 0).unwrap();
        let w12 = monodromy_weight_filtration(&m.action.total_n_minus(), 0).unwrap();
        for (&(k, l), v) in &alpha.vectors {
            let (a, b) = alpha.expected_weights(k, l);
            prop_assert!(!is_zero_vec(v));
            prop_assert_eq!(w1.weight_of(v), Some(a));
            prop_assert_eq!(w12.weight_of(v), Some(b));
            let lowered = n1.mul_vec(v);
            match alpha.vectors.get(&(k.wrapping_sub(1), l)) {
                Some(w) if k > 0 => prop_assert_eq!(&lowered, w),
                _ => prop_assert!(is_zero_vec(&lowered)),
            }
        }
    }

    #[test]
    fn cone_independence_on_models(m in model(), seed in any::<u64>()) {
        let ns = m.action.n_minus.to_vec();
        let report = cone_independence(&ns, 3, seed).unwrap();
        prop_assert!(report.independent());
    }

    #[test]
    fn bigrading_round_trip(m in model()) {
        let f = m.hodge.hodge_filtration();
        let back = filtration_to_bigrading(&f, m.hodge.weight()).unwrap();
        prop_assert_eq!(back, m.hodge);
    }

    #[test]
    fn hodge_metric_is_positive(m in model()) {
        let (_, h) = weil_and_metric(&m.hodge, &m.polarization).unwrap();
        prop_assert!(is_positive_definite_hermitian(&h));
    }

    #[test]
    fn deligne_splitting_is_compatible_with_monodromy(m in model()) {
        let mhs = m.limit_mhs().unwrap();
        let split = deligne_bigrading(&mhs);
        prop_assert_eq!(split.values().map(|s| s.dim()).sum::<usize>(), m.hodge.ambient());
        for n in &m.action.n_minus {
            for (&(p, r), s) in &split {
                let target = split.get(&(p - 1, r - 1)).cloned().unwrap_or_else(|| Subspace::zero(s.ambient()));
                prop_assert!(s.image_under(n).is_subspace_of(&target), "I^({},{})", p, r);
            }
        }
    }

    #[test]
    fn weight_filtrations_match_the_graded_higgs_field(m in model()) {
        let mhs = m.limit_mhs().unwrap();
        let split = deligne_bigrading(&mhs);
        let d = m.hodge.ambient();
        let (lo, hi) = (mhs.f.min_index().unwrap(), mhs.f.max_index().unwrap());
        let levels: Vec<i64> = (lo..=hi).rev().collect();
        let graded: Vec<Quotient<Qi>> = levels.iter().map(|&p| mhs.f.graded(p)).collect();
        let offsets: Vec<usize> = graded.iter().scan(0, |acc, g| { let o = *acc; *acc += g.dim(); Some(o) }).collect();
        // Identification of the sum of the graded pieces with the space,
        // lifting each piece into the Deligne subspaces of that level.
        let mut lift_columns = Vec::new();
        for (&p, g) in levels.iter().zip(&graded) {
            let piece: Vec<Vec<Qi>> = split.iter().filter(|((a, _), _)| *a == p).flat_map(|(_, s)| s.basis().to_vec()).collect();
            prop_assert_eq!(piece.len(), g.dim());
            if piece.is_empty() {
                continue;
            }
            let basis = Matrix::from_columns(d, &piece);
            let classes: Vec<Vec<Qi>> = piece.iter().map(|v| g.class_of(v).unwrap()).collect();
            let inverse = Matrix::from_columns(g.dim(), &classes).inverse().expect("projection is bijective");
            lift_columns.extend((&basis * &inverse).columns());
        }
        let lift = Matrix::from_columns(d, &lift_columns);
        let higgs = |n: &QiMatrix| {
            let mut theta = QiMatrix::zeros(d, d);
            for i in 0..levels.len().saturating_sub(1) {
                let block = graded[i].induced_map(n, &graded[i + 1]).unwrap();
                for r in 0..block.rows() {
                    for c in 0..block.cols() {
                        theta[(offsets[i + 1] + r, offsets[i] + c)] = block[(r, c)].clone();
                    }
                }
            }
            theta
        };
        let [n1, n2] = &m.action.n_minus;
        let (t1, t2) = (higgs(n1), higgs(n2));
        for (n, theta) in [(n1.clone(), t1.clone()), (n1 + n2, &t1 + &t2)] {
            let w = monodromy_weight_filtration(&n, 0).unwrap();
            let w_graded = monodromy_weight_filtration(&theta, 0).unwrap();
            for l in -(d as i64)..=d as i64 {
                prop_assert_eq!(w_graded.at(l).image_under(&lift), w.at(l));
            }
        }
    }

    #[test]
    fn norm_classes_agree_across_orderings(m in symmetric_model(), seed in any::<u64>()) {
        let [n1, n2] = m.action.n_minus.clone();
        let forward = NilpotentPair::new(&n1, &n2).unwrap();
        let swapped = NilpotentPair::new(&n2, &n1).unwrap();
        let d = m.hodge.ambient();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<Qi> = (0..d).map(|_| limithodge_core::qi(rng.gen_range(-2..=2), rng.gen_range(-1..=1))).collect();
        prop_assume!(!is_zero_vec(&v));
        let a = hodge_norm_class(&forward, &forward.section(v.clone(), None).unwrap(), Region::DEpsPrime).unwrap();
        let b = hodge_norm_class(&swapped, &swapped.section(v, None).unwrap(), Region::DEps).unwrap();
        prop_assert_eq!(a.log_exps, (b.log_exps.1, b.log_exps.0));
        prop_assert_eq!(a.t_orders, (b.t_orders.1, b.t_orders.0));
    }

    #[test]
    fn model_frames_span_with_their_stated_weights(m in model()) {
        let datum = MonodromyDatum::from_action("model", &m.action, m.hodge.weight()).unwrap();
        let frame = datum.frame.expect("frame");
        let vectors: Vec<Vec<Qi>> = frame.iter().map(|(v, _)| v.clone()).collect();
        prop_assert_eq!(Subspace::span(datum.n[0].rows(), &vectors).dim(), frame.len());
        let pair = NilpotentPair::new(&datum.n[0], &datum.n[1]).unwrap();
        for (v, w) in &frame {
            prop_assert_eq!(pair.weights_of(v), Some((w.first, w.total)));
            prop_assert_eq!(pair.second_weight_of(v), w.second);
        }
    }

    #[test]
    fn higgs_field_images_are_bounded(m in model()) {
        let datum = MonodromyDatum::from_action("model", &m.action, m.hodge.weight()).unwrap();
        prop_assert!(theta_image_check(&datum).unwrap().passes());
    }

    #[test]
    fn ordering_change_is_triangular(seed in 0u64..1000) {
        for case in corpus::ordering_cases(2, seed) {
            let a = sl2_pair_for_ordering(&case.n[0], &case.n[1], &case.y_total).unwrap();
            let b = sl2_pair_for_ordering(&case.n[1], &case.n[0], &case.y_total).unwrap();
            for (x, y) in ordering_change_both(&a, &b).unwrap() {
                prop_assert!(x.triangular() && y.triangular(), "{}", case.name);
            }
        }
    }

    #[test]
    fn stalk_complex_is_well_defined(m in model()) {
        let datum = MonodromyDatum::from_action("model", &m.action, m.hodge.weight()).unwrap();
        let c = build_stalk_complex(&datum, StalkMode::LocalSystem).unwrap();
        let d0 = c.d0().expect("d0 lands in K1");
        let d1 = c.d1().expect("d1 lands in K2");
        if d0.rows() > 0 && d0.cols() > 0 && d1.rows() > 0 {
            prop_assert!((&d1 * &d0).is_zero());
        }
        let (a, b, e) = c.dims();
        prop_assert_eq!(c.euler_characteristic(), a as i64 - b as i64 + e as i64);
        let h = hypercohomology(&c).unwrap();
        prop_assert_eq!(h[0] as i64 - h[1] as i64 + h[2] as i64, c.euler_characteristic());
    }
}

#[test]
fn stalk_and_truncated_models_agree_on_the_corpus() {
    for datum in corpus::standard() {
        let c = build_stalk_complex(&datum, StalkMode::LocalSystem).unwrap();
        let h = hypercohomology(&c).unwrap();
        for degree in 2..=4 {
            assert_eq!(truncated_global_model(&datum, degree, StalkMode::LocalSystem).unwrap(), h, "{} at degree {degree}", datum.name);
        }
    }
}
