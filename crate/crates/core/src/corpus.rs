//! Standard monodromy data used by the tests, the acceptance suite and the
//! command line tool.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{L2Error, Sl2Error};
use crate::l2complex::{end_datum, MonodromyDatum};
use crate::sl2rep::{build_model, deligne_grading, FactorKind, Model};
use crate::{q, qi, to_qi, Direction, Field, Matrix, Qi, QiFiltration, QiMatrix, Rational};

pub fn trivial() -> MonodromyDatum {
    let z = QiMatrix::zeros(1, 1);
    let mut d = MonodromyDatum::new("trivial", z.clone(), z.clone(), 0).expect("valid");
    d.gradings = Some([z.clone(), z]);
    d
}

/// Rank one, weight 2: the Tate twist `H(1)` with trivial monodromy.
pub fn tate_twist() -> MonodromyDatum {
    let mut d = trivial();
    d.name = "tate-1".into();
    d.weight = 2;
    d
}

/// Rank 2, `N₁` a Jordan block, `N₂ = 0`.
pub fn jordan_one_axis() -> MonodromyDatum {
    let n = to_qi(&Matrix::from_int_rows(&[&[0, 1], &[0, 0]]));
    let mut d = MonodromyDatum::new("jordan-2-axis-1", n, QiMatrix::zeros(2, 2), 1).expect("valid");
    let y = QiMatrix::diagonal(&[qi(-1, 0), qi(1, 0)]);
    d.gradings = Some([y.clone(), y]);
    d
}

pub fn model_datum(kind: FactorKind) -> Result<MonodromyDatum, L2Error> {
    let model = build_model(kind)?;
    let name = format!("{kind:?}");
    MonodromyDatum::from_action(name, &model.action, kind.weight())
}

/// The corpus shared by the stalk/truncated comparison: trivial, Tate, a
/// Jordan block along one axis, `S(1)⊗S(1)`, `S(2)⊗S(1)` and the `End`
/// data of the nontrivial ones.
pub fn standard() -> Vec<MonodromyDatum> {
    let mut out = vec![trivial(), tate_twist(), jordan_one_axis()];
    for kind in [FactorKind::symmetric(0, 1, 1), FactorKind::symmetric(0, 2, 1)] {
        out.push(model_datum(kind).expect("model"));
    }
    let ends: Vec<MonodromyDatum> = out[2..].iter().map(|d| end_datum(d).expect("end")).collect();
    out.extend(ends);
    out
}

/// A nilpotent orbit from a symmetric model in general position:
/// `Nᵢ = λᵢ g Ñᵢ⁻ g⁻¹`, `F = g F_lim`, and `Y_total` the Deligne grading of
/// `(W(N₁+N₂)[-k], F)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderingCase {
    pub name: String,
    pub n: [QiMatrix; 2],
    pub y_total: QiMatrix,
    pub f: QiFiltration,
    pub weight: i64,
}

pub fn general_position_case(model: &Model, lambda: [Rational; 2], g: &QiMatrix) -> Result<OrderingCase, Sl2Error> {
    let g_inv = g.inverse().ok_or(Sl2Error::InvalidParameters("singular change of basis".into()))?;
    let a = &model.action;
    let conj = |x: &QiMatrix, s: &Rational| (&(g * x) * &g_inv).scale(&Qi::from_rational(s.clone()));
    let n = [conj(&a.n_minus[0], &lambda[0]), conj(&a.n_minus[1], &lambda[1])];
    let f = transform_filtration(&model.limit_hodge_filtration(), g);
    let weight = model.hodge.weight();
    let y_total = deligne_grading(&(&n[0] + &n[1]), &f, weight)?;
    Ok(OrderingCase { name: format!("{:?} lambda=({}, {})", model.kind, lambda[0], lambda[1]), n, y_total, f, weight })
}

/// `count` symmetric models with `m, n ≤ 2` in general position.
pub fn ordering_cases(count: usize, seed: u64) -> Vec<OrderingCase> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes = [(1, 1), (2, 1), (1, 2), (2, 2), (1, 0), (0, 2)];
    (0..count)
        .map(|i| {
            let (m, n) = shapes[i % shapes.len()];
            let model = build_model(FactorKind::symmetric(0, m, n)).expect("model");
            let g = crate::random::unimodular(model.hodge.ambient(), 2 * model.hodge.ambient(), &mut rng);
            let lambda = [q(rng.gen_range(1..=5), rng.gen_range(1..=3)), q(rng.gen_range(1..=5), rng.gen_range(1..=3))];
            general_position_case(&model, lambda, &g).expect("unimodular")
        })
        .collect()
}

fn transform_filtration(f: &QiFiltration, g: &QiMatrix) -> QiFiltration {
    let steps = f.steps().iter().map(|(p, s)| (*p, s.image_under(g))).collect();
    QiFiltration::new(f.ambient(), Direction::Decreasing, steps).expect("nested")
}

/// Orthogonal direct sum of the models of `kinds`, moved by `g` if given.
pub fn assembled_model(kinds: &[FactorKind], g: Option<&QiMatrix>) -> Result<Model, Sl2Error> {
    let (first, rest) = kinds.split_first().ok_or_else(|| Sl2Error::InvalidParameters("no factors".into()))?;
    let mut model = build_model(*first)?;
    for k in rest {
        model = model.direct_sum(&build_model(*k)?)?;
    }
    match g {
        Some(g) => model.transform(g),
        None => Ok(model),
    }
}

/// Factor kinds of weight `weight` with `m, n ≤ 2`, and for `E(p,q)` with
/// `-1 ≤ q < p ≤ 3`.
pub fn kinds_of_weight(weight: i64) -> Vec<FactorKind> {
    let mut out = Vec::new();
    for m in 0..=2usize {
        for n in 0..=2usize {
            let rest = weight - (m + n) as i64;
            if rest % 2 == 0 {
                out.push(FactorKind::symmetric(rest / 2, m, n));
            }
            for q in -1..=3 {
                let p = rest - q;
                if p > q && p <= 3 {
                    out.push(FactorKind::e_type(p, q, m, n));
                }
            }
        }
    }
    out
}

/// Random list of factor kinds of one weight with total dimension at most
/// `max_dim`; repeats allowed.
pub fn random_factor_list<R: rand::Rng>(max_dim: usize, rng: &mut R) -> Vec<FactorKind> {
    let weight = rng.gen_range(0..=3);
    let pool: Vec<FactorKind> = kinds_of_weight(weight).into_iter().filter(|k| k.dim() <= max_dim).collect();
    let mut kinds = Vec::new();
    let mut dim = 0;
    for _ in 0..rng.gen_range(1..=4) {
        let k = pool[rng.gen_range(0..pool.len())];
        if dim + k.dim() <= max_dim {
            dim += k.dim();
            kinds.push(k);
        }
    }
    if kinds.is_empty() {
        kinds.push(pool[0]);
    }
    kinds
}
