//! Algebraic L² classification of monodromized generators and the finite
//! models of the L² logarithmic Dolbeault complex near the origin.

use std::collections::BTreeMap;

use crate::error::{L2Error, WeightError};
use crate::exactla::{Field, Matrix, Subspace};
use crate::growth::NilpotentPair;
use crate::sl2rep::{grading_of, joint_eigenspaces, Sl2PairAction};
use crate::weightfilt::monodromy_weight_filtration;
use crate::{Qi, QiMatrix, QiSubspace};

/// Which `dtᵢ/tᵢ` factors a form component carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FormDegree {
    pub dt1: bool,
    pub dt2: bool,
}

impl FormDegree {
    pub const FUNCTION: FormDegree = FormDegree { dt1: false, dt2: false };
    pub const DT1: FormDegree = FormDegree { dt1: true, dt2: false };
    pub const DT2: FormDegree = FormDegree { dt1: false, dt2: true };
    pub const DT12: FormDegree = FormDegree { dt1: true, dt2: true };
    pub const ALL: [FormDegree; 4] = [Self::FUNCTION, Self::DT1, Self::DT2, Self::DT12];

    pub fn swapped(self) -> Self {
        FormDegree { dt1: self.dt2, dt2: self.dt1 }
    }

    pub fn label(&self) -> &'static str {
        match (self.dt1, self.dt2) {
            (false, false) => "{}",
            (true, false) => "{1}",
            (false, true) => "{2}",
            (true, true) => "{1,2}",
        }
    }
}

/// Centered weights of a flat generator: in `W(N₁)`, `W(N₁+N₂)` and,
/// when known, `W(N₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Weights {
    pub first: i64,
    pub total: i64,
    pub second: Option<i64>,
}

impl Weights {
    pub fn new(first: i64, total: i64, second: Option<i64>) -> Self {
        Weights { first, total, second }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct L2Verdict {
    pub component: FormDegree,
    pub t_orders: (u32, u32),
    pub weights: Weights,
    pub d_eps: bool,
    /// `None` when the `W(N₂)` weight is not supplied.
    pub d_eps_prime: Option<bool>,
}

impl L2Verdict {
    /// Conjunction of the regional verdicts; falls back to `D_eps` alone
    /// when the second ordering is unknown.
    pub fn global(&self) -> bool {
        self.d_eps && self.d_eps_prime.unwrap_or(true)
    }
}

fn direction_passes(order: u32, log_exp: i64, has_dt: bool) -> bool {
    order >= 1 || log_exp <= if has_dt { -2 } else { 0 }
}

/// Whether `t₁^{n₁} t₂^{n₂} (⋀ dtⱼ/tⱼ, j ∈ J) ⊗ ṽ` is square integrable near
/// the origin, for a flat generator `v` with the given weights.
pub fn classify_l2(component: FormDegree, t_orders: (i64, i64), weights: Weights) -> Result<L2Verdict, L2Error> {
    if t_orders.0 < 0 || t_orders.1 < 0 {
        return Err(L2Error::NegativeOrder);
    }
    let (n1, n2) = (t_orders.0 as u32, t_orders.1 as u32);
    let (l1, l2) = (weights.first, weights.total);
    let d_eps = direction_passes(n1, l1, component.dt1) && direction_passes(n2, l2 - l1, component.dt2);
    let d_eps_prime = weights
        .second
        .map(|l1p| direction_passes(n2, l1p, component.dt2) && direction_passes(n1, l2 - l1p, component.dt1));
    Ok(L2Verdict { component, t_orders: (n1, n2), weights, d_eps, d_eps_prime })
}

/// Functions, orders `(0,0)`, on `D_eps` only.
pub fn classify_weights_d_eps(weights: (i64, i64)) -> bool {
    weights.0 <= 0 && weights.1 - weights.0 <= 0
}

/// Commuting nilpotents with optional gradings `(Y_first, Y_total)`:
/// `Y_total` grades `W(N₁+N₂)` with `[Y_total, Nᵢ] = -2Nᵢ`, `Y_first` grades
/// `W(N₁)` with `[Y_first, N₁] = -2N₁` and commutes with `Y_total`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyDatum {
    pub name: String,
    pub n: [QiMatrix; 2],
    pub weight: i64,
    pub gradings: Option<[QiMatrix; 2]>,
    /// Flat generators with their predicted weights, used in Hodge bundle
    /// mode.
    pub frame: Option<Vec<(Vec<Qi>, Weights)>>,
}

impl MonodromyDatum {
    pub fn new(name: impl Into<String>, n1: QiMatrix, n2: QiMatrix, weight: i64) -> Result<Self, L2Error> {
        if n1.rows() != n2.rows() || !n1.is_square() || !n2.is_square() {
            return Err(L2Error::IllFormed("nilpotents of different sizes".into()));
        }
        if !n1.commutes_with(&n2) {
            return Err(L2Error::NonCommuting);
        }
        if !n1.is_nilpotent() || !n2.is_nilpotent() {
            return Err(WeightError::NotNilpotent.into());
        }
        Ok(MonodromyDatum { name: name.into(), n: [n1, n2], weight, gradings: None, frame: None })
    }

    /// Datum of an sl2 pair: `Nᵢ = Ñᵢ⁻`, gradings from `Y`, and the α frame
    /// of every symmetric factor.
    pub fn from_action(name: impl Into<String>, action: &Sl2PairAction, weight: i64) -> Result<Self, L2Error> {
        let mut datum = MonodromyDatum::new(name, action.n_minus[0].clone(), action.n_minus[1].clone(), weight)?;
        datum.gradings = Some([action.y[0].clone(), action.total_y()]);
        let frames = crate::growth::alpha_frames(action)?;
        let frame = frames
            .iter()
            .flat_map(|a| {
                a.vectors.iter().map(move |(&(k, l), v)| {
                    let (l1, l2) = a.expected_weights(k, l);
                    (v.clone(), Weights::new(l1, l2, Some(2 * l as i64 - a.n as i64)))
                })
            })
            .collect::<Vec<_>>();
        if frame.len() == action.dim() {
            datum.frame = Some(frame);
        }
        Ok(datum)
    }

    pub fn dim(&self) -> usize {
        self.n[0].rows()
    }

    /// Stored gradings, or solved ones.
    pub fn resolved_gradings(&self) -> Result<[QiMatrix; 2], L2Error> {
        if let Some(g) = &self.gradings {
            return Ok(g.clone());
        }
        let [n1, n2] = &self.n;
        let total = n1 + n2;
        let w_total = monodromy_weight_filtration(&total, 0)?;
        let y_total = grading_of(&w_total, &[(n1, -2), (n2, -2)], &[])
            .ok_or_else(|| L2Error::FrameMissing("no grading of W(N1+N2)".into()))?;
        let w_first = monodromy_weight_filtration(n1, 0)?;
        let y_first = grading_of(&w_first, &[(n1, -2)], &[&y_total, n2])
            .or_else(|| grading_of(&w_first, &[(n1, -2)], &[&y_total]))
            .ok_or_else(|| L2Error::FrameMissing("no grading of W(N1)".into()))?;
        Ok([y_first, y_total])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StalkMode {
    /// Generators from a joint eigenbasis of the gradings.
    LocalSystem,
    /// Generators from the datum's frame with its stated weights.
    HodgeBundle,
}

/// `K⁰ → K¹_{dt₁} ⊕ K¹_{dt₂} → K²`, `d⁰ v = (N₁v, N₂v)`,
/// `d¹(a, b) = N₂a - N₁b`.
#[derive(Clone, Debug, PartialEq)]
pub struct StalkComplex {
    pub k0: QiSubspace,
    pub k1_dt1: QiSubspace,
    pub k1_dt2: QiSubspace,
    pub k2: QiSubspace,
    pub n: [QiMatrix; 2],
}

/// Matrix of `f` from `source` to `target` in their canonical coordinates.
fn restricted<T: Field>(
    f: &Matrix<T>,
    source: &Subspace<T>,
    target: &Subspace<T>,
) -> Option<Matrix<T>> {
    let cols: Option<Vec<Vec<T>>> = source.basis().iter().map(|v| target.coordinates(&f.mul_vec(v))).collect();
    Some(Matrix::from_columns(target.dim(), &cols?))
}

impl StalkComplex {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.k0.dim(), self.k1_dt1.dim() + self.k1_dt2.dim(), self.k2.dim())
    }

    pub fn euler_characteristic(&self) -> i64 {
        let (a, b, c) = self.dims();
        a as i64 - b as i64 + c as i64
    }

    /// `d⁰` in coordinates; `None` if it leaves `K¹`.
    pub fn d0(&self) -> Option<QiMatrix> {
        let a = restricted(&self.n[0], &self.k0, &self.k1_dt1)?;
        let b = restricted(&self.n[1], &self.k0, &self.k1_dt2)?;
        Some(a.vstack(&b))
    }

    /// `d¹` in coordinates; `None` if it leaves `K²`.
    pub fn d1(&self) -> Option<QiMatrix> {
        let a = restricted(&self.n[1], &self.k1_dt1, &self.k2)?;
        let b = restricted(&self.n[0], &self.k1_dt2, &self.k2)?;
        Some(a.hstack(&(-&b)))
    }
}

fn classified_span(gens: &[(Vec<Qi>, Weights)], component: FormDegree, orders: (i64, i64), d: usize) -> QiSubspace {
    let passing: Vec<Vec<Qi>> = gens
        .iter()
        .filter(|(_, w)| classify_l2(component, orders, *w).map(|v| v.global()).unwrap_or(false))
        .map(|(v, _)| v.clone())
        .collect();
    QiSubspace::span(d, &passing)
}

/// Flat generators with weights: a joint eigenbasis of the gradings, or the
/// stored frame.
pub fn generators(datum: &MonodromyDatum, mode: StalkMode) -> Result<Vec<(Vec<Qi>, Weights)>, L2Error> {
    match mode {
        StalkMode::HodgeBundle => datum.frame.clone().ok_or_else(|| L2Error::FrameMissing("no frame".into())),
        StalkMode::LocalSystem => {
            let [y_first, y_total] = datum.resolved_gradings()?;
            let pair = NilpotentPair::new(&datum.n[0], &datum.n[1])?;
            let spaces = joint_eigenspaces(&[&y_first, &y_total])?;
            let mut out = Vec::new();
            for space in spaces.values() {
                for v in space.basis() {
                    let (l1, l2) = pair.weights_of(v).expect("nonzero");
                    out.push((v.clone(), Weights::new(l1, l2, pair.second_weight_of(v))));
                }
            }
            Ok(out)
        }
    }
}

fn assemble(datum: &MonodromyDatum, gens: &[(Vec<Qi>, Weights)], orders: (i64, i64)) -> Result<StalkComplex, L2Error> {
    let d = datum.dim();
    let c = StalkComplex {
        k0: classified_span(gens, FormDegree::FUNCTION, orders, d),
        k1_dt1: classified_span(gens, FormDegree::DT1, orders, d),
        k1_dt2: classified_span(gens, FormDegree::DT2, orders, d),
        k2: classified_span(gens, FormDegree::DT12, orders, d),
        n: datum.n.clone(),
    };
    if c.d0().is_none() {
        return Err(L2Error::NotWellDefined("d0 leaves K1".into()));
    }
    if c.d1().is_none() {
        return Err(L2Error::NotWellDefined("d1 leaves K2".into()));
    }
    Ok(c)
}

pub fn build_stalk_complex(datum: &MonodromyDatum, mode: StalkMode) -> Result<StalkComplex, L2Error> {
    let gens = generators(datum, mode)?;
    assemble(datum, &gens, (0, 0))
}

/// Betti numbers of a three-term complex given by its dimensions and maps.
fn three_term_betti(dims: (usize, usize, usize), d0: &QiMatrix, d1: &QiMatrix) -> Result<[usize; 3], L2Error> {
    if d0.rows() > 0 && d1.cols() > 0 && !(d1 * d0).is_zero() {
        return Err(L2Error::IllFormed("d1 d0 != 0".into()));
    }
    let (r0, r1) = (d0.rank(), d1.rank());
    Ok([dims.0 - r0, dims.1 - r0 - r1, dims.2 - r1])
}

pub fn hypercohomology(c: &StalkComplex) -> Result<[usize; 3], L2Error> {
    let d0 = c.d0().ok_or_else(|| L2Error::NotWellDefined("d0".into()))?;
    let d1 = c.d1().ok_or_else(|| L2Error::NotWellDefined("d1".into()))?;
    three_term_betti(c.dims(), &d0, &d1)
}

/// Sections `Σ t₁^i t₂^j (classified generators)` for `i, j ≤ degree`, with
/// the logarithmic connection acting on the block `(i, j)` by
/// `(i + N₁, j + N₂)`.
pub fn truncated_global_model(datum: &MonodromyDatum, degree: usize, mode: StalkMode) -> Result<[usize; 3], L2Error> {
    let gens = generators(datum, mode)?;
    let d = datum.dim();
    let mut total = [0usize; 3];
    for i in 0..=degree {
        for j in 0..=degree {
            let mut block = assemble(datum, &gens, (i as i64, j as i64))?;
            let shift = |n: &QiMatrix, s: usize| n + &QiMatrix::identity(d).scale(&Qi::from_int(s as i64));
            block.n = [shift(&datum.n[0], i), shift(&datum.n[1], j)];
            let d0 = block.d0().ok_or_else(|| L2Error::NotWellDefined(format!("block ({i},{j}) d0")))?;
            let d1 = block.d1().ok_or_else(|| L2Error::NotWellDefined(format!("block ({i},{j}) d1")))?;
            let h = three_term_betti(block.dims(), &d0, &d1)?;
            for r in 0..3 {
                total[r] += h[r];
            }
        }
    }
    Ok(total)
}

/// Cohomology of `H → H² → H` with maps built from `γᵢ - 1`, `γᵢ = exp(Nᵢ)`.
pub fn koszul_cohomology(datum: &MonodromyDatum) -> Result<[usize; 3], L2Error> {
    let d = datum.dim();
    let id = QiMatrix::identity(d);
    let g1 = &datum.n[0].exp_nilpotent()? - &id;
    let g2 = &datum.n[1].exp_nilpotent()? - &id;
    let d0 = g1.vstack(&g2);
    let d1 = g2.hstack(&(-&g1));
    three_term_betti((d, 2 * d, d), &d0, &d1)
}

/// `X ↦ AX - XA` on row-major `End(H)`.
pub fn ad(a: &QiMatrix) -> QiMatrix {
    let id = QiMatrix::identity(a.rows());
    &a.kron(&id) - &id.kron(&a.transpose())
}

/// Row-major vectorization.
pub fn vectorize(a: &QiMatrix) -> Vec<Qi> {
    a.to_rows().into_iter().flatten().collect()
}

/// The induced datum on `End(H)`, weight 0.
pub fn end_datum(datum: &MonodromyDatum) -> Result<MonodromyDatum, L2Error> {
    let mut end = MonodromyDatum::new(format!("End({})", datum.name), ad(&datum.n[0]), ad(&datum.n[1]), 0)?;
    if let Some([a, b]) = &datum.gradings {
        end.gradings = Some([ad(a), ad(b)]);
    }
    Ok(end)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaImageReport {
    /// `ad(Nᵢ)(Nⱼ) = 0` for all `i, j`.
    pub commuting: bool,
    /// Verdict for `Nᵢ` viewed as a flat section of `End(H)`; `None` if
    /// `Nᵢ = 0`.
    pub classes: Vec<Option<L2Verdict>>,
}

impl ThetaImageReport {
    pub fn passes(&self) -> bool {
        self.commuting && self.classes.iter().flatten().all(L2Verdict::global)
    }
}

pub fn theta_image_check(datum: &MonodromyDatum) -> Result<ThetaImageReport, L2Error> {
    let end = end_datum(datum)?;
    let mut commuting = true;
    for i in 0..2 {
        for j in 0..2 {
            commuting &= end.n[i].mul_vec(&vectorize(&datum.n[j])).iter().all(num_traits::Zero::is_zero);
        }
    }
    let pair = NilpotentPair::new(&end.n[0], &end.n[1])?;
    let classes = datum
        .n
        .iter()
        .map(|n| {
            let v = vectorize(n);
            pair.weights_of(&v).map(|(l1, l2)| {
                let w = Weights::new(l1, l2, pair.second_weight_of(&v));
                classify_l2(FormDegree::FUNCTION, (0, 0), w).expect("orders are nonnegative")
            })
        })
        .collect();
    Ok(ThetaImageReport { commuting, classes })
}

/// Finite first-quadrant double complex: `δ` raises `p`, `d` raises `q`,
/// `δ² = d² = 0` and `δd + dδ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleComplex<T> {
    pub dims: BTreeMap<(usize, usize), usize>,
    pub delta: BTreeMap<(usize, usize), Matrix<T>>,
    pub d: BTreeMap<(usize, usize), Matrix<T>>,
}

impl<T: Field> DoubleComplex<T> {
    fn dim(&self, p: usize, q: usize) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    fn map(maps: &BTreeMap<(usize, usize), Matrix<T>>, at: (usize, usize), rows: usize, cols: usize) -> Matrix<T> {
        maps.get(&at).cloned().unwrap_or_else(|| Matrix::zeros(rows, cols))
    }

    fn delta_at(&self, p: usize, q: usize) -> Matrix<T> {
        Self::map(&self.delta, (p, q), self.dim(p + 1, q), self.dim(p, q))
    }

    fn d_at(&self, p: usize, q: usize) -> Matrix<T> {
        Self::map(&self.d, (p, q), self.dim(p, q + 1), self.dim(p, q))
    }

    pub fn check(&self) -> Result<(), L2Error> {
        for &(p, q) in self.dims.keys() {
            for (name, m) in [("delta", self.delta_at(p, q)), ("d", self.d_at(p, q))] {
                let (er, ec) = if name == "delta" { (self.dim(p + 1, q), self.dim(p, q)) } else { (self.dim(p, q + 1), self.dim(p, q)) };
                if m.rows() != er || m.cols() != ec {
                    return Err(L2Error::IllFormed(format!("{name} at ({p},{q}) has the wrong shape")));
                }
            }
            if !(&self.delta_at(p + 1, q) * &self.delta_at(p, q)).is_zero() {
                return Err(L2Error::IllFormed(format!("delta^2 != 0 at ({p},{q})")));
            }
            if !(&self.d_at(p, q + 1) * &self.d_at(p, q)).is_zero() {
                return Err(L2Error::IllFormed(format!("d^2 != 0 at ({p},{q})")));
            }
            let anti = &(&self.delta_at(p, q + 1) * &self.d_at(p, q)) + &(&self.d_at(p + 1, q) * &self.delta_at(p, q));
            if !anti.is_zero() {
                return Err(L2Error::IllFormed(format!("delta d + d delta != 0 at ({p},{q})")));
            }
        }
        Ok(())
    }

    fn max_total(&self) -> usize {
        self.dims.iter().filter(|(_, &n)| n > 0).map(|(&(p, q), _)| p + q).max().unwrap_or(0)
    }

    /// Betti numbers of the total complex with `D = δ + d`.
    pub fn total_cohomology(&self) -> Result<Vec<usize>, L2Error> {
        self.check()?;
        let top = self.max_total();
        let pieces = |n: usize| -> Vec<(usize, usize)> { (0..=n).map(|p| (p, n - p)).collect() };
        let total_dim = |n: usize| pieces(n).iter().map(|&(p, q)| self.dim(p, q)).sum::<usize>();
        let differential = |n: usize| -> Matrix<T> {
            let mut m = Matrix::zeros(total_dim(n + 1), total_dim(n));
            let mut col = 0;
            for (p, q) in pieces(n) {
                let src = self.dim(p, q);
                let mut row = 0;
                for (p2, q2) in pieces(n + 1) {
                    let tgt = self.dim(p2, q2);
                    let block = if (p2, q2) == (p + 1, q) {
                        Some(self.delta_at(p, q))
                    } else if (p2, q2) == (p, q + 1) {
                        Some(self.d_at(p, q))
                    } else {
                        None
                    };
                    if let Some(b) = block {
                        for r in 0..tgt {
                            for c in 0..src {
                                m[(row + r, col + c)] = b[(r, c)].clone();
                            }
                        }
                    }
                    row += tgt;
                }
                col += src;
            }
            m
        };
        let ranks: Vec<usize> = (0..=top).map(|n| differential(n).rank()).collect();
        Ok((0..=top)
            .map(|n| total_dim(n) - ranks[n] - if n == 0 { 0 } else { ranks[n - 1] })
            .collect())
    }
}

/// Cohomology of a cochain complex given by its differentials.
pub fn complex_cohomology<T: Field>(dims: &[usize], ds: &[Matrix<T>]) -> Vec<usize> {
    let rank = |q: usize| ds.get(q).map_or(0, Matrix::rank);
    (0..dims.len()).map(|q| dims[q] - rank(q) - if q == 0 { 0 } else { rank(q - 1) }).collect()
}

/// A complex of "sheaves" on a space covered by two charts: sections over
/// `Uᵢ` are `V ⊕ Zᵢ` and over `U₁ ∩ U₂` are `V`, restrictions project to `V`.
/// `V` and the `Zᵢ` are complexes, the `Zᵢ` acyclic.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoChartModel<T> {
    pub v: Vec<Matrix<T>>,
    pub z: [Vec<Matrix<T>>; 2],
    pub v_dims: Vec<usize>,
    pub z_dims: [Vec<usize>; 2],
}

impl<T: Field> TwoChartModel<T> {
    fn chart_differential(&self, i: usize, q: usize) -> Matrix<T> {
        let dv = self.v.get(q).cloned().unwrap_or_else(|| Matrix::zeros(self.v_dims.get(q + 1).copied().unwrap_or(0), self.v_dims[q]));
        let zd = &self.z_dims[i];
        let dz = self.z[i].get(q).cloned().unwrap_or_else(|| Matrix::zeros(zd.get(q + 1).copied().unwrap_or(0), zd[q]));
        dv.direct_sum(&dz)
    }

    fn restriction(&self, i: usize, q: usize) -> Matrix<T> {
        let (v, z) = (self.v_dims[q], self.z_dims[i][q]);
        Matrix::identity(v).hstack(&Matrix::zeros(v, z))
    }

    /// Čech double complex: `C^{0,q} = A₁^q ⊕ A₂^q`, `C^{1,q} = V^q`,
    /// `δ(a₁, a₂) = r₂a₂ - r₁a₁`, vertical differential `(-1)^p d`.
    pub fn cech_double_complex(&self) -> DoubleComplex<T> {
        let top = self.v_dims.len();
        let mut dims = BTreeMap::new();
        let mut delta = BTreeMap::new();
        let mut d = BTreeMap::new();
        for q in 0..top {
            let a = [self.v_dims[q] + self.z_dims[0][q], self.v_dims[q] + self.z_dims[1][q]];
            dims.insert((0, q), a[0] + a[1]);
            dims.insert((1, q), self.v_dims[q]);
            delta.insert((0, q), (-&self.restriction(0, q)).hstack(&self.restriction(1, q)));
            if q + 1 < top {
                d.insert((0, q), self.chart_differential(0, q).direct_sum(&self.chart_differential(1, q)));
                let dv = self.v.get(q).cloned().unwrap_or_else(|| Matrix::zeros(self.v_dims[q + 1], self.v_dims[q]));
                d.insert((1, q), -&dv);
            }
        }
        DoubleComplex { dims, delta, d }
    }

    /// Cohomology of the complex of global sections `ker δ`.
    pub fn global_section_cohomology(&self) -> Vec<usize> {
        let dc = self.cech_double_complex();
        let top = self.v_dims.len();
        let gamma: Vec<Subspace<T>> = (0..top).map(|q| dc.delta_at(0, q).kernel()).collect();
        let dims: Vec<usize> = gamma.iter().map(Subspace::dim).collect();
        let ds: Vec<Matrix<T>> = (0..top.saturating_sub(1))
            .map(|q| restricted(&dc.d_at(0, q), &gamma[q], &gamma[q + 1]).expect("d preserves global sections"))
            .collect();
        complex_cohomology(&dims, &ds)
    }
}

/// Random two-chart model with `V` of cohomology `h` and acyclic chart
/// summands, over any exact field.
pub fn random_two_chart_model<T: Field, R: rand::Rng>(top: usize, rng: &mut R) -> TwoChartModel<T> {
    let mut pick = |n: usize| -> Vec<usize> { (0..n).map(|_| rng.gen_range(0..=2)).collect() };
    let h = pick(top);
    let mut c = pick(top);
    c[top - 1] = 0;
    let mut zc = [pick(top), pick(top)];
    zc[0][top - 1] = 0;
    zc[1][top - 1] = 0;
    let dims = |h: &[usize], c: &[usize]| -> Vec<usize> {
        (0..top).map(|q| h[q] + c[q] + if q == 0 { 0 } else { c[q - 1] }).collect()
    };
    let zero = vec![0; top];
    let v = crate::random::random_complex::<T, R>(&h, &c, rng);
    let z0 = crate::random::random_complex::<T, R>(&zero, &zc[0], rng);
    let z1 = crate::random::random_complex::<T, R>(&zero, &zc[1], rng);
    TwoChartModel {
        v_dims: dims(&h, &c),
        z_dims: [dims(&zero, &zc[0]), dims(&zero, &zc[1])],
        v,
        z: [z0, z1],
    }
}

/// Dimensions of the four spaces, for reports.
pub fn subspace_dims(c: &StalkComplex) -> BTreeMap<&'static str, usize> {
    BTreeMap::from([
        ("K0", c.k0.dim()),
        ("K1_dt1", c.k1_dt1.dim()),
        ("K1_dt2", c.k1_dt2.dim()),
        ("K2", c.k2.dim()),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qi;

    fn w(l1: i64, l2: i64) -> Weights {
        Weights::new(l1, l2, None)
    }

    #[test]
    fn classifier_examples() {
        assert!(classify_l2(FormDegree::FUNCTION, (0, 0), w(0, -2)).unwrap().d_eps);
        assert!(classify_l2(FormDegree::DT1, (0, 0), w(-2, -2)).unwrap().d_eps);
        assert!(!classify_l2(FormDegree::DT1, (0, 0), w(0, 0)).unwrap().d_eps);
        assert!(classify_l2(FormDegree::DT1, (1, 0), w(0, 0)).unwrap().d_eps);
        assert_eq!(classify_l2(FormDegree::DT1, (-1, 0), w(0, 0)), Err(L2Error::NegativeOrder));
    }

    #[test]
    fn trivial_stalk() {
        let z = QiMatrix::zeros(1, 1);
        let datum = MonodromyDatum::new("trivial", z.clone(), z, 0).unwrap();
        let c = build_stalk_complex(&datum, StalkMode::LocalSystem).unwrap();
        assert_eq!(c.dims(), (1, 0, 0));
        assert_eq!(hypercohomology(&c).unwrap(), [1, 0, 0]);
        assert_eq!(koszul_cohomology(&datum).unwrap(), [1, 2, 1]);
        for d in 0..3 {
            assert_eq!(truncated_global_model(&datum, d, StalkMode::LocalSystem).unwrap(), [1, 0, 0]);
        }
    }

    #[test]
    fn jordan_along_one_axis() {
        let n = crate::to_qi(&Matrix::from_int_rows(&[&[0, 1], &[0, 0]]));
        let datum = MonodromyDatum::new("jordan", n, QiMatrix::zeros(2, 2), 1).unwrap();
        let c = build_stalk_complex(&datum, StalkMode::LocalSystem).unwrap();
        assert_eq!(c.k0, QiSubspace::span(2, &[vec![qi(1, 0), qi(0, 0)]]));
        let h = hypercohomology(&c).unwrap();
        assert_eq!(h, truncated_global_model(&datum, 3, StalkMode::LocalSystem).unwrap());
        assert_eq!(koszul_cohomology(&datum).unwrap()[0], 1);
    }

    #[test]
    fn end_of_jordan() {
        let n = crate::to_qi(&Matrix::from_int_rows(&[&[0, 1], &[0, 0]]));
        let a = ad(&n);
        let wf = monodromy_weight_filtration(&a, 0).unwrap();
        assert_eq!(wf.graded_dims().values().copied().collect::<Vec<_>>(), vec![1, 2, 1]);
        let datum = MonodromyDatum::new("jordan", n, QiMatrix::zeros(2, 2), 1).unwrap();
        assert!(theta_image_check(&datum).unwrap().passes());
    }

    #[test]
    fn one_column_double_complex() {
        let ds = crate::random::random_complex::<Qi, _>(&[1, 0, 2], &[1, 1, 0], &mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(7));
        let dims = vec![2, 2, 3];
        let dc = DoubleComplex {
            dims: dims.iter().enumerate().map(|(q, &n)| ((0, q), n)).collect(),
            delta: BTreeMap::new(),
            d: ds.iter().enumerate().map(|(q, m)| ((0, q), m.clone())).collect(),
        };
        assert_eq!(dc.total_cohomology().unwrap(), vec![1, 0, 2]);
        assert_eq!(complex_cohomology(&dims, &ds), vec![1, 0, 2]);
    }
}
