//! Representations of a pair of commuting sl2's carrying a horizontal Hodge
//! structure: the models `H(l)⊗S(m)⊗S(n)` and `E(p,q)⊗S(m)⊗S(n)`, their
//! isotypic decomposition and the adapted basis `α_{k,l}`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::Sl2Error;
use crate::exactla::{self, operator_from_decomposition, Direction, Field};
use crate::hodgestruct::{Bigrading, HodgeStructure, MixedHodge, PolarizationForm};
use crate::weightfilt::{monodromy_weight_filtration, WeightFiltration};
use crate::{i_pow, i_unit, q, qi, Qi, QiFiltration, QiMatrix, QiSubspace};

/// Images of `(n⁻, y, n⁺)` for two commuting copies of sl2.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2PairAction {
    pub n_minus: [QiMatrix; 2],
    pub y: [QiMatrix; 2],
    pub n_plus: [QiMatrix; 2],
}

impl Sl2PairAction {
    pub fn dim(&self) -> usize {
        self.y[0].rows()
    }

    pub fn trivial(dim: usize) -> Self {
        let z = QiMatrix::zeros(dim, dim);
        Sl2PairAction { n_minus: [z.clone(), z.clone()], y: [z.clone(), z.clone()], n_plus: [z.clone(), z] }
    }

    /// `Ñ₁⁻ + Ñ₂⁻`.
    pub fn total_n_minus(&self) -> QiMatrix {
        &self.n_minus[0] + &self.n_minus[1]
    }

    pub fn total_y(&self) -> QiMatrix {
        &self.y[0] + &self.y[1]
    }

    /// `X⁺ = n⁺ + n⁻ + i y`, lowering `p` by one.
    pub fn x_plus(&self, j: usize) -> QiMatrix {
        &(&self.n_plus[j] + &self.n_minus[j]) + &self.y[j].scale(&i_unit())
    }

    /// `X⁻ = n⁺ + n⁻ - i y`, raising `p` by one.
    pub fn x_minus(&self, j: usize) -> QiMatrix {
        &(&self.n_plus[j] + &self.n_minus[j]) - &self.y[j].scale(&i_unit())
    }

    /// `Z = n⁺ - n⁻`, type preserving.
    pub fn z(&self, j: usize) -> QiMatrix {
        &self.n_plus[j] - &self.n_minus[j]
    }

    pub fn operators(&self) -> Vec<&QiMatrix> {
        vec![&self.n_minus[0], &self.y[0], &self.n_plus[0], &self.n_minus[1], &self.y[1], &self.n_plus[1]]
    }

    /// Bracket relations within each factor and commutation across factors.
    pub fn verify(&self) -> Result<(), Sl2Error> {
        let br = QiMatrix::commutator;
        for j in 0..2 {
            let (nm, y, np) = (&self.n_minus[j], &self.y[j], &self.n_plus[j]);
            if br(y, nm) != nm.scale(&qi(-2, 0)) {
                return Err(Sl2Error::BracketFailure(format!("[Y{j}, N{j}-] != -2 N{j}-")));
            }
            if br(y, np) != np.scale(&qi(2, 0)) {
                return Err(Sl2Error::BracketFailure(format!("[Y{j}, N{j}+] != 2 N{j}+")));
            }
            if br(np, nm) != *y {
                return Err(Sl2Error::BracketFailure(format!("[N{j}+, N{j}-] != Y{j}")));
            }
        }
        for a in [&self.n_minus[0], &self.y[0], &self.n_plus[0]] {
            for b in [&self.n_minus[1], &self.y[1], &self.n_plus[1]] {
                if !a.commutes_with(b) {
                    return Err(Sl2Error::BracketFailure("factors do not commute".into()));
                }
            }
        }
        Ok(())
    }

    /// Conjugates every operator: `X ↦ g X g⁻¹`.
    pub fn transform(&self, g: &QiMatrix, g_inv: &QiMatrix) -> Self {
        let c = |x: &QiMatrix| &(g * x) * g_inv;
        Sl2PairAction {
            n_minus: [c(&self.n_minus[0]), c(&self.n_minus[1])],
            y: [c(&self.y[0]), c(&self.y[1])],
            n_plus: [c(&self.n_plus[0]), c(&self.n_plus[1])],
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let s = |a: &QiMatrix, b: &QiMatrix| a.direct_sum(b);
        Sl2PairAction {
            n_minus: [s(&self.n_minus[0], &other.n_minus[0]), s(&self.n_minus[1], &other.n_minus[1])],
            y: [s(&self.y[0], &other.y[0]), s(&self.y[1], &other.y[1])],
            n_plus: [s(&self.n_plus[0], &other.n_plus[0]), s(&self.n_plus[1], &other.n_plus[1])],
        }
    }

    /// `exp(-i Ñ₁⁺) exp(-i Ñ₂⁺)`, sending a lowest weight vector to the
    /// extreme vector `(v₁⁻)^m ⊗ (v₂⁻)^n` of its factor.
    pub fn cayley(&self) -> QiMatrix {
        let mi = qi(0, -1);
        let a = self.n_plus[0].scale(&mi).exp_nilpotent().expect("n+ is nilpotent");
        let b = self.n_plus[1].scale(&mi).exp_nilpotent().expect("n+ is nilpotent");
        &a * &b
    }
}

/// Isomorphism type of an irreducible piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorKind {
    /// `H(l)`, trivial action.
    Tate { l: i64 },
    /// `H(l) ⊗ S(m) ⊗ S(n)` with `(m, n) ≠ (0, 0)`.
    Symmetric { l: i64, m: usize, n: usize },
    /// `E(p,q) ⊗ S(m) ⊗ S(n)`, `p > q`.
    EType { p: i64, q: i64, m: usize, n: usize },
}

impl FactorKind {
    /// Normalizes `Symmetric` with `m = n = 0` to `Tate`, and `EType` to `p > q`.
    pub fn symmetric(l: i64, m: usize, n: usize) -> Self {
        if m == 0 && n == 0 {
            FactorKind::Tate { l }
        } else {
            FactorKind::Symmetric { l, m, n }
        }
    }

    pub fn e_type(p: i64, q: i64, m: usize, n: usize) -> Self {
        FactorKind::EType { p: p.max(q), q: p.min(q), m, n }
    }

    pub fn mn(&self) -> (usize, usize) {
        match *self {
            FactorKind::Tate { .. } => (0, 0),
            FactorKind::Symmetric { m, n, .. } | FactorKind::EType { m, n, .. } => (m, n),
        }
    }

    pub fn weight(&self) -> i64 {
        match *self {
            FactorKind::Tate { l } => 2 * l,
            FactorKind::Symmetric { l, m, n } => 2 * l + (m + n) as i64,
            FactorKind::EType { p, q, m, n } => p + q + (m + n) as i64,
        }
    }

    pub fn dim(&self) -> usize {
        let (m, n) = self.mn();
        let base = (m + 1) * (n + 1);
        match self {
            FactorKind::EType { .. } => 2 * base,
            _ => base,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            FactorKind::Tate { .. } => "H",
            FactorKind::Symmetric { .. } => "S",
            FactorKind::EType { .. } => "E",
        }
    }
}

/// A model with its Hodge structure, sl2 pair action and polarization.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub kind: FactorKind,
    pub hodge: HodgeStructure,
    pub action: Sl2PairAction,
    pub polarization: PolarizationForm,
}

/// `n⁻, y, n⁺` on `S(m)` in the basis `e₁^{m-i} e₂^i`, `i = 0..=m`.
fn sym_power_ops(m: usize) -> [QiMatrix; 3] {
    let d = m + 1;
    let mut nm = QiMatrix::zeros(d, d);
    let mut np = QiMatrix::zeros(d, d);
    for i in 0..d {
        if i > 0 {
            nm[(i - 1, i)] = qi(i as i64, 0);
        }
        if i < m {
            np[(i + 1, i)] = qi((m - i) as i64, 0);
        }
    }
    let y = QiMatrix::diagonal(&(0..d).map(|i| qi(2 * i as i64 - m as i64, 0)).collect::<Vec<_>>());
    [nm, y, np]
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64)
}

/// The form on `S(m)` induced from `S(e₁,e₂) = -1` on symmetric tensors.
fn sym_power_form(m: usize) -> QiMatrix {
    QiMatrix::from_fn(m + 1, m + 1, |i, j| {
        if i + j == m {
            let sign = if (m - i).is_multiple_of(2) { 1 } else { -1 };
            crate::Field::from_rational(q(sign, binomial(m, i)))
        } else {
            Qi::zero()
        }
    })
}

/// `(e₁ - i e₂)^p (e₁ + i e₂)^{m-p}`, of type `(p, m-p)`.
fn sym_power_type_vector(m: usize, p: usize) -> Vec<Qi> {
    let mut poly = vec![Qi::one()];
    let factors = std::iter::repeat_n(qi(0, -1), p).chain(std::iter::repeat_n(qi(0, 1), m - p));
    for c in factors {
        let mut next = vec![Qi::zero(); poly.len() + 1];
        for (i, a) in poly.iter().enumerate() {
            next[i] = next[i].clone() + a.clone();
            next[i + 1] = next[i + 1].clone() + a.clone() * c.clone();
        }
        poly = next;
    }
    poly
}

fn kron_vec(a: &[Qi], b: &[Qi]) -> Vec<Qi> {
    a.iter().flat_map(|x| b.iter().map(move |y| x.clone() * y.clone())).collect()
}

/// Hodge types with a spanning vector of each.
type TypedVectors = Vec<((i64, i64), Vec<Qi>)>;

/// `(dim, types with spanning vectors, form)` of the twisting factor.
fn twist_data(kind: &FactorKind) -> Result<(usize, TypedVectors, QiMatrix), Sl2Error> {
    match *kind {
        FactorKind::Tate { l } | FactorKind::Symmetric { l, .. } => {
            Ok((1, vec![((l, l), vec![Qi::one()])], QiMatrix::identity(1)))
        }
        FactorKind::EType { p, q, .. } => {
            if p == q {
                return Err(Sl2Error::InvalidParameters("E(p,q) needs p != q".into()));
            }
            let epq = vec![qi(1, 0), qi(0, -1)];
            let eqp = vec![qi(1, 0), qi(0, 1)];
            // Form in the basis (e^{p,q}, e^{q,p}), moved to (e₁, e₂).
            let g = QiMatrix::from_rows(vec![
                vec![Qi::zero(), i_pow(q - p) * qi(2, 0)],
                vec![i_pow(p - q) * qi(2, 0), Qi::zero()],
            ])?;
            let pm = QiMatrix::from_columns(2, &[epq.clone(), eqp.clone()]);
            let pinv = pm.inverse().expect("invertible");
            let s = &(&pinv.transpose() * &g) * &pinv;
            Ok((2, vec![((p, q), epq), ((q, p), eqp)], s))
        }
    }
}

/// Builds `H(l)⊗S(m)⊗S(n)` or `E(p,q)⊗S(m)⊗S(n)` with the standard
/// structures: `v^± = e₁ ± i e₂` of types `(0,1)`/`(1,0)`, `S(v⁺, v⁻) = 2i`.
pub fn build_model(kind: FactorKind) -> Result<Model, Sl2Error> {
    let (m, n) = kind.mn();
    if let FactorKind::Symmetric { m: 0, n: 0, .. } = kind {
        return Err(Sl2Error::InvalidParameters("use Tate for m = n = 0".into()));
    }
    let (td, twist_types, twist_form) = twist_data(&kind)?;
    let [nm1, y1, np1] = sym_power_ops(m);
    let [nm2, y2, np2] = sym_power_ops(n);
    let (i_t, i1, i2) = (QiMatrix::identity(td), QiMatrix::identity(m + 1), QiMatrix::identity(n + 1));
    let first = |x: &QiMatrix| i_t.kron(&x.kron(&i2));
    let second = |x: &QiMatrix| i_t.kron(&i1.kron(x));
    let action = Sl2PairAction {
        n_minus: [first(&nm1), second(&nm2)],
        y: [first(&y1), second(&y2)],
        n_plus: [first(&np1), second(&np2)],
    };
    let dim = td * (m + 1) * (n + 1);
    let mut spans: BTreeMap<(i64, i64), Vec<Vec<Qi>>> = BTreeMap::new();
    for ((tp, tq), tv) in &twist_types {
        for p1 in 0..=m {
            for p2 in 0..=n {
                let v = kron_vec(tv, &kron_vec(&sym_power_type_vector(m, p1), &sym_power_type_vector(n, p2)));
                let key = (tp + (p1 + p2) as i64, tq + (m - p1 + n - p2) as i64);
                spans.entry(key).or_default().push(v);
            }
        }
    }
    let parts: Bigrading = spans.into_iter().map(|(k, vs)| (k, QiSubspace::span(dim, &vs))).collect();
    let hodge = HodgeStructure::new(kind.weight(), dim, parts)?;
    let form = twist_form.kron(&sym_power_form(m).kron(&sym_power_form(n)));
    let polarization = PolarizationForm::new(form, kind.weight())?;
    Ok(Model { kind, hodge, action, polarization })
}

impl Model {
    /// Same data in coordinates `v ↦ g v`; `g` must be real.
    pub fn transform(&self, g: &QiMatrix) -> Result<Model, Sl2Error> {
        let g_inv = g.inverse().ok_or(Sl2Error::InvalidParameters("singular change of basis".into()))?;
        let s = &(&g_inv.transpose() * self.polarization.matrix()) * &g_inv;
        Ok(Model {
            kind: self.kind,
            hodge: self.hodge.transform(g)?,
            action: self.action.transform(g, &g_inv),
            polarization: PolarizationForm::new(s, self.hodge.weight())?,
        })
    }

    /// Orthogonal direct sum; weights must agree. The kind of the result is
    /// the kind of `self`.
    pub fn direct_sum(&self, other: &Model) -> Result<Model, Sl2Error> {
        if self.hodge.weight() != other.hodge.weight() {
            return Err(Sl2Error::InvalidParameters("direct sum of different weights".into()));
        }
        let (a, b) = (self.hodge.ambient(), other.hodge.ambient());
        let pad = |v: &[Qi], front: bool| -> Vec<Qi> {
            let z = std::iter::repeat(Qi::zero());
            if front { v.iter().cloned().chain(z.take(b)).collect() } else { z.take(a).chain(v.iter().cloned()).collect() }
        };
        let mut spans: BTreeMap<(i64, i64), Vec<Vec<Qi>>> = BTreeMap::new();
        for (k, s) in self.hodge.parts() {
            spans.entry(*k).or_default().extend(s.basis().iter().map(|v| pad(v, true)));
        }
        for (k, s) in other.hodge.parts() {
            spans.entry(*k).or_default().extend(s.basis().iter().map(|v| pad(v, false)));
        }
        let parts = spans.into_iter().map(|(k, vs)| (k, QiSubspace::span(a + b, &vs))).collect();
        Ok(Model {
            kind: self.kind,
            hodge: HodgeStructure::new(self.hodge.weight(), a + b, parts)?,
            action: self.action.direct_sum(&other.action),
            polarization: PolarizationForm::new(
                self.polarization.matrix().direct_sum(other.polarization.matrix()),
                self.hodge.weight(),
            )?,
        })
    }

    /// `F_lim = exp(-i(Ñ₁⁻ + Ñ₂⁻)) F₀`, the split limit filtration.
    pub fn limit_hodge_filtration(&self) -> QiFiltration {
        let g = self.action.total_n_minus().scale(&qi(0, -1)).exp_nilpotent().expect("nilpotent");
        let f0 = self.hodge.hodge_filtration();
        let steps = f0.steps().iter().map(|(p, s)| (*p, s.image_under(&g))).collect();
        QiFiltration::new(f0.ambient(), Direction::Decreasing, steps).expect("nested")
    }

    /// `(W(Ñ₁⁻ + Ñ₂⁻)[-k], F_lim)`.
    pub fn limit_mhs(&self) -> Result<MixedHodge, Sl2Error> {
        let w = monodromy_weight_filtration(&self.action.total_n_minus(), self.hodge.weight())?;
        Ok(MixedHodge::new(w.filtration(), self.limit_hodge_filtration())?)
    }
}

/// The semisimple operator acting by `p + q - k` on `J^{p,q}`.
pub fn ytilde_from_bigrading(j: &Bigrading, k: i64, ambient: usize) -> Result<QiMatrix, Sl2Error> {
    let parts: Vec<(&QiSubspace, Qi)> =
        j.iter().map(|(&(p, q), s)| (s, crate::Field::from_int(p + q - k))).collect();
    operator_from_decomposition(ambient, &parts).map_err(|_| Sl2Error::NotADecomposition("J".into()))
}

/// Solves `L_i(X) = R_i` for a square unknown `X` of size `d`.
pub fn solve_operator_equations(
    d: usize,
    maps: &[&dyn Fn(&QiMatrix) -> QiMatrix],
    rhs: &[QiMatrix],
) -> Option<QiMatrix> {
    let mut columns: Vec<Vec<Qi>> = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let mut e = QiMatrix::zeros(d, d);
            e[(a, b)] = Qi::one();
            let col: Vec<Qi> = maps.iter().flat_map(|f| f(&e).to_rows().into_iter().flatten()).collect();
            columns.push(col);
        }
    }
    let rows = columns.first().map_or(0, Vec::len);
    let coeff = QiMatrix::from_columns(rows, &columns);
    let b: Vec<Qi> = rhs.iter().flat_map(|r| r.to_rows().into_iter().flatten()).collect();
    let x = coeff.solve(&b)?;
    Some(QiMatrix::from_fn(d, d, |r, c| x[r * d + c].clone()))
}

/// `N⁺` with `[Y, N⁺] = 2N⁺` and `[N⁺, N] = Y`.
pub fn complete_sl2_triple(n: &QiMatrix, y: &QiMatrix) -> Result<QiMatrix, Sl2Error> {
    let d = n.rows();
    if QiMatrix::commutator(y, n) != n.scale(&qi(-2, 0)) || !n.is_nilpotent() {
        return Err(Sl2Error::NoSolution);
    }
    if n.is_zero() {
        return if y.is_zero() { Ok(QiMatrix::zeros(d, d)) } else { Err(Sl2Error::NoSolution) };
    }
    let weight = |x: &QiMatrix| &QiMatrix::commutator(y, x) - &x.scale(&qi(2, 0));
    let raise = |x: &QiMatrix| QiMatrix::commutator(x, n);
    let x = solve_operator_equations(d, &[&weight, &raise], &[QiMatrix::zeros(d, d), y.clone()])
        .ok_or(Sl2Error::NoSolution)?;
    if weight(&x) != QiMatrix::zeros(d, d) || raise(&x) != *y {
        return Err(Sl2Error::NoSolution);
    }
    Ok(x)
}

/// Joint eigenspaces of commuting operators with integer eigenvalues.
pub fn joint_eigenspaces(ops: &[&QiMatrix]) -> Result<BTreeMap<Vec<i64>, QiSubspace>, Sl2Error> {
    let d = ops.first().map_or(0, |m| m.rows());
    let bound = 2 * d as i64 + 2;
    let mut current: BTreeMap<Vec<i64>, QiSubspace> = BTreeMap::from([(Vec::new(), QiSubspace::full(d))]);
    for op in ops {
        let mut next = BTreeMap::new();
        for (key, space) in &current {
            for ev in -bound..=bound {
                let shifted = &(*op).clone() - &QiMatrix::identity(d).scale(&crate::Field::from_int(ev));
                let piece = exactla::intersect(space, &shifted.kernel())?;
                if !piece.is_zero() {
                    let mut k = key.clone();
                    k.push(ev);
                    next.insert(k, piece);
                }
            }
        }
        current = next;
    }
    if current.values().map(QiSubspace::dim).sum::<usize>() != d {
        return Err(Sl2Error::NotSemisimple);
    }
    Ok(current)
}

/// Component of `x` shifting the joint eigenvalues of `(y₁, y₂)` by `shift`.
pub fn bidegree_component(x: &QiMatrix, ys: [&QiMatrix; 2], shift: (i64, i64)) -> Result<QiMatrix, Sl2Error> {
    let spaces = joint_eigenspaces(&ys)?;
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for (k, s) in &spaces {
        for b in s.basis() {
            cols.push(b.clone());
            labels.push((k[0], k[1]));
        }
    }
    let d = x.rows();
    let p = QiMatrix::from_columns(d, &cols);
    let p_inv = p.inverse().ok_or(Sl2Error::NotSemisimple)?;
    let mut xp = &(&p_inv * x) * &p;
    for r in 0..d {
        for c in 0..d {
            if (labels[r].0 - labels[c].0, labels[r].1 - labels[c].1) != shift {
                xp[(r, c)] = Qi::zero();
            }
        }
    }
    Ok(&(&p * &xp) * &p_inv)
}

/// A grading `Y` of `w` (`(Y - l) W_l ⊆ W_{l-1}`) with prescribed brackets
/// `[Y, X] = c X` and commuting with the given operators.
pub fn grading_of(
    w: &WeightFiltration<Qi>,
    brackets: &[(&QiMatrix, i64)],
    commuting: &[&QiMatrix],
) -> Option<QiMatrix> {
    grading_with_complement(w, brackets, commuting, None)
}

type OperatorMap = Box<dyn Fn(&QiMatrix) -> QiMatrix>;

/// Equations saying that `scale·Y + offset` grades `w`.
fn grading_equations(
    w: &WeightFiltration<Qi>,
    scale: Qi,
    offset: &QiMatrix,
    maps: &mut Vec<OperatorMap>,
    rhs: &mut Vec<QiMatrix>,
) -> Option<()> {
    let f = w.filtration();
    let (lo, hi) = (f.min_index()?, f.max_index()?);
    for l in lo..=hi {
        let wl = f.at(l);
        let below = f.at(l - 1);
        if wl.is_zero() || below.is_full() {
            continue;
        }
        let phi = QiMatrix::from_rows(below.annihilator()).ok()?;
        let b = wl.basis_matrix();
        let fixed = &(&phi * offset) * &b;
        rhs.push(&(&phi * &b).scale(&crate::Field::from_int(l)) - &fixed);
        let s = scale.clone();
        maps.push(Box::new(move |y: &QiMatrix| (&(&phi * y) * &b).scale(&s)));
    }
    Some(())
}

/// As [`grading_of`]; with `complement = (w2, y_total)` also require that
/// `y_total - Y` grades `w2`.
pub fn grading_with_complement(
    w: &WeightFiltration<Qi>,
    brackets: &[(&QiMatrix, i64)],
    commuting: &[&QiMatrix],
    complement: Option<(&WeightFiltration<Qi>, &QiMatrix)>,
) -> Option<QiMatrix> {
    let d = w.ambient();
    let mut maps: Vec<OperatorMap> = Vec::new();
    let mut rhs = Vec::new();
    for (x, c) in brackets {
        let x = (*x).clone();
        rhs.push(x.scale(&crate::Field::from_int(*c)));
        maps.push(Box::new(move |y: &QiMatrix| QiMatrix::commutator(y, &x)));
    }
    for x in commuting {
        let x = (*x).clone();
        rhs.push(QiMatrix::zeros(d, d));
        maps.push(Box::new(move |y: &QiMatrix| QiMatrix::commutator(y, &x)));
    }
    grading_equations(w, Qi::one(), &QiMatrix::zeros(d, d), &mut maps, &mut rhs)?;
    if let Some((w2, y_total)) = complement {
        grading_equations(w2, qi(-1, 0), y_total, &mut maps, &mut rhs)?;
    }
    let refs: Vec<&dyn Fn(&QiMatrix) -> QiMatrix> = maps.iter().map(|b| b.as_ref()).collect();
    solve_operator_equations(d, &refs, &rhs)
}

/// sl2 pair attached to the ordering `(first, second)` of two commuting
/// nilpotents, from gradings `y_first` of `W(first)` and `y_total` of
/// `W(first + second)`: keep the pure bidegree components and complete to
/// triples.
pub fn sl2_pair_from_gradings(
    first: &QiMatrix,
    second: &QiMatrix,
    y_first: &QiMatrix,
    y_total: &QiMatrix,
) -> Result<Sl2PairAction, Sl2Error> {
    let n1 = bidegree_component(first, [y_first, y_total], (-2, -2))?;
    let rest = &(first + second) - &n1;
    let n2 = bidegree_component(&rest, [y_first, y_total], (0, -2))?;
    let y2 = y_total - y_first;
    let action = Sl2PairAction {
        n_plus: [complete_sl2_triple(&n1, y_first)?, complete_sl2_triple(&n2, &y2)?],
        n_minus: [n1, n2],
        y: [y_first.clone(), y2],
    };
    action.verify()?;
    Ok(action)
}

/// As [`sl2_pair_from_gradings`], with `y_first` solved for: a grading of
/// `W(first)` commuting with `y_total` and with `[Y, first] = -2 first`,
/// preferring one for which `y_total - Y` grades `W(second)`, then one
/// commuting with `second`. The choice is not canonical.
pub fn sl2_pair_for_ordering(
    first: &QiMatrix,
    second: &QiMatrix,
    y_total: &QiMatrix,
) -> Result<Sl2PairAction, Sl2Error> {
    let w1 = monodromy_weight_filtration(first, 0)?;
    let w2 = monodromy_weight_filtration(second, 0)?;
    let y1 = grading_with_complement(&w1, &[(first, -2)], &[y_total], Some((&w2, y_total)))
        .or_else(|| grading_of(&w1, &[(first, -2)], &[y_total, second]))
        .or_else(|| grading_of(&w1, &[(first, -2)], &[y_total]))
        .ok_or(Sl2Error::NoSolution)?;
    sl2_pair_from_gradings(first, second, &y1, y_total)
}

/// Grading by `p + q - k` on the Deligne bigrading of `(W(n)[-k], f)`.
pub fn deligne_grading(n: &QiMatrix, f: &QiFiltration, k: i64) -> Result<QiMatrix, Sl2Error> {
    let w = monodromy_weight_filtration(n, k)?;
    let mhs = MixedHodge::new(w.filtration(), f.clone())?;
    let bigrading = crate::hodgestruct::deligne_bigrading(&mhs);
    ytilde_from_bigrading(&bigrading, k, f.ambient())
}

/// sl2 pair of the ordering `(first, second)` for a nilpotent orbit with
/// limit filtration `f` of weight `k`: `Y_total` from `(W(first+second), f)`
/// and `Y_first` from `(W(first), exp(i second) f)`.
pub fn sl2_pair_for_orbit(
    first: &QiMatrix,
    second: &QiMatrix,
    f: &QiFiltration,
    k: i64,
) -> Result<Sl2PairAction, Sl2Error> {
    let y_total = deligne_grading(&(first + second), f, k)?;
    let g = second.scale(&i_unit()).exp_nilpotent()?;
    let steps = f.steps().iter().map(|(p, s)| (*p, s.image_under(&g))).collect();
    let moved = QiFiltration::new(f.ambient(), Direction::Decreasing, steps)?;
    let y_first = deligne_grading(first, &moved, k)?;
    sl2_pair_from_gradings(first, second, &y_first, &y_total)
}

/// An invariant irreducible piece found by [`decompose_theorem6`].
#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibleFactor {
    pub kind: FactorKind,
    pub weight: i64,
    /// Columns: `(Ñ₁⁺)^i (Ñ₂⁺)^j g` for each lowest weight generator `g`.
    pub embedding: QiMatrix,
    /// Lowest weight generators (one, or a conjugate pair for `EType`).
    pub lowest: Vec<Vec<Qi>>,
}

impl IrreducibleFactor {
    pub fn span(&self) -> QiSubspace {
        QiSubspace::span(self.embedding.rows(), &self.embedding.columns())
    }
}

fn check_horizontal(hs: &HodgeStructure, action: &Sl2PairAction) -> Result<(), Sl2Error> {
    for j in 0..2 {
        let moves = [(action.x_plus(j), (-1, 1), "X+"), (action.x_minus(j), (1, -1), "X-"), (action.z(j), (0, 0), "Z")];
        for (op, (dp, dq), name) in &moves {
            for (&(p, q), s) in hs.parts() {
                if !s.image_under(op).is_subspace_of(&hs.part(p + dp, q + dq)) {
                    return Err(Sl2Error::NotHorizontal(format!("{name}{} moves H^{{{p},{q}}} off type", j + 1)));
                }
            }
        }
    }
    Ok(())
}

fn check_isometric(action: &Sl2PairAction, s: &PolarizationForm) -> Result<(), Sl2Error> {
    let sm = s.matrix();
    for x in action.operators() {
        if !(&(&x.transpose() * sm) + &(sm * x)).is_zero() {
            return Err(Sl2Error::NotIsometric);
        }
    }
    Ok(())
}

/// Gram-Schmidt for `pair(x, y)` (bilinear or sesquilinear supplied by caller).
fn orthogonalize(vs: &[Vec<Qi>], pair: &dyn Fn(&[Qi], &[Qi]) -> Qi) -> Result<Vec<Vec<Qi>>, Sl2Error> {
    let mut out: Vec<Vec<Qi>> = Vec::new();
    let mut norms: Vec<Qi> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for (u, nu) in out.iter().zip(&norms) {
            let c = pair(v, u) / nu.clone();
            if !c.is_zero() {
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi = wi.clone() - c.clone() * ui.clone();
                }
            }
        }
        let nw = pair(&w, &w);
        if nw.is_zero() {
            return Err(Sl2Error::DegenerateForm);
        }
        out.push(w);
        norms.push(nw);
    }
    Ok(out)
}

/// Splits a horizontal representation into irreducible factors
/// `H(l)⊗S(m)⊗S(n)` and `E(p,q)⊗S(m)⊗S(n)`; with a polarization the factors
/// are pairwise orthogonal.
pub fn decompose_theorem6(
    hs: &HodgeStructure,
    action: &Sl2PairAction,
    s: Option<&PolarizationForm>,
) -> Result<Vec<IrreducibleFactor>, Sl2Error> {
    let d = hs.ambient();
    action.verify()?;
    check_horizontal(hs, action)?;
    if let Some(s) = s {
        check_isometric(action, s)?;
    }
    let cayley = action.cayley();
    let spaces = joint_eigenspaces(&[&action.y[0], &action.y[1]])?;
    let low_kernel = exactla::intersect(&action.n_minus[0].kernel(), &action.n_minus[1].kernel())?;
    let mut factors = Vec::new();
    for (key, e) in &spaces {
        let (a, b) = (key[0], key[1]);
        if a > 0 || b > 0 {
            continue;
        }
        let low = exactla::intersect(e, &low_kernel)?;
        if low.is_zero() {
            continue;
        }
        let (m, n) = ((-a) as usize, (-b) as usize);
        let top = &action.n_plus[0].pow(m as u32) * &action.n_plus[1].pow(n as u32);
        let pairing = |u: &[Qi], v: &[Qi]| s.map_or(Qi::zero(), |s| s.eval(u, &top.mul_vec(v)));
        // Hodge types of the multiplicity space, read off after the Cayley map.
        let mut typed: BTreeMap<(i64, i64), QiSubspace> = BTreeMap::new();
        for (&(p, q), part) in hs.parts() {
            let piece = exactla::intersect(&low, &exactla::preimage(&cayley, part)?)?;
            if !piece.is_zero() {
                typed.insert((p - (m + n) as i64, q), piece);
            }
        }
        if typed.values().map(QiSubspace::dim).sum::<usize>() != low.dim() {
            return Err(Sl2Error::NotHorizontal(format!("lowest weight space ({m},{n}) does not split by type")));
        }
        for (&(p, q), piece) in &typed {
            if p < q {
                continue;
            }
            let conj_piece = typed.get(&(q, p)).ok_or_else(|| {
                Sl2Error::NotHorizontal("multiplicity space is not conjugation symmetric".into())
            })?;
            if piece.conj() != *conj_piece {
                return Err(Sl2Error::NotHorizontal("multiplicity space is not conjugation symmetric".into()));
            }
            let gens: Vec<Vec<Qi>> = if s.is_none() {
                piece.basis().to_vec()
            } else if p == q {
                orthogonalize(piece.basis(), &pairing)?
            } else {
                let herm = |x: &[Qi], y: &[Qi]| pairing(x, &y.iter().map(Field::conj).collect::<Vec<_>>());
                orthogonalize(piece.basis(), &herm)?
            };
            for g in gens {
                let (kind, lowest) = if p == q {
                    (FactorKind::symmetric(p, m, n), vec![g])
                } else {
                    let gbar: Vec<Qi> = g.iter().map(Field::conj).collect();
                    (FactorKind::e_type(p, q, m, n), vec![g, gbar])
                };
                let mut cols = Vec::new();
                for g in &lowest {
                    for i in 0..=m {
                        for j in 0..=n {
                            let v = action.n_plus[0].pow(i as u32).mul_vec(&action.n_plus[1].pow(j as u32).mul_vec(g));
                            cols.push(v);
                        }
                    }
                }
                factors.push(IrreducibleFactor {
                    kind,
                    weight: hs.weight(),
                    embedding: QiMatrix::from_columns(d, &cols),
                    lowest,
                });
            }
        }
    }
    let total: usize = factors.iter().map(|f| f.embedding.cols()).sum();
    if total != d || QiSubspace::span(d, &factors.iter().flat_map(|f| f.embedding.columns()).collect::<Vec<_>>()).dim() != d {
        return Err(Sl2Error::NotADecomposition("factors do not fill the space".into()));
    }
    for f in &factors {
        let span = f.span();
        if f.kind.weight() != hs.weight() {
            return Err(Sl2Error::NotHorizontal("factor weight differs from the Hodge weight".into()));
        }
        if !action.operators().iter().all(|x| span.is_invariant_under(x)) {
            return Err(Sl2Error::NotADecomposition("factor is not invariant".into()));
        }
    }
    factors.sort_by_key(|a| a.kind);
    Ok(factors)
}

/// The basis `α_{k,l} = (Ñ₁⁻)^{m-k} (Ñ₂⁻)^{n-l} ((v₁⁻)^m ⊗ (v₂⁻)^n)` of a
/// symmetric factor.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaBasis {
    pub m: usize,
    pub n: usize,
    pub vectors: BTreeMap<(usize, usize), Vec<Qi>>,
}

impl AlphaBasis {
    /// Centered weights `(2k - m, 2(k+l) - m - n)` of `α_{k,l}`.
    pub fn expected_weights(&self, k: usize, l: usize) -> (i64, i64) {
        let (m, n) = (self.m as i64, self.n as i64);
        (2 * k as i64 - m, 2 * (k + l) as i64 - m - n)
    }
}

pub fn alpha_basis(factor: &IrreducibleFactor, action: &Sl2PairAction) -> Result<AlphaBasis, Sl2Error> {
    let (m, n) = match factor.kind {
        FactorKind::EType { .. } => return Err(Sl2Error::WrongKind),
        k => k.mn(),
    };
    let top = action.cayley().mul_vec(&factor.lowest[0]);
    let mut vectors = BTreeMap::new();
    for k in 0..=m {
        for l in 0..=n {
            let v = action.n_minus[0]
                .pow((m - k) as u32)
                .mul_vec(&action.n_minus[1].pow((n - l) as u32).mul_vec(&top));
            vectors.insert((k, l), v);
        }
    }
    Ok(AlphaBasis { m, n, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Subspace;

    fn e(n: usize, i: usize) -> Vec<Qi> {
        (0..n).map(|j| if i == j { Qi::one() } else { Qi::zero() }).collect()
    }

    #[test]
    fn s1_model() {
        let model = build_model(FactorKind::symmetric(0, 1, 0)).unwrap();
        let a = &model.action;
        assert_eq!(a.n_minus[0].mul_vec(&e(2, 1)), e(2, 0));
        assert!(a.n_minus[0].mul_vec(&e(2, 0)).iter().all(Zero::is_zero));
        assert_eq!(a.y[0], QiMatrix::diagonal(&[qi(-1, 0), qi(1, 0)]));
        let vplus = vec![qi(1, 0), qi(0, 1)];
        let vminus = vec![qi(1, 0), qi(0, -1)];
        assert_eq!(model.polarization.eval(&vplus, &vminus), qi(0, 2));
        assert_eq!(model.hodge.part(1, 0), Subspace::span(2, &[vminus]));
        a.verify().unwrap();
    }

    #[test]
    fn tate_model() {
        let model = build_model(FactorKind::Tate { l: 1 }).unwrap();
        assert_eq!(model.hodge.ambient(), 1);
        assert!(model.action.operators().iter().all(|x| x.is_zero()));
        assert_eq!(model.polarization.matrix()[(0, 0)], qi(1, 0));
        assert!(model.hodge.part(1, 1).is_full());
    }

    #[test]
    fn e_model_identities() {
        let model = build_model(FactorKind::e_type(3, 0, 0, 0)).unwrap();
        let epq = vec![qi(1, 0), qi(0, -1)];
        let eqp = vec![qi(1, 0), qi(0, 1)];
        let s = &model.polarization;
        assert!(s.eval(&epq, &epq).is_zero());
        assert_eq!(s.eval(&epq, &eqp), i_pow(-3) * qi(2, 0));
        assert_eq!(s.eval(&eqp, &epq), i_pow(3) * qi(2, 0));
        assert!(s.matrix().is_real());
        crate::hodgestruct::weil_and_metric(&model.hodge, s).unwrap();
    }

    #[test]
    fn s1s1_types() {
        let model = build_model(FactorKind::symmetric(0, 1, 1)).unwrap();
        assert_eq!(model.hodge.part(2, 0).dim(), 1);
        assert_eq!(model.hodge.part(1, 1).dim(), 2);
        assert_eq!(model.hodge.part(0, 2).dim(), 1);
        crate::hodgestruct::weil_and_metric(&model.hodge, &model.polarization).unwrap();
    }

    #[test]
    fn ytilde_examples() {
        let model = build_model(FactorKind::symmetric(0, 1, 0)).unwrap();
        assert!(ytilde_from_bigrading(model.hodge.parts(), 1, 2).unwrap().is_zero());
        let overlap: Bigrading = BTreeMap::from([((1, 0), QiSubspace::full(2)), ((0, 0), Subspace::span(2, &[e(2, 0)]))]);
        assert!(ytilde_from_bigrading(&overlap, 1, 2).is_err());
        // S(2) split limit structure: I^{0,0}, I^{1,1}, I^{2,2} on the monomials.
        let j: Bigrading = (0..3).map(|i| ((i as i64, i as i64), Subspace::span(3, &[e(3, i)]))).collect();
        let y = ytilde_from_bigrading(&j, 2, 3).unwrap();
        assert_eq!(y, QiMatrix::diagonal(&[qi(-2, 0), qi(0, 0), qi(2, 0)]));
    }

    #[test]
    fn triple_completion() {
        let model = build_model(FactorKind::symmetric(0, 1, 0)).unwrap();
        let np = complete_sl2_triple(&model.action.n_minus[0], &model.action.y[0]).unwrap();
        assert_eq!(np, model.action.n_plus[0]);
        let z = QiMatrix::zeros(2, 2);
        assert!(complete_sl2_triple(&z, &z).unwrap().is_zero());
        assert_eq!(
            complete_sl2_triple(&model.action.n_minus[0], &model.action.y[0].scale(&qi(-1, 0))),
            Err(Sl2Error::NoSolution)
        );
    }

    #[test]
    fn decompose_single_model() {
        for kind in [FactorKind::symmetric(0, 1, 1), FactorKind::symmetric(1, 2, 0), FactorKind::e_type(2, 0, 1, 0)] {
            let model = build_model(kind).unwrap();
            let fs = decompose_theorem6(&model.hodge, &model.action, Some(&model.polarization)).unwrap();
            assert_eq!(fs.len(), 1);
            assert_eq!(fs[0].kind, kind);
        }
    }

    #[test]
    fn decompose_block_sum() {
        let a = build_model(FactorKind::symmetric(0, 1, 0)).unwrap();
        let b = build_model(FactorKind::e_type(1, 0, 0, 0)).unwrap();
        let sum = a.direct_sum(&b).unwrap();
        let fs = decompose_theorem6(&sum.hodge, &sum.action, Some(&sum.polarization)).unwrap();
        let kinds: Vec<FactorKind> = fs.iter().map(|f| f.kind).collect();
        assert_eq!(kinds, vec![FactorKind::symmetric(0, 1, 0), FactorKind::e_type(1, 0, 0, 0)]);
    }

    #[test]
    fn alpha_s1() {
        let model = build_model(FactorKind::symmetric(0, 1, 0)).unwrap();
        let fs = decompose_theorem6(&model.hodge, &model.action, None).unwrap();
        let alpha = alpha_basis(&fs[0], &model.action).unwrap();
        let vminus = vec![qi(1, 0), qi(0, -1)];
        assert_eq!(alpha.vectors[&(1, 0)], vminus);
        assert_eq!(alpha.vectors[&(0, 0)], model.action.n_minus[0].mul_vec(&vminus));
    }

    #[test]
    fn alpha_s1s1_memberships() {
        let model = build_model(FactorKind::symmetric(0, 1, 1)).unwrap();
        let fs = decompose_theorem6(&model.hodge, &model.action, None).unwrap();
        let alpha = alpha_basis(&fs[0], &model.action).unwrap();
        let w1 = monodromy_weight_filtration(&model.action.n_minus[0], 0).unwrap();
        let w2 = monodromy_weight_filtration(&model.action.total_n_minus(), 0).unwrap();
        for (&(k, l), v) in &alpha.vectors {
            let (l1, l2) = alpha.expected_weights(k, l);
            assert_eq!(w1.weight_of(v), Some(l1));
            assert_eq!(w2.weight_of(v), Some(l2));
        }
    }
}
