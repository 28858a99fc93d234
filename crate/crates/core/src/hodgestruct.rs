//! Hodge structures, polarizations and mixed Hodge structures over `Qi`.
//!
//! Complex conjugation is always taken with respect to the input coordinates.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{HodgeError, LinAlgError};
use crate::exactla::{self, operator_from_decomposition, Direction, Field, Quotient};
use crate::weightfilt::monodromy_weight_filtration;
use crate::{i_pow, Qi, QiFiltration, QiMatrix, QiSubspace};

pub type Bigrading = BTreeMap<(i64, i64), QiSubspace>;

/// Pure Hodge structure of weight `weight` given by its bigrading.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeStructure {
    weight: i64,
    ambient: usize,
    parts: Bigrading,
}

impl HodgeStructure {
    /// Validates `p + q = weight`, the direct sum and `H^{p,q} = conj H^{q,p}`.
    pub fn new(weight: i64, ambient: usize, parts: Bigrading) -> Result<Self, HodgeError> {
        let not_hs = |detail: &str| HodgeError::NotAHodgeFiltration { weight, detail: detail.into() };
        let parts: Bigrading = parts.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        if parts.keys().any(|(p, q)| p + q != weight) {
            return Err(not_hs("type with p + q different from the weight"));
        }
        if parts.values().any(|s| s.ambient() != ambient) {
            return Err(not_hs("ambient dimension mismatch"));
        }
        let spaces: Vec<(&QiSubspace, Qi)> = parts.values().map(|s| (s, Qi::one())).collect();
        operator_from_decomposition(ambient, &spaces).map_err(|_| not_hs("types do not decompose the space"))?;
        for (&(p, q), s) in &parts {
            let other = parts.get(&(q, p)).cloned().unwrap_or_else(|| QiSubspace::zero(ambient));
            if s.conj() != other {
                return Err(not_hs("H^{p,q} is not the conjugate of H^{q,p}"));
            }
        }
        Ok(HodgeStructure { weight, ambient, parts })
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn parts(&self) -> &Bigrading {
        &self.parts
    }

    pub fn part(&self, p: i64, q: i64) -> QiSubspace {
        self.parts.get(&(p, q)).cloned().unwrap_or_else(|| QiSubspace::zero(self.ambient))
    }

    pub fn hodge_numbers(&self) -> BTreeMap<(i64, i64), usize> {
        self.parts.iter().map(|(k, s)| (*k, s.dim())).collect()
    }

    /// `F^p = ⊕_{i ≥ p} H^{i, k-i}`.
    pub fn hodge_filtration(&self) -> QiFiltration {
        let ps: Vec<i64> = self.parts.keys().map(|(p, _)| *p).collect();
        let (lo, hi) = match (ps.iter().min(), ps.iter().max()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return QiFiltration::new(self.ambient, Direction::Decreasing, Vec::new()).expect("empty"),
        };
        let steps = (lo..=hi)
            .map(|p| {
                let mut acc = QiSubspace::zero(self.ambient);
                for (&(i, _), s) in self.parts.range((p, i64::MIN)..) {
                    debug_assert!(i >= p);
                    acc = exactla::sum(&acc, s).expect("same ambient");
                }
                (p, acc)
            })
            .collect();
        QiFiltration::new(self.ambient, Direction::Decreasing, steps).expect("nested by construction")
    }

    /// The operator acting by `f(p, q)` on `H^{p,q}`.
    pub fn type_operator(&self, f: impl Fn(i64, i64) -> Qi) -> QiMatrix {
        let parts: Vec<(&QiSubspace, Qi)> = self.parts.iter().map(|(&(p, q), s)| (s, f(p, q))).collect();
        operator_from_decomposition(self.ambient, &parts).expect("validated decomposition")
    }

    /// Weil operator: `i^{p-q}` on `H^{p,q}`.
    pub fn weil_operator(&self) -> QiMatrix {
        self.type_operator(|p, q| i_pow(p - q))
    }

    /// Same structure written in new coordinates `v ↦ g v` (`g` real).
    pub fn transform(&self, g: &QiMatrix) -> Result<Self, HodgeError> {
        let parts = self.parts.iter().map(|(k, s)| (*k, s.image_under(g))).collect();
        HodgeStructure::new(self.weight, self.ambient, parts)
    }
}

/// `H^{p,q} = F^p ∩ conj(F^q)` after checking `H = F^p ⊕ conj(F^{k-p+1})`.
pub fn filtration_to_bigrading(f: &QiFiltration, k: i64) -> Result<HodgeStructure, HodgeError> {
    if f.direction() != Direction::Decreasing {
        return Err(HodgeError::NotAHodgeFiltration { weight: k, detail: "filtration is not decreasing".into() });
    }
    let n = f.ambient();
    let (lo, hi) = match (f.min_index(), f.max_index()) {
        (Some(a), Some(b)) => (a.min(k - b), b.max(k - a)),
        _ => (0, 0),
    };
    for p in lo..=hi + 1 {
        let a = f.at(p);
        let b = f.at(k - p + 1).conj();
        if a.dim() + b.dim() != n || !exactla::intersect(&a, &b)?.is_zero() {
            return Err(HodgeError::NotAHodgeFiltration {
                weight: k,
                detail: format!("F^{p} and conj F^{} are not complementary", k - p + 1),
            });
        }
    }
    let mut parts = Bigrading::new();
    for p in lo..=hi {
        let s = exactla::intersect(&f.at(p), &f.at(k - p).conj())?;
        if !s.is_zero() {
            parts.insert((p, k - p), s);
        }
    }
    HodgeStructure::new(k, n, parts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Bilinear form `S(u, v) = u^T S v`, symmetric for even weight and skew for odd.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizationForm {
    matrix: QiMatrix,
    parity: Parity,
}

impl PolarizationForm {
    pub fn new(matrix: QiMatrix, weight: i64) -> Result<Self, HodgeError> {
        let parity = if weight.rem_euclid(2) == 0 { Parity::Even } else { Parity::Odd };
        let t = matrix.transpose();
        let ok = match parity {
            Parity::Even => t == matrix,
            Parity::Odd => t == -&matrix,
        };
        if !matrix.is_square() || !ok {
            return Err(HodgeError::NotPolarized(format!("form is not {:?}-symmetric", parity)));
        }
        Ok(PolarizationForm { matrix, parity })
    }

    pub fn matrix(&self) -> &QiMatrix {
        &self.matrix
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn eval(&self, u: &[Qi], v: &[Qi]) -> Qi {
        exactla::dot(u, &self.matrix.mul_vec(v))
    }

    /// Gram matrix `S(b_i, b_j)` on the given vectors.
    pub fn gram(&self, vs: &[Vec<Qi>]) -> QiMatrix {
        QiMatrix::from_fn(vs.len(), vs.len(), |i, j| self.eval(&vs[i], &vs[j]))
    }
}

/// Positive definiteness of a Hermitian matrix by exact elimination: a
/// Hermitian matrix is positive definite iff elimination without pivoting
/// meets only real positive pivots.
pub fn is_positive_definite_hermitian(h: &QiMatrix) -> bool {
    if !h.is_square() || h.transpose() != h.conj() {
        return false;
    }
    let n = h.rows();
    let mut a = h.clone();
    for k in 0..n {
        let piv = a[(k, k)].clone();
        match piv.to_real() {
            Some(r) if r > BigRational::zero() => {}
            _ => return false,
        }
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = a[(i, k)].clone() / piv.clone();
            for j in k..n {
                let v = a[(i, j)].clone() - f.clone() * a[(k, j)].clone();
                a[(i, j)] = v;
            }
        }
    }
    true
}

/// Checks `S(H^{p,q}, H^{r,s}) = 0` unless `(r,s) = (q,p)`.
pub fn check_orthogonality(hs: &HodgeStructure, s: &PolarizationForm) -> Result<(), HodgeError> {
    for (&(p, q), a) in hs.parts() {
        for (&(r, t), b) in hs.parts() {
            if (r, t) == (q, p) {
                continue;
            }
            for u in a.basis() {
                for v in b.basis() {
                    if !s.eval(u, v).is_zero() {
                        return Err(HodgeError::NotPolarized(format!(
                            "S(H^{{{p},{q}}}, H^{{{r},{t}}}) is not zero"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Weil operator `C` and the Hodge metric `h(u, v) = S(Cu, conj v)`, the
/// latter as the matrix `G` with `h(u, v) = u^T G conj(v)`.
pub fn weil_and_metric(hs: &HodgeStructure, s: &PolarizationForm) -> Result<(QiMatrix, QiMatrix), HodgeError> {
    if s.matrix().rows() != hs.ambient() {
        return Err(LinAlgError::DimensionMismatch { expected: hs.ambient(), found: s.matrix().rows() }.into());
    }
    if (s.parity() == Parity::Even) != (hs.weight().rem_euclid(2) == 0) {
        return Err(HodgeError::NotPolarized("form parity does not match the weight".into()));
    }
    check_orthogonality(hs, s)?;
    let c = hs.weil_operator();
    let g = &c.transpose() * s.matrix();
    if !is_positive_definite_hermitian(&g) {
        return Err(HodgeError::NotPolarized("Hodge metric is not positive definite".into()));
    }
    Ok((c, g))
}

/// A pair `(W, F)`; `W` increasing, `F` decreasing.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedHodge {
    pub w: QiFiltration,
    pub f: QiFiltration,
}

impl MixedHodge {
    pub fn new(w: QiFiltration, f: QiFiltration) -> Result<Self, HodgeError> {
        if w.direction() != Direction::Increasing || f.direction() != Direction::Decreasing {
            return Err(HodgeError::NotAHodgeFiltration { weight: 0, detail: "wrong filtration directions".into() });
        }
        if w.ambient() != f.ambient() {
            return Err(LinAlgError::DimensionMismatch { expected: w.ambient(), found: f.ambient() }.into());
        }
        Ok(MixedHodge { w, f })
    }

    pub fn ambient(&self) -> usize {
        self.w.ambient()
    }

    /// `Gr_l^W` with the filtration induced by `F`, in quotient coordinates.
    pub fn graded_filtration(&self, l: i64) -> (Quotient<Qi>, QiFiltration) {
        let gr = self.w.graded(l);
        let wl = self.w.at(l);
        let (lo, hi) = self.f_range();
        let steps = (lo..=hi)
            .map(|p| {
                let s = exactla::intersect(&self.f.at(p), &wl).expect("same ambient");
                (p, gr.project_subspace(&s).expect("inside W_l"))
            })
            .collect();
        let f = QiFiltration::new(gr.dim(), Direction::Decreasing, steps).expect("nested");
        (gr, f)
    }

    fn f_range(&self) -> (i64, i64) {
        (self.f.min_index().unwrap_or(0), self.f.max_index().unwrap_or(0))
    }

    /// Pure Hodge structure induced on `Gr_l^W`.
    pub fn graded_hodge(&self, l: i64) -> Result<(Quotient<Qi>, HodgeStructure), HodgeError> {
        let (gr, f) = self.graded_filtration(l);
        let hs = filtration_to_bigrading(&f, l)?;
        Ok((gr, hs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MhsReport {
    pub w_real: bool,
    /// `(l, F induces a pure structure of weight l on Gr_l)`.
    pub pieces: Vec<(i64, bool)>,
}

impl MhsReport {
    pub fn is_mhs(&self) -> bool {
        self.w_real && self.pieces.iter().all(|(_, ok)| *ok)
    }
}

pub fn mhs_check(m: &MixedHodge) -> MhsReport {
    let w_real = m.w.is_real();
    let pieces = m
        .w
        .jumps()
        .into_iter()
        .map(|l| (l, w_real && m.graded_hodge(l).is_ok()))
        .collect();
    MhsReport { w_real, pieces }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizedMhsReport {
    /// `N^{k+1} = 0`.
    pub nilpotency: bool,
    /// `W = W(N)[-k]`.
    pub weight_is_monodromy: bool,
    /// `S(F^p, F^{k-p+1}) = 0`.
    pub f_isotropic: bool,
    /// `N F^p ⊆ F^{p-1}`.
    pub transversal: bool,
    /// Primitive parts polarized by `S(·, N^l ·)`.
    pub primitive_polarized: bool,
    pub notes: Vec<String>,
}

impl PolarizedMhsReport {
    pub fn all_pass(&self) -> bool {
        self.nilpotency && self.weight_is_monodromy && self.f_isotropic && self.transversal && self.primitive_polarized
    }
}

pub fn polarized_mhs_check(m: &MixedHodge, n: &QiMatrix, s: &PolarizationForm, k: i64) -> PolarizedMhsReport {
    let mut notes = Vec::new();
    let dim = m.ambient();
    let nilpotency = k >= 0 && n.pow(k as u32 + 1).is_zero();
    let weight_is_monodromy = match monodromy_weight_filtration(n, k) {
        Ok(wn) => {
            let (lo, hi) = (m.w.min_index().unwrap_or(0).min(k - dim as i64), m.w.max_index().unwrap_or(0).max(k + dim as i64));
            (lo - 1..=hi + 1).all(|l| wn.at(l) == m.w.at(l))
        }
        Err(e) => {
            notes.push(format!("weight filtration of N: {e}"));
            false
        }
    };
    let (flo, fhi) = m.f_range();
    let f_isotropic = (flo - 1..=fhi + 1).all(|p| {
        let a = m.f.at(p);
        let b = m.f.at(k - p + 1);
        a.basis().iter().all(|u| b.basis().iter().all(|v| s.eval(u, v).is_zero()))
    });
    let transversal = (flo..=fhi + 1).all(|p| m.f.at(p).image_under(n).is_subspace_of(&m.f.at(p - 1)));
    let primitive_polarized = if weight_is_monodromy && n.is_real() && m.w.is_real() {
        match check_primitive_parts(m, n, s, k) {
            Ok(()) => true,
            Err(e) => {
                notes.push(e.to_string());
                false
            }
        }
    } else {
        notes.push("primitive parts not examined".into());
        false
    };
    PolarizedMhsReport { nilpotency, weight_is_monodromy, f_isotropic, transversal, primitive_polarized, notes }
}

fn check_primitive_parts(m: &MixedHodge, n: &QiMatrix, s: &PolarizationForm, k: i64) -> Result<(), HodgeError> {
    for l in 0..=m.ambient() as i64 {
        let (gr, f_gr) = m.graded_filtration(k + l);
        if gr.dim() == 0 {
            continue;
        }
        let to_low = exactla::induced_map_on_graded(&n.pow(l as u32 + 1), &m.w, k + l, k - l - 2)?;
        let prim = to_low.kernel();
        if prim.is_zero() {
            continue;
        }
        let nl = n.pow(l as u32);
        let lifts: Vec<Vec<Qi>> = prim.basis().iter().map(|c| gr.lift(c)).collect();
        let form = QiMatrix::from_fn(lifts.len(), lifts.len(), |i, j| s.eval(&lifts[i], &nl.mul_vec(&lifts[j])));
        // Induced Hodge filtration on the primitive part, in its own coordinates.
        let steps = f_gr
            .steps()
            .iter()
            .map(|(p, sub)| {
                let inter = exactla::intersect(sub, &prim)?;
                let coords: Vec<Vec<Qi>> =
                    inter.basis().iter().map(|v| prim.coordinates(v).expect("inside")).collect();
                Ok((*p, QiSubspace::span(prim.dim(), &coords)))
            })
            .collect::<Result<Vec<_>, LinAlgError>>()?;
        let f_prim = QiFiltration::new(prim.dim(), Direction::Decreasing, steps)?;
        let hs = filtration_to_bigrading(&f_prim, k + l)?;
        let form = PolarizationForm::new(form, k + l)?;
        weil_and_metric(&hs, &form)
            .map_err(|e| HodgeError::NotPolarized(format!("primitive part of Gr_{}: {e}", k + l)))?;
    }
    Ok(())
}

/// Deligne's subspaces
/// `I^{p,q} = F^p ∩ W_{p+q} ∩ (conj F^q ∩ W_{p+q} + Σ_{j≥1} conj F^{q-j} ∩ W_{p+q-j-1})`.
pub fn deligne_bigrading(m: &MixedHodge) -> Bigrading {
    let dim = m.ambient();
    let fbar = |p: i64| m.f.at(p).conj();
    let (flo, fhi) = m.f_range();
    let wlo = m.w.min_index().unwrap_or(0);
    let whi = m.w.max_index().unwrap_or(0);
    let mut out = Bigrading::new();
    for p in flo..=fhi {
        for q in flo..=fhi {
            let l = p + q;
            if l < wlo || l > whi {
                continue;
            }
            let mut inner = exactla::intersect(&fbar(q), &m.w.at(l)).expect("ambient");
            let mut j = 1;
            while l - j > wlo {
                let piece = exactla::intersect(&fbar(q - j), &m.w.at(l - j - 1)).expect("ambient");
                inner = exactla::sum(&inner, &piece).expect("ambient");
                j += 1;
            }
            let outer = exactla::intersect(&m.f.at(p), &m.w.at(l)).expect("ambient");
            let ipq = exactla::intersect(&outer, &inner).expect("ambient");
            if !ipq.is_zero() {
                out.insert((p, q), ipq);
            }
        }
    }
    debug_assert!(out.values().map(QiSubspace::dim).sum::<usize>() <= dim);
    out
}

/// True when the Deligne subspaces split the space and satisfy
/// `I^{p,q} = conj I^{q,p}`.
pub fn r_split_check(m: &MixedHodge) -> bool {
    let i = deligne_bigrading(m);
    if i.values().map(QiSubspace::dim).sum::<usize>() != m.ambient() {
        return false;
    }
    i.iter().all(|(&(p, q), s)| i.get(&(q, p)).is_some_and(|t| s.conj() == *t))
}
