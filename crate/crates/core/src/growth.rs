//! Leading-order growth of Hodge norms of monodromized flat sections near the
//! origin of `(Δ*)²`, and the frame-level checks built on it.
//!
//! A class `(n₁, n₂; a, b)` stands for the squared norm
//! `|t₁|^{2n₁} |t₂|^{2n₂} (-log|t₁|)^a (-log|t₂|)^b`.

use std::collections::BTreeMap;
use std::ops::Add;

use num_traits::Zero;

use crate::error::{GrowthError, WeightError};
use crate::exactla::{self, Field};
use crate::sl2rep::{alpha_basis, joint_eigenspaces, AlphaBasis, FactorKind, IrreducibleFactor, Sl2PairAction};
use crate::weightfilt::{monodromy_weight_filtration, WeightFiltration};
use crate::{Qi, QiMatrix, QiSubspace};

/// Sector of the punctured bidisc on which a class is stated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    /// `log|t₁| / log|t₂| > ε`: `t₁` is the faster variable.
    DEps,
    /// The same with the variables exchanged.
    DEpsPrime,
}

impl Region {
    pub fn name(&self) -> &'static str {
        match self {
            Region::DEps => "D_eps",
            Region::DEpsPrime => "D_eps_prime",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GrowthClass {
    pub t_orders: (u32, u32),
    pub log_exps: (i64, i64),
    pub region: Region,
}

impl GrowthClass {
    pub fn new(t_orders: (u32, u32), log_exps: (i64, i64), region: Region) -> Self {
        GrowthClass { t_orders, log_exps, region }
    }

    pub fn bounded(region: Region) -> Self {
        GrowthClass::new((0, 0), (0, 0), region)
    }

    /// Whether `self ≲ other` on the region. On `D_eps` write
    /// `x = -log|t₁| ≥ ε y`, `y = -log|t₂|`; a power of `|t₁|` beats any
    /// log, a power of `|t₂|` beats powers of `y` only.
    pub fn dominated_by(&self, other: &GrowthClass) -> bool {
        let swap = |c: &GrowthClass| match c.region {
            Region::DEps => (c.t_orders, c.log_exps),
            Region::DEpsPrime => ((c.t_orders.1, c.t_orders.0), (c.log_exps.1, c.log_exps.0)),
        };
        let ((n1, n2), (a, b)) = swap(self);
        let ((m1, m2), (c, d)) = swap(other);
        match n1.cmp(&m1) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => {
                a <= c
                    && match n2.cmp(&m2) {
                        std::cmp::Ordering::Greater => true,
                        std::cmp::Ordering::Less => false,
                        std::cmp::Ordering::Equal => a + b <= c + d,
                    }
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "t_orders": [self.t_orders.0, self.t_orders.1],
            "log_exps": [self.log_exps.0, self.log_exps.1],
            "region": self.region.name(),
        })
    }
}

/// Class of a product of sections.
impl Add for GrowthClass {
    type Output = GrowthClass;

    fn add(self, rhs: GrowthClass) -> GrowthClass {
        debug_assert_eq!(self.region, rhs.region);
        GrowthClass {
            t_orders: (self.t_orders.0 + rhs.t_orders.0, self.t_orders.1 + rhs.t_orders.1),
            log_exps: (self.log_exps.0 + rhs.log_exps.0, self.log_exps.1 + rhs.log_exps.1),
            region: self.region,
        }
    }
}

/// Commuting nilpotent logarithms of monodromy with their weight
/// filtrations `W(N₁)`, `W(N₁+N₂)` and `W(N₂)`, all centered at 0.
#[derive(Clone, Debug)]
pub struct NilpotentPair {
    n: [QiMatrix; 2],
    w_first: WeightFiltration<Qi>,
    w_total: WeightFiltration<Qi>,
    w_second: WeightFiltration<Qi>,
}

impl NilpotentPair {
    pub fn new(n1: &QiMatrix, n2: &QiMatrix) -> Result<Self, GrowthError> {
        if !n1.commutes_with(n2) {
            return Err(WeightError::NonCommuting.into());
        }
        Ok(NilpotentPair {
            w_first: monodromy_weight_filtration(n1, 0)?,
            w_total: monodromy_weight_filtration(&(n1 + n2), 0)?,
            w_second: monodromy_weight_filtration(n2, 0)?,
            n: [n1.clone(), n2.clone()],
        })
    }

    pub fn n(&self, i: usize) -> &QiMatrix {
        &self.n[i]
    }

    pub fn dim(&self) -> usize {
        self.n[0].rows()
    }

    pub fn w_first(&self) -> &WeightFiltration<Qi> {
        &self.w_first
    }

    pub fn w_total(&self) -> &WeightFiltration<Qi> {
        &self.w_total
    }

    pub fn w_second(&self) -> &WeightFiltration<Qi> {
        &self.w_second
    }

    /// Minimal centered weights `(l₁, l₂)` in `(W(N₁), W(N₁+N₂))`.
    pub fn weights_of(&self, v: &[Qi]) -> Option<(i64, i64)> {
        Some((self.w_first.weight_of(v)?, self.w_total.weight_of(v)?))
    }

    pub fn second_weight_of(&self, v: &[Qi]) -> Option<i64> {
        self.w_second.weight_of(v)
    }

    /// `None` for the zero vector.
    pub fn section(&self, v: Vec<Qi>, label: Option<(usize, usize)>) -> Option<MonodromizedSection> {
        let weights = self.weights_of(&v)?;
        Some(MonodromizedSection { flat_vector: v, weights, label })
    }
}

/// `exp(Σ Nᵢ log tᵢ / 2πi) v` for a flat vector `v`, recorded through `v`
/// and its weights.
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromizedSection {
    pub flat_vector: Vec<Qi>,
    pub weights: (i64, i64),
    pub label: Option<(usize, usize)>,
}

fn checked_weights(pair: &NilpotentPair, s: &MonodromizedSection) -> Result<(i64, i64), GrowthError> {
    match pair.weights_of(&s.flat_vector) {
        Some(w) if w == s.weights => Ok(w),
        _ => Err(GrowthError::InconsistentWeights(s.weights.0, s.weights.1)),
    }
}

/// Squared Hodge norm class of a monodromized section.
pub fn hodge_norm_class(pair: &NilpotentPair, s: &MonodromizedSection, region: Region) -> Result<GrowthClass, GrowthError> {
    let (l1, l2) = checked_weights(pair, s)?;
    let log_exps = match region {
        Region::DEps => (l1, l2 - l1),
        Region::DEpsPrime => {
            let l1p = pair.second_weight_of(&s.flat_vector).expect("nonzero");
            (l2 - l1p, l1p)
        }
    };
    Ok(GrowthClass::new((0, 0), log_exps, region))
}

/// Class of `(dtᵢ/tᵢ) ⊗ Nᵢ s` against the class of `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThetaOutcome {
    /// `Nᵢ s = 0`; excluded from boundedness statements.
    Zero,
    Class {
        form: GrowthClass,
        source: GrowthClass,
        /// `form ≲ source`.
        bounded: bool,
        /// `form` and `source` have equal exponents.
        sharp: bool,
    },
}

impl ThetaOutcome {
    pub fn is_bounded(&self) -> bool {
        matches!(self, ThetaOutcome::Zero | ThetaOutcome::Class { bounded: true, .. })
    }
}

/// `i ∈ {1, 2}`.
pub fn theta_apply_class(
    pair: &NilpotentPair,
    s: &MonodromizedSection,
    i: usize,
    region: Region,
) -> Result<ThetaOutcome, GrowthError> {
    assert!(i == 1 || i == 2, "direction must be 1 or 2");
    let source = hodge_norm_class(pair, s, region)?;
    let image = pair.n[i - 1].mul_vec(&s.flat_vector);
    let Some(image) = pair.section(image, None) else {
        return Ok(ThetaOutcome::Zero);
    };
    let metric = if i == 1 { (2, 0) } else { (0, 2) };
    let form = hodge_norm_class(pair, &image, region)? + GrowthClass::new((0, 0), metric, region);
    Ok(ThetaOutcome::Class {
        bounded: form.dominated_by(&source),
        sharp: form.log_exps == source.log_exps,
        form,
        source,
    })
}

/// Projects `v` onto the joint eigenspace of `(Y₁, Y₁+Y₂)` with eigenvalues
/// `weights`.
fn leading_vector(spaces: &BTreeMap<Vec<i64>, QiSubspace>, v: &[Qi], weights: (i64, i64)) -> Vec<Qi> {
    let d = v.len();
    let mut cols = Vec::new();
    let mut keep = Vec::new();
    for (k, s) in spaces {
        for b in s.basis() {
            cols.push(b.clone());
            keep.push(k[0] == weights.0 && k[0] + k[1] == weights.1);
        }
    }
    let p = QiMatrix::from_columns(d, &cols);
    let coords = p.solve(v).expect("eigenspaces span");
    let masked: Vec<Qi> = coords.into_iter().zip(&keep).map(|(c, &k)| if k { c } else { Qi::zero() }).collect();
    p.mul_vec(&masked)
}

/// Leading-order sufficient condition for a frame to be L²-adapted: the
/// Gram matrix of leading vectors under the split reference metric
/// `h(u, v) = uᵀ G v̄` is invertible.
pub fn l2_adapted_check(
    pair: &NilpotentPair,
    splitting: &Sl2PairAction,
    metric: &QiMatrix,
    frame: &[MonodromizedSection],
) -> Result<bool, GrowthError> {
    let d = pair.dim();
    let flats: Vec<Vec<Qi>> = frame.iter().map(|s| s.flat_vector.clone()).collect();
    if QiSubspace::span(d, &flats).dim() != frame.len() {
        return Err(GrowthError::FrameNotSpanning);
    }
    let spaces = joint_eigenspaces(&[&splitting.y[0], &splitting.y[1]])?;
    let mut leads = Vec::new();
    for s in frame {
        let w = checked_weights(pair, s)?;
        leads.push(leading_vector(&spaces, &s.flat_vector, w));
    }
    let gram = QiMatrix::from_fn(leads.len(), leads.len(), |a, b| {
        let vb: Vec<Qi> = leads[b].iter().map(Field::conj).collect();
        exactla::dot(&leads[a], &metric.mul_vec(&vb))
    });
    Ok(gram.rank() == leads.len())
}

/// Coefficients of one adapted basis in terms of another, with the entries
/// outside `{k' ≤ k, l' ≤ l}` listed.
/// `(from, to)` index pair of a transition coefficient.
pub type IndexPair = ((usize, usize), (usize, usize));

#[derive(Clone, Debug, PartialEq)]
pub struct TransitionReport {
    pub coefficients: BTreeMap<IndexPair, Qi>,
    pub violations: Vec<IndexPair>,
}

impl TransitionReport {
    pub fn triangular(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.coefficients.iter().all(|((a, b), c)| if a == b { *c == Qi::from_int(1) } else { c.is_zero() })
    }
}

/// Expresses `α_{k,l}` (ordering `(N₁, N₂)`) through `α'` computed for the
/// ordering `(N₂, N₁)`; `α'` is re-indexed so that `k` refers to `N₁`.
pub fn ordering_change(alpha: &AlphaBasis, alpha_swapped: &AlphaBasis) -> Result<TransitionReport, GrowthError> {
    if alpha.m != alpha_swapped.n || alpha.n != alpha_swapped.m {
        return Err(GrowthError::IndexMismatch);
    }
    let target: Vec<((usize, usize), Vec<Qi>)> =
        alpha_swapped.vectors.iter().map(|(&(a, b), v)| ((b, a), v.clone())).collect();
    change_of_basis(&alpha.vectors, &target.into_iter().collect())
}

fn change_of_basis(
    from: &BTreeMap<(usize, usize), Vec<Qi>>,
    to: &BTreeMap<(usize, usize), Vec<Qi>>,
) -> Result<TransitionReport, GrowthError> {
    let d = from.values().next().map_or(0, Vec::len);
    let to_idx: Vec<(usize, usize)> = to.keys().copied().collect();
    let to_mat = QiMatrix::from_columns(d, &to.values().cloned().collect::<Vec<_>>());
    let from_span = QiSubspace::span(d, &from.values().cloned().collect::<Vec<_>>());
    let to_span = QiSubspace::span(d, &to.values().cloned().collect::<Vec<_>>());
    if from_span != to_span || to_span.dim() != to.len() || from_span.dim() != from.len() {
        return Err(GrowthError::SpanMismatch);
    }
    let mut coefficients = BTreeMap::new();
    let mut violations = Vec::new();
    for (&(k, l), v) in from {
        let c = to_mat.solve(v).ok_or(GrowthError::SpanMismatch)?;
        for (&(kp, lp), ci) in to_idx.iter().zip(c) {
            if !ci.is_zero() && (kp > k || lp > l) {
                violations.push(((k, l), (kp, lp)));
            }
            coefficients.insert(((k, l), (kp, lp)), ci);
        }
    }
    Ok(TransitionReport { coefficients, violations })
}

/// `α` bases of the symmetric factors of an sl2 pair, one per vector of the
/// canonical basis of each lowest weight space. Hodge types are not needed.
pub fn alpha_frames(action: &Sl2PairAction) -> Result<Vec<AlphaBasis>, GrowthError> {
    let spaces = joint_eigenspaces(&[&action.y[0], &action.y[1]])?;
    let low = exactla::intersect(&action.n_minus[0].kernel(), &action.n_minus[1].kernel())?;
    let mut out = Vec::new();
    for (key, e) in &spaces {
        if key[0] > 0 || key[1] > 0 {
            continue;
        }
        let l = exactla::intersect(e, &low)?;
        let (m, n) = ((-key[0]) as usize, (-key[1]) as usize);
        for lowest in l.basis() {
            let factor = IrreducibleFactor {
                kind: FactorKind::symmetric(0, m, n),
                weight: (m + n) as i64,
                embedding: QiMatrix::zeros(action.dim(), 0),
                lowest: vec![lowest.clone()],
            };
            out.push(alpha_basis(&factor, action)?);
        }
    }
    Ok(out)
}

/// Transition reports in both directions, factors matched by span.
pub fn ordering_change_both(
    action: &Sl2PairAction,
    action_swapped: &Sl2PairAction,
) -> Result<Vec<(TransitionReport, TransitionReport)>, GrowthError> {
    let a = alpha_frames(action)?;
    let b = alpha_frames(action_swapped)?;
    let span = |x: &AlphaBasis| QiSubspace::span(action.dim(), &x.vectors.values().cloned().collect::<Vec<_>>());
    let mut out = Vec::new();
    for x in &a {
        let y = b.iter().find(|y| span(y) == span(x)).ok_or(GrowthError::SpanMismatch)?;
        out.push((ordering_change(x, y)?, ordering_change(y, x)?));
    }
    if a.len() != b.len() {
        return Err(GrowthError::SpanMismatch);
    }
    Ok(out)
}

/// Per Hodge level `p`: counts of generators in `F^p`, `F^{p+1}` and
/// `E^p = F^p / F^{p+1}`, and whether the weights read off in `H` agree with
/// the weights predicted for the `E^p` generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelReport {
    pub level: i64,
    pub f_count: usize,
    pub f_next_count: usize,
    pub e_count: usize,
    pub expected_e: usize,
    pub verdicts_agree: bool,
}

impl LevelReport {
    pub fn surjective(&self) -> bool {
        self.e_count == self.expected_e && self.f_count == self.f_next_count + self.e_count
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub levels: Vec<LevelReport>,
}

impl ExactnessReport {
    pub fn passes(&self) -> bool {
        self.levels.iter().all(|l| l.surjective() && l.verdicts_agree)
    }
}

/// A labelled generator `σ_{k,l}` of `S(m)⊗S(n)`, with Hodge level `k + l`.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelledGenerator {
    pub section: MonodromizedSection,
    pub m: usize,
    pub n: usize,
}

impl LabelledGenerator {
    fn label(&self) -> (usize, usize) {
        self.section.label.unwrap_or((0, 0))
    }

    pub fn level(&self) -> i64 {
        let (k, l) = self.label();
        (k + l) as i64
    }

    /// Weights `(2k - m, 2(k+l) - m - n)` predicted for the graded generator.
    pub fn predicted_weights(&self) -> (i64, i64) {
        let (k, l) = self.label();
        let (k, l, m, n) = (k as i64, l as i64, self.m as i64, self.n as i64);
        (2 * k - m, 2 * (k + l) - m - n)
    }
}

/// Checks, generator by generator, that the L² verdict on sections of `F^p`
/// equals the verdict on their image in `E^p`, and that the counts split.
/// `expected` gives `dim E^p` for every level to be checked.
pub fn graded_exactness_check(
    pair: &NilpotentPair,
    frame: &[LabelledGenerator],
    expected: &BTreeMap<i64, usize>,
) -> ExactnessReport {
    let verdict = |w: (i64, i64)| crate::l2complex::classify_weights_d_eps(w);
    let levels = expected
        .iter()
        .map(|(&p, &expected_e)| {
            let f_count = frame.iter().filter(|g| g.level() >= p).count();
            let f_next_count = frame.iter().filter(|g| g.level() > p).count();
            let at_level: Vec<&LabelledGenerator> = frame.iter().filter(|g| g.level() == p).collect();
            let verdicts_agree = at_level.iter().all(|g| match pair.weights_of(&g.section.flat_vector) {
                Some(w) => verdict(w) == verdict(g.predicted_weights()),
                None => false,
            });
            LevelReport { level: p, f_count, f_next_count, e_count: at_level.len(), expected_e, verdicts_agree }
        })
        .collect();
    ExactnessReport { levels }
}

/// The `α` frame of a symmetric model as labelled generators.
pub fn labelled_frame(pair: &NilpotentPair, alpha: &AlphaBasis) -> Vec<LabelledGenerator> {
    alpha
        .vectors
        .iter()
        .filter_map(|(&(k, l), v)| {
            let section = pair.section(v.clone(), Some((k, l)))?;
            Some(LabelledGenerator { section, m: alpha.m, n: alpha.n })
        })
        .collect()
}
