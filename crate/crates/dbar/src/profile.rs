//! Radial profiles of Fourier modes. Every profile is a finite sum of
//! separable terms `c · a(r₁) · b(r₂)`; axis functions are evaluated in the
//! log coordinate `σ = -ln r`.

use crate::quadrature::{integrate, rule10};

/// Start of a radial path integral: the puncture `r = 0` or the rim `r = A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Anchor {
    Origin,
    Rim,
}

impl Anchor {
    pub fn label(&self) -> &'static str {
        match self {
            Anchor::Origin => "0",
            Anchor::Rim => "A",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AxisFn {
    /// `Σ c rⁱ` over `(i, c)` pairs.
    Laurent(Vec<(i32, f64)>),
    /// `exp(-1/(1-z²))` with `z = (σ - center)/width`, zero for `|z| ≥ 1`.
    Bump { center: f64, width: f64 },
    Product(Vec<AxisFn>),
    /// `(∂_r - twist/r)` applied to a differentiable base of bounded support.
    Twisted { base: Box<AxisFn>, twist: i32 },
    /// `r^outer ∫_anchor^r ρ^inner base(ρ) dρ`.
    PathIntegral { base: Box<AxisFn>, outer: i32, inner: i32, anchor: Anchor, sigma_rim: f64 },
}

impl AxisFn {
    pub fn constant(c: f64) -> Self {
        AxisFn::Laurent(vec![(0, c)])
    }

    pub fn power(i: i32) -> Self {
        AxisFn::Laurent(vec![(i, 1.0)])
    }

    pub fn bump(center: f64, width: f64) -> Self {
        AxisFn::Bump { center, width }
    }

    /// Interval of `σ` outside which the function vanishes.
    pub fn support(&self) -> (f64, f64) {
        match self {
            AxisFn::Laurent(_) => (f64::NEG_INFINITY, f64::INFINITY),
            AxisFn::Bump { center, width } => (center - width, center + width),
            AxisFn::Product(fs) => fs.iter().map(|f| f.support()).fold((f64::NEG_INFINITY, f64::INFINITY), |a, b| (a.0.max(b.0), a.1.min(b.1))),
            AxisFn::Twisted { base, .. } => base.support(),
            AxisFn::PathIntegral { base, anchor, sigma_rim, .. } => match anchor {
                Anchor::Origin => (f64::NEG_INFINITY, base.support().1),
                // Outside the rim the integral runs backwards and picks up
                // whatever part of the base lies between `σ` and the rim.
                Anchor::Rim if base.support().0 < *sigma_rim => (f64::NEG_INFINITY, f64::INFINITY),
                Anchor::Rim => (base.support().0, f64::INFINITY),
            },
        }
    }

    fn bounded(&self) -> bool {
        let (lo, hi) = self.support();
        lo.is_finite() && hi.is_finite()
    }

    pub fn is_differentiable(&self) -> bool {
        match self {
            AxisFn::Laurent(_) | AxisFn::Bump { .. } => true,
            AxisFn::Product(fs) => fs.iter().all(|f| f.is_differentiable()),
            _ => false,
        }
    }

    /// Smallest power with a nonzero coefficient near `r = 0`; `None` when
    /// the function vanishes near the origin.
    pub fn leading_power(&self) -> Option<i32> {
        if self.support().1.is_finite() {
            return None;
        }
        match self {
            AxisFn::Laurent(cs) => cs.iter().filter(|(_, c)| *c != 0.0).map(|(i, _)| *i).min(),
            AxisFn::Product(fs) => fs.iter().map(|f| f.leading_power()).sum(),
            AxisFn::Twisted { base, .. } => base.leading_power().map(|p| p - 1),
            AxisFn::PathIntegral { .. } | AxisFn::Bump { .. } => None,
        }
    }

    /// `(∂_r - j/r) self`, kept in closed form for Laurent sums.
    pub fn twisted(&self, j: i32) -> Option<AxisFn> {
        match self {
            AxisFn::Laurent(cs) => {
                let out: Vec<(i32, f64)> = cs.iter().map(|&(i, c)| (i - 1, (i - j) as f64 * c)).filter(|(_, c)| *c != 0.0).collect();
                Some(AxisFn::Laurent(out))
            }
            f if f.is_differentiable() && f.bounded() => Some(AxisFn::Twisted { base: Box::new(f.clone()), twist: j }),
            _ => None,
        }
    }

    /// Path integral with the growth at the origin checked; `None` if the
    /// integral diverges there or cannot be evaluated.
    pub fn path_integral(base: &AxisFn, outer: i32, inner: i32, anchor: Anchor, sigma_rim: f64) -> Option<AxisFn> {
        match base {
            AxisFn::Laurent(cs) => {
                if anchor == Anchor::Origin && cs.iter().any(|&(i, c)| c != 0.0 && inner + i < 0) {
                    return None;
                }
            }
            b if !b.bounded() => return None,
            _ => {}
        }
        Some(AxisFn::PathIntegral { base: Box::new(base.clone()), outer, inner, anchor, sigma_rim })
    }

    /// Limit as `r → 0`, when it exists.
    pub fn value_at_origin(&self) -> Option<f64> {
        if self.support().1.is_finite() {
            return Some(0.0);
        }
        match self {
            AxisFn::Laurent(cs) => {
                if cs.iter().any(|&(i, c)| i < 0 && c != 0.0) {
                    None
                } else {
                    Some(cs.iter().filter(|(i, _)| *i == 0).map(|(_, c)| c).sum())
                }
            }
            AxisFn::Product(fs) => fs.iter().map(|f| f.value_at_origin()).product(),
            _ => None,
        }
    }

    pub fn eval(&self, sigma: f64) -> f64 {
        self.eval_scaled(sigma, 0)
    }

    /// `r^p · f(r)` at `r = e^{-σ}`, combining exponents before
    /// exponentiating so that neither factor overflows on its own.
    pub fn eval_scaled(&self, sigma: f64, p: i32) -> f64 {
        let (lo, hi) = self.support();
        if sigma <= lo || sigma >= hi {
            return 0.0;
        }
        match self {
            AxisFn::Laurent(cs) => cs.iter().map(|&(i, c)| c * (-((i + p) as f64) * sigma).exp()).sum(),
            AxisFn::Bump { .. } | AxisFn::Product(_) | AxisFn::Twisted { .. } => self.eval_bounded(sigma) * (-(p as f64) * sigma).exp(),
            AxisFn::PathIntegral { base, outer, inner, anchor, sigma_rim } => path_value(base, outer + p, *inner, *anchor, *sigma_rim, sigma),
        }
    }

    fn eval_bounded(&self, sigma: f64) -> f64 {
        match self {
            AxisFn::Bump { center, width } => bump(sigma, *center, *width).0,
            AxisFn::Product(fs) => {
                let mut v = 1.0;
                for f in fs {
                    v *= f.eval(sigma);
                    if v == 0.0 {
                        return 0.0;
                    }
                }
                v
            }
            // (∂_r - j/r) f = -e^{σ} (∂_σ f + j f)
            AxisFn::Twisted { base, twist } => -sigma.exp() * (base.deriv_sigma(sigma) + *twist as f64 * base.eval(sigma)),
            _ => self.eval_scaled(sigma, 0),
        }
    }

    /// `∂f/∂σ`, for differentiable functions.
    pub fn deriv_sigma(&self, sigma: f64) -> f64 {
        let (lo, hi) = self.support();
        if sigma <= lo || sigma >= hi {
            return 0.0;
        }
        match self {
            AxisFn::Laurent(cs) => cs.iter().map(|&(i, c)| -(i as f64) * c * (-(i as f64) * sigma).exp()).sum(),
            AxisFn::Bump { center, width } => bump(sigma, *center, *width).1,
            AxisFn::Product(fs) => {
                let vals: Vec<f64> = fs.iter().map(|f| f.eval(sigma)).collect();
                (0..fs.len())
                    .map(|i| {
                        let others: f64 = vals.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v).product();
                        if others == 0.0 {
                            0.0
                        } else {
                            fs[i].deriv_sigma(sigma) * others
                        }
                    })
                    .sum()
            }
            _ => unreachable!("derivatives are only taken of differentiable profiles"),
        }
    }
}

/// Bump value and `σ`-derivative.
fn bump(sigma: f64, center: f64, width: f64) -> (f64, f64) {
    let z = (sigma - center) / width;
    if z.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let d = 1.0 - z * z;
    let v = (-1.0 / d).exp();
    (v, v * (-2.0 * z / (d * d)) / width)
}

/// `r^outer ∫_anchor^r ρ^inner base(ρ) dρ` at `r = e^{-σ}`.
fn path_value(base: &AxisFn, outer: i32, inner: i32, anchor: Anchor, sigma_rim: f64, sigma: f64) -> f64 {
    let (outer_f, inner_f) = (outer as f64, inner as f64);
    if let AxisFn::Laurent(cs) = base {
        return cs
            .iter()
            .map(|&(i, c)| {
                let e = inner + i + 1;
                let ef = e as f64;
                match anchor {
                    Anchor::Origin => c * (-(outer_f + ef) * sigma).exp() / ef,
                    Anchor::Rim if e == 0 => c * (-outer_f * sigma).exp() * (sigma_rim - sigma),
                    Anchor::Rim => c * ((-(outer_f + ef) * sigma).exp() - (-outer_f * sigma - ef * sigma_rim).exp()) / ef,
                }
            })
            .sum();
    }
    // ρ = e^{-s}, dρ = -ρ ds
    let (lo, hi) = base.support();
    let integrand = |s: f64| (-outer_f * sigma - (inner_f + 1.0) * s).exp() * base.eval(s);
    let width = ((hi - lo) / 40.0).min(0.1);
    match anchor {
        Anchor::Origin => integrate(integrand, sigma.max(lo), hi, width, rule10()),
        Anchor::Rim if sigma >= sigma_rim => -integrate(integrand, sigma_rim.max(lo), sigma.min(hi), width, rule10()),
        Anchor::Rim => integrate(integrand, sigma.max(lo), sigma_rim.min(hi), width, rule10()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparableTerm {
    pub coef: f64,
    pub axes: [AxisFn; 2],
}

impl SeparableTerm {
    pub fn new(coef: f64, first: AxisFn, second: AxisFn) -> Self {
        SeparableTerm { coef, axes: [first, second] }
    }

    pub fn eval(&self, s1: f64, s2: f64) -> f64 {
        let a = self.axes[0].eval(s1);
        if a == 0.0 {
            return 0.0;
        }
        self.coef * a * self.axes[1].eval(s2)
    }
}

/// Operation applied to one axis before tabulation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AxisOp {
    /// `r^p · f`.
    Value { scale: i32 },
    /// `r · ½(∂_r - j/r) f = -½(∂_σ f + j f)` by Richardson-extrapolated
    /// central differences in `σ` with largest step `h`.
    HalfTwistedDifference { twist: i32, h: f64 },
}

impl AxisOp {
    pub fn apply(&self, f: &AxisFn, sigma: f64) -> f64 {
        match *self {
            AxisOp::Value { scale } => f.eval_scaled(sigma, scale),
            AxisOp::HalfTwistedDifference { twist, h } => -0.5 * (richardson(f, sigma, h) + twist as f64 * f.eval(sigma)),
        }
    }
}

/// Central differences at `h`, `h/2`, `h/4` extrapolated to sixth order.
fn richardson(f: &AxisFn, sigma: f64, h: f64) -> f64 {
    let central = |h: f64| (f.eval(sigma + h) - f.eval(sigma - h)) / (2.0 * h);
    let (d1, d2, d4) = (central(h), central(0.5 * h), central(0.25 * h));
    let e1 = (4.0 * d2 - d1) / 3.0;
    let e2 = (4.0 * d4 - d2) / 3.0;
    (16.0 * e2 - e1) / 15.0
}

/// A mode profile: a finite sum of separable terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModeProfile {
    pub terms: Vec<SeparableTerm>,
}

impl ModeProfile {
    pub fn single(coef: f64, first: AxisFn, second: AxisFn) -> Self {
        ModeProfile { terms: vec![SeparableTerm::new(coef, first, second)] }
    }

    pub fn push(&mut self, term: SeparableTerm) {
        self.terms.push(term);
    }

    pub fn is_empty(&self) -> bool {
        self.terms.iter().all(|t| t.coef == 0.0)
    }

    pub fn eval(&self, s1: f64, s2: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(s1, s2)).sum()
    }

    /// Row-major table over `first × second` of `Σ c · op₀(a) · op₁(b)`.
    pub fn tabulate(&self, ops: [AxisOp; 2], first: &[f64], second: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; first.len() * second.len()];
        for t in &self.terms {
            if t.coef == 0.0 {
                continue;
            }
            let a: Vec<f64> = first.iter().map(|&s| ops[0].apply(&t.axes[0], s)).collect();
            let b: Vec<f64> = second.iter().map(|&s| ops[1].apply(&t.axes[1], s)).collect();
            for (i, ai) in a.iter().enumerate() {
                if *ai == 0.0 {
                    continue;
                }
                let row = &mut out[i * second.len()..(i + 1) * second.len()];
                for (o, bj) in row.iter_mut().zip(&b) {
                    *o += t.coef * ai * bj;
                }
            }
        }
        out
    }
}
