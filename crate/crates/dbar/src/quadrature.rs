//! Gauss–Legendre rules, composite integration and the radial grid on
//! `σ = -ln r ∈ [σ_A, ∞)`.

use std::sync::OnceLock;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Newton iteration on the Legendre recurrence from Chebyshev guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussRule { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The shared ten-point rule used for path integrals.
pub fn rule10() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| GaussRule::new(10))
}

/// Composite Gauss–Legendre integral of `f` over `[a, b]` with `panels`
/// equal panels. Summation order is fixed.
pub fn composite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, rule: &GaussRule) -> f64 {
    if b <= a || panels == 0 {
        return 0.0;
    }
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let mut panel = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            panel += w * f(mid + 0.5 * h * x);
        }
        total += 0.5 * h * panel;
    }
    total
}

/// Composite rule with panels no wider than `max_width`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, max_width: f64, rule: &GaussRule) -> f64 {
    if b <= a {
        return 0.0;
    }
    let panels = ((b - a) / max_width).ceil().max(1.0) as usize;
    composite(f, a, b, panels, rule)
}

/// Tensor-product-ready radial nodes on `σ ∈ [σ_A, ∞)` through the map
/// `σ = σ_A / x²`, `x ∈ (0, 1]`, with composite Gauss–Legendre in `x`.
/// Weights include the Jacobian `2σ_A/x³`, so `Σ wᵢ g(σᵢ) ≈ ∫ g dσ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    pub sigma_rim: f64,
    pub panels: usize,
    pub order: usize,
    pub sigma: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RadialGrid {
    pub fn new(sigma_rim: f64, panels: usize, order: usize) -> Self {
        let rule = GaussRule::new(order);
        let h = 1.0 / panels as f64;
        let mut sigma = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let x = mid + 0.5 * h * x;
                sigma.push(sigma_rim / (x * x));
                weights.push(0.5 * h * w * 2.0 * sigma_rim / (x * x * x));
            }
        }
        RadialGrid { sigma_rim, panels, order, sigma, weights }
    }

    /// Default resolution: 256 radial points.
    pub fn standard(sigma_rim: f64) -> Self {
        Self::new(sigma_rim, 32, 8)
    }

    /// The same map with twice as many panels.
    pub fn refined(&self) -> Self {
        Self::new(self.sigma_rim, 2 * self.panels, self.order)
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.sigma.iter().zip(&self.weights).map(|(s, w)| w * f(*s)).sum()
    }
}
