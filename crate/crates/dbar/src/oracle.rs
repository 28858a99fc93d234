//! Numerical integrability test for log-power integrands near the origin of
//! the bidisc, by dyadic shells in `sᵢ = -log|tᵢ|`.

use crate::quadrature::{integrate, GaussRule};

/// Region in `(s₁, s₂)` coordinates near the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogDomain {
    /// `{s₁ ≥ start, s₂ ≥ start}`: a small polydisc.
    Polydisc { start: f64 },
    /// `{s₁/s₂ > eps} ∩ {s₁ ≥ start, s₂ ≥ start}`: the sector where `|t₁|`
    /// is small compared with a power of `|t₂|`, inside a small polydisc.
    Sector { eps: f64, start: f64 },
}

impl LogDomain {
    fn start(&self) -> f64 {
        match *self {
            LogDomain::Polydisc { start } | LogDomain::Sector { start, .. } => start,
        }
    }

    fn first_lower(&self, s2: f64) -> f64 {
        match *self {
            LogDomain::Polydisc { start } => start,
            LogDomain::Sector { eps, start } => start.max(eps * s2),
        }
    }
}

/// `e^{-2n₁s₁ - 2n₂s₂} s₁^a s₂^b ds₁ ds₂`: the angular integral of
/// `|t₁|^{2n₁}|t₂|^{2n₂}` times log powers against `|dt|²/|t|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogPowerIntegrand {
    pub t_orders: (u32, u32),
    pub log_powers: (f64, f64),
}

impl LogPowerIntegrand {
    pub fn eval(&self, s1: f64, s2: f64) -> f64 {
        let (n1, n2) = (self.t_orders.0 as f64, self.t_orders.1 as f64);
        let (a, b) = self.log_powers;
        (-2.0 * n1 * s1 - 2.0 * n2 * s2 + a * s1.ln() + b * s2.ln()).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShellTest {
    pub shells: usize,
    /// Ratio of the last two shell integrals below which the integral is
    /// declared finite.
    pub threshold: f64,
}

impl Default for ShellTest {
    fn default() -> Self {
        ShellTest { shells: 12, threshold: 0.75 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrabilityVerdict {
    pub shell_integrals: Vec<f64>,
    /// `None` when the last two shells both vanish numerically.
    pub tail_ratio: Option<f64>,
    pub finite: bool,
}

/// Integrates over the shells `{R_j ≤ max(s₁, s₂) < 2R_j}`, `R_j = start·2^j`,
/// and compares the last two: a convergent tail decays geometrically, a
/// divergent one does not.
pub fn integrability_oracle(f: &LogPowerIntegrand, domain: LogDomain, test: ShellTest) -> IntegrabilityVerdict {
    let rule = GaussRule::new(8);
    let start = domain.start();
    let shell_integrals: Vec<f64> = (0..test.shells)
        .map(|j| {
            let r = start * 2f64.powi(j as i32);
            shell_integral(f, domain, r, &rule)
        })
        .collect();
    let n = shell_integrals.len();
    let (prev, last) = (shell_integrals[n - 2], shell_integrals[n - 1]);
    let tail_ratio = if prev == 0.0 && last == 0.0 { None } else { Some(last / prev) };
    let finite = tail_ratio.is_none_or(|q| q < test.threshold);
    IntegrabilityVerdict { shell_integrals, tail_ratio, finite }
}

/// Iterated integral in log coordinates `uᵢ = ln sᵢ` over one shell.
fn shell_integral(f: &LogPowerIntegrand, domain: LogDomain, r: f64, rule: &GaussRule) -> f64 {
    let width = 0.25;
    let inner = |s2: f64, lo: f64| -> f64 {
        let lo = lo.max(domain.first_lower(s2));
        let hi = 2.0 * r;
        if lo >= hi {
            return 0.0;
        }
        integrate(|u1| {
            let s1 = u1.exp();
            s1 * f.eval(s1, s2)
        }, lo.ln(), hi.ln(), width, rule)
    };
    let outer = |lo: f64, hi: f64, first_lo: f64| -> f64 {
        if lo >= hi {
            return 0.0;
        }
        integrate(|u2| {
            let s2 = u2.exp();
            s2 * inner(s2, first_lo)
        }, lo.ln(), hi.ln(), width, rule)
    };
    let start = domain.start();
    // s₂ in the shell, s₁ anywhere below 2R; then s₂ below the shell, s₁ in it.
    outer(r.max(start), 2.0 * r, start) + outer(start, r, r)
}
