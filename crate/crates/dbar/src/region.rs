//! Range of the classical `L²` existence theorem for the line bundle with
//! `‖σ‖² = (-log|t₁|)^k (-log|t₂|)^l` on the bidisc.

/// Whether the curvature positivity condition
/// `γ₁ + … + γ_q - γ_{p+1} - … - γ₂ > 0` holds for `(p, q)`-forms, with
/// curvature eigenvalues `γ₁ = min(k, l) ≤ γ₂ = max(k, l)`. Degree `q = 0`
/// is never covered.
pub fn hormander_region(p: usize, q: usize, k: f64, l: f64) -> bool {
    assert!(p <= 2 && q <= 2, "form degrees on the bidisc are at most 2");
    if q == 0 {
        return false;
    }
    let gamma = [k.min(l), k.max(l)];
    let positive: f64 = gamma[..q].iter().sum();
    let negative: f64 = gamma[p..].iter().sum();
    positive - negative > 0.0
}
