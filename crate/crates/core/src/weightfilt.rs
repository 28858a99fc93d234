//! Monodromy weight filtrations of nilpotent endomorphisms.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::WeightError;
use crate::exactla::{self, induced_map_on_graded, Direction, Field, Filtration, Matrix, Quotient, Subspace};

/// `W(N)[-center]`, stored centered with the shift kept separately.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFiltration<T> {
    centered: Filtration<T>,
    nilpotent: Matrix<T>,
    center: i64,
}

impl<T: Field> WeightFiltration<T> {
    pub fn center(&self) -> i64 {
        self.center
    }

    pub fn nilpotent(&self) -> &Matrix<T> {
        &self.nilpotent
    }

    pub fn ambient(&self) -> usize {
        self.centered.ambient()
    }

    /// The filtration centered at 0.
    pub fn centered(&self) -> &Filtration<T> {
        &self.centered
    }

    /// The filtration with the shift applied: `at(l) = W(N)_{l - center}`.
    pub fn filtration(&self) -> Filtration<T> {
        self.centered.shift(self.center)
    }

    pub fn at(&self, l: i64) -> Subspace<T> {
        self.centered.at(l - self.center)
    }

    pub fn graded(&self, l: i64) -> Quotient<T> {
        self.centered.graded(l - self.center)
    }

    pub fn shift(&self, k: i64) -> Self {
        WeightFiltration { center: self.center + k, ..self.clone() }
    }

    /// Nonzero graded dimensions by (shifted) index.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        self.centered
            .jumps()
            .into_iter()
            .map(|l| (l + self.center, self.centered.graded(l).dim()))
            .collect()
    }

    /// Smallest shifted index whose step contains `v`.
    pub fn weight_of(&self, v: &[T]) -> Option<i64> {
        self.centered.level_of(v).map(|l| l + self.center)
    }

    /// Checks both defining axioms against the stored nilpotent.
    pub fn verify(&self) -> Result<(), WeightError> {
        verify_axioms(&self.nilpotent, &self.centered)
    }
}

fn check_nilpotent<T: Field>(n: &Matrix<T>) -> Result<(), WeightError> {
    if !n.is_square() || !n.is_nilpotent() {
        return Err(WeightError::NotNilpotent);
    }
    Ok(())
}

/// `W(N)` shifted by `center`. Uses
/// `W_l = sum_{j >= max(0,-l)} ker N^{l+j+1} ∩ im N^j`, then re-verifies the
/// axioms.
pub fn monodromy_weight_filtration<T: Field>(
    n: &Matrix<T>,
    center: i64,
) -> Result<WeightFiltration<T>, WeightError> {
    check_nilpotent(n)?;
    let d = n.rows();
    let mut powers = vec![Matrix::identity(d)];
    for j in 1..=d {
        powers.push(&powers[j - 1] * n);
    }
    let kernels: Vec<Subspace<T>> = powers.iter().map(exactla::kernel).collect();
    let images: Vec<Subspace<T>> = powers.iter().map(exactla::image).collect();
    let ker = |a: i64| -> Subspace<T> {
        if a <= 0 {
            Subspace::zero(d)
        } else if a as usize >= d {
            Subspace::full(d)
        } else {
            kernels[a as usize].clone()
        }
    };
    // Nilpotency index bounds the weights by the largest Jordan block.
    let top = (1..=d).find(|&j| powers[j].is_zero()).unwrap_or(d) as i64 - 1;
    let mut steps = Vec::new();
    for l in -top - 1..=top {
        let mut acc = Subspace::zero(d);
        for j in (0.max(-l))..=top {
            let piece = exactla::intersect(&ker(l + j + 1), &images[j as usize])?;
            acc = exactla::sum(&acc, &piece)?;
        }
        steps.push((l, acc));
    }
    let centered = Filtration::new(d, Direction::Increasing, steps)?.normalized();
    verify_axioms(n, &centered)?;
    Ok(WeightFiltration { centered, nilpotent: n.clone(), center })
}

/// `N W_l ⊆ W_{l-2}` and `N^l : Gr_l → Gr_{-l}` bijective for `l >= 1`.
pub fn verify_axioms<T: Field>(n: &Matrix<T>, w: &Filtration<T>) -> Result<(), WeightError> {
    let (Some(lo), Some(hi)) = (w.min_index(), w.max_index()) else {
        return Err(WeightError::AxiomViolation("empty filtration".into()));
    };
    if !w.at(hi).is_full() {
        return Err(WeightError::AxiomViolation("top step is not the whole space".into()));
    }
    for l in lo..=hi + 2 {
        if !w.at(l).image_under(n).is_subspace_of(&w.at(l - 2)) {
            return Err(WeightError::AxiomViolation(format!("N does not map W_{l} into W_{}", l - 2)));
        }
    }
    let bound = hi.max(-lo);
    for l in 1..=bound {
        let m = induced_map_on_graded(&n.pow(l as u32), w, l, -l)?;
        if m.rows() != m.cols() || m.rank() != m.cols() {
            return Err(WeightError::AxiomViolation(format!("N^{l} is not an isomorphism Gr_{l} → Gr_{}", -l)));
        }
    }
    Ok(())
}

fn positive<T: Field>(x: &T) -> bool {
    x.to_real().is_some_and(|r| r > num_rational::BigRational::zero())
}

/// `W(Σ λ_i N_i)` for commuting nilpotents and positive coefficients.
pub fn cone_filtration<T: Field>(ns: &[Matrix<T>], lambda: &[T]) -> Result<WeightFiltration<T>, WeightError> {
    if ns.len() != lambda.len() || ns.is_empty() {
        return Err(WeightError::CoefficientCount { expected: ns.len(), found: lambda.len() });
    }
    if !lambda.iter().all(positive) {
        return Err(WeightError::NonPositiveCoefficient);
    }
    for (i, a) in ns.iter().enumerate() {
        for b in &ns[i + 1..] {
            if !a.commutes_with(b) {
                return Err(WeightError::NonCommuting);
            }
        }
    }
    let d = ns[0].rows();
    let mut total = Matrix::zeros(d, d);
    for (n, l) in ns.iter().zip(lambda) {
        total = &total + &n.scale(l);
    }
    monodromy_weight_filtration(&total, 0)
}

#[derive(Clone, Debug)]
pub struct ConeReport<T> {
    pub reference: WeightFiltration<T>,
    pub samples: Vec<Vec<T>>,
    /// Indices of samples whose filtration differs from the reference.
    pub mismatches: Vec<usize>,
}

impl<T> ConeReport<T> {
    pub fn independent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `W(Σ λ_i N_i)` over random positive rational `λ` against `λ = (1,…,1)`.
pub fn cone_independence<T: Field>(ns: &[Matrix<T>], samples: usize, seed: u64) -> Result<ConeReport<T>, WeightError> {
    let ones = vec![T::one(); ns.len()];
    let reference = cone_filtration(ns, &ones)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lambdas = Vec::with_capacity(samples);
    let mut mismatches = Vec::new();
    for s in 0..samples {
        let lam: Vec<T> = (0..ns.len())
            .map(|_| T::from_int(rng.gen_range(1..=40)) / T::from_int(rng.gen_range(1..=12)))
            .collect();
        let w = cone_filtration(ns, &lam)?;
        if w.centered() != reference.centered() {
            mismatches.push(s);
        }
        lambdas.push(lam);
    }
    Ok(ConeReport { reference, samples: lambdas, mismatches })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeWeightReport {
    /// `(k, equality holds on Gr_k)` for each nonzero graded piece of `W(N₁)`.
    pub per_piece: Vec<(i64, bool)>,
}

impl RelativeWeightReport {
    pub fn holds(&self) -> bool {
        self.per_piece.iter().all(|(_, ok)| *ok)
    }
}

/// On each `Gr_k^{W(N₁)}` compares the filtration induced by `w` with
/// `W(N₂ | Gr_k)[-k]`. `W(N₁)` is taken with the same center as `w`.
pub fn relative_weight_check<T: Field>(
    n1: &Matrix<T>,
    n2: &Matrix<T>,
    w: &WeightFiltration<T>,
) -> Result<RelativeWeightReport, WeightError> {
    if !n1.commutes_with(n2) {
        return Err(WeightError::NonCommuting);
    }
    let w1 = monodromy_weight_filtration(n1, w.center())?;
    let (lo, hi) = match (w.centered().min_index(), w.centered().max_index()) {
        (Some(a), Some(b)) => (a + w.center(), b + w.center()),
        _ => return Ok(RelativeWeightReport { per_piece: Vec::new() }),
    };
    let mut per_piece = Vec::new();
    for &k in w1.graded_dims().keys() {
        let gr = w1.graded(k);
        let wk = w1.at(k);
        let n2_gr = gr.induced_map(n2, &gr)?;
        let w2 = monodromy_weight_filtration(&n2_gr, k)?;
        let mut ok = true;
        for l in lo - 1..=hi + 1 {
            let induced = gr.project_subspace(&exactla::intersect(&w.at(l), &wk)?)?;
            if induced != w2.at(l) {
                ok = false;
                break;
            }
        }
        per_piece.push((k, ok));
    }
    Ok(RelativeWeightReport { per_piece })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, Rational};

    fn jordan(n: usize) -> Matrix<Rational> {
        Matrix::from_fn(n, n, |r, c| if c == r + 1 { q(1, 1) } else { q(0, 1) })
    }

    fn e(n: usize, i: usize) -> Vec<Rational> {
        (0..n).map(|j| if i == j { q(1, 1) } else { q(0, 1) }).collect()
    }

    #[test]
    fn zero_nilpotent() {
        let w = monodromy_weight_filtration(&Matrix::<Rational>::zeros(3, 3), 0).unwrap();
        assert!(w.at(-1).is_zero());
        assert!(w.at(0).is_full());
    }

    #[test]
    fn jordan_two() {
        let w = monodromy_weight_filtration(&jordan(2), 0).unwrap();
        assert_eq!(w.at(-1), Subspace::span(2, &[e(2, 0)]));
        assert!(w.at(1).is_full());
        assert_eq!(w.graded_dims(), BTreeMap::from([(-1, 1), (1, 1)]));
    }

    #[test]
    fn jordan_three() {
        let w = monodromy_weight_filtration(&jordan(3), 0).unwrap();
        assert_eq!(w.graded_dims(), BTreeMap::from([(-2, 1), (0, 1), (2, 1)]));
    }

    #[test]
    fn shift_coherence() {
        let w = monodromy_weight_filtration(&jordan(3), 0).unwrap();
        let s = w.shift(2);
        for l in -5..5 {
            assert_eq!(s.at(l), w.at(l - 2));
        }
        assert_eq!(monodromy_weight_filtration(&jordan(3), 2).unwrap().graded_dims(), s.graded_dims());
    }

    #[test]
    fn not_nilpotent() {
        assert_eq!(
            monodromy_weight_filtration(&Matrix::<Rational>::identity(2), 0).unwrap_err(),
            WeightError::NotNilpotent
        );
    }

    #[test]
    fn cone_degenerate_cases() {
        let n = jordan(2);
        let single = cone_filtration(std::slice::from_ref(&n), &[q(3, 2)]).unwrap();
        assert_eq!(single.centered(), monodromy_weight_filtration(&n, 0).unwrap().centered());
        let doubled = cone_filtration(&[n.clone(), n.clone()], &[q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(doubled.centered(), single.centered());
        assert_eq!(cone_filtration(std::slice::from_ref(&n), &[q(-1, 1)]).unwrap_err(), WeightError::NonPositiveCoefficient);
        let m = jordan(2).transpose();
        assert_eq!(cone_filtration(&[n, m], &[q(1, 1), q(1, 1)]).unwrap_err(), WeightError::NonCommuting);
    }

    #[test]
    fn relative_trivial_cases() {
        let n = jordan(3);
        let z = Matrix::zeros(3, 3);
        let w = cone_filtration(&[n.clone(), z.clone()], &[q(1, 1), q(1, 1)]).unwrap();
        assert!(relative_weight_check(&n, &z, &w).unwrap().holds());
        assert!(relative_weight_check(&z, &n, &w).unwrap().holds());
    }
}
