//! Seeded random generators for test corpora.

use rand::Rng;

use crate::exactla::{Field, Matrix};

/// Product of random elementary integer matrices: unimodular, small entries.
pub fn unimodular<T: Field, R: Rng>(d: usize, steps: usize, rng: &mut R) -> Matrix<T> {
    let mut g = Matrix::<T>::identity(d);
    if d < 2 {
        return g;
    }
    for _ in 0..steps {
        let (a, b) = (rng.gen_range(0..d), rng.gen_range(0..d));
        if a == b {
            continue;
        }
        let c = T::from_int(rng.gen_range(-2..=2));
        for col in 0..d {
            let v = g[(a, col)].clone() + c.clone() * g[(b, col)].clone();
            g[(a, col)] = v;
        }
    }
    g
}

/// Random partition of `d` into Jordan block sizes.
pub fn jordan_type<R: Rng>(d: usize, rng: &mut R) -> Vec<usize> {
    let mut rest = d;
    let mut blocks = Vec::new();
    while rest > 0 {
        let b = rng.gen_range(1..=rest);
        blocks.push(b);
        rest -= b;
    }
    blocks
}

/// Nilpotent matrix with the given Jordan blocks (ones above the diagonal).
pub fn jordan_nilpotent<T: Field>(blocks: &[usize]) -> Matrix<T> {
    let d = blocks.iter().sum();
    let mut n = Matrix::zeros(d, d);
    let mut start = 0;
    for &b in blocks {
        for i in 0..b.saturating_sub(1) {
            n[(start + i, start + i + 1)] = T::one();
        }
        start += b;
    }
    n
}

/// `g J g⁻¹` for a random Jordan type `J` of size `d`.
pub fn conjugated_nilpotent<T: Field, R: Rng>(d: usize, rng: &mut R) -> Matrix<T> {
    let j = jordan_nilpotent::<T>(&jordan_type(d, rng));
    let g = unimodular::<T, R>(d, 3 * d, rng);
    let g_inv = g.inverse().expect("unimodular");
    &(&g * &j) * &g_inv
}

/// A cochain complex `V⁰ → … → V^top` with random differentials over the
/// integers: each degree is `B ⊕ H ⊕ C` with `d: C_q ≅ B_{q+1}`, conjugated
/// by unimodular changes of basis. Returns the differentials.
pub fn random_complex<T: Field, R: Rng>(h: &[usize], c: &[usize], rng: &mut R) -> Vec<Matrix<T>> {
    let top = h.len();
    let b = |q: usize| if q == 0 { 0 } else { c[q - 1] };
    let dim = |q: usize| b(q) + h[q] + c[q];
    let gs: Vec<Matrix<T>> = (0..top).map(|q| unimodular::<T, R>(dim(q), 3 * dim(q) + 1, rng)).collect();
    (0..top.saturating_sub(1))
        .map(|q| {
            let mut m = Matrix::zeros(dim(q + 1), dim(q));
            for i in 0..c[q] {
                m[(i, b(q) + h[q] + i)] = T::one();
            }
            let inv = gs[q].inverse().expect("unimodular");
            &(&gs[q + 1] * &m) * &inv
        })
        .collect()
}
