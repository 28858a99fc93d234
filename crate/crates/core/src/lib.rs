//! Exact computations around degenerations of polarized variations of Hodge
//! structure in two variables: monodromy weight filtrations, sl2 models,
//! limiting mixed Hodge structures, growth of Hodge norms and finite models
//! of the L2 Dolbeault complex.
//!
//! The linear algebra in [`exactla`] and [`weightfilt`] is generic over an
//! exact [`Field`]; the Hodge-theoretic layers work over the Gaussian
//! rationals [`Qi`], since they need a square root of -1.

pub mod corpus;
pub mod error;
pub mod exactla;
pub mod growth;
pub mod hodgestruct;
pub mod l2complex;
pub mod random;
pub mod serial;
pub mod sl2rep;
pub mod weightfilt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;

pub use error::{GrowthError, HodgeError, L2Error, LinAlgError, Sl2Error, WeightError};
pub use exactla::{Direction, Field, Filtration, Matrix, Quotient, Subspace};

pub type Rational = BigRational;
/// Gaussian rationals.
pub type Qi = Complex<BigRational>;
pub type QMatrix = Matrix<Rational>;
pub type QiMatrix = Matrix<Qi>;
pub type QiSubspace = Subspace<Qi>;
pub type QiFiltration = Filtration<Qi>;

pub fn q(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(re: i64, im: i64) -> Qi {
    Complex::new(q(re, 1), q(im, 1))
}

/// The imaginary unit in `Qi`.
pub fn i_unit() -> Qi {
    qi(0, 1)
}

/// `i^e` for any integer exponent.
pub fn i_pow(e: i64) -> Qi {
    match e.rem_euclid(4) {
        0 => qi(1, 0),
        1 => qi(0, 1),
        2 => qi(-1, 0),
        _ => qi(0, -1),
    }
}

/// Embeds a rational matrix into `Qi`.
pub fn to_qi(m: &QMatrix) -> QiMatrix {
    Matrix::from_fn(m.rows(), m.cols(), |r, c| Complex::new(m[(r, c)].clone(), q(0, 1)))
}
