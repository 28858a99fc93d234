//! Exact linear algebra over a field: matrices, canonical subspaces,
//! filtrations and quotients.
//!
//! Subspaces are stored by the rows of their reduced row echelon form, which
//! makes equality of subspaces plain equality of values.

use std::fmt;
use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::LinAlgError;

/// Field operations needed by the exact routines.
///
/// Implemented for `BigRational` and for Gaussian rationals
/// `Complex<BigRational>`. Floating point types are deliberately left out:
/// every routine here decides membership questions by testing for zero.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Complex conjugation (identity on real fields).
    fn conj(&self) -> Self;

    fn from_int(n: i64) -> Self;

    fn from_rational(q: BigRational) -> Self;

    /// `Some(q)` when the value is real.
    fn to_real(&self) -> Option<BigRational>;
}

impl Field for BigRational {
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: BigRational) -> Self {
        q
    }
    fn to_real(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

impl Field for Complex<BigRational> {
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn from_int(n: i64) -> Self {
        Complex::new(BigRational::from_int(n), BigRational::zero())
    }
    fn from_rational(q: BigRational) -> Self {
        Complex::new(q, BigRational::zero())
    }
    fn to_real(&self) -> Option<BigRational> {
        self.im.is_zero().then(|| self.re.clone())
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinAlgError> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != nc) {
            return Err(LinAlgError::Ragged);
        }
        Ok(Matrix { rows: nr, cols: nc, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, cols: &[Vec<T>]) -> Self {
        Self::from_fn(dim, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let v = rows.iter().map(|r| r.iter().map(|&x| T::from_int(x)).collect()).collect();
        Self::from_rows(v).expect("rectangular literal")
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn conj(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Field::conj).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|x| x.conj() == *x)
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "mul_vec dimension");
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] = out[(r, c)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        &(a * b) - &(b * a)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        (self * other) == (other * self)
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            self[(r / other.rows, c / other.cols)].clone() * other[(r % other.rows, c % other.cols)].clone()
        })
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |r, c| {
            if r < self.rows && c < self.cols {
                self[(r, c)].clone()
            } else if r >= self.rows && c >= self.cols {
                other[(r - self.rows, c - self.cols)].clone()
            } else {
                T::zero()
            }
        })
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols { self[(r, c)].clone() } else { other[(r, c - self.cols)].clone() }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows { self[(r, c)].clone() } else { other[(r - self.rows, c)].clone() }
        })
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self[(rows.start + r, cols.start + c)].clone())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(&mut m.data, m.rows, m.cols);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn kernel(&self) -> Subspace<T> {
        kernel(self)
    }

    pub fn image(&self) -> Subspace<T> {
        image(self)
    }

    /// One solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Self::from_columns(self.rows, &[b.to_vec()]));
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (i, &p) in piv.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&Self::identity(n));
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0..n, n..2 * n))
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_square() && self.pow(self.rows as u32).is_zero()
    }

    /// `exp(self)` for a nilpotent matrix (finite sum).
    pub fn exp_nilpotent(&self) -> Result<Self, LinAlgError> {
        if !self.is_nilpotent() {
            return Err(LinAlgError::NotNilpotent);
        }
        let mut term = Self::identity(self.rows);
        let mut acc = term.clone();
        for j in 1..=self.rows {
            term = (&term * self).scale(&(T::one() / T::from_int(j as i64)));
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

fn rref_in_place<T: Field>(data: &mut [T], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(sel) = (pr..rows).find(|&r| !data[r * cols + c].is_zero()) else { continue };
        if sel != pr {
            for j in 0..cols {
                data.swap(sel * cols + j, pr * cols + j);
            }
        }
        let inv = T::one() / data[pr * cols + c].clone();
        for j in c..cols {
            if !data[pr * cols + j].is_zero() {
                data[pr * cols + j] = data[pr * cols + j].clone() * inv.clone();
            }
        }
        for r in 0..rows {
            if r == pr || data[r * cols + c].is_zero() {
                continue;
            }
            let f = data[r * cols + c].clone();
            for j in c..cols {
                let p = &data[pr * cols + j];
                if !p.is_zero() {
                    let v = data[r * cols + j].clone() - f.clone() * p.clone();
                    data[r * cols + j] = v;
                }
            }
        }
        pivots.push(c);
        pr += 1;
    }
    pivots
}

impl<T: Field> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        self.try_mul(rhs).expect("matrix product dimensions")
    }
}

impl<T: Field> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: Self) -> Matrix<T> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix sum dimensions");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Field> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: Self) -> Matrix<T> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix difference dimensions");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Field> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x.clone()).collect() }
    }
}

/// A linear subspace of `T^ambient`, stored by its canonical basis.
#[derive(Clone, PartialEq)]
pub struct Subspace<T> {
    ambient: usize,
    /// Rows of the reduced echelon form.
    basis: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: fmt::Debug> fmt::Debug for Subspace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) {:?}", self.basis.len(), self.ambient, self.basis)
    }
}

impl<T: Field> Subspace<T> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let id = Matrix::<T>::identity(ambient);
        Subspace { ambient, basis: id.to_rows(), pivots: (0..ambient).collect() }
    }

    /// Span of arbitrary vectors.
    pub fn span(ambient: usize, vectors: &[Vec<T>]) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient), "span: vector length");
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let mut data: Vec<T> = vectors.iter().flatten().cloned().collect();
        let pivots = rref_in_place(&mut data, vectors.len(), ambient);
        let basis = (0..pivots.len()).map(|r| data[r * ambient..(r + 1) * ambient].to_vec()).collect();
        Subspace { ambient, basis, pivots }
    }

    pub fn coordinate_axes(ambient: usize, axes: &[usize]) -> Self {
        let vs: Vec<Vec<T>> = axes
            .iter()
            .map(|&i| (0..ambient).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
        Self::span(ambient, &vs)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// Canonical basis vectors.
    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    /// Canonical basis as matrix columns.
    pub fn basis_matrix(&self) -> Matrix<T> {
        Matrix::from_columns(self.ambient, &self.basis)
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Eliminates the pivot coordinates of `v` against the canonical basis.
    fn reduce(&self, v: &[T]) -> Vec<T> {
        let mut w = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (wj, bj) in w.iter_mut().zip(b) {
                if !bj.is_zero() {
                    *wj = wj.clone() - f.clone() * bj.clone();
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[T]) -> bool {
        assert_eq!(v.len(), self.ambient, "contains: vector length");
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Coordinates with respect to the canonical basis.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        self.contains(v).then(|| self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn from_coordinates(&self, c: &[T]) -> Vec<T> {
        combine(self.ambient, &self.basis, c)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|b| other.contains(b))
    }

    /// Linear functionals (as rows) cutting out the subspace.
    pub fn annihilator(&self) -> Vec<Vec<T>> {
        let mut out = Vec::new();
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        for f in (0..self.ambient).filter(|&f| !is_pivot[f]) {
            let mut phi = vec![T::zero(); self.ambient];
            phi[f] = T::one();
            for (b, &p) in self.basis.iter().zip(&self.pivots) {
                if !b[f].is_zero() {
                    phi[p] = -b[f].clone();
                }
            }
            out.push(phi);
        }
        out
    }

    pub fn conj(&self) -> Self {
        let vs: Vec<Vec<T>> = self.basis.iter().map(|b| b.iter().map(Field::conj).collect()).collect();
        Self::span(self.ambient, &vs)
    }

    pub fn is_real(&self) -> bool {
        self.basis.iter().all(|b| b.iter().all(|x| x.conj() == *x))
    }

    pub fn image_under(&self, m: &Matrix<T>) -> Self {
        let vs: Vec<Vec<T>> = self.basis.iter().map(|b| m.mul_vec(b)).collect();
        Self::span(m.rows(), &vs)
    }

    pub fn is_invariant_under(&self, m: &Matrix<T>) -> bool {
        self.basis.iter().all(|b| self.contains(&m.mul_vec(b)))
    }
}

/// `sum_i c_i v_i`.
pub fn combine<T: Field>(ambient: usize, vectors: &[Vec<T>], coeffs: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); ambient];
    for (v, c) in vectors.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o = o.clone() + c.clone() * x.clone();
            }
        }
    }
    out
}

pub fn kernel<T: Field>(m: &Matrix<T>) -> Subspace<T> {
    let (r, piv) = m.rref();
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &piv {
        is_pivot[p] = true;
    }
    let vs: Vec<Vec<T>> = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![T::zero(); n];
            v[f] = T::one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            v
        })
        .collect();
    Subspace::span(n, &vs)
}

pub fn image<T: Field>(m: &Matrix<T>) -> Subspace<T> {
    Subspace::span(m.rows(), &m.columns())
}

fn check_ambient<T: Field>(a: &Subspace<T>, b: &Subspace<T>) -> Result<(), LinAlgError> {
    if a.ambient != b.ambient {
        return Err(LinAlgError::DimensionMismatch { expected: a.ambient, found: b.ambient });
    }
    Ok(())
}

pub fn intersect<T: Field>(a: &Subspace<T>, b: &Subspace<T>) -> Result<Subspace<T>, LinAlgError> {
    check_ambient(a, b)?;
    if a.is_zero() || b.is_full() {
        return Ok(a.clone());
    }
    if b.is_zero() || a.is_full() {
        return Ok(b.clone());
    }
    // Coefficient vectors x with phi(sum x_i a_i) = 0 for every phi cutting out b.
    let ann = b.annihilator();
    let m = Matrix::from_fn(ann.len(), a.dim(), |r, c| dot(&ann[r], &a.basis[c]));
    let k = kernel(&m);
    let vs: Vec<Vec<T>> = k.basis.iter().map(|x| combine(a.ambient, &a.basis, x)).collect();
    Ok(Subspace::span(a.ambient, &vs))
}

pub fn sum<T: Field>(a: &Subspace<T>, b: &Subspace<T>) -> Result<Subspace<T>, LinAlgError> {
    check_ambient(a, b)?;
    let vs: Vec<Vec<T>> = a.basis.iter().chain(&b.basis).cloned().collect();
    Ok(Subspace::span(a.ambient, &vs))
}

/// `{v : M v in B}`.
pub fn preimage<T: Field>(m: &Matrix<T>, b: &Subspace<T>) -> Result<Subspace<T>, LinAlgError> {
    if m.rows() != b.ambient {
        return Err(LinAlgError::DimensionMismatch { expected: b.ambient, found: m.rows() });
    }
    let ann = b.annihilator();
    if ann.is_empty() {
        return Ok(Subspace::full(m.cols()));
    }
    let phi = Matrix::from_rows(ann)?;
    Ok(kernel(&(&phi * m)))
}

pub fn dot<T: Field>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x.clone() * y.clone();
        }
    }
    acc
}

/// The quotient `sup / sub`, coordinatized by the pivot complement: the
/// vectors of `sup` vanishing at the pivot columns of `sub`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quotient<T> {
    sub: Subspace<T>,
    complement: Subspace<T>,
}

impl<T: Field> Quotient<T> {
    pub fn new(sup: &Subspace<T>, sub: &Subspace<T>) -> Result<Self, LinAlgError> {
        check_ambient(sup, sub)?;
        if !sub.is_subspace_of(sup) {
            return Err(LinAlgError::NotNested);
        }
        let reduced: Vec<Vec<T>> = sup.basis.iter().map(|v| sub.reduce(v)).collect();
        let complement = Subspace::span(sup.ambient, &reduced);
        Ok(Quotient { sub: sub.clone(), complement })
    }

    pub fn dim(&self) -> usize {
        self.complement.dim()
    }

    /// Representatives of the quotient basis.
    pub fn representatives(&self) -> &[Vec<T>] {
        self.complement.basis()
    }

    /// Coordinates of the class of `v`; fails when `v` is not in `sup`.
    pub fn class_of(&self, v: &[T]) -> Result<Vec<T>, LinAlgError> {
        let w = self.sub.reduce(v);
        self.complement.coordinates(&w).ok_or(LinAlgError::NotInSubspace)
    }

    pub fn lift(&self, coords: &[T]) -> Vec<T> {
        self.complement.from_coordinates(coords)
    }

    /// Image in the quotient of a subspace of `sup` (as coordinates).
    pub fn project_subspace(&self, s: &Subspace<T>) -> Result<Subspace<T>, LinAlgError> {
        let vs = s.basis.iter().map(|b| self.class_of(b)).collect::<Result<Vec<_>, _>>()?;
        Ok(Subspace::span(self.dim(), &vs))
    }

    /// Matrix of the map induced by `m` into `target` (a quotient of the
    /// codomain); fails when `m` does not respect the quotients.
    pub fn induced_map(&self, m: &Matrix<T>, target: &Quotient<T>) -> Result<Matrix<T>, LinAlgError> {
        let cols = self
            .representatives()
            .iter()
            .map(|r| target.class_of(&m.mul_vec(r)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| LinAlgError::NotFiltered)?;
        if !self.sub.basis.iter().all(|b| target.sub.contains(&m.mul_vec(b))) {
            return Err(LinAlgError::NotFiltered);
        }
        Ok(Matrix::from_columns(target.dim(), &cols))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// An index-labelled chain of subspaces.
///
/// Increasing: `at(l)` is the step with the largest index `<= l`, zero below
/// the first step. Decreasing: `at(p)` is the step with the smallest index
/// `>= p`, zero above the last step.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration<T> {
    ambient: usize,
    direction: Direction,
    steps: Vec<(i64, Subspace<T>)>,
}

impl<T: Field> Filtration<T> {
    pub fn new(
        ambient: usize,
        direction: Direction,
        mut steps: Vec<(i64, Subspace<T>)>,
    ) -> Result<Self, LinAlgError> {
        steps.sort_by_key(|(i, _)| *i);
        if steps.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(LinAlgError::DuplicateIndex);
        }
        for (_, s) in &steps {
            if s.ambient != ambient {
                return Err(LinAlgError::DimensionMismatch { expected: ambient, found: s.ambient });
            }
        }
        for w in steps.windows(2) {
            let ok = match direction {
                Direction::Increasing => w[0].1.is_subspace_of(&w[1].1),
                Direction::Decreasing => w[1].1.is_subspace_of(&w[0].1),
            };
            if !ok {
                return Err(LinAlgError::NotNested);
            }
        }
        Ok(Filtration { ambient, direction, steps })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn steps(&self) -> &[(i64, Subspace<T>)] {
        &self.steps
    }

    pub fn min_index(&self) -> Option<i64> {
        self.steps.first().map(|s| s.0)
    }

    pub fn max_index(&self) -> Option<i64> {
        self.steps.last().map(|s| s.0)
    }

    pub fn at(&self, l: i64) -> Subspace<T> {
        match self.direction {
            Direction::Increasing => self
                .steps
                .iter()
                .rev()
                .find(|(i, _)| *i <= l)
                .map(|(_, s)| s.clone())
                .unwrap_or_else(|| Subspace::zero(self.ambient)),
            Direction::Decreasing => self
                .steps
                .iter()
                .find(|(i, _)| *i >= l)
                .map(|(_, s)| s.clone())
                .unwrap_or_else(|| Subspace::zero(self.ambient)),
        }
    }

    /// `Gr_l`: `W_l / W_{l-1}` or `F^p / F^{p+1}`.
    pub fn graded(&self, l: i64) -> Quotient<T> {
        let (sup, sub) = match self.direction {
            Direction::Increasing => (self.at(l), self.at(l - 1)),
            Direction::Decreasing => (self.at(l), self.at(l + 1)),
        };
        Quotient::new(&sup, &sub).expect("filtration steps are nested")
    }

    /// Re-index: the result has `at(l + k) == self.at(l)`.
    pub fn shift(&self, k: i64) -> Self {
        Filtration {
            ambient: self.ambient,
            direction: self.direction,
            steps: self.steps.iter().map(|(i, s)| (i + k, s.clone())).collect(),
        }
    }

    /// Drops redundant steps so that consecutive steps differ.
    pub fn normalized(&self) -> Self {
        let mut steps: Vec<(i64, Subspace<T>)> = Vec::new();
        match self.direction {
            Direction::Increasing => {
                for (i, s) in &self.steps {
                    if steps.last().is_none_or(|(_, p)| p != s) {
                        steps.push((*i, s.clone()));
                    }
                }
            }
            Direction::Decreasing => {
                for (i, s) in self.steps.iter().rev() {
                    if steps.last().is_none_or(|(_, p)| p != s) {
                        steps.push((*i, s.clone()));
                    }
                }
                steps.reverse();
            }
        }
        Filtration { ambient: self.ambient, direction: self.direction, steps }
    }

    /// Indices at which the graded piece is nonzero.
    pub fn jumps(&self) -> Vec<i64> {
        let (Some(lo), Some(hi)) = (self.min_index(), self.max_index()) else { return Vec::new() };
        (lo - 1..=hi + 1).filter(|&l| self.graded(l).dim() > 0).collect()
    }

    pub fn is_real(&self) -> bool {
        self.steps.iter().all(|(_, s)| s.is_real())
    }

    /// Smallest (increasing) or largest (decreasing) index whose step
    /// contains `v`; `None` for the zero vector.
    pub fn level_of(&self, v: &[T]) -> Option<i64> {
        if v.iter().all(Zero::is_zero) {
            return None;
        }
        let (lo, hi) = (self.min_index()?, self.max_index()?);
        match self.direction {
            Direction::Increasing => (lo..=hi).find(|&l| self.at(l).contains(v)),
            Direction::Decreasing => (lo..=hi).rev().find(|&l| self.at(l).contains(v)),
        }
    }
}

/// The operator acting by `value` on each `space`; the spaces must form a
/// direct sum decomposition of the ambient space.
pub fn operator_from_decomposition<T: Field>(
    ambient: usize,
    parts: &[(&Subspace<T>, T)],
) -> Result<Matrix<T>, LinAlgError> {
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    for (s, v) in parts {
        if s.ambient != ambient {
            return Err(LinAlgError::DimensionMismatch { expected: ambient, found: s.ambient });
        }
        for b in &s.basis {
            cols.push(b.clone());
            vals.push(v.clone());
        }
    }
    if cols.len() != ambient {
        return Err(LinAlgError::NotADecomposition);
    }
    let p = Matrix::from_columns(ambient, &cols);
    let p_inv = p.inverse().ok_or(LinAlgError::NotADecomposition)?;
    Ok(&(&p * &Matrix::diagonal(&vals)) * &p_inv)
}

/// Matrix of `m: Gr_l -> Gr_target` in the quotient bases of `w`.
pub fn induced_map_on_graded<T: Field>(
    m: &Matrix<T>,
    w: &Filtration<T>,
    l: i64,
    target: i64,
) -> Result<Matrix<T>, LinAlgError> {
    let src = w.graded(l);
    let dst = w.graded(target);
    let wl = w.at(l);
    if !wl.image_under(m).is_subspace_of(&w.at(target)) {
        return Err(LinAlgError::NotFiltered);
    }
    src.induced_map(m, &dst)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::{q, qi, Qi};

    fn jordan2() -> Matrix<Qi> {
        Matrix::from_int_rows(&[&[0, 1], &[0, 0]])
    }

    fn e(n: usize, i: usize) -> Vec<Qi> {
        (0..n).map(|j| if i == j { Qi::one() } else { Qi::zero() }).collect()
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel(&Matrix::<Qi>::zeros(3, 3)).is_full());
        assert!(kernel(&Matrix::<Qi>::identity(3)).is_zero());
        assert_eq!(kernel(&jordan2()), Subspace::span(2, &[e(2, 0)]));
    }

    #[test]
    fn subspace_examples() {
        let a = Subspace::span(2, &[vec![Qi::one(), Qi::one()]]);
        let b = Subspace::span(2, &[e(2, 0)]);
        assert!(intersect(&a, &b).unwrap().is_zero());
        let c = Subspace::span(2, &[e(2, 1)]);
        assert!(sum(&b, &c).unwrap().is_full());
        assert!(preimage(&jordan2(), &b).unwrap().is_full());
        assert!(intersect(&a, &Subspace::zero(3)).is_err());
    }

    #[test]
    fn complex_entries() {
        // span{(1, i)} contains (i, -1) but not (1, -i).
        let s = Subspace::span(2, &[vec![Qi::one(), qi(0, 1)]]);
        assert!(s.contains(&[qi(0, 1), qi(-1, 0)]));
        assert!(!s.contains(&[Qi::one(), qi(0, -1)]));
        assert_eq!(s.conj(), Subspace::span(2, &[vec![Qi::one(), qi(0, -1)]]));
        assert!(!s.is_real());
    }

    #[test]
    fn induced_map_examples() {
        let n = jordan2();
        let w = Filtration::new(
            2,
            Direction::Increasing,
            vec![(-1, Subspace::span(2, &[e(2, 0)])), (1, Subspace::full(2))],
        )
        .unwrap();
        let m = induced_map_on_graded(&n, &w, 1, -1).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert!(!m.is_zero());
        let id = induced_map_on_graded(&Matrix::identity(2), &w, 1, 1).unwrap();
        assert_eq!(id, Matrix::identity(1));
        assert!(induced_map_on_graded(&n, &w, 1, 1).is_ok());
        let w0: Filtration<Qi> = Filtration::new(2, Direction::Increasing, vec![(0, Subspace::full(2))]).unwrap();
        assert!(induced_map_on_graded(&Matrix::zeros(2, 2), &w0, 0, 0).unwrap().is_zero());
        // The identity does not lower W.
        assert!(induced_map_on_graded(&Matrix::identity(2), &w, 1, -1).is_err());
    }

    #[test]
    fn inverse_and_solve() {
        let m: Matrix<BigRational> = Matrix::from_int_rows(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
        assert_eq!(m.solve(&[q(3, 1), q(2, 1)]).unwrap(), vec![q(1, 1), q(1, 1)]);
        let sing: Matrix<BigRational> = Matrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert!(sing.inverse().is_none());
        assert!(sing.solve(&[q(1, 1), q(2, 1)]).is_none());
        assert_eq!(Matrix::<BigRational>::zeros(0, 0).inverse(), Some(Matrix::zeros(0, 0)));
    }

    #[test]
    fn exp_of_jordan() {
        let n: Matrix<BigRational> = Matrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let g = n.exp_nilpotent().unwrap();
        assert_eq!(g[(0, 2)], q(1, 2));
        assert!(Matrix::<BigRational>::identity(2).exp_nilpotent().is_err());
    }

    #[test]
    fn quotient_coordinates() {
        let sup = Subspace::<Qi>::full(3);
        let sub = Subspace::span(3, &[vec![Qi::one(), Qi::one(), Qi::zero()]]);
        let qt = Quotient::new(&sup, &sub).unwrap();
        assert_eq!(qt.dim(), 2);
        // (1,1,0) is zero in the quotient.
        assert!(qt.class_of(&[Qi::one(), Qi::one(), Qi::zero()]).unwrap().iter().all(Zero::is_zero));
        let c = qt.class_of(&e(3, 2)).unwrap();
        let back = qt.lift(&c);
        assert_eq!(qt.class_of(&back).unwrap(), c);
    }
}
