//! Dense operators and state vectors on tensor-product spaces.
//!
//! Basis states of `L` two-level sites are indexed by bit strings with site 1
//! as the most significant bit, which is the order `kron` produces.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::{relative, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn diag(entries: &[S]) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn mul(&self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Matrix::<S>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix<S>) -> Matrix<S> {
        self.zip(rhs, |a, b| a.add(b))
    }

    pub fn sub(&self, rhs: &Matrix<S>) -> Matrix<S> {
        self.zip(rhs, |a, b| a.sub(b))
    }

    fn zip(&self, rhs: &Matrix<S>, f: impl Fn(&S, &S) -> S) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|a| if a.is_zero() { S::zero() } else { a.mul(k) })
                .collect(),
        }
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Matrix<S>) -> Matrix<S> {
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        let mut out = Matrix::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            out.set(i * rhs.rows + k, j * rhs.cols + l, a.mul(b));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &StateVector<S>) -> Result<StateVector<S>> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        let mut out = vec![S::zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.components().iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o = o.add(&a.mul(x));
                }
            }
        }
        Ok(StateVector::new(out))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }
}

/// A vector in a `2^L`-dimensional quantum space (or any dense space).
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<S> {
    data: Vec<S>,
}

impl<S: Scalar> StateVector<S> {
    pub fn new(data: Vec<S>) -> Self {
        StateVector { data }
    }

    pub fn zeros(dim: usize) -> Self {
        StateVector {
            data: vec![S::zero(); dim],
        }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = StateVector::zeros(dim);
        v.data[index] = S::one();
        v
    }

    /// `|0⟩`: every site in the first basis state.
    pub fn vacuum(sites: usize) -> Self {
        StateVector::basis(1 << sites, 0)
    }

    /// `|0̄⟩`: every site in the second basis state.
    pub fn dual_vacuum(sites: usize) -> Self {
        StateVector::basis(1 << sites, (1 << sites) - 1)
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn components(&self) -> &[S] {
        &self.data
    }

    pub fn component(&self, i: usize) -> &S {
        &self.data[i]
    }

    pub fn add(&self, rhs: &Self) -> Self {
        StateVector {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        StateVector {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        StateVector {
            data: self
                .data
                .iter()
                .map(|a| if a.is_zero() { S::zero() } else { a.mul(k) })
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }
}

/// Outcome of an identity check `lhs - rhs = 0`.
///
/// Exact backends pass only on an identically zero residual; float backends
/// compare `max|lhs - rhs|` against a scale built from the magnitudes of the
/// two sides, never an absolute threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub exact: bool,
    pub is_zero: bool,
    pub max_abs: f64,
    pub scale: f64,
}

impl Residual {
    pub fn from_parts<S: Scalar>(diff: &[S], scale: f64) -> Self {
        Residual {
            exact: S::EXACT,
            is_zero: diff.iter().all(|x| x.is_zero()),
            max_abs: diff.iter().map(|x| x.magnitude()).fold(0.0, f64::max),
            scale,
        }
    }

    pub fn of_matrices<S: Scalar>(lhs: &Matrix<S>, rhs: &Matrix<S>) -> Self {
        let diff = lhs.sub(rhs);
        Residual::from_parts(diff.entries(), lhs.max_magnitude() + rhs.max_magnitude())
    }

    pub fn of_vectors<S: Scalar>(lhs: &StateVector<S>, rhs: &StateVector<S>) -> Self {
        let diff = lhs.sub(rhs);
        Residual::from_parts(diff.components(), lhs.max_magnitude() + rhs.max_magnitude())
    }

    /// Residual of a quantity that should vanish on its own, with the scale
    /// supplied by the caller.
    pub fn of_value<S: Scalar>(value: &S, scale: f64) -> Self {
        Residual::from_parts(core::slice::from_ref(value), scale)
    }

    pub fn relative(&self) -> f64 {
        relative(self.max_abs, self.scale)
    }

    pub fn passes(&self, rel_tol: f64) -> bool {
        if self.exact {
            self.is_zero
        } else {
            self.is_zero || self.relative() <= rel_tol
        }
    }

    /// Combines residuals, keeping the worst relative one.
    pub fn worst(self, other: Residual) -> Residual {
        let is_zero = self.is_zero && other.is_zero;
        let mut pick = if other.relative() > self.relative() {
            other
        } else {
            self
        };
        pick.is_zero = is_zero;
        pick
    }
}
