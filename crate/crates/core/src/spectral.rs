//! Exponentiated spectral parameters.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{LaurentPoly, Scalar, VarId};

/// A spectral parameter `λ` stored as the pair `(e^{λ}, e^{-λ})`.
///
/// Differences `λ - μ` become products, so weights never need logarithms or
/// fractional powers.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectral<S> {
    exp: S,
    inv: S,
}

impl<S: Scalar> Spectral<S> {
    pub fn from_exp(exp: S) -> Result<Self> {
        let inv = exp.try_inv().ok_or_else(|| Error::NotInvertible(format!("{exp:?}")))?;
        Ok(Spectral { exp, inv })
    }

    /// `λ = 0`.
    pub fn zero() -> Self {
        Spectral {
            exp: S::one(),
            inv: S::one(),
        }
    }

    pub fn exp(&self) -> &S {
        &self.exp
    }

    pub fn inv(&self) -> &S {
        &self.inv
    }

    /// `λ - μ`.
    pub fn minus(&self, other: &Spectral<S>) -> Spectral<S> {
        Spectral {
            exp: self.exp.mul(&other.inv),
            inv: self.inv.mul(&other.exp),
        }
    }

    /// `λ + μ`.
    pub fn plus(&self, other: &Spectral<S>) -> Spectral<S> {
        Spectral {
            exp: self.exp.mul(&other.exp),
            inv: self.inv.mul(&other.inv),
        }
    }

    /// `-λ`.
    pub fn negated(&self) -> Spectral<S> {
        Spectral {
            exp: self.inv.clone(),
            inv: self.exp.clone(),
        }
    }
}

impl Spectral<LaurentPoly> {
    /// The symbolic parameter whose exponential is the variable `v`.
    pub fn var(v: VarId) -> Self {
        Spectral {
            exp: LaurentPoly::var(v),
            inv: LaurentPoly::var_pow(v, -1),
        }
    }

    /// Symbolic `q = e^{γ}`.
    pub fn q() -> Self {
        Spectral::var(VarId::Q)
    }

    /// `q` written as `s²` with `s = q^{1/2}`.
    pub fn q_as_s_squared() -> Self {
        Spectral {
            exp: LaurentPoly::var_pow(VarId::S, 2),
            inv: LaurentPoly::var_pow(VarId::S, -2),
        }
    }
}

impl Spectral<Complex64> {
    pub fn from_log(lambda: Complex64) -> Self {
        Spectral {
            exp: lambda.exp(),
            inv: (-lambda).exp(),
        }
    }
}

/// `λ_i ↦ u_i` for `i` in `indices`.
pub fn symbolic_lambdas(indices: impl IntoIterator<Item = u16>) -> Vec<Spectral<LaurentPoly>> {
    indices.into_iter().map(|i| Spectral::var(VarId::u(i))).collect()
}

/// `μ_k ↦ w_k` for `k = 1..=size`.
pub fn symbolic_mus(size: usize) -> Vec<Spectral<LaurentPoly>> {
    (1..=size as u16).map(|k| Spectral::var(VarId::w(k))).collect()
}

/// `μ_k = 0` for all `k`.
pub fn zero_mus<S: Scalar>(size: usize) -> Vec<Spectral<S>> {
    (0..size).map(|_| Spectral::zero()).collect()
}
