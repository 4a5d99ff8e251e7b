use core::fmt;

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{LaurentPoly, Monomial, Rational, VarId};
use crate::error::{Error, Result};

/// Dense univariate polynomial over the rationals, ascending coefficients.
/// Empty for zero; otherwise the last coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![Rational::zero(); n + 1];
        c[n] = Rational::one();
        UniPoly { coeffs: c }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = Rational::zero();
        UniPoly::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + rhs.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplication by `x^n`.
    pub fn shift(&self, n: usize) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Rational::zero(); n];
        c.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs: c }
    }

    /// Division by `x^n`, assuming the low coefficients vanish.
    pub fn unshift(&self, n: usize) -> UniPoly {
        debug_assert!(self.coeffs.iter().take(n).all(|c| c.is_zero()));
        UniPoly::from_coeffs(self.coeffs.iter().skip(n).cloned().collect())
    }

    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = d
            .degree()
            .ok_or_else(|| Error::NotInvertible("zero polynomial divisor".into()))?;
        let lead_inv = d.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem)))
    }

    /// Exact division; fails if there is a remainder.
    pub fn div_exact(&self, d: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InvalidArgument("inexact polynomial division".into()))
        }
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            Some(l) if !l.is_one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.monic(), other.monic());
        if a.degree() < b.degree() {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `Σ c_i q^i` as a Laurent polynomial in `var`.
    pub fn to_laurent(&self, var: VarId) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (Monomial::var(var, i as i32), c.clone())),
        )
    }

    /// Splits a univariate Laurent polynomial in `var` into `(p, k)` with
    /// `poly = p(var) · var^{-k}` and `p` a true polynomial.
    pub fn from_laurent(poly: &LaurentPoly, var: VarId) -> Result<(UniPoly, usize)> {
        if poly.is_zero() {
            return Ok((UniPoly::zero(), 0));
        }
        for v in poly.variables() {
            if v != var {
                return Err(Error::InvalidArgument(alloc::format!(
                    "expected a polynomial in {var} only, found {v}"
                )));
            }
        }
        let lo = poly.min_degree(var).unwrap_or(0).min(0);
        let hi = poly.max_degree(var).unwrap_or(0);
        let mut coeffs = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (m, c) in poly.terms() {
            coeffs[(m.exponent(var) - lo) as usize] += c;
        }
        Ok((UniPoly::from_coeffs(coeffs), (-lo) as usize))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_laurent(VarId::Q), f)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
