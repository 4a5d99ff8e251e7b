use core::fmt;

use num_traits::{One, Zero};

use super::{LaurentPoly, Rational, UniPoly, VarId};
use crate::error::{Error, Result};

/// Rational function in `q` in lowest terms with a monic denominator.
///
/// Laurent inputs are absorbed by moving `q^{-k}` into the denominator, so
/// the canonical form is unique and structural equality is equality of
/// functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: UniPoly,
    den: UniPoly,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: UniPoly::zero(),
            den: UniPoly::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(UniPoly::one())
    }

    pub fn from_poly(p: UniPoly) -> Self {
        RationalFunction {
            num: p,
            den: UniPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction::from_poly(UniPoly::constant(c))
    }

    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::NotInvertible("zero denominator".into()));
        }
        Ok(RationalFunction::reduce(num, den))
    }

    /// From a Laurent polynomial in `q` only.
    pub fn from_laurent(p: &LaurentPoly) -> Result<Self> {
        let (u, k) = UniPoly::from_laurent(p, VarId::Q)?;
        Ok(RationalFunction::reduce(u, UniPoly::monomial(k)))
    }

    /// Ratio of two Laurent polynomials in `q`.
    pub fn from_laurent_ratio(num: &LaurentPoly, den: &LaurentPoly) -> Result<Self> {
        RationalFunction::from_laurent(num)?.div(&RationalFunction::from_laurent(den)?)
    }

    fn reduce(num: UniPoly, den: UniPoly) -> Self {
        if num.is_zero() {
            return RationalFunction::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lead = den.lead().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn numer(&self) -> &UniPoly {
        &self.num
    }

    pub fn denom(&self) -> &UniPoly {
        &self.den
    }

    pub fn numerator_laurent(&self) -> LaurentPoly {
        self.num.to_laurent(VarId::Q)
    }

    pub fn denominator_laurent(&self) -> LaurentPoly {
        self.den.to_laurent(VarId::Q)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.degree() == Some(0) && self.num.degree() == Some(0) && self.num.coeffs()[0].is_one()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::reduce(self.num.add(&rhs.num), self.den.clone());
        }
        // Combine over lcm(den) to keep intermediate degrees down.
        let g = self.den.gcd(&rhs.den);
        let a_co = rhs.den.div_exact(&g).expect("gcd divides");
        let b_co = self.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&a_co).add(&rhs.num.mul(&b_co));
        RationalFunction::reduce(num, self.den.mul(&a_co))
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        // Cross-cancel first so the products stay reduced.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RationalFunction::reduce(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible("zero rational function".into()));
        }
        Ok(RationalFunction::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Equality by cross multiplication; agrees with `==` on canonical forms
    /// and is usable on non-canonical pairs.
    pub fn cross_eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    pub fn eval(&self, q: &Rational) -> Result<Rational> {
        let d = self.den.eval(q);
        if d.is_zero() {
            return Err(Error::NotInvertible("pole of rational function".into()));
        }
        Ok(self.num.eval(q) / d)
    }

    pub fn eval_complex(&self, q: num_complex::Complex64) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        let horner = |p: &UniPoly| {
            p.coeffs()
                .iter()
                .rev()
                .fold(num_complex::Complex64::new(0.0, 0.0), |acc, c| {
                    acc * q + c.to_f64().unwrap_or(f64::NAN)
                })
        };
        horner(&self.num) / horner(&self.den)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
