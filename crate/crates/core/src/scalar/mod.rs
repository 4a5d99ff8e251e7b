//! Scalars: the exact Laurent-polynomial ring, its univariate helpers, and the
//! complex floating-point backend behind one [`Scalar`] contract.

mod laurent;
mod monomial;
mod ratfunc;
mod unipoly;
mod var;

use core::fmt::Debug;

pub use num_complex::Complex64;
use num_traits::{One, Zero};

pub use laurent::LaurentPoly;
pub use monomial::Monomial;
pub use ratfunc::RationalFunction;
pub use unipoly::UniPoly;
pub use var::{VarId, VarKind};

/// Arbitrary-precision rational coefficients.
pub type Rational = num_rational::BigRational;

/// Default relative tolerance for float zero tests.
pub const DEFAULT_REL_EPS: f64 = 1e-9;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Ring operations shared by the exact and numeric backends.
///
/// Zero tests come in two flavors: [`Scalar::is_zero`] is structural (exact
/// for polynomials, `== 0` for floats) and [`Scalar::is_negligible`] takes a
/// caller-supplied scale, which is what float residual checks must use.
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync {
    /// Whether zero tests are exact (residuals must vanish identically).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Multiplicative inverse where it exists in the ring (units only for
    /// Laurent polynomials).
    fn try_inv(&self) -> Option<Self>;

    fn is_zero(&self) -> bool;

    /// Size used to build residual scales: `|z|` for floats, the sum of
    /// absolute coefficients for polynomials.
    fn magnitude(&self) -> f64;

    /// `|self| <= rel_eps * scale` for floats; exact zero for polynomials.
    fn is_negligible(&self, scale: f64, rel_eps: f64) -> bool;

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn product<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        Self: 'a,
    {
        items.into_iter().fold(Self::one(), |acc, x| acc.mul(x))
    }
}

impl Scalar for LaurentPoly {
    const EXACT: bool = true;

    fn zero() -> Self {
        LaurentPoly::zero()
    }

    fn one() -> Self {
        LaurentPoly::one()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        LaurentPoly::constant(rational(num, den))
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn try_inv(&self) -> Option<Self> {
        self.monomial_inverse()
    }

    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }

    fn magnitude(&self) -> f64 {
        use num_traits::{Signed, ToPrimitive};
        self.terms()
            .iter()
            .map(|(_, c)| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .sum()
    }

    fn is_negligible(&self, _scale: f64, _rel_eps: f64) -> bool {
        LaurentPoly::is_zero(self)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        <Complex64 as Zero>::zero()
    }

    fn one() -> Self {
        <Complex64 as One>::one()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn try_inv(&self) -> Option<Self> {
        if <Complex64 as Zero>::is_zero(self) || !self.is_finite() {
            None
        } else {
            Some(self.inv())
        }
    }

    fn is_zero(&self) -> bool {
        <Complex64 as Zero>::is_zero(self)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn is_negligible(&self, scale: f64, rel_eps: f64) -> bool {
        self.norm() <= rel_eps * scale
    }
}

/// Sum in a fixed pairwise order, so float results do not depend on how the
/// terms were produced beyond their order.
pub fn pairwise_sum<S: Scalar>(terms: &[S]) -> S {
    match terms.len() {
        0 => S::zero(),
        1 => terms[0].clone(),
        n => pairwise_sum(&terms[..n / 2]).add(&pairwise_sum(&terms[n / 2..])),
    }
}

/// Relative residual `|value| / scale`, with `0/0 = 0`.
pub fn relative(value: f64, scale: f64) -> f64 {
    if value == 0.0 {
        0.0
    } else {
        value / scale
    }
}
