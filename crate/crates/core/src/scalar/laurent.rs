use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use super::{Monomial, Rational, VarId};
use crate::error::{Error, Result};

/// Exact multivariate Laurent polynomial with rational coefficients.
///
/// Terms are kept sorted by [`Monomial`]'s graded order with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: Vec<(Monomial, Rational)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        LaurentPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        LaurentPoly::term(Monomial::one(), c)
    }

    pub fn integer(n: i64) -> Self {
        LaurentPoly::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            LaurentPoly::zero()
        } else {
            LaurentPoly {
                terms: alloc::vec![(m, c)],
            }
        }
    }

    pub fn var(v: VarId) -> Self {
        LaurentPoly::var_pow(v, 1)
    }

    pub fn var_pow(v: VarId, exp: i32) -> Self {
        LaurentPoly::term(Monomial::var(v, exp), Rational::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        LaurentPoly::term(m, Rational::one())
    }

    /// Normalizing constructor: sums repeated monomials and drops zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut v: Vec<(Monomial, Rational)> = terms.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        LaurentPoly {
            terms: combine_sorted(v),
        }
    }

    /// Terms in ascending graded order.
    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &Rational)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    /// Inverse of a single-term polynomial, the only units of the ring.
    pub fn monomial_inverse(&self) -> Option<LaurentPoly> {
        self.as_monomial()
            .map(|(m, c)| LaurentPoly::term(m.inverse(), c.recip()))
    }

    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Multiplication by `c·m`; keeps the order since the monomial order is
    /// translation invariant.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(t, k)| (t.mul(m), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        <Self as super::Scalar>::pow(self, n)
    }

    pub fn variables(&self) -> Vec<VarId> {
        let mut vars: Vec<VarId> = self.terms.iter().flat_map(|(m, _)| m.iter().map(|(v, _)| v)).collect();
        vars.sort();
        vars.dedup();
        vars
    }

    /// Largest exponent of `v` over all terms (0 if `v` is absent somewhere).
    pub fn max_degree(&self, v: VarId) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max()
    }

    pub fn min_degree(&self, v: VarId) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.exponent(v)).min()
    }

    /// Substitutes values for every variable.
    pub fn eval(&self, assign: impl Fn(VarId) -> Option<Complex64>) -> Result<Complex64> {
        let mut cache: BTreeMap<VarId, Complex64> = BTreeMap::new();
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (v, e) in m.iter() {
                let base = match cache.get(&v) {
                    Some(b) => *b,
                    None => {
                        let b = assign(v).ok_or(Error::UnassignedVariable(v))?;
                        cache.insert(v, b);
                        b
                    }
                };
                if e < 0 && base == Complex64::new(0.0, 0.0) {
                    return Err(Error::ZeroBaseWithNegativeExponent(v));
                }
                t *= base.powi(e);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluation from an explicit assignment map.
    pub fn eval_map(&self, assign: &BTreeMap<VarId, Complex64>) -> Result<Complex64> {
        self.eval(|v| assign.get(&v).copied())
    }

    /// Term-wise `d/dv` with `d(v^n)/dv = n v^{n-1}`.
    pub fn derivative(&self, v: VarId) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(v);
            if e == 0 {
                None
            } else {
                let m = m.mul(&Monomial::var(v, -1));
                Some((m, c * Rational::from_integer(BigInt::from(e))))
            }
        }))
    }

    /// Coefficient of `∏ v^degree` over `vars`, as a polynomial in the other
    /// variables. Fails if any listed variable exceeds `degree`.
    pub fn leading_coeff(&self, vars: &[VarId], degree: i32) -> Result<LaurentPoly> {
        for &v in vars {
            if let Some(found) = self.max_degree(v) {
                if found > degree {
                    return Err(Error::DegreeExceeded { var: v, found, degree });
                }
            }
        }
        let target = Monomial::from_pairs(vars.iter().map(|&v| (v, degree)));
        Ok(self
            .coefficients_in(vars)
            .remove(&target)
            .unwrap_or_else(LaurentPoly::zero))
    }

    /// Splits into `Σ m · coeff_m` with `m` a monomial in `vars` only.
    pub fn coefficients_in(&self, vars: &[VarId]) -> BTreeMap<Monomial, LaurentPoly> {
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, Rational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut inside = SmallVec::new();
            let mut outside = SmallVec::new();
            for (v, e) in m.iter() {
                if vars.contains(&v) {
                    inside.push((v, e));
                } else {
                    outside.push((v, e));
                }
            }
            groups
                .entry(Monomial::from_sorted_unchecked(inside))
                .or_default()
                .push((Monomial::from_sorted_unchecked(outside), c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, v)| (k, LaurentPoly::from_terms(v)))
            .collect()
    }

    /// Renames variables; the map should be injective on the variables
    /// present unless merging is intended.
    pub fn map_vars(&self, mut f: impl FnMut(VarId) -> VarId) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(m, c)| (m.map_vars(&mut f), c.clone())))
    }

    /// Replaces each monomial `m` by `g(m)`. Used for monomial substitutions
    /// such as `u_i -> x_i^{1/2} w_i`.
    pub fn map_monomials(&self, mut g: impl FnMut(&Monomial) -> Result<Monomial>) -> Result<LaurentPoly> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            out.push((g(m)?, c.clone()));
        }
        Ok(LaurentPoly::from_terms(out))
    }

    /// Divides every exponent of `v` by `by`, failing if one is not a
    /// multiple. `p(v) -> p(v^{1/by})`.
    pub fn divide_exponents(&self, v: VarId, by: i32) -> Result<LaurentPoly> {
        self.map_monomials(|m| {
            let e = m.exponent(v);
            if e % by != 0 {
                return Err(Error::OddExponent { var: v, exp: e, by });
            }
            Ok(m.mul(&Monomial::var(v, e / by - e)))
        })
    }

    /// Substitutes a Laurent polynomial for one variable.
    pub fn substitute(&self, v: VarId, value: &LaurentPoly) -> Result<LaurentPoly> {
        let inverse = value.monomial_inverse();
        let mut acc = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let rest = LaurentPoly::term(m.mul(&Monomial::var(v, -e)), c.clone());
            let factor = if e >= 0 {
                value.pow(e as u32)
            } else {
                inverse
                    .as_ref()
                    .ok_or_else(|| Error::NotInvertible(format!("{value}")))?
                    .pow((-e) as u32)
            };
            acc = &acc + &(&rest * &factor);
        }
        Ok(acc)
    }

    /// Serialization in canonical (descending graded) order.
    pub fn to_canonical_string(&self) -> String {
        format!("{self}")
    }

    fn add_impl(&self, rhs: &LaurentPoly, negate_rhs: bool) -> LaurentPoly {
        let (a, b) = (&self.terms, &rhs.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let rhs_coeff = |c: &Rational| if negate_rhs { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0.clone(), rhs_coeff(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_rhs {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), rhs_coeff(c))));
        LaurentPoly { terms: out }
    }

    fn mul_impl(&self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let (small, large) = if self.len() <= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        mul_split(&small.terms, large)
    }
}

// Divide and conquer over the shorter operand; each leaf is a shifted copy of
// the longer one, which stays sorted.
fn mul_split(small: &[(Monomial, Rational)], large: &LaurentPoly) -> LaurentPoly {
    match small.len() {
        0 => LaurentPoly::zero(),
        1 => large.mul_term(&small[0].0, &small[0].1),
        n => {
            let (l, r) = small.split_at(n / 2);
            mul_split(l, large).add_impl(&mul_split(r, large), false)
        }
    }
}

fn combine_sorted(v: Vec<(Monomial, Rational)>) -> Vec<(Monomial, Rational)> {
    let mut out: Vec<(Monomial, Rational)> = Vec::with_capacity(v.len());
    for (m, c) in v {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc += c,
            _ => {
                if let Some((_, lc)) = out.last() {
                    if lc.is_zero() {
                        out.pop();
                    }
                }
                out.push((m, c));
            }
        }
    }
    if let Some((_, lc)) = out.last() {
        if lc.is_zero() {
            out.pop();
        }
    }
    out
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add_impl(rhs, false)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add_impl(rhs, true)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.mul_impl(rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl From<i64> for LaurentPoly {
    fn from(n: i64) -> Self {
        LaurentPoly::integer(n)
    }
}

impl From<Rational> for LaurentPoly {
    fn from(c: Rational) -> Self {
        LaurentPoly::constant(c)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({}/{})", c.numer(), c.denom())?;
            if !m.is_one() {
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Accepts the canonical serialization plus looser input such as
    /// `u1^2 - 3/2*q^-1 + 4`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if s == "0" {
            return Ok(LaurentPoly::zero());
        }
        let mut terms = Vec::new();
        let mut depth = 0i32;
        let mut start = 0usize;
        let bytes = s.as_bytes();
        for (i, &ch) in bytes.iter().enumerate() {
            match ch {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > start && bytes[i - 1] != b'^' => {
                    terms.push(&s[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        terms.push(&s[start..]);
        let mut acc = Vec::new();
        for t in terms {
            acc.push(parse_term(t)?);
        }
        Ok(LaurentPoly::from_terms(acc))
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

fn parse_term(t: &str) -> Result<(Monomial, Rational)> {
    let (sign, body) = match t.as_bytes().first() {
        Some(b'+') => (1, &t[1..]),
        Some(b'-') => (-1, &t[1..]),
        _ => (1, t),
    };
    if body.is_empty() {
        return Err(Error::Parse(format!("empty term in `{t}`")));
    }
    let mut coeff = Rational::from_integer(BigInt::from(sign));
    let mut mono = Monomial::one();
    let mut depth = 0;
    let mut factors = Vec::new();
    let mut start = 0;
    for (i, ch) in body.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => {
                factors.push(&body[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    factors.push(&body[start..]);
    for f in factors {
        if let Some(inner) = f.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            coeff *= parse_rational(inner)?;
        } else if f.starts_with(|c: char| c.is_ascii_digit()) {
            coeff *= parse_rational(f)?;
        } else {
            let (v, e) = match f.split_once('^') {
                Some((v, e)) => (
                    v,
                    e.parse::<i32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{f}`")))?,
                ),
                None => (f, 1),
            };
            mono = mono.mul(&Monomial::var(v.parse()?, e));
        }
    }
    Ok((mono, coeff))
}

impl LaurentPoly {
    /// Largest absolute coefficient, for diagnostics.
    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .iter()
            .map(|(_, c)| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use alloc::string::ToString;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        let u1 = VarId::u(1);
        let poly = p("u1 - u1^-1");
        let v = poly.eval(|v| (v == u1).then_some(Complex64::new(1.0, 0.0))).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));

        let c = p("1/2*q - 1/2*q^-1");
        let v = c.eval(|_| Some(Complex64::new(2.0, 0.0))).unwrap();
        assert!((v - Complex64::new(0.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_errors() {
        let poly = p("u1^-1 + w1");
        assert_eq!(
            poly.eval(|v| (v == VarId::u(1)).then_some(Complex64::new(2.0, 0.0))),
            Err(Error::UnassignedVariable(VarId::w(1)))
        );
        assert_eq!(
            p("u1^-1").eval(|_| Some(Complex64::new(0.0, 0.0))),
            Err(Error::ZeroBaseWithNegativeExponent(VarId::u(1)))
        );
    }

    #[test]
    fn derivative_examples() {
        let x = VarId::x(1);
        assert_eq!(p("x1^2").derivative(x), p("2*x1"));
        assert_eq!(p("x1^-1").derivative(x), p("-x1^-2"));
        assert_eq!(p("q^3").derivative(x), LaurentPoly::zero());
    }

    #[test]
    fn leading_coeff_examples() {
        let poly = p("3*x1^2*x2 + x1*x2");
        assert_eq!(poly.leading_coeff(&[VarId::x(1)], 2).unwrap(), p("3*x2"));
        assert_eq!(poly.leading_coeff(&[VarId::x(1)], 3).unwrap(), LaurentPoly::zero());
        assert_eq!(
            poly.leading_coeff(&[VarId::x(1)], 1),
            Err(Error::DegreeExceeded {
                var: VarId::x(1),
                found: 2,
                degree: 1
            })
        );
    }

    #[test]
    fn cancellation_gives_empty_map() {
        let a = p("u1 + q");
        assert!((&a - &a).is_zero());
        assert!((&a - &a).terms().is_empty());
    }

    #[test]
    fn serialization_is_canonical() {
        let poly = p("q^3*w1^-1*u1^2 + 1/2");
        assert_eq!(poly.to_string(), "(1/1)*u1^2*w1^-1*q^3 + (1/2)");
        assert_eq!(p(&poly.to_string()), poly);
        assert_eq!(p("-(3/4)*u2^-1").to_string(), "(-3/4)*u2^-1");
    }

    #[test]
    fn substitute_and_divide() {
        let poly = p("u1^2 + u1^-2");
        let s = poly.substitute(VarId::u(1), &p("q*w1")).unwrap();
        assert_eq!(s, p("q^2*w1^2 + q^-2*w1^-2"));
        assert_eq!(poly.divide_exponents(VarId::u(1), 2).unwrap(), p("u1 + u1^-1"));
        assert!(p("u1").divide_exponents(VarId::u(1), 2).is_err());
    }

    #[test]
    fn product_of_binomials() {
        let a = p("u1 + 1");
        let b = p("u1 - 1");
        assert_eq!(&a * &b, p("u1^2 - 1"));
        assert_eq!(a.pow(3), p("u1^3 + 3*u1^2 + 3*u1 + 1"));
        assert_eq!(LaurentPoly::constant(rational(1, 2)).pow(2), p("1/4"));
    }
}
