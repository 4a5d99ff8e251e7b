use core::cmp::Ordering;
use core::fmt;

use smallvec::SmallVec;

use super::VarId;

/// A Laurent monomial: variables with nonzero integer exponents, sorted by
/// variable.
///
/// Ordering is graded lexicographic: total degree first, then the exponent of
/// the earliest variable (in `u < w < q < s < x` order) where two monomials
/// differ. The order is translation invariant, so multiplying a sorted term
/// list by one monomial keeps it sorted.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[(VarId, i32); 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: VarId, exp: i32) -> Self {
        let mut m = Monomial::one();
        if exp != 0 {
            m.0.push((v, exp));
        }
        m
    }

    /// Builds from arbitrary `(var, exp)` pairs; repeated variables add up.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, i32)>>(pairs: I) -> Self {
        let mut m = Monomial::one();
        for (v, e) in pairs {
            m = m.mul(&Monomial::var(v, e));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: VarId) -> i32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, i32)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    /// Applies `f` to every variable. Non-injective maps merge exponents.
    pub fn map_vars(&self, mut f: impl FnMut(VarId) -> VarId) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }

    pub(crate) fn from_sorted_unchecked(pairs: SmallVec<[(VarId, i32); 6]>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(pairs.iter().all(|p| p.1 != 0));
        Monomial(pairs)
    }
}

fn lex(a: &[(VarId, i32)], b: &[(VarId, i32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(&(_, ea)), None) => return ea.cmp(&0),
            (None, Some(&(_, eb))) => return 0.cmp(&eb),
            (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                Ordering::Less => return ea.cmp(&0),
                Ordering::Greater => return 0.cmp(&eb),
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| lex(&self.0, &other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_cancels() {
        let a = Monomial::from_pairs([(VarId::u(1), 2), (VarId::Q, -1)]);
        let b = Monomial::from_pairs([(VarId::u(1), -2), (VarId::w(1), 1)]);
        let p = a.mul(&b);
        assert_eq!(p, Monomial::from_pairs([(VarId::w(1), 1), (VarId::Q, -1)]));
        assert_eq!(a.mul(&a.inverse()), Monomial::one());
    }

    #[test]
    fn graded_order() {
        let x2 = Monomial::var(VarId::u(1), 2);
        let xy = Monomial::from_pairs([(VarId::u(1), 1), (VarId::u(2), 1)]);
        let y2 = Monomial::var(VarId::u(2), 2);
        let x = Monomial::var(VarId::u(1), 1);
        assert!(x < y2);
        assert!(y2 < xy);
        assert!(xy < x2);
        assert!(Monomial::var(VarId::u(1), -1) < Monomial::one());
    }

    #[test]
    fn order_is_translation_invariant() {
        let t = Monomial::from_pairs([(VarId::u(2), -3), (VarId::Q, 2)]);
        let a = Monomial::from_pairs([(VarId::u(1), 1), (VarId::w(1), -1)]);
        let b = Monomial::from_pairs([(VarId::u(2), 1), (VarId::w(1), -1)]);
        assert_eq!(a.cmp(&b), a.mul(&t).cmp(&b.mul(&t)));
    }
}
