//! Solving the functional equation for the coefficients of `Z`.
//!
//! With every `μ_k = 0`, `Z(λ₁…λ_L) = Σ_m h_m e^{m·λ}` over the box
//! `m_i ∈ [-(L-1), L-1]`. Substituting this ansatz into the functional
//! equation gives linear constraints on `h`; their solution space should be
//! one-dimensional, and the asymptotic norm fixes the remaining scale.

mod exact;
mod float;
mod modp;
mod ode;
mod reference;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

pub use exact::{constraint_rows, solve_fz_exact, ConstraintRow};
pub use float::{
    complex_nullspace, solve_fz_float, solve_fz_float_checked, FloatConsistency, FloatSolveOptions, NullspaceResult,
};
pub use ode::{
    homogeneous_ode_residual, homogeneous_zbar, k_coefficients, ode_residual, phi_polynomials, HOMOGENEOUS_X,
};
pub use reference::{reference_ratios, verify_h_table, EntryCheck, HTableReport};

use crate::error::Result;
use crate::partition::z_algebraic;
use crate::scalar::{LaurentPoly, Monomial, RationalFunction, VarId};
use crate::spectral::{symbolic_lambdas, zero_mus, Spectral};

/// The exponent box `{-(L-1), …, L-1}^L`, enumerated in lexicographic order
/// with the first position most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ansatz {
    size: usize,
}

impl Ansatz {
    pub fn new(size: usize) -> Self {
        assert!(size >= 1, "lattice size must be at least 1");
        Ansatz { size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn extent(&self) -> i32 {
        self.size as i32 - 1
    }

    fn radix(&self) -> usize {
        2 * self.size - 1
    }

    /// Number of unknowns, `(2L-1)^L`.
    pub fn len(&self) -> usize {
        self.radix().pow(self.size as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, mut pos: usize) -> Vec<i32> {
        let r = self.radix();
        let mut out = alloc::vec![0; self.size];
        for slot in out.iter_mut().rev() {
            *slot = (pos % r) as i32 - self.extent();
            pos /= r;
        }
        out
    }

    pub fn position(&self, index: &[i32]) -> Option<usize> {
        if index.len() != self.size {
            return None;
        }
        let mut pos = 0;
        for &m in index {
            if m.abs() > self.extent() {
                return None;
            }
            pos = pos * self.radix() + (m + self.extent()) as usize;
        }
        Some(pos)
    }

    pub fn top(&self) -> Vec<i32> {
        alloc::vec![self.extent(); self.size]
    }

    pub fn top_position(&self) -> usize {
        self.len() - 1
    }

    pub fn indices(&self) -> impl Iterator<Item = Vec<i32>> + '_ {
        (0..self.len()).map(|p| self.index(p))
    }

    /// `∏_k u_{labels[k]}^{m_k}`.
    pub fn monomial(&self, index: &[i32], labels: &[usize]) -> Monomial {
        Monomial::from_pairs(labels.iter().zip(index).map(|(&l, &m)| (VarId::u(l as u16), m)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Top coefficient equal to the asymptotic norm.
    #[default]
    Asymptotic,
    /// Top coefficient equal to one.
    TopOne,
}

/// Solved coefficients `h_m`, zero entries included.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable<V> {
    pub size: usize,
    pub normalization: Normalization,
    pub entries: BTreeMap<Vec<i32>, V>,
}

impl<V: Clone> CoefficientTable<V> {
    pub fn get(&self, index: &[i32]) -> Option<&V> {
        self.entries.get(index)
    }

    pub fn top(&self) -> &V {
        &self.entries[&Ansatz::new(self.size).top()]
    }
}

impl CoefficientTable<RationalFunction> {
    /// Entries that are not identically zero.
    pub fn support(&self) -> Vec<Vec<i32>> {
        self.entries
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, _)| k.clone())
            .collect()
    }

    /// Indices `m` with `h_{σ(m)} ≠ h_m` for some permutation `σ` of
    /// positions (checked through adjacent transpositions).
    pub fn symmetry_violations(&self) -> Vec<Vec<i32>> {
        let mut bad = Vec::new();
        for (k, v) in &self.entries {
            for s in 0..self.size.saturating_sub(1) {
                let mut swapped = k.clone();
                swapped.swap(s, s + 1);
                if self.entries.get(&swapped) != Some(v) {
                    bad.push(k.clone());
                    break;
                }
            }
        }
        bad
    }

    pub fn scaled(&self, factor: &RationalFunction, normalization: Normalization) -> Self {
        CoefficientTable {
            size: self.size,
            normalization,
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v.mul(factor))).collect(),
        }
    }
}

/// `h_m` read off the algebraic `Z` at `μ = 0`.
pub fn direct_table(size: usize) -> Result<CoefficientTable<RationalFunction>> {
    let z = z_algebraic(
        &symbolic_lambdas(1..=size as u16),
        &zero_mus::<LaurentPoly>(size),
        &Spectral::q(),
    )?;
    let us: Vec<VarId> = (1..=size as u16).map(VarId::u).collect();
    let groups = z.coefficients_in(&us);
    let ansatz = Ansatz::new(size);
    let mut entries = BTreeMap::new();
    for index in ansatz.indices() {
        let mono = Monomial::from_pairs(us.iter().zip(&index).map(|(&v, &m)| (v, m)));
        let value = match groups.get(&mono) {
            Some(c) => RationalFunction::from_laurent(c)?,
            None => RationalFunction::zero(),
        };
        entries.insert(index, value);
    }
    if groups.keys().any(|m| {
        let idx: Vec<i32> = us.iter().map(|&v| m.exponent(v)).collect();
        ansatz.position(&idx).is_none()
    }) {
        return Err(crate::error::Error::InvalidArgument(
            "partition function has exponents outside the ansatz box".into(),
        ));
    }
    Ok(CoefficientTable {
        size,
        normalization: Normalization::Asymptotic,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ansatz_roundtrip() {
        let a = Ansatz::new(3);
        assert_eq!(a.len(), 125);
        assert_eq!(a.index(0), alloc::vec![-2, -2, -2]);
        assert_eq!(a.top(), a.index(a.top_position()));
        for p in [0, 7, 62, 124] {
            assert_eq!(a.position(&a.index(p)), Some(p));
        }
        assert_eq!(a.position(&[3, 0, 0]), None);
        assert_eq!(Ansatz::new(1).len(), 1);
    }

    #[test]
    fn direct_l1_is_constant() {
        let t = direct_table(1).unwrap();
        assert_eq!(t.entries.len(), 1);
        let c = RationalFunction::from_laurent(&"1/2*q - 1/2*q^-1".parse().unwrap()).unwrap();
        assert_eq!(t.top(), &c);
    }
}
