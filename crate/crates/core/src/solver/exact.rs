//! Exact constraint generation and elimination over `Q(q)`.
//!
//! Each `u`-monomial of the cleared functional equation gives one linear
//! equation in the `h_m`, with coefficients that are Laurent polynomials in
//! `q`. A full-rank subset of rows is chosen modulo a prime at a random `q`,
//! eliminated exactly over rational functions, and the resulting vector is
//! checked against every row.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;

use super::modp::{self, EchelonBasis};
use super::{Ansatz, CoefficientTable, Normalization};
use crate::asymptotics::asymptotic_norm;
use crate::error::{Error, Result};
use crate::functional::{all_pairs, fz_terms, FunctionalInput};
use crate::scalar::{LaurentPoly, Monomial, RationalFunction, UniPoly, VarId};
use crate::spectral::Spectral;

/// The equation from one `u`-monomial: `Σ entries[k].1 · h_{entries[k].0} = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintRow {
    pub monomial: Monomial,
    pub entries: Vec<(usize, LaurentPoly)>,
}

/// All nonzero constraint rows at `μ = 0`.
pub fn constraint_rows(size: usize) -> Result<Vec<ConstraintRow>> {
    let ansatz = Ansatz::new(size);
    let input = FunctionalInput::symbolic_homogeneous_mu(size + 1, size);
    let all = all_pairs(size + 1);
    let us: Vec<VarId> = (0..=size as u16 + 1).map(VarId::u).collect();
    let mut rows: BTreeMap<Monomial, BTreeMap<usize, LaurentPoly>> = BTreeMap::new();
    for term in fz_terms(&input)? {
        let cleared = term.coeff.cleared_over(&all, &input);
        let groups = cleared.coefficients_in(&us);
        for (pos, index) in ansatz.indices().enumerate() {
            let shift = ansatz.monomial(&index, &term.subset);
            for (mono, c) in &groups {
                let slot = rows.entry(mono.mul(&shift)).or_default().entry(pos).or_default();
                *slot = &*slot + c;
            }
        }
    }
    Ok(rows
        .into_iter()
        .map(|(monomial, entries)| ConstraintRow {
            monomial,
            entries: entries.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
        .filter(|r| !r.entries.is_empty())
        .collect())
}

fn complexity(row: &ConstraintRow) -> (usize, usize) {
    let terms = row.entries.iter().map(|(_, c)| c.len()).sum();
    (row.entries.len(), terms)
}

/// Greedy selection of independent rows modulo a prime, simplest rows
/// first. Returns the selected rows and the rank found.
fn select_rows<R: Rng + ?Sized>(rows: &[ConstraintRow], cols: usize, rng: &mut R) -> (Vec<usize>, usize) {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| complexity(&rows[i]));
    let mut best = (Vec::new(), 0);
    for _ in 0..3 {
        let q0 = rng.gen_range(2..modp::P - 1);
        let q0_inv = modp::inv(q0);
        let mut basis = EchelonBasis::new(cols);
        let mut picked = Vec::new();
        let mut ok = true;
        for &i in &order {
            let sparse: Option<Vec<(usize, u64)>> = rows[i]
                .entries
                .iter()
                .map(|(c, p)| modp::eval_q(p, q0, q0_inv).map(|v| (*c, v)))
                .collect();
            let Some(sparse) = sparse else {
                ok = false;
                break;
            };
            if basis.insert(&sparse) {
                picked.push(i);
                if basis.rank() == cols {
                    break;
                }
            }
        }
        if ok && basis.rank() > best.1 {
            best = (picked, basis.rank());
        }
        if best.1 + 1 >= cols {
            break;
        }
    }
    best
}

/// Gauss-Jordan elimination of a `k × n` system with `k ≤ n - 1`; returns the
/// null vector with the free entry set to one.
fn null_vector(mut m: Vec<Vec<RationalFunction>>, cols: usize) -> Result<Vec<RationalFunction>> {
    let k = m.len();
    let mut pivots: Vec<usize> = Vec::with_capacity(k);
    let mut is_pivot = alloc::vec![false; cols];
    for r in 0..k {
        // Cheapest nonzero pivot among the remaining rows and columns.
        let mut choice: Option<(usize, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(r) {
            for (j, e) in row.iter().enumerate() {
                if is_pivot[j] || e.is_zero() {
                    continue;
                }
                let cost = e.numer().degree().unwrap_or(0) + e.denom().degree().unwrap_or(0);
                if choice.is_none_or(|(_, _, c)| cost < c) {
                    choice = Some((i, j, cost));
                }
            }
        }
        let Some((i, j, _)) = choice else { break };
        m.swap(r, i);
        let inv = m[r][j].inv()?;
        for e in m[r].iter_mut() {
            if !e.is_zero() {
                *e = e.mul(&inv);
            }
        }
        let pivot_row = m[r].clone();
        for (i2, row) in m.iter_mut().enumerate() {
            if i2 == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for (e, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *e = e.sub(&f.mul(p));
                }
            }
        }
        pivots.push(j);
        is_pivot[j] = true;
    }
    let rank = pivots.len();
    if rank + 1 != cols {
        return Err(Error::NullspaceDimensionUnexpected(cols - rank));
    }
    let free = (0..cols).find(|&j| !is_pivot[j]).expect("one free column");
    let mut h = alloc::vec![RationalFunction::zero(); cols];
    h[free] = RationalFunction::one();
    for (r, &j) in pivots.iter().enumerate() {
        h[j] = m[r][free].neg();
    }
    Ok(h)
}

/// `Σ_m row_m h_m = 0` for every row, with `h` put over a common
/// denominator so the check is polynomial arithmetic.
fn satisfies_all(rows: &[ConstraintRow], h: &[RationalFunction]) -> Result<bool> {
    let mut den = UniPoly::one();
    for x in h {
        let g = den.gcd(x.denom());
        den = den.mul(&x.denom().div_exact(&g)?);
    }
    let cleared: Vec<UniPoly> = h
        .iter()
        .map(|x| Ok(x.numer().mul(&den.div_exact(x.denom())?)))
        .collect::<Result<_>>()?;
    for row in rows {
        let parts: Vec<(UniPoly, usize)> = row
            .entries
            .iter()
            .map(|(c, p)| UniPoly::from_laurent(p, VarId::Q).map(|(u, k)| (u.mul(&cleared[*c]), k)))
            .collect::<Result<_>>()?;
        let top = parts.iter().map(|(_, k)| *k).max().unwrap_or(0);
        let total = parts
            .iter()
            .fold(UniPoly::zero(), |acc, (u, k)| acc.add(&u.shift(top - k)));
        if !total.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solves the functional equation at `μ = 0` over `Q(q)`. The random source
/// only steers row selection; the result is exact and verified against
/// every constraint.
pub fn solve_fz_exact<R: Rng + ?Sized>(
    size: usize,
    normalization: Normalization,
    rng: &mut R,
) -> Result<CoefficientTable<RationalFunction>> {
    if !(1..=3).contains(&size) {
        return Err(Error::SizeLimitExceeded {
            what: "exact functional-equation solve",
            size,
            limit: 3,
        });
    }
    let ansatz = Ansatz::new(size);
    let cols = ansatz.len();
    let rows = constraint_rows(size)?;
    let (picked, rank) = select_rows(&rows, cols, rng);
    if rank + 1 != cols {
        return Err(Error::NullspaceDimensionUnexpected(cols - rank));
    }
    let matrix: Vec<Vec<RationalFunction>> = picked
        .iter()
        .map(|&i| {
            let mut dense = alloc::vec![RationalFunction::zero(); cols];
            for (c, p) in &rows[i].entries {
                dense[*c] = RationalFunction::from_laurent(p)?;
            }
            Ok(dense)
        })
        .collect::<Result<_>>()?;
    let h = null_vector(matrix, cols)?;
    if !satisfies_all(&rows, &h)? {
        return Err(Error::NullspaceDimensionUnexpected(0));
    }
    let top = &h[ansatz.top_position()];
    if top.is_zero() {
        return Err(Error::NotInvertible("top coefficient of the solution vanishes".into()));
    }
    let target = match normalization {
        Normalization::TopOne => RationalFunction::one(),
        Normalization::Asymptotic => RationalFunction::from_laurent(&asymptotic_norm(size, &Spectral::q()))?,
    };
    let factor = target.div(top)?;
    Ok(CoefficientTable {
        size,
        normalization,
        entries: ansatz.indices().zip(&h).map(|(idx, v)| (idx, v.mul(&factor))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::direct_table;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn l1_is_constant() {
        let t = solve_fz_exact(1, Normalization::Asymptotic, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(t, direct_table(1).unwrap());
    }

    #[test]
    fn l2_matches_direct_expansion() {
        let t = solve_fz_exact(2, Normalization::Asymptotic, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_eq!(t, direct_table(2).unwrap());
    }

    #[test]
    fn normalizations_differ_by_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = solve_fz_exact(2, Normalization::Asymptotic, &mut rng).unwrap();
        let b = solve_fz_exact(2, Normalization::TopOne, &mut rng).unwrap();
        let norm = RationalFunction::from_laurent(&asymptotic_norm(2, &Spectral::q())).unwrap();
        assert_eq!(b.scaled(&norm, Normalization::Asymptotic), a);
    }

    #[test]
    fn rows_reference_only_ansatz_columns() {
        let rows = constraint_rows(2).unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.entries.iter().all(|(c, _)| *c < 9)));
    }
}
