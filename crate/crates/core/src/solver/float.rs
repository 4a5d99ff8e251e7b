//! Floating-point solve: one constraint row per random spectral point set.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use super::{Ansatz, CoefficientTable, Normalization};
use crate::asymptotics::asymptotic_norm;
use crate::error::{Error, Result};
use crate::functional::{all_pairs, fz_terms, sample_q, sample_separated, FunctionalInput, DEFAULT_MIN_DISTANCE};
use crate::spectral::Spectral;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatSolveOptions {
    pub normalization: Normalization,
    /// Rows beyond the number of unknowns.
    pub extra_rows: usize,
    /// Pivots below `rank_tol` times the largest pivot count as zero.
    pub rank_tol: f64,
    pub min_distance: f64,
}

impl Default for FloatSolveOptions {
    fn default() -> Self {
        FloatSolveOptions {
            normalization: Normalization::Asymptotic,
            extra_rows: 16,
            rank_tol: 1e-9,
            min_distance: DEFAULT_MIN_DISTANCE,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NullspaceResult {
    /// Null vector with the free entry set to one.
    pub vector: Vec<Complex64>,
    pub rank: usize,
    /// Pivot magnitudes in elimination order.
    pub pivots: Vec<f64>,
}

/// Gaussian elimination with full pivoting. Fails with
/// `NullspaceDimensionUnexpected` unless exactly one column is free.
pub fn complex_nullspace(rows: &[Vec<Complex64>], cols: usize, rank_tol: f64) -> Result<NullspaceResult> {
    let mut m: Vec<Vec<Complex64>> = rows.to_vec();
    if let Some(bad) = m.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch {
            expected: cols,
            found: bad.len(),
        });
    }
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut pivots = Vec::new();
    let limit = m.len().min(cols);
    for r in 0..limit {
        let mut best = (0.0, r, r);
        for (i, row) in m.iter().enumerate().skip(r) {
            for (j, x) in row.iter().enumerate().skip(r) {
                let a = x.norm();
                if a > best.0 {
                    best = (a, i, j);
                }
            }
        }
        let (mag, i, j) = best;
        if mag == 0.0 || pivots.first().is_some_and(|&p0: &f64| mag < rank_tol * p0) {
            break;
        }
        m.swap(r, i);
        for row in m.iter_mut() {
            row.swap(r, j);
        }
        perm.swap(r, j);
        pivots.push(mag);
        let inv = m[r][r].inv();
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let f = row[r] * inv;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (x, p) in row.iter_mut().zip(pivot_row).skip(r) {
                *x -= f * p;
            }
        }
    }
    let rank = pivots.len();
    if rank + 1 != cols {
        return Err(Error::NullspaceDimensionUnexpected(cols - rank));
    }
    // Back substitution in the permuted basis, free column last.
    let mut y = alloc::vec![Complex64::new(0.0, 0.0); cols];
    y[cols - 1] = Complex64::new(1.0, 0.0);
    for r in (0..rank).rev() {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in r + 1..cols {
            acc += m[r][k] * y[k];
        }
        y[r] = -acc / m[r][r];
    }
    let mut vector = alloc::vec![Complex64::new(0.0, 0.0); cols];
    for (k, &c) in perm.iter().enumerate() {
        vector[c] = y[k];
    }
    Ok(NullspaceResult { vector, rank, pivots })
}

/// One constraint row from a numeric point set, scaled to unit max norm.
fn numeric_row(ansatz: &Ansatz, input: &FunctionalInput<Complex64>) -> Result<Vec<Complex64>> {
    let size = ansatz.size();
    let ext = ansatz.extent();
    let all = all_pairs(size + 1);
    // powers[p][e + ext] = u_p^e
    let powers: Vec<Vec<Complex64>> = (0..=size + 1)
        .map(|p| (-ext..=ext).map(|e| input.point(p).exp().powi(e)).collect())
        .collect();
    let terms = fz_terms(input)?;
    let coeffs: Vec<Complex64> = terms.iter().map(|t| t.coeff.cleared_over(&all, input)).collect();
    let mut row: Vec<Complex64> = ansatz
        .indices()
        .map(|idx| {
            terms
                .iter()
                .zip(&coeffs)
                .map(|(t, c)| {
                    t.subset
                        .iter()
                        .zip(&idx)
                        .fold(*c, |acc, (&p, &m)| acc * powers[p][(m + ext) as usize])
                })
                .sum()
        })
        .collect();
    let scale = row.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if scale > 0.0 {
        for x in row.iter_mut() {
            *x /= scale;
        }
    }
    Ok(row)
}

/// Solves at `μ = 0` and a fixed numeric `q`.
pub fn solve_fz_float<R: Rng + ?Sized>(
    size: usize,
    q: &Spectral<Complex64>,
    options: &FloatSolveOptions,
    rng: &mut R,
) -> Result<CoefficientTable<Complex64>> {
    if !(1..=4).contains(&size) {
        return Err(Error::SizeLimitExceeded {
            what: "floating-point functional-equation solve",
            size,
            limit: 4,
        });
    }
    let ansatz = Ansatz::new(size);
    let cols = ansatz.len();
    let rows: Vec<Vec<Complex64>> = (0..cols + options.extra_rows)
        .map(|_| {
            let mut pts = sample_separated(rng, size + 2, options.min_distance);
            let lambda0 = pts.remove(0);
            let input = FunctionalInput::new(lambda0, pts, (0..size).map(|_| Spectral::zero()).collect(), q.clone());
            numeric_row(&ansatz, &input)
        })
        .collect::<Result<_>>()?;
    let h = complex_nullspace(&rows, cols, options.rank_tol)?.vector;
    let top = h[ansatz.top_position()];
    if top.norm() == 0.0 {
        return Err(Error::NotInvertible("top coefficient of the solution vanishes".into()));
    }
    let target = match options.normalization {
        Normalization::TopOne => Complex64::new(1.0, 0.0),
        Normalization::Asymptotic => asymptotic_norm(size, q),
    };
    let factor = target / top;
    Ok(CoefficientTable {
        size,
        normalization: options.normalization,
        entries: ansatz.indices().zip(h).map(|(idx, v)| (idx, v * factor)).collect(),
    })
}

/// Outcome of [`solve_fz_float_checked`].
#[derive(Clone, Debug, PartialEq)]
pub struct FloatConsistency {
    pub samples: Vec<Spectral<Complex64>>,
    /// Largest disagreement of `h_m / h_top` between independent point sets.
    pub max_disagreement: f64,
    /// Whether every `q` sample gives the same set of nonzero entries.
    pub support_consistent: bool,
    pub support: Vec<Vec<i32>>,
    pub tables: Vec<CoefficientTable<Complex64>>,
}

impl FloatConsistency {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.support_consistent && self.max_disagreement <= tolerance
    }
}

fn support_of(t: &CoefficientTable<Complex64>, tol: f64) -> Vec<Vec<i32>> {
    let top = t.top().norm();
    t.entries
        .iter()
        .filter(|(_, v)| v.norm() > tol * top)
        .map(|(k, _)| k.clone())
        .collect()
}

/// Solves at `q_samples` random values of `q`, twice each with independent
/// points, and compares the two solutions and the supports.
pub fn solve_fz_float_checked<R: Rng + ?Sized>(
    size: usize,
    q_samples: usize,
    options: &FloatSolveOptions,
    rng: &mut R,
) -> Result<FloatConsistency> {
    let support_tol = 1e-7;
    let mut out = FloatConsistency {
        samples: Vec::new(),
        max_disagreement: 0.0,
        support_consistent: true,
        support: Vec::new(),
        tables: Vec::new(),
    };
    for s in 0..q_samples {
        let q = sample_q(rng, options.min_distance);
        let a = solve_fz_float(size, &q, options, rng)?;
        let b = solve_fz_float(size, &q, options, rng)?;
        let (ta, tb) = (*a.top(), *b.top());
        for (k, va) in &a.entries {
            let ra = va / ta;
            let rb = b.entries[k] / tb;
            let d = (ra - rb).norm() / ra.norm().max(1.0);
            out.max_disagreement = out.max_disagreement.max(d);
        }
        let support = support_of(&a, support_tol);
        if s == 0 {
            out.support = support;
        } else if support != out.support {
            out.support_consistent = false;
        }
        if support_of(&b, support_tol) != out.support {
            out.support_consistent = false;
        }
        out.samples.push(q);
        out.tables.push(a);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let rows = alloc::vec![
            alloc::vec![c(1.0), c(2.0), c(3.0)],
            alloc::vec![c(2.0), c(4.0), c(7.0)],
            alloc::vec![c(3.0), c(6.0), c(10.0)],
        ];
        let r = complex_nullspace(&rows, 3, 1e-12).unwrap();
        assert_eq!(r.rank, 2);
        for row in &rows {
            let dot: Complex64 = row.iter().zip(&r.vector).map(|(a, b)| a * b).sum();
            assert!(dot.norm() < 1e-12);
        }
    }

    #[test]
    fn full_rank_reports_zero_dimension() {
        let rows = alloc::vec![alloc::vec![c(1.0), c(0.0)], alloc::vec![c(0.0), c(1.0)]];
        assert_eq!(
            complex_nullspace(&rows, 2, 1e-12),
            Err(Error::NullspaceDimensionUnexpected(0))
        );
    }
}
