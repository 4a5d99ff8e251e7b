//! The partition function with domain wall boundaries, computed two
//! independent ways: as `⟨0̄|B(λ₁)⋯B(λ_L)|0⟩` and as a sum over ice-rule
//! configurations of the lattice.
//!
//! The enumerator never touches the monodromy code; it only reads single
//! vertex weights, so it serves as an oracle for the algebraic route.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::error::{Error, Result};
use crate::monodromy::apply_b_product;
use crate::operator::StateVector;
use crate::scalar::{pairwise_sum, LaurentPoly, Monomial, Rational, Scalar, VarId};
use crate::spectral::Spectral;
use crate::vertex::{weights_of, Weights};

/// Largest lattice for [`EnumerationMode::Naive`].
pub const NAIVE_LIMIT: usize = 4;
/// Largest lattice for [`EnumerationMode::Pruned`] and [`count_configs`].
pub const PRUNED_LIMIT: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Algebraic,
    Enumeration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EnumerationMode {
    /// Every assignment of the `2L(L-1)` interior edges.
    Naive,
    /// Row-by-row depth-first search, abandoning a branch at the first
    /// ice-rule violation.
    #[default]
    Pruned,
}

/// Edge-state encoding of the four arrow directions.
///
/// Horizontal states index the auxiliary space and vertical states the
/// quantum space. The default is the one for which a single vertex gives
/// `Z = c`; [`EdgeEncoding::flipped_vertical`] is the other orientation of
/// the vertical arrows, kept for comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeEncoding {
    pub right: u8,
    pub left: u8,
    pub down: u8,
    pub up: u8,
}

impl Default for EdgeEncoding {
    fn default() -> Self {
        EdgeEncoding {
            right: 0,
            left: 1,
            down: 1,
            up: 0,
        }
    }
}

impl EdgeEncoding {
    pub fn flipped_vertical() -> Self {
        EdgeEncoding {
            down: 0,
            up: 1,
            ..EdgeEncoding::default()
        }
    }
}

/// One lattice configuration. `alpha[i][j]` is the horizontal edge left of
/// vertex `(i, j)` (`j = L` is the right boundary); `beta[i][j]` is the
/// vertical edge above vertex `(i, j)` (`i = L` is the bottom boundary).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeConfig {
    pub alpha: Vec<Vec<u8>>,
    pub beta: Vec<Vec<u8>>,
}

impl LatticeConfig {
    pub fn size(&self) -> usize {
        self.alpha.len()
    }

    pub fn satisfies_boundary(&self, enc: EdgeEncoding) -> bool {
        let n = self.size();
        (0..n).all(|k| {
            self.alpha[k][0] == enc.right
                && self.alpha[k][n] == enc.left
                && self.beta[0][k] == enc.down
                && self.beta[n][k] == enc.up
        })
    }

    pub fn satisfies_ice_rule(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.alpha[i][j] + self.beta[i][j] == self.alpha[i][j + 1] + self.beta[i + 1][j]))
    }

    /// `∏ weight(vertex(i, j))` with row `i` at `λ_i - μ_j`.
    pub fn weight<S: Scalar>(&self, weights: &[Vec<Weights<S>>]) -> S {
        let n = self.size();
        let mut acc = S::one();
        for (i, row) in weights.iter().enumerate().take(n) {
            for (j, w) in row.iter().enumerate().take(n) {
                acc = acc.mul(vertex_weight(
                    w,
                    self.alpha[i][j],
                    self.beta[i][j],
                    self.alpha[i][j + 1],
                    self.beta[i + 1][j],
                ));
            }
        }
        acc
    }
}

/// The L-matrix element with the left and top edges as outgoing states and
/// the right and bottom edges as incoming ones.
fn vertex_weight<S: Scalar>(w: &Weights<S>, left: u8, top: u8, right: u8, bottom: u8) -> &S {
    w.entry(left, top, right, bottom)
        .expect("configuration violates the ice rule")
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionValue<S> {
    pub size: usize,
    pub method: Method,
    pub value: S,
}

fn check_sizes<S>(lambdas: &[Spectral<S>], mus: &[Spectral<S>]) -> Result<usize> {
    if lambdas.len() != mus.len() {
        return Err(Error::DimensionMismatch {
            expected: mus.len(),
            found: lambdas.len(),
        });
    }
    if mus.is_empty() {
        return Err(Error::InvalidArgument("lattice size must be at least 1".into()));
    }
    Ok(mus.len())
}

/// `⟨0̄|B(λ₁)⋯B(λ_L)|0⟩`.
pub fn z_algebraic<S: Scalar>(lambdas: &[Spectral<S>], mus: &[Spectral<S>], q: &Spectral<S>) -> Result<S> {
    let n = check_sizes(lambdas, mus)?;
    let out = apply_b_product(lambdas, mus, q, &StateVector::vacuum(n))?;
    Ok(out.component((1 << n) - 1).clone())
}

/// Configuration sum with the default edge encoding.
pub fn z_enumerate<S: Scalar>(
    lambdas: &[Spectral<S>],
    mus: &[Spectral<S>],
    q: &Spectral<S>,
    mode: EnumerationMode,
) -> Result<S> {
    z_enumerate_with(lambdas, mus, q, mode, EdgeEncoding::default())
}

pub fn z_enumerate_with<S: Scalar>(
    lambdas: &[Spectral<S>],
    mus: &[Spectral<S>],
    q: &Spectral<S>,
    mode: EnumerationMode,
    enc: EdgeEncoding,
) -> Result<S> {
    let n = check_sizes(lambdas, mus)?;
    let weights: Vec<Vec<Weights<S>>> = lambdas
        .iter()
        .map(|l| mus.iter().map(|m| weights_of(&l.minus(m), q)).collect())
        .collect();
    let mut terms = Vec::new();
    for_each_config(n, mode, enc, |cfg| terms.push(cfg.weight(&weights)))?;
    Ok(pairwise_sum(&terms))
}

/// Number of valid configurations.
pub fn count_configs(size: usize) -> Result<u64> {
    let mut count = 0u64;
    for_each_config(size, EnumerationMode::Pruned, EdgeEncoding::default(), |_| count += 1)?;
    Ok(count)
}

/// Visits every valid configuration in a fixed order.
pub fn for_each_config(
    size: usize,
    mode: EnumerationMode,
    enc: EdgeEncoding,
    mut visit: impl FnMut(&LatticeConfig),
) -> Result<()> {
    let limit = match mode {
        EnumerationMode::Naive => NAIVE_LIMIT,
        EnumerationMode::Pruned => PRUNED_LIMIT,
    };
    if size > limit {
        return Err(Error::SizeLimitExceeded {
            what: "configuration enumeration",
            size,
            limit,
        });
    }
    if size == 0 {
        return Err(Error::InvalidArgument("lattice size must be at least 1".into()));
    }
    let mut cfg = LatticeConfig {
        alpha: vec![vec![0; size + 1]; size],
        beta: vec![vec![0; size]; size + 1],
    };
    for k in 0..size {
        cfg.alpha[k][0] = enc.right;
        cfg.alpha[k][size] = enc.left;
        cfg.beta[0][k] = enc.down;
        cfg.beta[size][k] = enc.up;
    }
    match mode {
        EnumerationMode::Naive => naive(&mut cfg, &mut visit),
        EnumerationMode::Pruned => dfs(&mut cfg, 0, 0, &mut visit),
    }
    Ok(())
}

fn naive(cfg: &mut LatticeConfig, visit: &mut impl FnMut(&LatticeConfig)) {
    let n = cfg.size();
    let per_kind = n * (n - 1);
    for mask in 0u64..(1u64 << (2 * per_kind)) {
        let mut bit = 0;
        for i in 0..n {
            for j in 1..n {
                cfg.alpha[i][j] = ((mask >> bit) & 1) as u8;
                bit += 1;
            }
        }
        for i in 1..n {
            for j in 0..n {
                cfg.beta[i][j] = ((mask >> bit) & 1) as u8;
                bit += 1;
            }
        }
        if cfg.satisfies_ice_rule() {
            visit(cfg);
        }
    }
}

// Fixes the bottom edge of vertex (i, j); the right edge then follows from
// the ice rule. The last row's bottom edges are the boundary.
fn dfs(cfg: &mut LatticeConfig, i: usize, j: usize, visit: &mut impl FnMut(&LatticeConfig)) {
    let n = cfg.size();
    if i == n {
        visit(cfg);
        return;
    }
    let (candidates, count) = if i + 1 == n {
        ([cfg.beta[n][j], 0], 1)
    } else {
        ([0, 1], 2)
    };
    for &bottom in &candidates[..count] {
        let flow = cfg.alpha[i][j] as i8 + cfg.beta[i][j] as i8 - bottom as i8;
        if !(0..=1).contains(&flow) || (j + 1 == n && flow as u8 != cfg.alpha[i][n]) {
            continue;
        }
        cfg.alpha[i][j + 1] = flow as u8;
        cfg.beta[i + 1][j] = bottom;
        if j + 1 == n {
            dfs(cfg, i + 1, 0, visit);
        } else {
            dfs(cfg, i, j + 1, visit);
        }
    }
}

/// `Z̄ = Z·∏ x_i^{(L-1)/2}` written in `x_i = u_i²/w_i²`: every `u_i^{2e}`
/// becomes `x_i^e w_i^{2e}`. Fails with `OddExponent` if `Z` lacks the
/// expected parity.
pub fn x_form(z: &LaurentPoly, size: usize) -> Result<LaurentPoly> {
    let shift = (size - 1) as i32;
    let prefactor = Monomial::from_pairs((1..=size as u16).flat_map(|i| [(VarId::u(i), shift), (VarId::w(i), -shift)]));
    z.mul_term(&prefactor, &Rational::one()).map_monomials(|m| {
        let mut out = m.clone();
        for i in 1..=size as u16 {
            let e = m.exponent(VarId::u(i));
            if e % 2 != 0 {
                return Err(Error::OddExponent {
                    var: VarId::u(i),
                    exp: e,
                    by: 2,
                });
            }
            let half = e / 2;
            out = out.mul(&Monomial::from_pairs([
                (VarId::u(i), -e),
                (VarId::x(i), half),
                (VarId::w(i), e),
            ]));
        }
        Ok(out)
    })
}

/// `(min, max)` degree of `Z̄` in each `x_i`.
pub fn x_degrees(zbar: &LaurentPoly, size: usize) -> Vec<(i32, i32)> {
    (1..=size as u16)
        .map(|i| {
            let v = VarId::x(i);
            (zbar.min_degree(v).unwrap_or(0), zbar.max_degree(v).unwrap_or(0))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Complex64;
    use crate::spectral::{symbolic_lambdas, symbolic_mus};
    use crate::vertex::c_weight;

    #[test]
    fn single_vertex_is_c() {
        let q = Spectral::q();
        let (l, m) = (symbolic_lambdas([1]), symbolic_mus(1));
        let c = c_weight(&q);
        assert_eq!(z_algebraic(&l, &m, &q).unwrap(), c);
        assert_eq!(z_enumerate(&l, &m, &q, EnumerationMode::Naive).unwrap(), c);
        assert_eq!(z_enumerate(&l, &m, &q, EnumerationMode::Pruned).unwrap(), c);
    }

    #[test]
    fn flipped_vertical_encoding_fails_forcing_test() {
        let q = Spectral::q();
        let z = z_enumerate_with(
            &symbolic_lambdas([1]),
            &symbolic_mus(1),
            &q,
            EnumerationMode::Pruned,
            EdgeEncoding::flipped_vertical(),
        )
        .unwrap();
        assert_ne!(z, c_weight(&q));
    }

    #[test]
    fn counts() {
        let expected = [1, 2, 7, 42, 429, 7436];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(count_configs(n + 1).unwrap(), e, "L={}", n + 1);
        }
        assert!(matches!(count_configs(7), Err(Error::SizeLimitExceeded { .. })));
    }

    #[test]
    fn naive_and_pruned_visit_the_same_configs() {
        for n in 1..=3 {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for_each_config(n, EnumerationMode::Naive, EdgeEncoding::default(), |c| {
                a.push(c.clone())
            })
            .unwrap();
            for_each_config(n, EnumerationMode::Pruned, EdgeEncoding::default(), |c| {
                b.push(c.clone())
            })
            .unwrap();
            a.sort_by(|x, y| (&x.alpha, &x.beta).cmp(&(&y.alpha, &y.beta)));
            b.sort_by(|x, y| (&x.alpha, &x.beta).cmp(&(&y.alpha, &y.beta)));
            assert_eq!(a, b);
            assert!(b
                .iter()
                .all(|c| c.satisfies_boundary(EdgeEncoding::default()) && c.satisfies_ice_rule()));
        }
        assert!(matches!(
            for_each_config(5, EnumerationMode::Naive, EdgeEncoding::default(), |_| {}),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }

    #[test]
    fn symbolic_agreement_l2() {
        let q = Spectral::q();
        let (l, m) = (symbolic_lambdas([1, 2]), symbolic_mus(2));
        assert_eq!(
            z_algebraic(&l, &m, &q).unwrap(),
            z_enumerate(&l, &m, &q, EnumerationMode::Pruned).unwrap()
        );
    }

    #[test]
    fn ice_point_l3_counts_configs() {
        let third = Complex64::new(0.0, core::f64::consts::PI / 3.0);
        let q = Spectral::from_log(third);
        let l: Vec<_> = (0..3).map(|_| Spectral::from_log(third)).collect();
        let m: Vec<_> = (0..3).map(|_| Spectral::zero()).collect();
        let z = z_enumerate(&l, &m, &q, EnumerationMode::Pruned).unwrap();
        let c9 = c_weight(&q).powi(9);
        assert!((z / c9 - 7.0).norm() < 1e-12);
    }

    #[test]
    fn b_beyond_lattice_size_annihilates() {
        let q = Spectral::q();
        let out = apply_b_product(
            &symbolic_lambdas([1, 2, 3]),
            &symbolic_mus(2),
            &q,
            &StateVector::vacuum(2),
        )
        .unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn x_form_degrees_l2() {
        let q = Spectral::q();
        let z = z_algebraic(&symbolic_lambdas([1, 2]), &symbolic_mus(2), &q).unwrap();
        let zbar = x_form(&z, 2).unwrap();
        assert_eq!(x_degrees(&zbar, 2), vec![(0, 1), (0, 1)]);
        assert!(zbar.variables().iter().all(|v| v.kind() != crate::scalar::VarKind::U));
    }
}
