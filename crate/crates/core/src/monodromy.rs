//! The monodromy matrix `T(λ) = L_{A1}(λ-μ₁)⋯L_{AL}(λ-μ_L)` and its
//! auxiliary-space blocks `A, B, C, D` as operators on `2^L` sites.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::operator::{Matrix, Residual, StateVector};
use crate::scalar::{Complex64, Scalar, DEFAULT_REL_EPS};
use crate::spectral::Spectral;
use crate::vertex::{c_weight, r_matrix, weights_of, Weights};

/// Largest lattice for which blocks are materialized densely.
pub const DENSE_LIMIT: usize = 6;

/// Largest lattice for which the RTT relation is checked as a full matrix
/// identity.
pub const RTT_DENSE_LIMIT: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    A,
    B,
    C,
    D,
}

impl Block {
    pub const ALL: [Block; 4] = [Block::A, Block::B, Block::C, Block::D];

    /// `(out_aux, in_aux)` position in the 2×2 auxiliary matrix.
    pub fn aux_indices(self) -> (u8, u8) {
        match self {
            Block::A => (0, 0),
            Block::B => (0, 1),
            Block::C => (1, 0),
            Block::D => (1, 1),
        }
    }

    fn from_aux(out_aux: u8, in_aux: u8) -> Block {
        match (out_aux, in_aux) {
            (0, 0) => Block::A,
            (0, 1) => Block::B,
            (1, 0) => Block::C,
            _ => Block::D,
        }
    }

    fn slot(self) -> usize {
        let (o, i) = self.aux_indices();
        2 * o as usize + i as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ApplyMode {
    /// Dense when materialized, matrix-free otherwise.
    #[default]
    Auto,
    Dense,
    MatrixFree,
}

#[derive(Clone, Debug)]
pub struct Monodromy<S> {
    size: usize,
    sites: Vec<Weights<S>>,
    dense: Option<[Matrix<S>; 4]>,
}

/// Builds `T(λ)` for inhomogeneities `mus`; blocks are materialized for
/// `L ≤ DENSE_LIMIT`.
pub fn build_monodromy<S: Scalar>(u: &Spectral<S>, mus: &[Spectral<S>], q: &Spectral<S>) -> Monodromy<S> {
    let mut m = build_monodromy_lazy(u, mus, q);
    if m.size <= DENSE_LIMIT {
        m.dense = Some(m.materialize());
    }
    m
}

/// Builds `T(λ)` without materializing the blocks.
pub fn build_monodromy_lazy<S: Scalar>(u: &Spectral<S>, mus: &[Spectral<S>], q: &Spectral<S>) -> Monodromy<S> {
    assert!(!mus.is_empty(), "lattice size must be at least 1");
    let sites = mus.iter().map(|mu| weights_of(&u.minus(mu), q)).collect();
    Monodromy {
        size: mus.len(),
        sites,
        dense: None,
    }
}

impl<S: Scalar> Monodromy<S> {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        1 << self.size
    }

    pub fn site_weights(&self) -> &[Weights<S>] {
        &self.sites
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    // T^{(k)}_{αγ} = Σ_β T^{(k-1)}_{αβ} ⊗ ℓ^{(k)}_{βγ}
    fn materialize(&self) -> [Matrix<S>; 4] {
        let mut t: [Matrix<S>; 4] = [
            Matrix::identity(1),
            Matrix::zeros(1, 1),
            Matrix::zeros(1, 1),
            Matrix::identity(1),
        ];
        for w in &self.sites {
            let local = [
                w.aux_block(0, 0),
                w.aux_block(0, 1),
                w.aux_block(1, 0),
                w.aux_block(1, 1),
            ];
            let dim = t[0].rows() * 2;
            let mut next: [Matrix<S>; 4] = core::array::from_fn(|_| Matrix::zeros(dim, dim));
            for alpha in 0..2 {
                for gamma in 0..2 {
                    let mut acc = Matrix::zeros(dim, dim);
                    for beta in 0..2 {
                        let left = &t[2 * alpha + beta];
                        if left.is_zero() {
                            continue;
                        }
                        acc = acc.add(&left.kron(&local[2 * beta + gamma]));
                    }
                    next[2 * alpha + gamma] = acc;
                }
            }
            t = next;
        }
        t
    }

    /// The block as a dense `2^L × 2^L` matrix (materialized on demand).
    pub fn dense_block(&self, block: Block) -> Matrix<S> {
        match &self.dense {
            Some(d) => d[block.slot()].clone(),
            None => self.materialize()[block.slot()].clone(),
        }
    }

    pub fn block(&self, block: Block) -> Option<&Matrix<S>> {
        self.dense.as_ref().map(|d| &d[block.slot()])
    }

    pub fn apply(&self, block: Block, v: &StateVector<S>) -> Result<StateVector<S>> {
        apply_block(self, block, v, ApplyMode::Auto)
    }

    /// Left-to-right product of one-site factors, `O(L·2^L)`.
    pub fn apply_matrix_free(&self, block: Block, v: &StateVector<S>) -> Result<StateVector<S>> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        let (out_aux, in_aux) = block.aux_indices();
        let mut comp = [StateVector::zeros(self.dim()), StateVector::zeros(self.dim())];
        comp[in_aux as usize] = v.clone();
        // T = L_{A1}⋯L_{AL}: the last site acts first.
        for (j, w) in self.sites.iter().enumerate().rev() {
            let shift = self.size - 1 - j;
            let mut next = [StateVector::zeros(self.dim()), StateVector::zeros(self.dim())];
            for (alpha, slot) in next.iter_mut().enumerate() {
                for (gamma, src) in comp.iter().enumerate() {
                    if src.is_zero() {
                        continue;
                    }
                    let op = w.aux_block(alpha as u8, gamma as u8);
                    *slot = slot.add(&apply_site(&op, src, shift));
                }
            }
            comp = next;
        }
        let [c0, c1] = comp;
        Ok(if out_aux == 0 { c0 } else { c1 })
    }
}

/// Applies a 2×2 operator on the site whose bit is `1 << shift`.
fn apply_site<S: Scalar>(op: &Matrix<S>, v: &StateVector<S>, shift: usize) -> StateVector<S> {
    let bit = 1usize << shift;
    let mut out = vec![S::zero(); v.dim()];
    for (s, x) in v.components().iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let in_state = (s & bit != 0) as usize;
        for out_state in 0..2 {
            let e = op.get(out_state, in_state);
            if e.is_zero() {
                continue;
            }
            let target = if out_state == 1 { s | bit } else { s & !bit };
            out[target] = out[target].add(&e.mul(x));
        }
    }
    StateVector::new(out)
}

pub fn apply_block<S: Scalar>(
    m: &Monodromy<S>,
    block: Block,
    v: &StateVector<S>,
    mode: ApplyMode,
) -> Result<StateVector<S>> {
    match (mode, m.block(block)) {
        (ApplyMode::Auto | ApplyMode::Dense, Some(b)) => b.apply(v),
        (ApplyMode::Dense, None) => m.dense_block(block).apply(v),
        _ => m.apply_matrix_free(block, v),
    }
}

/// Applies `B(λ_1)⋯B(λ_n)` to `v` (rightmost factor first).
pub fn apply_b_product<S: Scalar>(
    lambdas: &[Spectral<S>],
    mus: &[Spectral<S>],
    q: &Spectral<S>,
    v: &StateVector<S>,
) -> Result<StateVector<S>> {
    let mut out = v.clone();
    for lambda in lambdas.iter().rev() {
        out = build_monodromy(lambda, mus, q).apply(Block::B, &out)?;
    }
    Ok(out)
}

/// Named residuals of the vacuum actions: `A|0⟩ = ∏a|0⟩`, `D|0⟩ = ∏b|0⟩`,
/// `C|0⟩ = 0`, `B|0̄⟩ = 0`, `A|0̄⟩ = ∏b|0̄⟩` and `D|0̄⟩ = ∏a|0̄⟩`.
///
/// The dual-vacuum eigenvalue of `A` multiplies `|0̄⟩`, not `|0⟩`.
pub fn check_vacuum_actions<S: Scalar>(m: &Monodromy<S>) -> Result<Vec<(&'static str, Residual)>> {
    let prod_a = S::product(m.sites.iter().map(|w| &w.a));
    let prod_b = S::product(m.sites.iter().map(|w| &w.b));
    let vac = StateVector::vacuum(m.size);
    let dual = StateVector::dual_vacuum(m.size);
    let zero = StateVector::zeros(m.dim());
    Ok(vec![
        (
            "A|0> = prod a |0>",
            Residual::of_vectors(&m.apply(Block::A, &vac)?, &vac.scale(&prod_a)),
        ),
        (
            "D|0> = prod b |0>",
            Residual::of_vectors(&m.apply(Block::D, &vac)?, &vac.scale(&prod_b)),
        ),
        ("C|0> = 0", Residual::of_vectors(&m.apply(Block::C, &vac)?, &zero)),
        ("B|0bar> = 0", Residual::of_vectors(&m.apply(Block::B, &dual)?, &zero)),
        (
            "A|0bar> = prod b |0bar>",
            Residual::of_vectors(&m.apply(Block::A, &dual)?, &dual.scale(&prod_b)),
        ),
        (
            "D|0bar> = prod a |0bar>",
            Residual::of_vectors(&m.apply(Block::D, &dual)?, &dual.scale(&prod_a)),
        ),
    ])
}

/// `T(λ)` acting on auxiliary factor `factor` (0 or 1) of
/// `aux ⊗ aux ⊗ quantum`.
fn embed_in_double_aux<S: Scalar>(m: &Monodromy<S>, factor: usize) -> Matrix<S> {
    let dim = m.dim();
    let blocks: Vec<Matrix<S>> = Block::ALL.iter().map(|&b| m.dense_block(b)).collect();
    Matrix::from_fn(4 * dim, 4 * dim, |r, c| {
        let (ra, rq) = (r / dim, r % dim);
        let (ca, cq) = (c / dim, c % dim);
        let (r1, r2, c1, c2) = (ra >> 1, ra & 1, ca >> 1, ca & 1);
        let (active, idle) = if factor == 0 {
            ((r1, c1), (r2, c2))
        } else {
            ((r2, c2), (r1, c1))
        };
        if idle.0 != idle.1 {
            return S::zero();
        }
        blocks[Block::from_aux(active.0 as u8, active.1 as u8).slot()]
            .get(rq, cq)
            .clone()
    })
}

/// `R(λ-ν)·(T(λ)⊗T(ν)) - (T(ν)⊗T(λ))·R(λ-ν)` as a full matrix identity on
/// the `4·2^L`-dimensional space.
pub fn check_rtt<S: Scalar>(
    lambda: &Spectral<S>,
    nu: &Spectral<S>,
    mus: &[Spectral<S>],
    q: &Spectral<S>,
) -> Result<Residual> {
    if mus.len() > RTT_DENSE_LIMIT {
        return Err(Error::SizeLimitExceeded {
            what: "dense RTT check",
            size: mus.len(),
            limit: RTT_DENSE_LIMIT,
        });
    }
    let t_lambda = build_monodromy(lambda, mus, q);
    let t_nu = build_monodromy(nu, mus, q);
    let dim = t_lambda.dim();
    let r = r_matrix(&lambda.minus(nu), q).kron(&Matrix::identity(dim));
    let lhs = r
        .mul(&embed_in_double_aux(&t_lambda, 0))
        .mul(&embed_in_double_aux(&t_nu, 1));
    let rhs = embed_in_double_aux(&t_nu, 0)
        .mul(&embed_in_double_aux(&t_lambda, 1))
        .mul(&r);
    Ok(Residual::of_matrices(&lhs, &rhs))
}

/// The RTT identity applied to `probes` random vectors, for lattices too
/// large for the dense check. Uses matrix-free block applications only.
pub fn check_rtt_sampled<R: Rng + ?Sized>(
    lambda: &Spectral<Complex64>,
    nu: &Spectral<Complex64>,
    mus: &[Spectral<Complex64>],
    q: &Spectral<Complex64>,
    probes: usize,
    rng: &mut R,
) -> Result<Residual> {
    let t_lambda = build_monodromy_lazy(lambda, mus, q);
    let t_nu = build_monodromy_lazy(nu, mus, q);
    let dim = t_lambda.dim();
    let r = r_matrix(&lambda.minus(nu), q);
    let mut worst = Residual::from_parts::<Complex64>(&[], 0.0);
    for _ in 0..probes {
        let v: [StateVector<Complex64>; 4] = core::array::from_fn(|_| {
            StateVector::new(
                (0..dim)
                    .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                    .collect(),
            )
        });
        // (T_1(x) T_2(y) v)_{a1 a2} = Σ T_{a1 c1}(x) T_{a2 c2}(y) v_{c1 c2}
        let tt = |x: &Monodromy<Complex64>,
                  y: &Monodromy<Complex64>,
                  v: &[StateVector<Complex64>; 4]|
         -> Result<[StateVector<Complex64>; 4]> {
            let mut out: [StateVector<Complex64>; 4] = core::array::from_fn(|_| StateVector::zeros(dim));
            for (a, slot) in out.iter_mut().enumerate() {
                for (cc, src) in v.iter().enumerate() {
                    let inner = y.apply_matrix_free(Block::from_aux((a & 1) as u8, (cc & 1) as u8), src)?;
                    let outer = x.apply_matrix_free(Block::from_aux((a >> 1) as u8, (cc >> 1) as u8), &inner)?;
                    *slot = slot.add(&outer);
                }
            }
            Ok(out)
        };
        let mix = |v: &[StateVector<Complex64>; 4]| -> [StateVector<Complex64>; 4] {
            core::array::from_fn(|a| {
                (0..4).fold(StateVector::zeros(dim), |acc, c| {
                    let e = r.get(a, c);
                    if e.is_zero() {
                        acc
                    } else {
                        acc.add(&v[c].scale(e))
                    }
                })
            })
        };
        let lhs = mix(&tt(&t_lambda, &t_nu, &v)?);
        let rhs = tt(&t_nu, &t_lambda, &mix(&v))?;
        for (l, r) in lhs.iter().zip(&rhs) {
            worst = worst.worst(Residual::of_vectors(l, r));
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommutationRule {
    AB,
    DB,
    CB,
    BB,
}

impl CommutationRule {
    pub const ALL: [CommutationRule; 4] = [
        CommutationRule::AB,
        CommutationRule::DB,
        CommutationRule::CB,
        CommutationRule::BB,
    ];
}

/// Checks one exchange relation between monodromy blocks, multiplied
/// through by its `b` denominator:
///
/// - AB: `b(ν-λ) A(λ)B(ν) = a(ν-λ) B(ν)A(λ) - c B(λ)A(ν)`
/// - DB: `b(λ-ν) D(λ)B(ν) = a(λ-ν) B(ν)D(λ) - c B(λ)D(ν)`
/// - CB: `b(λ-ν) [C(λ), B(ν)] = c [A(ν)D(λ) - A(λ)D(ν)]`
/// - BB: `B(λ)B(ν) = B(ν)B(λ)`
pub fn check_commutation<S: Scalar>(
    rule: CommutationRule,
    lambda: &Spectral<S>,
    nu: &Spectral<S>,
    mus: &[Spectral<S>],
    q: &Spectral<S>,
) -> Result<Residual> {
    let t_l = build_monodromy(lambda, mus, q);
    let t_n = build_monodromy(nu, mus, q);
    let blk = |t: &Monodromy<S>, b: Block| t.dense_block(b);
    let c = c_weight(q);
    let guard = |w: &Weights<S>, i: usize, j: usize| -> Result<()> {
        let scale = w.a.magnitude() + w.c.magnitude();
        if w.b.is_negligible(scale, 1e-12) {
            Err(Error::CoincidingSpectralPoints(i, j))
        } else {
            Ok(())
        }
    };
    let (lhs, rhs) = match rule {
        CommutationRule::AB => {
            let w = weights_of(&nu.minus(lambda), q);
            guard(&w, 1, 0)?;
            let lhs = blk(&t_l, Block::A).mul(&blk(&t_n, Block::B)).scale(&w.b);
            let rhs = blk(&t_n, Block::B)
                .mul(&blk(&t_l, Block::A))
                .scale(&w.a)
                .sub(&blk(&t_l, Block::B).mul(&blk(&t_n, Block::A)).scale(&c));
            (lhs, rhs)
        }
        CommutationRule::DB => {
            let w = weights_of(&lambda.minus(nu), q);
            guard(&w, 0, 1)?;
            let lhs = blk(&t_l, Block::D).mul(&blk(&t_n, Block::B)).scale(&w.b);
            let rhs = blk(&t_n, Block::B)
                .mul(&blk(&t_l, Block::D))
                .scale(&w.a)
                .sub(&blk(&t_l, Block::B).mul(&blk(&t_n, Block::D)).scale(&c));
            (lhs, rhs)
        }
        CommutationRule::CB => {
            let w = weights_of(&lambda.minus(nu), q);
            guard(&w, 0, 1)?;
            let lhs = blk(&t_l, Block::C)
                .mul(&blk(&t_n, Block::B))
                .sub(&blk(&t_n, Block::B).mul(&blk(&t_l, Block::C)))
                .scale(&w.b);
            let rhs = blk(&t_n, Block::A)
                .mul(&blk(&t_l, Block::D))
                .sub(&blk(&t_l, Block::A).mul(&blk(&t_n, Block::D)))
                .scale(&c);
            (lhs, rhs)
        }
        CommutationRule::BB => (
            blk(&t_l, Block::B).mul(&blk(&t_n, Block::B)),
            blk(&t_n, Block::B).mul(&blk(&t_l, Block::B)),
        ),
    };
    Ok(Residual::of_matrices(&lhs, &rhs))
}

/// Dense and matrix-free applications of every block to every basis vector
/// agree.
pub fn check_dense_vs_matrix_free<S: Scalar>(m: &Monodromy<S>) -> Result<Residual> {
    let mut worst = Residual::from_parts::<S>(&[], 0.0);
    for b in Block::ALL {
        let dense = m.dense_block(b);
        for i in 0..m.dim() {
            let e = StateVector::basis(m.dim(), i);
            let r = Residual::of_vectors(&dense.apply(&e)?, &m.apply_matrix_free(b, &e)?);
            worst = worst.worst(r);
        }
    }
    Ok(worst)
}

/// Default tolerance for float operator identities.
pub const OPERATOR_REL_TOL: f64 = DEFAULT_REL_EPS;
