//! Vertex weights, the L-matrix, and the Yang-Baxter relation.
//!
//! Basis convention: a pair `(aux, quantum)` of site states maps to index
//! `2·aux + quantum`, state 0 being `(1, 0)ᵀ`. Rows are outgoing states and
//! columns incoming ones.

use crate::operator::{Matrix, Residual};
use crate::scalar::Scalar;
use crate::spectral::Spectral;

/// `a = sinh(λ+γ)`, `b = sinh λ`, `c = sinh γ` in exponentiated form.
#[derive(Clone, Debug, PartialEq)]
pub struct Weights<S> {
    pub a: S,
    pub b: S,
    pub c: S,
}

/// Weights at spectral argument `z = e^{λ}` and `q = e^{γ}`.
pub fn weights_of<S: Scalar>(z: &Spectral<S>, q: &Spectral<S>) -> Weights<S> {
    let half = S::from_ratio(1, 2);
    let a = z.exp().mul(q.exp()).sub(&z.inv().mul(q.inv())).mul(&half);
    let b = z.exp().sub(z.inv()).mul(&half);
    Weights { a, b, c: c_weight(q) }
}

/// `c` does not depend on the spectral argument.
pub fn c_weight<S: Scalar>(q: &Spectral<S>) -> S {
    q.exp().sub(q.inv()).mul(&S::from_ratio(1, 2))
}

/// `Δ = (q + q⁻¹)/2`.
pub fn delta<S: Scalar>(q: &Spectral<S>) -> S {
    q.exp().add(q.inv()).mul(&S::from_ratio(1, 2))
}

impl<S: Scalar> Weights<S> {
    /// `a² + b² - c² - 2abΔ`, which vanishes on the integrable manifold.
    pub fn delta_defect(&self, q: &Spectral<S>) -> S {
        let lhs = self.a.mul(&self.a).add(&self.b.mul(&self.b)).sub(&self.c.mul(&self.c));
        let rhs = S::from_ratio(2, 1).mul(&self.a).mul(&self.b).mul(&delta(q));
        lhs.sub(&rhs)
    }

    /// Matrix element `L[(out_aux, out_q), (in_aux, in_q)]`; `None` on the
    /// ten positions the ice rule forbids.
    pub fn entry(&self, out_aux: u8, out_q: u8, in_aux: u8, in_q: u8) -> Option<&S> {
        if out_aux + out_q != in_aux + in_q {
            return None;
        }
        Some(if out_aux == in_aux {
            if out_aux == out_q {
                &self.a
            } else {
                &self.b
            }
        } else {
            &self.c
        })
    }

    /// The 2×2 quantum-space operator at auxiliary position
    /// `(out_aux, in_aux)`.
    pub fn aux_block(&self, out_aux: u8, in_aux: u8) -> Matrix<S> {
        Matrix::from_fn(2, 2, |oq, iq| {
            self.entry(out_aux, oq as u8, in_aux, iq as u8)
                .cloned()
                .unwrap_or_else(S::zero)
        })
    }
}

/// The 4×4 L-matrix on auxiliary ⊗ quantum space.
#[derive(Clone, Debug, PartialEq)]
pub struct LMatrix<S>(Matrix<S>);

impl<S: Scalar> LMatrix<S> {
    pub fn from_weights(w: &Weights<S>) -> Self {
        LMatrix(Matrix::from_fn(4, 4, |r, c| {
            w.entry((r >> 1) as u8, (r & 1) as u8, (c >> 1) as u8, (c & 1) as u8)
                .cloned()
                .unwrap_or_else(S::zero)
        }))
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<S> {
        self.0
    }
}

pub fn build_l<S: Scalar>(z: &Spectral<S>, q: &Spectral<S>) -> LMatrix<S> {
    LMatrix::from_weights(&weights_of(z, q))
}

/// The swap on two sites.
pub fn permutation<S: Scalar>() -> Matrix<S> {
    Matrix::from_fn(4, 4, |r, c| {
        let swapped = ((r & 1) << 1) | (r >> 1);
        if swapped == c {
            S::one()
        } else {
            S::zero()
        }
    })
}

/// `R(λ) = P·L(λ)`.
pub fn r_matrix<S: Scalar>(z: &Spectral<S>, q: &Spectral<S>) -> Matrix<S> {
    permutation().mul(build_l(z, q).matrix())
}

/// Embeds a two-site operator acting on sites `(i, j)` into `n` sites.
/// Site 0 is the most significant bit.
pub fn embed_two_site<S: Scalar>(op: &Matrix<S>, i: usize, j: usize, n: usize) -> Matrix<S> {
    assert!(i != j && i < n && j < n);
    let dim = 1usize << n;
    let bit = |s: usize, site: usize| (s >> (n - 1 - site)) & 1;
    let mask = (1usize << (n - 1 - i)) | (1usize << (n - 1 - j));
    Matrix::from_fn(dim, dim, |r, c| {
        if r & !mask != c & !mask {
            return S::zero();
        }
        let ro = 2 * bit(r, i) + bit(r, j);
        let co = 2 * bit(c, i) + bit(c, j);
        op.get(ro, co).clone()
    })
}

/// `L₁₂(λ-μ) L₁₃(λ-ν) L₂₃(μ-ν) - L₂₃(μ-ν) L₁₃(λ-ν) L₁₂(λ-μ)` on three sites.
pub fn check_yang_baxter<S: Scalar>(
    lambda: &Spectral<S>,
    mu: &Spectral<S>,
    nu: &Spectral<S>,
    q: &Spectral<S>,
) -> Residual {
    let l12 = embed_two_site(build_l(&lambda.minus(mu), q).matrix(), 0, 1, 3);
    let l13 = embed_two_site(build_l(&lambda.minus(nu), q).matrix(), 0, 2, 3);
    let l23 = embed_two_site(build_l(&mu.minus(nu), q).matrix(), 1, 2, 3);
    let lhs = l12.mul(&l13).mul(&l23);
    let rhs = l23.mul(&l13).mul(&l12);
    Residual::of_matrices(&lhs, &rhs)
}
