//! Leading behaviour of `B(λ)` and of `Z̄` as `x_i → ∞`.
//!
//! The operators here carry half-integer powers of `q`, so they are written
//! in `s = q^{1/2}` and converted back with [`s_to_q`], which fails unless
//! every power of `s` is even.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monodromy::{build_monodromy, Block};
use crate::operator::{Matrix, Residual, StateVector};
use crate::partition::{x_form, z_algebraic};
use crate::scalar::{Complex64, LaurentPoly, Scalar, VarId};
use crate::spectral::{symbolic_lambdas, symbolic_mus, Spectral};

/// Largest lattice for [`check_ordering_sum`].
pub const ORDERING_LIMIT: usize = 5;

fn s_pow(e: i32) -> LaurentPoly {
    LaurentPoly::var_pow(VarId::S, e)
}

/// `K = diag(s, s⁻¹)`.
pub fn k_matrix() -> Matrix<LaurentPoly> {
    Matrix::diag(&[s_pow(1), s_pow(-1)])
}

pub fn k_inverse() -> Matrix<LaurentPoly> {
    Matrix::diag(&[s_pow(-1), s_pow(1)])
}

/// Raises the second basis state to the first.
pub fn x_plus<S: Scalar>() -> Matrix<S> {
    Matrix::from_fn(2, 2, |r, c| if (r, c) == (0, 1) { S::one() } else { S::zero() })
}

/// Lowers the first basis state to the second.
pub fn x_minus<S: Scalar>() -> Matrix<S> {
    Matrix::from_fn(2, 2, |r, c| if (r, c) == (1, 0) { S::one() } else { S::zero() })
}

/// `P_j = K ⊗ ⋯ ⊗ K ⊗ X⁻ ⊗ K⁻¹ ⊗ ⋯ ⊗ K⁻¹` with `X⁻` at site `j` (1-based).
pub fn p_operator(j: usize, size: usize) -> Matrix<LaurentPoly> {
    assert!((1..=size).contains(&j), "site {j} outside 1..={size}");
    (1..=size).fold(Matrix::identity(1), |acc, site| {
        let factor = match site.cmp(&j) {
            core::cmp::Ordering::Less => k_matrix(),
            core::cmp::Ordering::Equal => x_minus(),
            core::cmp::Ordering::Greater => k_inverse(),
        };
        acc.kron(&factor)
    })
}

/// `[L]_{q²}! = ∏_{k=1}^{L} (1 + q² + ⋯ + q^{2(k-1)})`.
pub fn q_factorial<S: Scalar>(size: usize, q: &S) -> S {
    let q2 = q.mul(q);
    let mut acc = S::one();
    let mut bracket = S::zero();
    let mut power = S::one();
    for _ in 0..size {
        bracket = bracket.add(&power);
        power = power.mul(&q2);
        acc = acc.mul(&bracket);
    }
    acc
}

/// `(q - q⁻¹)^L 2^{-L²} [L]_{q²}!`.
pub fn asymptotic_norm<S: Scalar>(size: usize, q: &Spectral<S>) -> S {
    assert!((1..=7).contains(&size), "lattice size {size} outside 1..=7");
    let diff = q.exp().sub(q.inv());
    diff.pow(size as u32)
        .mul(&S::from_ratio(1, 1i64 << (size * size)))
        .mul(&q_factorial(size, q.exp()))
}

/// Rewrites a polynomial in `s` as one in `q = s²`.
pub fn s_to_q(p: &LaurentPoly) -> Result<LaurentPoly> {
    Ok(p.divide_exponents(VarId::S, 2)?
        .map_vars(|v| if v == VarId::S { VarId::Q } else { v }))
}

/// `f_{L-1}^{(i)} = 2^{-L} s^{L-3}(s⁴ - 1) e^{(L-1)μ_i - Σμ_k} Σ_j e^{μ_j} P_j`,
/// the coefficient of `x_i^{L-1}` in `x_i^{(L-1)/2} B(λ_i)`.
pub fn f_top(i: usize, mus: &[Spectral<LaurentPoly>]) -> Matrix<LaurentPoly> {
    let size = mus.len();
    let mut prefactor = LaurentPoly::constant(crate::scalar::rational(1, 1i64 << size))
        .mul(&s_pow(size as i32 - 3))
        .mul(&s_pow(4).sub(&LaurentPoly::one()))
        .mul(&mus[i - 1].exp().pow((size - 1) as u32));
    for m in mus {
        prefactor = prefactor.mul(m.inv());
    }
    let mut sum = Matrix::zeros(1 << size, 1 << size);
    for (j, m) in mus.iter().enumerate() {
        sum = sum.add(&p_operator(j + 1, size).scale(m.exp()));
    }
    sum.scale(&prefactor)
}

/// The same coefficient extracted from `B(λ_i)` itself: with `x_i = u_i²/w_i²`
/// it is `w_i^{L-1}` times the `u_i^{L-1}` coefficient of `B`.
pub fn b_leading_coeff(i: usize, mus: &[Spectral<LaurentPoly>]) -> Result<Matrix<LaurentPoly>> {
    let size = mus.len();
    let u = VarId::u(i as u16);
    let b = build_monodromy(&Spectral::var(u), mus, &Spectral::q_as_s_squared()).dense_block(Block::B);
    let scale = mus[i - 1].exp().pow((size - 1) as u32);
    let mut entries = Vec::with_capacity(b.entries().len());
    for e in b.entries() {
        entries.push(e.leading_coeff(&[u], size as i32 - 1)?.mul(&scale));
    }
    let mut it = entries.into_iter();
    Ok(Matrix::from_fn(b.rows(), b.cols(), |_, _| {
        it.next().expect("entry count")
    }))
}

/// `f_top(i)` against the coefficient read off `B(λ_i)`, for every `i`.
pub fn check_f_top(mus: &[Spectral<LaurentPoly>]) -> Result<Residual> {
    let mut worst = Residual::from_parts::<LaurentPoly>(&[], 0.0);
    for i in 1..=mus.len() {
        worst = worst.worst(Residual::of_matrices(&f_top(i, mus), &b_leading_coeff(i, mus)?));
    }
    Ok(worst)
}

/// `⟨0̄|∏_i f_top(i)|0⟩` as a polynomial in `q`.
pub fn top_expectation(mus: &[Spectral<LaurentPoly>]) -> Result<LaurentPoly> {
    let size = mus.len();
    let mut v = StateVector::vacuum(size);
    for i in (1..=size).rev() {
        v = f_top(i, mus).apply(&v)?;
    }
    s_to_q(v.component((1 << size) - 1))
}

/// `⟨0̄|P₁P₂⋯P_L|0⟩` as a polynomial in `q`.
pub fn vacuum_p_product(size: usize) -> Result<LaurentPoly> {
    let mut v = StateVector::vacuum(size);
    for j in (1..=size).rev() {
        v = p_operator(j, size).apply(&v)?;
    }
    s_to_q(v.component((1 << size) - 1))
}

/// Named residuals of `P_iP_j = q²P_jP_i` (`i < j`), `P_i² = 0`,
/// `KX^±K⁻¹ = q^{±1}X^±` and `(q - q⁻¹)[X⁺, X⁻] = K² - K⁻²`.
pub fn check_p_relations(size: usize) -> Vec<(String, Residual)> {
    let q = s_pow(2);
    let q_inv = s_pow(-2);
    let mut out = Vec::new();
    let ps: Vec<_> = (1..=size).map(|j| p_operator(j, size)).collect();
    for i in 0..size {
        out.push((
            format!("P{0}^2 = 0", i + 1),
            Residual::of_matrices(&ps[i].mul(&ps[i]), &Matrix::zeros(1 << size, 1 << size)),
        ));
        for j in i + 1..size {
            out.push((
                format!("P{}P{} = q^2 P{}P{}", i + 1, j + 1, j + 1, i + 1),
                Residual::of_matrices(&ps[i].mul(&ps[j]), &ps[j].mul(&ps[i]).scale(&q.mul(&q))),
            ));
        }
    }
    let (k, ki) = (k_matrix(), k_inverse());
    out.push((
        "K X+ K^-1 = q X+".into(),
        Residual::of_matrices(&k.mul(&x_plus()).mul(&ki), &x_plus().scale(&q)),
    ));
    out.push((
        "K X- K^-1 = q^-1 X-".into(),
        Residual::of_matrices(&k.mul(&x_minus()).mul(&ki), &x_minus().scale(&q_inv)),
    ));
    let comm = x_plus::<LaurentPoly>()
        .mul(&x_minus())
        .sub(&x_minus::<LaurentPoly>().mul(&x_plus()));
    out.push((
        "(q - q^-1)[X+, X-] = K^2 - K^-2".into(),
        Residual::of_matrices(&comm.scale(&q.sub(&q_inv)), &k.mul(&k).sub(&ki.mul(&ki))),
    ));
    out
}

/// Visits every permutation of `0..n` (Heap's algorithm).
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = alloc::vec![0usize; n];
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// `Σ_σ P_{σ(1)}⋯P_{σ(L)}` summed explicitly over all `L!` orderings,
/// against `∏_{k=1}^{L} (1 + q⁻² + ⋯ + q^{-2(k-1)}) · P₁⋯P_L`.
pub fn check_ordering_sum(size: usize) -> Result<Residual> {
    if size > ORDERING_LIMIT {
        return Err(Error::SizeLimitExceeded {
            what: "ordering sum",
            size,
            limit: ORDERING_LIMIT,
        });
    }
    let ps: Vec<_> = (1..=size).map(|j| p_operator(j, size)).collect();
    let dim = 1 << size;
    let mut total = Matrix::zeros(dim, dim);
    for_each_permutation(size, |perm| {
        let prod = perm.iter().fold(Matrix::identity(dim), |acc, &k| acc.mul(&ps[k]));
        total = total.add(&prod);
    });
    let ordered = ps.iter().fold(Matrix::identity(dim), |acc, p| acc.mul(p));
    let factor = q_factorial(size, &s_pow(-2));
    Ok(Residual::of_matrices(&total, &ordered.scale(&factor)))
}

/// Coefficient of `(x₁⋯x_L)^{L-1}` in the symbolic `Z̄`, next to the
/// asymptotic norm it should equal.
pub fn leading_coeff_symbolic(size: usize) -> Result<(LaurentPoly, LaurentPoly)> {
    let q = Spectral::q();
    let z = z_algebraic(&symbolic_lambdas(1..=size as u16), &symbolic_mus(size), &q)?;
    let zbar = x_form(&z, size)?;
    let xs: Vec<VarId> = (1..=size as u16).map(VarId::x).collect();
    let lead = zbar.leading_coeff(&xs, size as i32 - 1)?;
    Ok((lead, asymptotic_norm(size, &q)))
}

/// `Z̄(t·x⁰)/t^{L(L-1)}` at numeric `q` and inhomogeneities; tends to the
/// asymptotic norm with relative error `O(1/t)`.
pub fn asymptotic_ratio(
    t: f64,
    direction: &[Complex64],
    mus: &[Spectral<Complex64>],
    q: &Spectral<Complex64>,
) -> Result<Complex64> {
    let size = mus.len();
    if direction.len() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            found: direction.len(),
        });
    }
    // u_i = w_i (t x⁰_i)^{1/2}
    let lambdas: Vec<Spectral<Complex64>> = direction
        .iter()
        .zip(mus)
        .map(|(x0, m)| Spectral::from_log((x0 * t).ln() / 2.0 + m.exp().ln()))
        .collect();
    let z = z_algebraic(&lambdas, mus, q)?;
    let mut zbar = z;
    for (l, m) in lambdas.iter().zip(mus) {
        zbar *= (l.exp() * m.inv()).powi(size as i32 - 1);
    }
    Ok(zbar / num_traits::Float::powi(t, (size * (size - 1)) as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn q_factorial_values() {
        let q = LaurentPoly::var(VarId::Q);
        assert_eq!(q_factorial(1, &q), LaurentPoly::one());
        assert_eq!(q_factorial(2, &q), lp("1 + q^2"));
        assert_eq!(q_factorial(4, &Complex64::new(1.0, 0.0)), Complex64::new(24.0, 0.0));
    }

    #[test]
    fn norm_small_sizes() {
        let q = Spectral::q();
        assert_eq!(asymptotic_norm(1, &q), lp("1/2*q - 1/2*q^-1"));
        let h11 = lp("1/16*q^2 - 1/8 + 1/16*q^-2") * lp("1 + q^2");
        assert_eq!(asymptotic_norm(2, &q), h11);
    }

    #[test]
    fn single_site_f_top_is_c_lowering() {
        let mus = symbolic_mus(1);
        let f = s_to_q_matrix(&f_top(1, &mus));
        let c = lp("1/2*q - 1/2*q^-1");
        assert_eq!(f, x_minus::<LaurentPoly>().scale(&c));
    }

    fn s_to_q_matrix(m: &Matrix<LaurentPoly>) -> Matrix<LaurentPoly> {
        Matrix::from_fn(m.rows(), m.cols(), |r, c| s_to_q(m.get(r, c)).unwrap())
    }

    #[test]
    fn f_top_matches_b() {
        for size in 1..=3 {
            assert!(check_f_top(&symbolic_mus(size)).unwrap().is_zero, "L={size}");
        }
    }

    #[test]
    fn p_relations_hold() {
        for size in 1..=3 {
            for (name, r) in check_p_relations(size) {
                assert!(r.is_zero, "{name} at L={size}");
            }
        }
    }

    #[test]
    fn p_product_expectation() {
        for size in 1..=4 {
            let expected = LaurentPoly::var_pow(VarId::Q, (size * (size - 1) / 2) as i32);
            assert_eq!(vacuum_p_product(size).unwrap(), expected);
        }
    }

    #[test]
    fn ordering_sum_two_sites() {
        assert!(check_ordering_sum(1).unwrap().is_zero);
        assert!(check_ordering_sum(2).unwrap().is_zero);
        assert!(matches!(check_ordering_sum(6), Err(Error::SizeLimitExceeded { .. })));
    }

    #[test]
    fn permutations_are_complete() {
        let mut seen = alloc::collections::BTreeSet::new();
        for_each_permutation(4, |p| {
            seen.insert(p.to_vec());
        });
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn top_expectation_is_norm() {
        for size in 1..=3 {
            let q = Spectral::q();
            assert_eq!(top_expectation(&symbolic_mus(size)).unwrap(), asymptotic_norm(size, &q));
        }
    }

    #[test]
    fn s_to_q_rejects_odd_powers() {
        assert!(matches!(s_to_q(&s_pow(3)), Err(Error::OddExponent { .. })));
    }
}
