//! Homogeneous limit and the differential equations it satisfies for
//! `L = 1, 2`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::partition::z_algebraic;
use crate::scalar::{LaurentPoly, Monomial, VarId};
use crate::spectral::Spectral;

/// The single variable `x = e^{2(λ-μ)}` of the homogeneous limit.
pub const HOMOGENEOUS_X: VarId = VarId::x(1);

fn lp(s: &str) -> LaurentPoly {
    s.parse().expect("hard-coded polynomial parses")
}

/// Product of parsed factors.
fn prod(factors: &[&str]) -> LaurentPoly {
    factors.iter().fold(LaurentPoly::one(), |acc, f| &acc * &lp(f))
}

fn sum(terms: &[LaurentPoly]) -> LaurentPoly {
    terms.iter().fold(LaurentPoly::zero(), |acc, t| &acc + t)
}

/// `(Φ₀, Φ₁, Φ₂)` of the `L = 2` equation, as polynomials in `q` and `x1`.
pub fn phi_polynomials() -> [LaurentPoly; 3] {
    let phi0 = sum(&[
        prod(&["-4*q^2", "1 + q^2 + q^4"]),
        prod(&["6*q^4", "1 + q^2", "x1"]),
        lp("12*q^6*x1^2"),
        prod(&["-6*q^6", "1 + q^2", "x1^3"]),
    ]);
    let phi1 = sum(&[
        lp("-1 - 2*q^2 - 2*q^4 - q^6"),
        prod(&["4*q^2", "1 + q^2 + q^4", "x1"]),
        lp("-12*q^6*x1^3"),
        prod(&["q^4", "-1 + 4*q^2 + 4*q^4 - q^6", "x1^4"]),
    ]);
    let phi2 = sum(&[
        prod(&["1 - q^2 - q^4 + q^6", "x1"]),
        prod(&["-2*q^2", "1 - 2*q^2 + q^4", "1 + q^2*x1^2", "x1^2"]),
        prod(&["q^4", "1 - q^2 - q^4 + q^6", "x1^5"]),
    ]);
    [phi0, phi1, phi2]
}

/// `(k₀, k₁, k₂)` with `Z̄ = k₂x² + k₁x + k₀` at `L = 2`.
pub fn k_coefficients() -> [LaurentPoly; 3] {
    let k2 = prod(&["q^2 - 2 + q^-2", "1/16 + 1/16*q^2"]);
    let k1 = prod(&["q^2 - 2 + q^-2", "-1/4"]);
    let k0 = &k2 * &lp("q^-2");
    [k0, k1, k2]
}

/// `Z̄(x)` with every `λ_k` and every `μ_k` equal.
pub fn homogeneous_zbar(size: usize) -> Result<LaurentPoly> {
    let (u, w) = (VarId::u(1), VarId::w(1));
    let lambdas: Vec<_> = (0..size).map(|_| Spectral::var(u)).collect();
    let mus: Vec<_> = (0..size).map(|_| Spectral::var(w)).collect();
    let z = z_algebraic(&lambdas, &mus, &Spectral::q())?;
    let e = (size * (size - 1)) as i32;
    let zbar = &z * &LaurentPoly::monomial(Monomial::from_pairs([(u, e), (w, -e)]));
    zbar.map_monomials(|m| {
        let a = m.exponent(u);
        if a % 2 != 0 {
            return Err(Error::OddExponent { var: u, exp: a, by: 2 });
        }
        let b = m.exponent(w);
        if a + b != 0 {
            return Err(Error::InvalidArgument(alloc::format!(
                "homogeneous limit leaves w1^{} in {m:?}",
                a + b
            )));
        }
        Ok(Monomial::from_pairs(
            m.iter()
                .filter(|(v, _)| *v != u && *v != w)
                .chain([(HOMOGENEOUS_X, a / 2)]),
        ))
    })
}

/// Residual of the homogeneous equation for `zbar(x1)`, cleared of
/// denominators; zero exactly when `zbar` solves it.
pub fn ode_residual(size: usize, zbar: &LaurentPoly) -> Result<LaurentPoly> {
    let d1 = zbar.derivative(HOMOGENEOUS_X);
    let d2 = d1.derivative(HOMOGENEOUS_X);
    match size {
        1 => {
            // 2(q+q⁻¹)·[1 − 2qx/(q+q⁻¹)] and 2(q+q⁻¹)·(x/2)[1 − 4qx/(q+q⁻¹) + q²x²]
            let f1 = lp("2*q + 2*q^-1 - 4*q*x1");
            let f2 = lp("q*x1 + q^-1*x1 - 4*q*x1^2 + q^3*x1^3 + q*x1^3");
            Ok(&(&f1 * &d1) + &(&f2 * &d2))
        }
        2 => {
            let [p0, p1, p2] = phi_polynomials();
            Ok(&(&(&p0 * zbar) + &(&p1 * &d1)) + &(&p2 * &d2))
        }
        _ => Err(Error::InvalidArgument(alloc::format!(
            "homogeneous equations exist for L = 1, 2 only, not {size}"
        ))),
    }
}

/// [`ode_residual`] applied to the computed homogeneous `Z̄`.
pub fn homogeneous_ode_residual(size: usize) -> Result<LaurentPoly> {
    if !(1..=2).contains(&size) {
        return Err(Error::InvalidArgument(alloc::format!(
            "homogeneous equations exist for L = 1, 2 only, not {size}"
        )));
    }
    ode_residual(size, &homogeneous_zbar(size)?)
}
