//! Arithmetic modulo the Mersenne prime `2^61 - 1`, used only to pick a set
//! of linearly independent constraint rows before exact elimination.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::scalar::{LaurentPoly, Rational, VarId};

pub const P: u64 = (1 << 61) - 1;

pub fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

pub fn pow(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    acc
}

pub fn inv(a: u64) -> u64 {
    debug_assert!(a != 0);
    pow(a, P - 2)
}

fn reduce(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(P)).to_u64().expect("residue fits in u64")
}

/// `None` if the denominator vanishes mod p.
pub fn rational(r: &Rational) -> Option<u64> {
    let d = reduce(r.denom());
    (d != 0).then(|| mul(reduce(r.numer()), inv(d)))
}

/// Evaluates a polynomial in `q` alone at `q = q0`.
pub fn eval_q(p: &LaurentPoly, q0: u64, q0_inv: u64) -> Option<u64> {
    let mut acc = 0;
    for (m, c) in p.terms() {
        let e = m.exponent(VarId::Q);
        let base = if e >= 0 {
            pow(q0, e as u64)
        } else {
            pow(q0_inv, (-e) as u64)
        };
        acc = add(acc, mul(rational(c)?, base));
    }
    Some(acc)
}

/// Incremental row echelon basis; reports whether a row was independent.
pub struct EchelonBasis {
    cols: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl EchelonBasis {
    pub fn new(cols: usize) -> Self {
        EchelonBasis { cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, sparse: &[(usize, u64)]) -> bool {
        let mut v = alloc::vec![0u64; self.cols];
        for &(c, x) in sparse {
            v[c] = add(v[c], x);
        }
        for (pivot, row) in &self.rows {
            let f = v[*pivot];
            if f != 0 {
                for (a, b) in v.iter_mut().zip(row) {
                    if *b != 0 {
                        *a = sub(*a, mul(f, *b));
                    }
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(p) => {
                let s = inv(v[p]);
                for x in v.iter_mut() {
                    *x = mul(*x, s);
                }
                // Keep the basis reduced so later rows need one pass.
                for (_, row) in self.rows.iter_mut() {
                    let f = row[p];
                    if f != 0 {
                        for (a, b) in row.iter_mut().zip(&v) {
                            if *b != 0 {
                                *a = sub(*a, mul(f, *b));
                            }
                        }
                    }
                }
                self.rows.push((p, v));
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_inverse() {
        for a in [1u64, 2, 12345, P - 1] {
            assert_eq!(mul(a, inv(a)), 1);
        }
        assert_eq!(
            rational(&crate::scalar::rational(-1, 2)).map(|x| mul(x, 2)),
            Some(P - 1)
        );
    }

    #[test]
    fn echelon_detects_dependence() {
        let mut b = EchelonBasis::new(3);
        assert!(b.insert(&[(0, 1), (1, 2)]));
        assert!(b.insert(&[(1, 1), (2, 1)]));
        assert!(!b.insert(&[(0, 1), (1, 3), (2, 1)]));
        assert_eq!(b.rank(), 2);
    }
}
