//! Published coefficient ratios `h_m / h_top` for `L = 2, 3`, and a
//! per-entry comparison against a solved table.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{Ansatz, CoefficientTable, Normalization};
use crate::asymptotics::asymptotic_norm;
use crate::error::{Error, Result};
use crate::scalar::{LaurentPoly, RationalFunction};
use crate::spectral::Spectral;

fn ratio(num: &str, den: &str) -> RationalFunction {
    let n: LaurentPoly = num.parse().expect("hard-coded numerator parses");
    let d: LaurentPoly = den.parse().expect("hard-coded denominator parses");
    RationalFunction::from_laurent_ratio(&n, &d).expect("nonzero denominator")
}

fn permutations(base: [i32; 3]) -> Vec<Vec<i32>> {
    let [a, b, c] = base;
    let mut out = vec![
        vec![a, b, c],
        vec![a, c, b],
        vec![b, a, c],
        vec![b, c, a],
        vec![c, a, b],
        vec![c, b, a],
    ];
    out.sort();
    out.dedup();
    out
}

/// `(1 − q + q²)(1 + q + q²) = 1 + q² + q⁴`.
const CYC: &str = "1 + q^2 + q^4";

/// Nonzero ratios `h_m / h_top`, top included as one.
pub fn reference_ratios(size: usize) -> Result<BTreeMap<Vec<i32>, RationalFunction>> {
    let mut out = BTreeMap::new();
    match size {
        2 => {
            out.insert(vec![1, 1], RationalFunction::one());
            out.insert(vec![-1, -1], ratio("1", "q^2"));
            out.insert(vec![-1, 1], ratio("-2", "1 + q^2"));
            out.insert(vec![1, -1], ratio("-2", "1 + q^2"));
        }
        3 => {
            let cyc: LaurentPoly = CYC.parse().expect("parses");
            let over = |num: &str, extra: &str| {
                let e: LaurentPoly = extra.parse().expect("parses");
                let n: LaurentPoly = num.parse().expect("parses");
                RationalFunction::from_laurent_ratio(&n, &(&e * &cyc)).expect("nonzero denominator")
            };
            let classes: [([i32; 3], RationalFunction); 10] = [
                ([-2, -2, -2], ratio("1", "q^6")),
                ([-2, -2, 0], over("-3 - 3*q^2", "q^4")),
                ([-2, -2, 2], over("3", "q^2")),
                ([-2, 0, 0], over("12", "q^2")),
                ([-2, 0, 2], over("-1 - 10*q^2 - q^4", "q^2 + q^4")),
                ([-2, 2, 2], over("3", "1")),
                ([0, 0, 2], over("12", "1")),
                ([0, 2, 2], over("-3 - 3*q^2", "1")),
                ([0, 0, 0], over("1 - 8*q^2 - 34*q^4 - 8*q^6 + q^8", "q^4 + q^6")),
                ([2, 2, 2], RationalFunction::one()),
            ];
            for (base, value) in classes {
                for idx in permutations(base) {
                    out.insert(idx, value.clone());
                }
            }
        }
        _ => {
            return Err(Error::InvalidArgument(alloc::format!(
                "reference coefficients exist for L = 2, 3 only, not {size}"
            )))
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntryCheck {
    pub index: Vec<i32>,
    /// Reference ratio, zero for indices outside the published support.
    pub expected: RationalFunction,
    /// `h_m / h_top` from the table.
    pub found: RationalFunction,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HTableReport {
    pub size: usize,
    pub entries: Vec<EntryCheck>,
    /// Top coefficient against the asymptotic norm; `None` for top-one tables.
    pub top_matches_norm: Option<bool>,
}

impl HTableReport {
    pub fn passed(&self) -> bool {
        self.top_matches_norm != Some(false) && self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EntryCheck> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// Compares every entry of `table` with the reference ratios by
/// cross-multiplication.
pub fn verify_h_table(table: &CoefficientTable<RationalFunction>) -> Result<HTableReport> {
    let reference = reference_ratios(table.size)?;
    let ansatz = Ansatz::new(table.size);
    let top = table
        .entries
        .get(&ansatz.top())
        .ok_or_else(|| Error::InvalidArgument("table lacks the top coefficient".into()))?;
    let mut entries = Vec::new();
    for index in ansatz.indices() {
        let value = table
            .entries
            .get(&index)
            .cloned()
            .unwrap_or_else(RationalFunction::zero);
        let found = value.div(top)?;
        let expected = reference.get(&index).cloned().unwrap_or_else(RationalFunction::zero);
        let pass = found.cross_eq(&expected);
        entries.push(EntryCheck {
            index,
            expected,
            found,
            pass,
        });
    }
    let top_matches_norm = match table.normalization {
        Normalization::TopOne => None,
        Normalization::Asymptotic => {
            let norm = RationalFunction::from_laurent(&asymptotic_norm(table.size, &Spectral::q()))?;
            Some(top.cross_eq(&norm))
        }
    };
    Ok(HTableReport {
        size: table.size,
        entries,
        top_matches_norm,
    })
}
