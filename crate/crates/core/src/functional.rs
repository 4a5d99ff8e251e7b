//! The expansion of `C(λ₀)∏B(λ_i)|0⟩` in reduced Bethe vectors, its
//! coefficients `M_i` and `N_ji`, and the functional equation for the
//! partition function that follows from it.
//!
//! Spectral points are labelled `0..=n` with `0` for `λ₀`. Every coefficient
//! is a sum of products of weights over a product of pair factors
//! `b(λ_p - λ_q)`, `p < q`, each pair at most once. Exact identities are
//! tested after multiplying through by the product over all pairs; float
//! checks use the same cleared form, which leaves relative residuals
//! unchanged.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::monodromy::{apply_b_product, build_monodromy, Block};
use crate::operator::{Residual, StateVector};
use crate::scalar::{Complex64, LaurentPoly, Scalar, VarId};
use crate::spectral::Spectral;
use crate::vertex::{c_weight, weights_of};

/// The spectral data of one instance of the expansion: `λ₀`, `λ₁…λ_n`, the
/// inhomogeneities and `q`. The functional equation uses `n = L + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalInput<S> {
    pub lambda0: Spectral<S>,
    pub lambdas: Vec<Spectral<S>>,
    pub mus: Vec<Spectral<S>>,
    pub q: Spectral<S>,
}

impl<S: Scalar> FunctionalInput<S> {
    pub fn new(lambda0: Spectral<S>, lambdas: Vec<Spectral<S>>, mus: Vec<Spectral<S>>, q: Spectral<S>) -> Self {
        FunctionalInput {
            lambda0,
            lambdas,
            mus,
            q,
        }
    }

    /// Number of `B` operators.
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// Lattice size.
    pub fn size(&self) -> usize {
        self.mus.len()
    }

    /// Point `p`, with `0` for `λ₀`.
    pub fn point(&self, p: usize) -> &Spectral<S> {
        if p == 0 {
            &self.lambda0
        } else {
            &self.lambdas[p - 1]
        }
    }

    /// Rejects coinciding points: structurally zero `b` for exact scalars,
    /// `|b| ≤ 1e-12·(|a| + |c|)` for floats.
    pub fn check_poles(&self) -> Result<()> {
        for p in 0..=self.n() {
            for r in p + 1..=self.n() {
                let w = weights_of(&self.point(p).minus(self.point(r)), &self.q);
                if w.b.is_negligible(w.a.magnitude() + w.c.magnitude(), 1e-12) {
                    return Err(Error::PoleAtCoincidingPoints(p, r));
                }
            }
        }
        Ok(())
    }
}

impl FunctionalInput<LaurentPoly> {
    /// `λ_p ↦ u_p` for `p = 0..=n` and `μ_k ↦ w_k`.
    pub fn symbolic(n: usize, size: usize) -> Self {
        FunctionalInput {
            lambda0: Spectral::var(VarId::u(0)),
            lambdas: (1..=n as u16).map(|i| Spectral::var(VarId::u(i))).collect(),
            mus: (1..=size as u16).map(|k| Spectral::var(VarId::w(k))).collect(),
            q: Spectral::q(),
        }
    }

    /// Symbolic points with every `μ_k = 0`.
    pub fn symbolic_homogeneous_mu(n: usize, size: usize) -> Self {
        FunctionalInput {
            mus: (0..size).map(|_| Spectral::zero()).collect(),
            ..FunctionalInput::symbolic(n, size)
        }
    }
}

/// `Σ_t ∏ factors_t / ∏_{(p,r)} b(λ_p - λ_r)`.
///
/// Numerators stay factored so that multiplying by a large polynomial can be
/// done one small factor at a time.
#[derive(Clone, Debug, PartialEq)]
pub struct PairFraction<S> {
    pub products: Vec<Vec<S>>,
    pub pairs: BTreeSet<(usize, usize)>,
}

impl<S: Scalar> PairFraction<S> {
    pub fn zero() -> Self {
        PairFraction {
            products: Vec::new(),
            pairs: BTreeSet::new(),
        }
    }

    /// Expanded numerator.
    pub fn numerator(&self) -> S {
        self.products
            .iter()
            .fold(S::zero(), |acc, p| acc.add(&S::product(p.iter())))
    }

    /// Multiplies every product by `s`, placed first so that expansion
    /// starts from it.
    pub fn times(&self, s: &S) -> Self {
        PairFraction {
            products: self
                .products
                .iter()
                .map(|p| {
                    let mut out = Vec::with_capacity(p.len() + 1);
                    out.push(s.clone());
                    out.extend(p.iter().cloned());
                    out
                })
                .collect(),
            pairs: self.pairs.clone(),
        }
    }

    /// Numerator over the denominator `∏_{all}` of the pairs in `all`, a
    /// superset of `self.pairs`.
    pub fn cleared_over(&self, all: &BTreeSet<(usize, usize)>, input: &FunctionalInput<S>) -> S {
        debug_assert!(self.pairs.is_subset(all));
        let extra: Vec<S> = all.difference(&self.pairs).map(|&(p, r)| pair_b(input, p, r)).collect();
        self.products.iter().fold(S::zero(), |acc, p| {
            let mut term = p[0].clone();
            for f in extra.iter().chain(&p[1..]) {
                term = term.mul(f);
            }
            acc.add(&term)
        })
    }

    /// Evaluates the quotient; needs an invertible denominator.
    pub fn value(&self, input: &FunctionalInput<S>) -> Result<S> {
        let mut den = S::one();
        for &(p, r) in &self.pairs {
            den = den.mul(&pair_b(input, p, r));
        }
        let inv = den
            .try_inv()
            .ok_or_else(|| Error::NotInvertible("pair-factor denominator".into()))?;
        Ok(self.numerator().mul(&inv))
    }
}

/// `b(λ_p - λ_r)` for `p < r`.
fn pair_b<S: Scalar>(input: &FunctionalInput<S>, p: usize, r: usize) -> S {
    weights_of(&input.point(p).minus(input.point(r)), &input.q).b
}

/// Builds one summand: `sign` and factors, plus denominators `b(λ_x - λ_y)`
/// given as ordered pairs which are canonicalized to `p < r`.
struct Summand<S> {
    negate: bool,
    factors: Vec<S>,
    pairs: BTreeSet<(usize, usize)>,
}

impl<S: Scalar> Summand<S> {
    fn new(c: S) -> Self {
        Summand {
            negate: false,
            factors: vec![c],
            pairs: BTreeSet::new(),
        }
    }

    fn a(&mut self, input: &FunctionalInput<S>, x: usize, y: usize) {
        self.factors
            .push(weights_of(&input.point(x).minus(input.point(y)), &input.q).a);
    }

    fn a_mu(&mut self, input: &FunctionalInput<S>, x: usize, l: usize) {
        self.factors
            .push(weights_of(&input.point(x).minus(&input.mus[l]), &input.q).a);
    }

    fn b_mu(&mut self, input: &FunctionalInput<S>, x: usize, l: usize) {
        self.factors
            .push(weights_of(&input.point(x).minus(&input.mus[l]), &input.q).b);
    }

    // b is odd, so b(λ_x - λ_y) = -b(λ_y - λ_x).
    fn over_b(&mut self, x: usize, y: usize) {
        let pair = if x < y { (x, y) } else { (y, x) };
        if x > y {
            self.negate = !self.negate;
        }
        let fresh = self.pairs.insert(pair);
        debug_assert!(fresh, "pair factor repeated within a term");
    }

    fn finish(mut self) -> (Vec<S>, BTreeSet<(usize, usize)>) {
        if self.negate {
            self.factors[0] = self.factors[0].neg();
        }
        (self.factors, self.pairs)
    }
}

fn combine<S: Scalar>(terms: [Summand<S>; 2]) -> PairFraction<S> {
    let [t1, t2] = terms;
    let (f1, p1) = t1.finish();
    let (f2, p2) = t2.finish();
    debug_assert_eq!(p1, p2);
    PairFraction {
        products: vec![f1, f2],
        pairs: p1,
    }
}

fn check_label(input_n: usize, i: usize) -> Result<()> {
    if i == 0 || i > input_n {
        return Err(Error::InvalidArgument(alloc::format!(
            "operator label {i} outside 1..={input_n}"
        )));
    }
    Ok(())
}

/// `M_i`, `1 ≤ i ≤ n`.
pub fn coeff_m<S: Scalar>(i: usize, input: &FunctionalInput<S>) -> Result<PairFraction<S>> {
    check_label(input.n(), i)?;
    input.check_poles()?;
    let c = c_weight(&input.q);
    let others = (1..=input.n()).filter(|&k| k != i);
    let mut t1 = Summand::new(c.clone());
    let mut t2 = Summand::new(c);
    t1.over_b(i, 0);
    t2.over_b(0, i);
    for l in 0..input.size() {
        t1.a_mu(input, 0, l);
        t1.b_mu(input, i, l);
        t2.a_mu(input, i, l);
        t2.b_mu(input, 0, l);
    }
    for k in others {
        t1.a(input, i, k);
        t1.over_b(i, k);
        t1.a(input, k, 0);
        t1.over_b(k, 0);
        t2.a(input, 0, k);
        t2.over_b(0, k);
        t2.a(input, k, i);
        t2.over_b(k, i);
    }
    Ok(combine([t1, t2]))
}

/// `N_ji`, `1 ≤ i < j ≤ n`.
pub fn coeff_n<S: Scalar>(j: usize, i: usize, input: &FunctionalInput<S>) -> Result<PairFraction<S>> {
    check_label(input.n(), i)?;
    check_label(input.n(), j)?;
    if i >= j {
        return Err(Error::InvalidArgument(alloc::format!(
            "N_ji needs i < j, got j={j}, i={i}"
        )));
    }
    input.check_poles()?;
    let c = c_weight(&input.q);
    let c2 = c.mul(&c);
    let mut t1 = Summand::new(c2.clone());
    let mut t2 = Summand::new(c2);
    t1.over_b(0, j);
    t1.over_b(i, 0);
    t1.a(input, j, i);
    t1.over_b(j, i);
    t2.over_b(0, i);
    t2.over_b(j, 0);
    t2.a(input, i, j);
    t2.over_b(i, j);
    for l in 0..input.size() {
        t1.a_mu(input, i, l);
        t1.b_mu(input, j, l);
        t2.a_mu(input, j, l);
        t2.b_mu(input, i, l);
    }
    for m in (1..=input.n()).filter(|&m| m != i && m != j) {
        t1.a(input, j, m);
        t1.over_b(j, m);
        t1.a(input, m, i);
        t1.over_b(m, i);
        t2.a(input, i, m);
        t2.over_b(i, m);
        t2.a(input, m, j);
        t2.over_b(m, j);
    }
    Ok(combine([t1, t2]))
}

/// All `M_i` and `N_ji` of one input.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionCoeffs<S> {
    pub m: Vec<PairFraction<S>>,
    /// `n[j - 1][i - 1]` holds `N_ji` for `i < j`.
    pub n: Vec<Vec<PairFraction<S>>>,
}

impl<S: Scalar> ExpansionCoeffs<S> {
    pub fn compute(input: &FunctionalInput<S>) -> Result<Self> {
        let n = input.n();
        let m = (1..=n).map(|i| coeff_m(i, input)).collect::<Result<Vec<_>>>()?;
        let nn = (1..=n)
            .map(|j| (1..j).map(|i| coeff_n(j, i, input)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(ExpansionCoeffs { m, n: nn })
    }

    pub fn n_ji(&self, j: usize, i: usize) -> &PairFraction<S> {
        &self.n[j - 1][i - 1]
    }
}

/// Every pair among the points `0..=n`.
pub fn all_pairs(n: usize) -> BTreeSet<(usize, usize)> {
    (0..=n).flat_map(|p| (p + 1..=n).map(move |r| (p, r))).collect()
}

/// One summand of the functional equation: its coefficient and the points
/// at which `Z` is evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct FzTerm<S> {
    pub coeff: PairFraction<S>,
    pub subset: Vec<usize>,
}

/// The `(L+1) + L(L+1)/2` summands, `M_i` with `Z(λ̂_i)` first, then `N_ji`
/// with `Z(λ₀, λ̂_ij)` ordered by `(i, j)`.
pub fn fz_terms<S: Scalar>(input: &FunctionalInput<S>) -> Result<Vec<FzTerm<S>>> {
    let n = input.n();
    if n != input.size() + 1 {
        return Err(Error::InvalidArgument(alloc::format!(
            "the functional equation needs L + 1 = {} operators, got {n}",
            input.size() + 1
        )));
    }
    let mut terms = Vec::new();
    for i in 1..=n {
        terms.push(FzTerm {
            coeff: coeff_m(i, input)?,
            subset: (1..=n).filter(|&k| k != i).collect(),
        });
    }
    for i in 1..=n {
        for j in i + 1..=n {
            terms.push(FzTerm {
                coeff: coeff_n(j, i, input)?,
                subset: core::iter::once(0)
                    .chain((1..=n).filter(|&k| k != i && k != j))
                    .collect(),
            });
        }
    }
    Ok(terms)
}

/// Outcome of evaluating the functional equation.
///
/// `value` is the left-hand side multiplied by the product of `b` over all
/// pairs of points. `scale` is the sum of the magnitudes of its summands.
#[derive(Clone, Debug, PartialEq)]
pub struct FzEvaluation<S> {
    pub value: S,
    pub scale: f64,
}

impl<S: Scalar> FzEvaluation<S> {
    pub fn residual(&self) -> Residual {
        Residual::of_value(&self.value, self.scale)
    }
}

/// Evaluates the functional equation with `Z` supplied by `z_provider`,
/// called with the point labels of the subset and the points themselves.
pub fn functional_residual<S, F>(input: &FunctionalInput<S>, z_provider: F) -> Result<FzEvaluation<S>>
where
    S: Scalar,
    F: Fn(&[usize], &[Spectral<S>]) -> Result<S>,
{
    let terms = fz_terms(input)?;
    let all = all_pairs(input.n());
    let mut value = S::zero();
    let mut scale = 0.0;
    for t in &terms {
        let points: Vec<Spectral<S>> = t.subset.iter().map(|&p| input.point(p).clone()).collect();
        let z = z_provider(&t.subset, &points).map_err(|e| match e {
            Error::ProviderFailure(_) => e,
            other => Error::ProviderFailure(alloc::format!("{other}")),
        })?;
        let term = t.coeff.times(&z).cleared_over(&all, input);
        scale += term.magnitude();
        value = value.add(&term);
    }
    Ok(FzEvaluation { value, scale })
}

/// `C(λ₀)∏B(λ_i)|0⟩ - Σ M_i ∏_{j≠i}B(λ_j)|0⟩ - Σ N_ji B(λ₀)∏_{l≠i,j}B(λ_l)|0⟩`,
/// all multiplied by the product of `b` over all pairs of points.
pub fn check_cbb_expansion<S: Scalar>(input: &FunctionalInput<S>) -> Result<Residual> {
    let n = input.n();
    if n == 0 || n > input.size() + 1 {
        return Err(Error::InvalidArgument(alloc::format!(
            "expansion needs 1 ≤ n ≤ L + 1, got n = {n}, L = {}",
            input.size()
        )));
    }
    input.check_poles()?;
    let coeffs = ExpansionCoeffs::compute(input)?;
    let all = all_pairs(n);
    let size = input.size();
    let vac = StateVector::vacuum(size);
    let bethe = |labels: &[usize]| -> Result<StateVector<S>> {
        let pts: Vec<Spectral<S>> = labels.iter().map(|&p| input.point(p).clone()).collect();
        apply_b_product(&pts, &input.mus, &input.q, &vac)
    };
    let full: Vec<usize> = (1..=n).collect();
    let den = all.iter().fold(S::one(), |acc, &(p, r)| acc.mul(&pair_b(input, p, r)));
    let lhs = build_monodromy(&input.lambda0, &input.mus, &input.q)
        .apply(Block::C, &bethe(&full)?)?
        .scale(&den);
    let mut rhs = StateVector::zeros(1 << size);
    for i in 1..=n {
        let labels: Vec<usize> = full.iter().copied().filter(|&k| k != i).collect();
        let k = coeffs.m[i - 1].cleared_over(&all, input);
        rhs = rhs.add(&bethe(&labels)?.scale(&k));
    }
    for j in 1..=n {
        for i in 1..j {
            let labels: Vec<usize> = core::iter::once(0)
                .chain(full.iter().copied().filter(|&k| k != i && k != j))
                .collect();
            let k = coeffs.n_ji(j, i).cleared_over(&all, input);
            rhs = rhs.add(&bethe(&labels)?.scale(&k));
        }
    }
    Ok(Residual::of_vectors(&lhs, &rhs))
}

/// `∏_{j=1}^{L+1} B(λ_j)|0⟩`, which must vanish. The scale is the bound
/// `∏_j ∏_l (|a| + |b| + |c|)` on the entries of the product.
pub fn check_b_nilpotency<S: Scalar>(
    lambdas: &[Spectral<S>],
    mus: &[Spectral<S>],
    q: &Spectral<S>,
) -> Result<Residual> {
    if lambdas.len() != mus.len() + 1 {
        return Err(Error::DimensionMismatch {
            expected: mus.len() + 1,
            found: lambdas.len(),
        });
    }
    let out = apply_b_product(lambdas, mus, q, &StateVector::vacuum(mus.len()))?;
    let mut scale = 1.0;
    for l in lambdas {
        for m in mus {
            let w = weights_of(&l.minus(m), q);
            scale *= w.a.magnitude() + w.b.magnitude() + w.c.magnitude();
        }
    }
    Ok(Residual::from_parts(out.components(), scale))
}

/// Minimum separation of sampled spectral points from the zeros of `b`.
pub const DEFAULT_MIN_DISTANCE: f64 = 1e-2;

/// `λ = ln r + iφ` with `r` log-uniform in `[0.5, 2]` and `φ` uniform.
pub fn sample_log<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let (lo, hi) = (Float::ln(0.5f64), Float::ln(2f64));
    let re = lo + (hi - lo) * rng.gen::<f64>();
    let im = core::f64::consts::TAU * rng.gen::<f64>();
    Complex64::new(re, im)
}

pub fn sample_spectral<R: Rng + ?Sized>(rng: &mut R) -> Spectral<Complex64> {
    Spectral::from_log(sample_log(rng))
}

/// Distance of `λ` from the zeros `iπk` of `b(λ) = sinh λ`.
fn distance_to_b_zero(diff: Complex64) -> f64 {
    let pi = core::f64::consts::PI;
    let k = Float::round(diff.im / pi);
    Complex64::new(diff.re, diff.im - k * pi).norm()
}

/// `count` points whose pairwise differences stay at least `min_distance`
/// from the zeros of `b`, by rejection.
pub fn sample_separated<R: Rng + ?Sized>(rng: &mut R, count: usize, min_distance: f64) -> Vec<Spectral<Complex64>> {
    loop {
        let logs: Vec<Complex64> = (0..count).map(|_| sample_log(rng)).collect();
        let ok = (0..count).all(|p| (p + 1..count).all(|r| distance_to_b_zero(logs[p] - logs[r]) >= min_distance));
        if ok {
            return logs.into_iter().map(Spectral::from_log).collect();
        }
    }
}

/// `q` sampled like the spectral points, kept away from `c = 0`.
pub fn sample_q<R: Rng + ?Sized>(rng: &mut R, min_distance: f64) -> Spectral<Complex64> {
    loop {
        let g = sample_log(rng);
        if distance_to_b_zero(g) >= min_distance {
            return Spectral::from_log(g);
        }
    }
}

/// A random admissible input with `n` operators on a lattice of `size`.
pub fn sample_input<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    size: usize,
    min_distance: f64,
) -> FunctionalInput<Complex64> {
    let mut pts = sample_separated(rng, n + 1, min_distance);
    let lambda0 = pts.remove(0);
    let mus = (0..size).map(|_| sample_spectral(rng)).collect();
    let q = sample_q(rng, min_distance);
    FunctionalInput::new(lambda0, pts, mus, q)
}
