//! Seeded generators for randomized checks and benchmarks.
//!
//! All streams are ChaCha8 seeded with `seed_from_u64`, so a given seed
//! produces the same values on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::diffpoly::{DiffPoly, JetMonomial};
use crate::laxflow::LaxProblem;
use crate::matrix::{mat_random_with, RatMatrix};
use crate::psdo::PsdoSymbol;
use crate::qseries::QSeries;
use crate::rational::{frac, Rational};
use crate::symops::BiOp;
use crate::tpoly::TPoly;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer entries in `[-bound, bound]`.
pub fn matrix(rng: &mut impl Rng, n: usize, bound: u32) -> RatMatrix {
    mat_random_with(rng, n, bound)
}

/// Small rational with numerator in `[-bound, bound]` and denominator in `1..=3`.
pub fn rational(rng: &mut impl Rng, bound: i64) -> Rational {
    frac(rng.random_range(-bound..=bound), rng.random_range(1..=3))
}

/// Up to `max_terms` monomials in `u_0 .. u_{max_jet}` of degree at most 2.
pub fn diffpoly(rng: &mut impl Rng, max_jet: usize, max_terms: usize, bound: i64) -> DiffPoly {
    let terms = rng.random_range(1..=max_terms);
    DiffPoly::from_terms((0..terms).map(|_| {
        let degree = rng.random_range(0..=2);
        let mut exps = vec![0u32; max_jet + 1];
        for _ in 0..degree {
            exps[rng.random_range(0..=max_jet)] += 1;
        }
        (JetMonomial::from_exponents(exps), rational(rng, bound))
    }))
}

/// A differential operator `Σ_{k ≤ max_order} a_k ∂^k`.
pub fn differential_operator(
    rng: &mut impl Rng,
    max_order: i64,
    max_jet: usize,
    max_terms: usize,
) -> PsdoSymbol {
    let mut coeffs = Vec::new();
    for k in 0..=max_order {
        if rng.random_bool(0.7) {
            coeffs.push((k, diffpoly(rng, max_jet, max_terms, 3)));
        }
    }
    PsdoSymbol::exact(coeffs)
}

/// `Σ_{k=lowest}^{n} q^k c_k` with coefficients drawn by `coeff`.
pub fn qseries<A: Algebra, R: Rng>(
    rng: &mut R,
    n: usize,
    lowest: usize,
    mut coeff: impl FnMut(&mut R) -> A,
) -> QSeries<A> {
    let coeffs = (0..=n)
        .map(|k| if k < lowest { A::zero() } else { coeff(rng) })
        .collect();
    QSeries::new(n, coeffs)
}

/// Random matrix problem: `P` of t-degree at most `max_tdeg`, size `n`.
pub fn matrix_problem(
    rng: &mut impl Rng,
    n: usize,
    order: usize,
    max_tdeg: usize,
    bound: u32,
) -> LaxProblem<RatMatrix> {
    let tdeg = rng.random_range(0..=max_tdeg.min(order - 1));
    let path = TPoly::new((0..=tdeg).map(|_| matrix(rng, n, bound)).collect());
    let l0 = matrix(rng, n, bound);
    LaxProblem::new(path, l0, order).expect("generated problem satisfies its invariants")
}

/// Sum of `terms` random pairs.
pub fn matrix_biop(rng: &mut impl Rng, n: usize, terms: usize, bound: u32) -> BiOp<RatMatrix> {
    BiOp::from_pairs(
        (0..terms)
            .map(|_| (matrix(rng, n, bound), matrix(rng, n, bound)))
            .collect(),
    )
}

/// A unit `g` with its inverse, built as a product of elementary matrices.
pub fn invertible_matrix(rng: &mut impl Rng, n: usize) -> (RatMatrix, RatMatrix) {
    loop {
        let g = matrix(rng, n, 2);
        if let Some(inv) = g.try_inverse() {
            return (g, inv);
        }
    }
}
