//! Two-sided multiplication operators, inner derivations and the transport
//! of symmetries along the deformed Lax flow.
//!
//! A [`BiOp`] is the linear map `X ↦ Σ_i l_i X r_i`. The inner derivation
//! `ad_P` is the two-term operator `X ↦ P X - X P`. Symmetry paths are
//! series of such operators, `Path<BiOp<A>>`, and obey
//! `∂_t S_q = [ad_{P_q}, S_q]` when obtained by [`transport`].
//!
//! Tensor sums have no canonical form for a general backend, so equality of
//! operators is decided by applying both sides to a probe set
//! (see [`Probes`]).

use std::fmt;

use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::diffpoly::DiffPoly;
use crate::error::{AlgebraError, Result};
use crate::laxflow::{lax_residual, lax_solve, texp, LaxProblem, Path};
use crate::matrix::RatMatrix;
use crate::psdo::PsdoSymbol;
use crate::qseries::QSeries;
use crate::rational::Rational;
use crate::tpoly::TPoly;

#[derive(Clone, PartialEq)]
pub struct BiOp<A> {
    terms: Vec<(A, A)>,
}

impl<A: Algebra> BiOp<A> {
    pub fn from_pairs(pairs: Vec<(A, A)>) -> Self {
        BiOp {
            terms: A::reduce_tensor(pairs),
        }
    }

    /// `X ↦ l X r`.
    pub fn pair(l: A, r: A) -> Self {
        Self::from_pairs(vec![(l, r)])
    }

    /// `X ↦ a X`.
    pub fn left(a: A) -> Self {
        Self::pair(a, A::one())
    }

    /// `X ↦ X a`.
    pub fn right(a: A) -> Self {
        Self::pair(A::one(), a)
    }

    pub fn terms(&self) -> &[(A, A)] {
        &self.terms
    }

    pub fn apply(&self, x: &A) -> A {
        self.terms
            .iter()
            .fold(A::zero(), |acc, (l, r)| acc.add(&l.mul(x).mul(r)))
    }

    pub fn to_json(&self, render: impl Fn(&A) -> Value) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(l, r)| json!({"left": render(l), "right": render(r)}))
                .collect(),
        )
    }
}

/// Inner derivation `X ↦ P X - X P`.
pub fn ad<A: Algebra>(p: &A) -> BiOp<A> {
    BiOp::from_pairs(vec![(p.clone(), A::one()), (A::one().neg(), p.clone())])
}

impl<A: Algebra> Algebra for BiOp<A> {
    fn zero() -> Self {
        BiOp { terms: Vec::new() }
    }
    fn one() -> Self {
        BiOp {
            terms: vec![(A::one(), A::one())],
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        Self::from_pairs(self.terms.iter().chain(&other.terms).cloned().collect())
    }
    fn neg(&self) -> Self {
        BiOp {
            terms: self
                .terms
                .iter()
                .map(|(l, r)| (l.neg(), r.clone()))
                .collect(),
        }
    }
    /// `(S∘T)(X) = S(T(X))`: `(a, b)∘(c, d) = (ac, db)`.
    fn mul(&self, other: &Self) -> Self {
        let mut pairs = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, b) in &self.terms {
            for (c, d) in &other.terms {
                pairs.push((a.mul(c), d.mul(b)));
            }
        }
        Self::from_pairs(pairs)
    }
    fn scale(&self, c: &Rational) -> Self {
        Self::from_pairs(
            self.terms
                .iter()
                .map(|(l, r)| (l.scale(c), r.clone()))
                .collect(),
        )
    }
    fn max_abs(&self) -> Rational {
        self.terms
            .iter()
            .map(|(l, r)| l.max_abs() * r.max_abs())
            .max()
            .unwrap_or_else(|| Rational::from_integer(0.into()))
    }
}

impl<A: Algebra> fmt::Debug for BiOp<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.terms.iter().map(|(l, r)| (l, r)))
            .finish()
    }
}

/// Probe elements used to compare operators extensionally.
#[derive(Debug, Clone, PartialEq)]
pub struct Probes<A>(pub Vec<A>);

impl<A: Algebra> Probes<A> {
    pub fn extend(&mut self, more: impl IntoIterator<Item = A>) {
        self.0.extend(more);
    }

    /// `S(X) = T(X)` for every probe `X`.
    pub fn agree(&self, s: &BiOp<A>, t: &BiOp<A>) -> bool {
        self.0.iter().all(|x| s.apply(x) == t.apply(x))
    }

    /// Every `(q, t)` coefficient of the series annihilates every probe.
    pub fn annihilate(&self, series: &Path<BiOp<A>>) -> bool {
        series.coeffs().iter().all(|p| {
            p.coeffs()
                .iter()
                .all(|op| self.0.iter().all(|x| op.apply(x).is_zero()))
        })
    }
}

/// All `n²` matrix units.
pub fn matrix_probes(n: usize) -> Probes<RatMatrix> {
    Probes(
        (0..n)
            .flat_map(|a| (0..n).map(move |b| RatMatrix::unit(n, a, b)))
            .collect(),
    )
}

/// `{1, u, ξ, uξ, ξ², L0, P}`.
pub fn psdo_probes(l0: &PsdoSymbol, p: &PsdoSymbol) -> Probes<PsdoSymbol> {
    let u = PsdoSymbol::multiplication(DiffPoly::jet(0));
    let xi = PsdoSymbol::xi(1);
    Probes(vec![
        PsdoSymbol::one(),
        u.clone(),
        xi.clone(),
        u.mul(&xi),
        PsdoSymbol::xi(2),
        l0.clone(),
        p.clone(),
    ])
}

/// `Σ_{i,j} t^{i+j} S_i(X_j)`.
fn apply_tpoly<A: Algebra>(s: &TPoly<BiOp<A>>, x: &TPoly<A>) -> TPoly<A> {
    if s.is_zero() || x.is_zero() {
        return TPoly::zero();
    }
    let mut out = vec![A::zero(); s.coeffs().len() + x.coeffs().len() - 1];
    for (i, op) in s.coeffs().iter().enumerate() {
        for (j, v) in x.coeffs().iter().enumerate() {
            out[i + j] = out[i + j].add(&op.apply(v));
        }
    }
    TPoly::new(out)
}

/// Applies an operator series to an element series, modulo `q^{N+1}`.
pub fn apply_series<A: Algebra>(s: &Path<BiOp<A>>, x: &Path<A>) -> Result<Path<A>> {
    if s.trunc() != x.trunc() {
        return Err(AlgebraError::TruncationMismatch {
            left: s.trunc(),
            right: x.trunc(),
        });
    }
    Ok(s.convolve(x, apply_tpoly))
}

/// `ad_{P_q}` as an operator-valued path.
pub fn ad_path<A: Algebra>(pq: &Path<A>) -> Path<BiOp<A>> {
    pq.map(|p| p.map(ad))
}

/// Time-ordered exponential of `ad_{P_q}`; it equals `X ↦ W X W⁻¹` with `W = texp(P_q)`.
pub fn exp_ad<A: Algebra>(pq: &Path<A>) -> Result<Path<BiOp<A>>> {
    texp(&ad_path(pq))
}

/// `S_q(t) = E(t) S_0 E(t)⁻¹` with `E = exp_ad(P_q)`: the solution of
/// `∂_t S_q = [ad_{P_q}, S_q]` with `S_q(0) = S_0`.
pub fn transport<A: Algebra>(s0: &BiOp<A>, pq: &Path<A>) -> Result<Path<BiOp<A>>> {
    let n = pq.trunc();
    let e = exp_ad(pq)?;
    let e_inv = e.invert_unipotent()?;
    let s0 = QSeries::constant(TPoly::constant(s0.clone()), n);
    e.mul(&s0)?.mul(&e_inv)
}

/// `∂_t S_q - [ad_{P_q}, S_q]`.
pub fn symmetry3_residual<A: Algebra>(sq: &Path<BiOp<A>>, pq: &Path<A>) -> Result<Path<BiOp<A>>> {
    let adp = ad_path(pq);
    let bracket = adp.mul(sq)?.sub(&sq.mul(&adp)?)?;
    sq.dt().sub(&bracket)
}

/// `(∂_t S_q).L_q - [ad_{P_q}, S_q].L_q`: the linear map whose zeros are
/// the symmetries of the deformed equation.
pub fn symmetry2_residual<A: Algebra>(
    sq: &Path<BiOp<A>>,
    pq: &Path<A>,
    lq: &Path<A>,
) -> Result<Path<A>> {
    apply_series(&symmetry3_residual(sq, pq)?, lq)
}

/// Outcome of [`transported_solution_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransportCheck {
    /// `S_q.L_q` satisfies the deformed Lax equation.
    pub solves: bool,
    /// `S_q.L_q` equals the solution started from `S_0.L_0`.
    pub matches_conjugated: bool,
}

impl TransportCheck {
    pub fn passed(&self) -> bool {
        self.solves && self.matches_conjugated
    }
}

/// Checks that `t ↦ S_q(t).L_q(t)` is again a solution, namely the one with
/// initial value `S_0.L_0`.
pub fn transported_solution_check<A: Algebra>(
    s0: &BiOp<A>,
    prob: &LaxProblem<A>,
) -> Result<TransportCheck> {
    let sol = lax_solve(prob)?;
    let sq = transport(s0, &sol.pq)?;
    let mq = apply_series(&sq, &sol.lq)?;
    let solves = lax_residual(&mq, &sol.pq)?.is_zero();
    let moved = lax_solve(&prob.with_initial(s0.apply(prob.initial())))?;
    Ok(TransportCheck {
        solves,
        matches_conjugated: mq == moved.lq,
    })
}
