//! The time-scaled Lax equation `∂_t L_q = [P_q, L_q]` and its solution by
//! conjugation with a time-ordered exponential.
//!
//! Everything lives in `QSeries<TPoly<A>>`: power series in `q` whose
//! coefficients are polynomials in `t` over a backend algebra `A`.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::error::{AlgebraError, Result};
use crate::qseries::QSeries;
use crate::rational::Rational;
use crate::tpoly::TPoly;

/// A series-valued time path, `Σ_k q^k c_k(t)`.
pub type Path<A> = QSeries<TPoly<A>>;

/// Undeformed data: `∂_t L = [P(t), L]`, `L(0) = L0`, solved modulo `q^{N+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxProblem<A> {
    path: TPoly<A>,
    initial: A,
    order: usize,
}

impl<A: Algebra> LaxProblem<A> {
    /// Requires `N ≥ 1` and `deg_t P ≤ N - 1`, so that scaling loses no term.
    pub fn new(path: TPoly<A>, initial: A, order: usize) -> Result<Self> {
        if order < 1 {
            return Err(AlgebraError::InvalidProblem(
                "truncation order N must be at least 1".into(),
            ));
        }
        if let Some(d) = path.degree() {
            if d + 1 > order {
                return Err(AlgebraError::InvalidProblem(format!(
                    "t-degree {d} of P exceeds N - 1 = {}",
                    order - 1
                )));
            }
        }
        Ok(LaxProblem {
            path,
            initial,
            order,
        })
    }

    pub fn path(&self) -> &TPoly<A> {
        &self.path
    }

    pub fn initial(&self) -> &A {
        &self.initial
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn with_initial(&self, initial: A) -> Self {
        LaxProblem {
            initial,
            ..self.clone()
        }
    }
}

/// Output of [`deform`].
#[derive(Debug, Clone, PartialEq)]
pub struct Deformed<A> {
    pub pq: Path<A>,
    /// Set when some `t^k` term of `P` landed above `q^N` and was dropped.
    pub lossy: bool,
}

/// `P_q(t) = q P(q t)`: the `t^k` coefficient of `P` moves to `q^{k+1} t^k`.
pub fn deform<A: Algebra>(path: &TPoly<A>, n: usize) -> Deformed<A> {
    let mut coeffs = vec![TPoly::zero(); n + 1];
    let mut lossy = false;
    for (k, c) in path.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if k + 1 > n {
            lossy = true;
            continue;
        }
        coeffs[k + 1] = TPoly::monomial(c.clone(), k);
    }
    Deformed {
        pq: QSeries::new(n, coeffs),
        lossy,
    }
}

/// The iterated integrals `a_0 = 1`, `a_i(t) = ∫_0^t P_q(s) a_{i-1}(s) ds`
/// for `i = 0..=N`.
///
/// `a_i` is the integral of `P_q(s_1)⋯P_q(s_i)` over the ordered simplex
/// `t ≥ s_1 ≥ ⋯ ≥ s_i ≥ 0`, and `val_q(a_i) ≥ i`.
pub fn iterated_integrals<A: Algebra>(pq: &Path<A>) -> Result<Vec<Path<A>>> {
    if !pq.coeff(0).is_zero() {
        return Err(AlgebraError::Valuation(
            "time-ordered exponential needs val_q(P_q) ≥ 1".into(),
        ));
    }
    let n = pq.trunc();
    let mut terms = Vec::with_capacity(n + 1);
    terms.push(QSeries::one(n));
    for i in 1..=n {
        let next = pq.mul(&terms[i - 1])?.integrate();
        terms.push(next);
    }
    Ok(terms)
}

/// Time-ordered exponential `W = Σ_i a_i`, so that `∂_t W = P_q W`, `W(0) = 1`.
pub fn texp<A: Algebra>(pq: &Path<A>) -> Result<Path<A>> {
    let terms = iterated_integrals(pq)?;
    let mut acc = QSeries::zero(pq.trunc());
    for a in &terms {
        acc = acc.add(a)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaxSolution<A> {
    pub pq: Path<A>,
    pub w: Path<A>,
    pub w_inv: Path<A>,
    pub lq: Path<A>,
    pub lossy: bool,
}

/// `L_q(t) = W(t) L(0) W(t)⁻¹` with `W = texp(P_q)`.
pub fn lax_solve<A: Algebra>(prob: &LaxProblem<A>) -> Result<LaxSolution<A>> {
    let n = prob.order;
    let Deformed { pq, lossy } = deform(&prob.path, n);
    let w = texp(&pq)?;
    let w_inv = w.invert_unipotent()?;
    let l0 = QSeries::constant(TPoly::constant(prob.initial.clone()), n);
    let lq = w.mul(&l0)?.mul(&w_inv)?;
    Ok(LaxSolution {
        pq,
        w,
        w_inv,
        lq,
        lossy,
    })
}

/// `∂_t L_q - [P_q, L_q]`; identically zero for a solution.
pub fn lax_residual<A: Algebra>(lq: &Path<A>, pq: &Path<A>) -> Result<Path<A>> {
    let bracket = pq.mul(lq)?.sub(&lq.mul(pq)?)?;
    lq.dt().sub(&bracket)
}

/// Per-order, per-t-degree norms of a residual series.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub trunc: usize,
    pub lossy: bool,
    /// `(q-order, [(t-degree, max |coefficient|)])`, nonzero entries only.
    pub orders: Vec<(usize, Vec<(usize, Rational)>)>,
}

impl ResidualReport {
    pub fn new<A: Algebra>(residual: &Path<A>, lossy: bool) -> Self {
        let orders = residual
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let ts = p
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(j, c)| (j, c.max_abs()))
                    .filter(|(_, norm)| !norm.is_zero())
                    .collect();
                (k, ts)
            })
            .collect();
        ResidualReport {
            trunc: residual.trunc(),
            lossy,
            orders,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.orders.iter().all(|(_, ts)| ts.is_empty())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": "qlax.residual/1",
            "trunc": self.trunc,
            "lossy": self.lossy,
            "zero": self.is_zero(),
            "orders": self.orders.iter().map(|(k, ts)| json!({
                "q": k,
                "t_degrees": ts.iter().map(|(j, norm)| json!({"t": j, "norm": norm.to_string()})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::commutator;
    use crate::matrix::RatMatrix;
    use crate::psdo::{kdv_flow, kdv_pair, PsdoSymbol};
    use crate::rational::{factorial, frac, int};

    fn nil() -> RatMatrix {
        RatMatrix::from_ints(&[&[0, 1], &[0, 0]])
    }

    fn b() -> RatMatrix {
        RatMatrix::from_ints(&[&[1, 0], &[2, 1]])
    }

    #[test]
    fn deform_examples() {
        let a = nil();
        let d = deform(&TPoly::constant(a.clone()), 3);
        assert!(!d.lossy);
        assert_eq!(d.pq, QSeries::monomial(TPoly::constant(a.clone()), 1, 3));

        let p = TPoly::new(vec![a.clone(), b()]);
        let d = deform(&p, 2);
        assert!(!d.lossy);
        assert_eq!(d.pq.coeff(1), &TPoly::constant(a.clone()));
        assert_eq!(d.pq.coeff(2), &TPoly::monomial(b(), 1));

        let d = deform(&TPoly::monomial(b(), 1), 1);
        assert!(d.lossy);
        assert!(d.pq.is_zero());
    }

    #[test]
    fn texp_examples() {
        let w = texp(&QSeries::<TPoly<RatMatrix>>::zero(3)).unwrap();
        assert_eq!(w, QSeries::one(3));

        // constant P = a: W = Σ q^i t^i a^i / i!
        let a = b();
        let n = 4;
        let w = texp(&deform(&TPoly::constant(a.clone()), n).pq).unwrap();
        for i in 0..=n {
            let want =
                TPoly::monomial(crate::algebra::power(&a, i).scale(&factorial(i).recip()), i);
            assert_eq!(w.coeff(i), &want, "order {i}");
        }

        // nilpotent: exp(qtP) = 1 + qtP
        let w = texp(&deform(&TPoly::constant(nil()), 3).pq).unwrap();
        let mut want = QSeries::one(3);
        want = want
            .add(&QSeries::monomial(TPoly::monomial(nil(), 1), 1, 3))
            .unwrap();
        assert_eq!(w, want);
        assert!(texp(&QSeries::<TPoly<RatMatrix>>::one(2)).is_err());
    }

    #[test]
    fn solve_trivial_path() {
        let l0 = b();
        let prob = LaxProblem::new(TPoly::zero(), l0.clone(), 3).unwrap();
        let sol = lax_solve(&prob).unwrap();
        assert_eq!(sol.lq, QSeries::constant(TPoly::constant(l0), 3));
    }

    #[test]
    fn solve_nilpotent_conjugation() {
        let l0 = RatMatrix::from_ints(&[&[1, 0], &[0, -1]]);
        let prob = LaxProblem::new(TPoly::constant(nil()), l0.clone(), 2).unwrap();
        let sol = lax_solve(&prob).unwrap();
        // [[1, -2qt], [0, -1]]
        let mut want = QSeries::constant(TPoly::constant(l0), 2);
        want = want
            .add(&QSeries::monomial(
                TPoly::monomial(RatMatrix::from_ints(&[&[0, -2], &[0, 0]]), 1),
                1,
                2,
            ))
            .unwrap();
        assert_eq!(sol.lq, want);
        assert!(lax_residual(&sol.lq, &sol.pq).unwrap().is_zero());
    }

    #[test]
    fn solve_kdv_second_order() {
        let (l, p) = kdv_pair();
        let prob = LaxProblem::new(TPoly::constant(p.clone()), l.clone(), 2).unwrap();
        let sol = lax_solve(&prob).unwrap();
        assert_eq!(sol.lq.coeff(0), &TPoly::constant(l.clone()));
        assert_eq!(sol.lq.coeff(1), &TPoly::monomial(kdv_flow(), 1));
        let ad2 = commutator(&p, &commutator(&p, &l));
        assert_eq!(sol.lq.coeff(2), &TPoly::monomial(ad2.scale(&frac(1, 2)), 2));
        assert!(lax_residual(&sol.lq, &sol.pq).unwrap().is_zero());
    }

    #[test]
    fn residual_detects_non_solution() {
        let l0 = RatMatrix::from_ints(&[&[1, 0], &[0, -1]]);
        let n = 2;
        let pq = deform(&TPoly::constant(nil()), n).pq;
        let lq = QSeries::constant(TPoly::constant(l0.clone()), n);
        let r = lax_residual(&lq, &pq).unwrap();
        assert_eq!(r.coeff(1), &TPoly::constant(commutator(&nil(), &l0).neg()));
        assert_eq!(r.val(), Some(1));
        let report = ResidualReport::new(&r, false);
        assert!(!report.is_zero());
        assert_eq!(report.orders[1].1, vec![(0, int(2))]);
    }

    #[test]
    fn residual_mismatch() {
        let a = QSeries::<TPoly<PsdoSymbol>>::zero(2);
        let b = QSeries::<TPoly<PsdoSymbol>>::zero(3);
        assert!(matches!(
            lax_residual(&a, &b),
            Err(AlgebraError::TruncationMismatch { .. })
        ));
    }

    #[test]
    fn problem_validation() {
        assert!(LaxProblem::new(TPoly::constant(nil()), b(), 0).is_err());
        let p = TPoly::new(vec![nil(), b()]);
        assert!(LaxProblem::new(p.clone(), b(), 1).is_err());
        assert!(LaxProblem::new(p, b(), 2).is_ok());
    }
}
