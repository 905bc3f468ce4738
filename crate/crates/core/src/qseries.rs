//! Truncated power series in the deformation parameter `q`.
//!
//! A [`QSeries`] stores `c_0 .. c_N` explicitly and all arithmetic is modulo
//! `q^{N+1}`. Series with different `N` never mix: every binary operation
//! checks the truncation order and fails with
//! [`AlgebraError::TruncationMismatch`].
//!
//! The positive-valuation series form a nilpotent ideal, so `exp` and `log`
//! are finite sums and are mutually inverse bijections between the ideal and
//! the unipotent group `1 + q A[[q]]`.

use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::error::{AlgebraError, Result};
use crate::rational::Rational;
use crate::tpoly::TPoly;

#[derive(Debug, Clone, PartialEq)]
pub struct QSeries<A> {
    coeffs: Vec<A>,
}

impl<A: Algebra> QSeries<A> {
    /// `Σ c_k q^k` modulo `q^{n+1}`; missing coefficients are zero and
    /// coefficients past `q^n` are dropped.
    pub fn new(n: usize, mut coeffs: Vec<A>) -> Self {
        coeffs.resize(n + 1, A::zero());
        QSeries { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, Vec::new())
    }

    pub fn one(n: usize) -> Self {
        Self::constant(A::one(), n)
    }

    pub fn constant(a: A, n: usize) -> Self {
        Self::new(n, vec![a])
    }

    /// `a q^k` (zero if `k > n`).
    pub fn monomial(a: A, k: usize, n: usize) -> Self {
        let mut s = Self::zero(n);
        if k <= n {
            s.coeffs[k] = a;
        }
        s
    }

    /// Truncation order `N`.
    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[A] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &A {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(A::is_zero)
    }

    /// Smallest `k` with `c_k ≠ 0`; `None` stands for +∞.
    pub fn val(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn map<B: Algebra>(&self, f: impl Fn(&A) -> B) -> QSeries<B> {
        QSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Drops every term above `q^n`; `n` must not exceed the current order.
    pub fn truncate(&self, n: usize) -> Self {
        assert!(
            n <= self.trunc(),
            "cannot raise truncation order by truncating"
        );
        QSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.trunc() != other.trunc() {
            return Err(AlgebraError::TruncationMismatch {
                left: self.trunc(),
                right: other.trunc(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(QSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(QSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        self.map(A::neg)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|a| a.scale(c))
    }

    /// Cauchy product modulo `q^{N+1}`; `self` stays on the left.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.convolve(other, |a, b| a.mul(b)))
    }

    /// Cauchy product with an arbitrary bilinear coefficient pairing.
    pub fn convolve<B: Algebra, C: Algebra>(
        &self,
        other: &QSeries<B>,
        pair: impl Fn(&A, &B) -> C,
    ) -> QSeries<C> {
        let n = self.trunc().min(other.trunc());
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&pair(a, b));
            }
        }
        QSeries { coeffs: out }
    }

    fn require_positive_valuation(&self, what: &str) -> Result<()> {
        if !self.coeffs[0].is_zero() {
            return Err(AlgebraError::Valuation(format!(
                "{what} needs a series with zero constant term"
            )));
        }
        Ok(())
    }

    fn require_unipotent(&self, what: &str) -> Result<()> {
        if self.coeffs[0] != A::one() {
            return Err(AlgebraError::Valuation(format!(
                "{what} needs a series with constant term 1"
            )));
        }
        Ok(())
    }

    /// `Σ_{i=0}^{N} s^i / i!`, defined for `val(s) ≥ 1`.
    pub fn exp(&self) -> Result<Self> {
        self.require_positive_valuation("exp")?;
        let n = self.trunc();
        let mut term = Self::one(n);
        let mut acc = Self::one(n);
        for i in 1..=n {
            term = term
                .mul(self)?
                .scale(&Rational::new(1.into(), (i as i64).into()));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// `Σ_{i=1}^{N} (-1)^{i+1} (s-1)^i / i`, defined for `c_0 = 1`.
    pub fn log(&self) -> Result<Self> {
        self.require_unipotent("log")?;
        let n = self.trunc();
        let x = self.sub(&Self::one(n))?;
        let mut power = Self::one(n);
        let mut acc = Self::zero(n);
        for i in 1..=n {
            power = power.mul(&x)?;
            if power.is_zero() {
                break;
            }
            let sign = if i % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale(&Rational::new(sign.into(), (i as i64).into())))?;
        }
        Ok(acc)
    }

    /// Inverse of a unipotent series.
    ///
    /// Solved order by order from `s·b = 1`: `b_0 = 1` and
    /// `b_k = -Σ_{j=1}^{k} c_j b_{k-j}`. This is the truncated geometric
    /// series `Σ (1-s)^i`; in a unipotent group right inverses are two-sided.
    pub fn invert_unipotent(&self) -> Result<Self> {
        self.require_unipotent("unipotent inversion")?;
        let n = self.trunc();
        let mut b: Vec<A> = Vec::with_capacity(n + 1);
        b.push(A::one());
        for k in 1..=n {
            let mut acc = A::zero();
            for j in 1..=k {
                let c = &self.coeffs[j];
                if c.is_zero() || b[k - j].is_zero() {
                    continue;
                }
                acc = acc.add(&c.mul(&b[k - j]));
            }
            b.push(acc.neg());
        }
        Ok(QSeries { coeffs: b })
    }

    /// Inverse of `g + (positive-valuation part)` given `inv0 = g⁻¹`.
    pub fn invert_unit(&self, inv0: &A) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if inv0.mul(c0) != A::one() || c0.mul(inv0) != A::one() {
            return Err(AlgebraError::NotAUnit);
        }
        let n = self.trunc();
        let unipotent = Self::constant(inv0.clone(), n).mul(self)?;
        // (g⁻¹ s)⁻¹ = s⁻¹ g, hence s⁻¹ = (g⁻¹ s)⁻¹ g⁻¹
        unipotent
            .invert_unipotent()?
            .mul(&Self::constant(inv0.clone(), n))
    }

    /// `{"trunc": N, "coeffs": [...]}` with a caller-supplied coefficient renderer.
    pub fn to_json(&self, render: impl Fn(&A) -> Value) -> Value {
        json!({
            "schema": "qlax.qseries/1",
            "trunc": self.trunc(),
            "coeffs": self.coeffs.iter().map(render).collect::<Vec<_>>(),
        })
    }
}

impl<A: Algebra> QSeries<TPoly<A>> {
    /// Time derivative applied to every q-coefficient.
    pub fn dt(&self) -> Self {
        self.map(TPoly::dt)
    }

    /// `∫_0^t` applied to every q-coefficient.
    pub fn integrate(&self) -> Self {
        self.map(TPoly::integrate)
    }

    /// A t-independent series.
    pub fn lift(s: &QSeries<A>) -> Self {
        s.map(|a| TPoly::constant(a.clone()))
    }

    /// Value at fixed `t`.
    pub fn at_time(&self, t0: &Rational) -> QSeries<A> {
        self.map(|p| p.eval(t0))
    }

    /// `Σ_k q0^k c_k(t0)`.
    pub fn eval_at(&self, q0: &Rational, t0: &Rational) -> A {
        let mut acc = A::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(q0).add(&c.eval(t0));
        }
        acc
    }

    /// Largest t-degree across all q-coefficients.
    pub fn t_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(TPoly::degree).max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Scalar;
    use crate::matrix::{mat_invert, mat_random, RatMatrix};
    use crate::rational::{frac, int};

    fn a() -> RatMatrix {
        RatMatrix::from_ints(&[&[1, 2], &[0, 1]])
    }
    fn b() -> RatMatrix {
        RatMatrix::from_ints(&[&[0, 0], &[3, 1]])
    }

    #[test]
    fn val_examples() {
        assert_eq!(QSeries::<RatMatrix>::zero(3).val(), None);
        assert_eq!(QSeries::monomial(a(), 2, 3).val(), Some(2));
    }

    #[test]
    fn mul_truncation_and_grading() {
        let qa = QSeries::monomial(a(), 1, 1);
        let qb = QSeries::monomial(b(), 1, 1);
        assert!(qa.mul(&qb).unwrap().is_zero());
        let qa = QSeries::monomial(a(), 1, 2);
        let qb = QSeries::monomial(b(), 1, 2);
        assert_eq!(qa.mul(&qb).unwrap(), QSeries::monomial(a().mul(&b()), 2, 2));
        let s = QSeries::new(2, vec![a(), b()]);
        assert_eq!(s.mul(&QSeries::one(2)).unwrap(), s);
    }

    #[test]
    fn mismatch_is_an_error() {
        let s = QSeries::<Scalar>::one(2);
        let r = QSeries::<Scalar>::one(3);
        assert_eq!(
            s.mul(&r),
            Err(AlgebraError::TruncationMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn exp_examples() {
        assert_eq!(
            QSeries::<RatMatrix>::zero(3).exp().unwrap(),
            QSeries::one(3)
        );
        let s = QSeries::monomial(a(), 1, 2);
        let want = QSeries::new(
            2,
            vec![RatMatrix::one(), a(), a().mul(&a()).scale(&frac(1, 2))],
        );
        assert_eq!(s.exp().unwrap(), want);
        assert!(matches!(
            QSeries::<RatMatrix>::one(2).exp(),
            Err(AlgebraError::Valuation(_))
        ));
    }

    #[test]
    fn log_examples() {
        assert!(QSeries::<RatMatrix>::one(3).log().unwrap().is_zero());
        let s = QSeries::new(2, vec![RatMatrix::one(), a()]);
        let want = QSeries::new(
            2,
            vec![RatMatrix::zero(), a(), a().mul(&a()).scale(&frac(-1, 2))],
        );
        assert_eq!(s.log().unwrap(), want);
        assert!(QSeries::<RatMatrix>::zero(2).log().is_err());
    }

    #[test]
    fn unipotent_inverse_examples() {
        assert_eq!(
            QSeries::<RatMatrix>::one(2).invert_unipotent().unwrap(),
            QSeries::one(2)
        );
        let s = QSeries::new(2, vec![RatMatrix::one(), a()]);
        let want = QSeries::new(2, vec![RatMatrix::one(), a().neg(), a().mul(&a())]);
        assert_eq!(s.invert_unipotent().unwrap(), want);
    }

    #[test]
    fn unipotent_inverse_matches_geometric_series() {
        let n = 4;
        let s = QSeries::new(
            n,
            vec![
                RatMatrix::one(),
                mat_random(3, 1, 2),
                mat_random(3, 2, 2),
                RatMatrix::zero(),
                mat_random(3, 3, 2),
            ],
        );
        let one_minus = QSeries::one(n).sub(&s).unwrap();
        let mut geo = QSeries::zero(n);
        let mut pw = QSeries::one(n);
        for _ in 0..=n {
            geo = geo.add(&pw).unwrap();
            pw = pw.mul(&one_minus).unwrap();
        }
        assert_eq!(s.invert_unipotent().unwrap(), geo);
    }

    #[test]
    fn unit_inverse_examples() {
        let g = RatMatrix::from_ints(&[&[2, 1], &[1, 1]]);
        let gi = mat_invert(&g).unwrap();
        let s = QSeries::constant(g.clone(), 2);
        assert_eq!(
            s.invert_unit(&gi).unwrap(),
            QSeries::constant(gi.clone(), 2)
        );

        let s = QSeries::new(2, vec![g.clone(), b()]);
        let inv = s.invert_unit(&gi).unwrap();
        assert_eq!(inv.coeff(0), &gi);
        assert_eq!(inv.coeff(1), &gi.mul(&b()).mul(&gi).neg());
        assert_eq!(s.mul(&inv).unwrap(), QSeries::one(2));
        assert_eq!(inv.mul(&s).unwrap(), QSeries::one(2));

        assert_eq!(s.invert_unit(&g), Err(AlgebraError::NotAUnit));
    }

    #[test]
    fn exp_of_sum_fails_for_noncommuting() {
        let n = 2;
        let x = QSeries::monomial(a(), 1, n);
        let y = QSeries::monomial(b(), 1, n);
        let lhs = x.add(&y).unwrap().exp().unwrap();
        let rhs = x.exp().unwrap().mul(&y.exp().unwrap()).unwrap();
        assert_ne!(lhs, rhs);
        assert_eq!(lhs.truncate(1), rhs.truncate(1));
    }

    #[test]
    fn eval_at_sums_powers() {
        let s = QSeries::new(
            2,
            vec![
                TPoly::constant(Scalar::int(1)),
                TPoly::new(vec![Scalar::int(0), Scalar::int(2)]),
                TPoly::constant(Scalar::int(4)),
            ],
        );
        // 1 + q·2t + 4q² at q = 1/2, t = 3
        assert_eq!(s.eval_at(&frac(1, 2), &int(3)), Scalar::int(5));
    }
}
