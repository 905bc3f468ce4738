//! Polynomials in the time variable `t` over a coefficient algebra.

use num_traits::Zero;

use crate::algebra::Algebra;
use crate::rational::{int, Rational};

/// `Σ c_k t^k`, trailing zeros stripped.
#[derive(Debug, Clone, PartialEq)]
pub struct TPoly<A> {
    coeffs: Vec<A>,
}

impl<A: Algebra> TPoly<A> {
    pub fn new(mut coeffs: Vec<A>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    pub fn constant(a: A) -> Self {
        Self::new(vec![a])
    }

    /// `a t^k`.
    pub fn monomial(a: A, k: usize) -> Self {
        let mut coeffs = vec![A::zero(); k];
        coeffs.push(a);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[A] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> A {
        self.coeffs.get(k).cloned().unwrap_or_else(A::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Applies `f` to every coefficient.
    pub fn map<B: Algebra>(&self, f: impl Fn(&A) -> B) -> TPoly<B> {
        TPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Exact time derivative.
    pub fn dt(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&int(k as i64)))
                .collect(),
        )
    }

    /// `∫_0^t p(s) ds`.
    pub fn integrate(&self) -> Self {
        if self.coeffs.is_empty() {
            return Self::new(Vec::new());
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(A::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push(c.scale(&Rational::new(1.into(), (k as i64 + 1).into())));
        }
        Self::new(out)
    }

    /// Horner evaluation at `t = t0`.
    pub fn eval(&self, t0: &Rational) -> A {
        let mut acc = A::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(t0).add(c);
        }
        acc
    }
}

impl<A: Algebra> Algebra for TPoly<A> {
    fn zero() -> Self {
        TPoly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        Self::constant(A::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                    (Some(a), Some(b)) => a.add(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
    fn neg(&self) -> Self {
        TPoly {
            coeffs: self.coeffs.iter().map(A::neg).collect(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![A::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }
    fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.scale(c)).collect())
    }
    fn try_inverse(&self) -> Option<Self> {
        match self.coeffs.len() {
            1 => self.coeffs[0].try_inverse().map(Self::constant),
            _ => None,
        }
    }
    fn from_rational(c: &Rational) -> Self {
        Self::constant(A::from_rational(c))
    }
    fn max_abs(&self) -> Rational {
        self.coeffs
            .iter()
            .map(A::max_abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}
