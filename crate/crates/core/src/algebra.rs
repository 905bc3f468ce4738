//! The coefficient-algebra contract shared by every backend.

use std::fmt::Debug;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// A unital associative algebra over the rationals with canonical forms.
///
/// `PartialEq` must be exact equality of canonical forms. Multiplication may
/// be noncommutative; `a.mul(b)` always keeps `a` on the left.
pub trait Algebra: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Two-sided inverse when the backend can compute one.
    fn try_inverse(&self) -> Option<Self> {
        None
    }

    /// Embedding of a scalar as `c * 1`.
    fn from_rational(c: &Rational) -> Self {
        Self::one().scale(c)
    }

    /// Largest absolute value among the scalar coefficients; zero iff `self` is zero.
    fn max_abs(&self) -> Rational;

    /// Reduces a formal sum of pairs `Σ left ⊗ right`, used by two-sided
    /// multiplication operators. The default merges pairs with equal left
    /// parts, then pairs with equal right parts, and drops zero pairs.
    /// Backends with a finite basis may override this with a true normal form.
    fn reduce_tensor(terms: Vec<(Self, Self)>) -> Vec<(Self, Self)> {
        merge_pairs(terms)
    }
}

/// Structural simplification of `Σ left ⊗ right`.
pub fn merge_pairs<A: Algebra>(terms: Vec<(A, A)>) -> Vec<(A, A)> {
    let mut by_left: Vec<(A, A)> = Vec::with_capacity(terms.len());
    for (l, r) in terms {
        if l.is_zero() || r.is_zero() {
            continue;
        }
        match by_left.iter_mut().find(|(l2, _)| *l2 == l) {
            Some(slot) => slot.1 = slot.1.add(&r),
            None => by_left.push((l, r)),
        }
    }
    let mut by_right: Vec<(A, A)> = Vec::with_capacity(by_left.len());
    for (l, r) in by_left {
        if r.is_zero() {
            continue;
        }
        match by_right.iter_mut().find(|(_, r2)| *r2 == r) {
            Some(slot) => slot.0 = slot.0.add(&l),
            None => by_right.push((l, r)),
        }
    }
    by_right.retain(|(l, r)| !l.is_zero() && !r.is_zero());
    by_right
}

/// Commutator `ab - ba`.
pub fn commutator<A: Algebra>(a: &A, b: &A) -> A {
    a.mul(b).sub(&b.mul(a))
}

/// `a^k` by repeated multiplication.
pub fn power<A: Algebra>(a: &A, k: usize) -> A {
    let mut acc = A::one();
    for _ in 0..k {
        acc = acc.mul(a);
    }
    acc
}

/// The rationals themselves as a (commutative) backend.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(pub Rational);

impl Scalar {
    pub fn int(n: i64) -> Self {
        Scalar(crate::rational::int(n))
    }
}

impl Algebra for Scalar {
    fn zero() -> Self {
        Scalar(Zero::zero())
    }
    fn one() -> Self {
        Scalar(One::one())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.0)
    }
    fn add(&self, other: &Self) -> Self {
        Scalar(&self.0 + &other.0)
    }
    fn neg(&self) -> Self {
        Scalar(-&self.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Scalar(&self.0 * &other.0)
    }
    fn scale(&self, c: &Rational) -> Self {
        Scalar(&self.0 * c)
    }
    fn try_inverse(&self) -> Option<Self> {
        (!Zero::is_zero(&self.0)).then(|| Scalar(self.0.recip()))
    }
    fn max_abs(&self) -> Rational {
        self.0.abs()
    }
}
