//! Exact-rational square matrices as a coefficient backend.
//!
//! A [`RatMatrix`] is either a scalar multiple of the identity (of any size)
//! or a dense `n × n` matrix. Scalar multiples of the identity are always
//! stored in the scalar form, so structural equality is mathematical
//! equality; this also lets `zero()` and `one()` exist without a dimension.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{merge_pairs, Algebra};
use crate::error::{AlgebraError, Result};
use crate::laxflow::{lax_solve, LaxProblem};
use crate::rational::{int, to_f64, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Scalar(Rational),
    Dense { n: usize, entries: Vec<Rational> },
}

impl RatMatrix {
    pub fn scalar(c: Rational) -> Self {
        RatMatrix(Repr::Scalar(c))
    }

    /// Builds from row-major entries. Panics if the rows are not square.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        Self::try_from_rows(rows).expect("rows must form a non-empty square matrix")
    }

    pub fn try_from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(AlgebraError::Dimension(format!(
                "expected a non-empty square matrix, got {} rows",
                n
            )));
        }
        Ok(Self::dense(n, rows.into_iter().flatten().collect()))
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    /// Matrix unit `E_{ab}` of size `n`.
    pub fn unit(n: usize, a: usize, b: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        entries[a * n + b] = Rational::one();
        Self::dense(n, entries)
    }

    fn dense(n: usize, entries: Vec<Rational>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        let c = &entries[0];
        let is_scalar = (0..n).all(|i| {
            (0..n).all(|j| {
                let e = &entries[i * n + j];
                if i == j {
                    e == c
                } else {
                    e.is_zero()
                }
            })
        });
        if is_scalar {
            RatMatrix(Repr::Scalar(c.clone()))
        } else {
            RatMatrix(Repr::Dense { n, entries })
        }
    }

    /// Dimension, or `None` for a scalar multiple of the identity.
    pub fn dim(&self) -> Option<usize> {
        match &self.0 {
            Repr::Scalar(_) => None,
            Repr::Dense { n, .. } => Some(*n),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        match &self.0 {
            Repr::Scalar(c) => {
                if i == j {
                    c.clone()
                } else {
                    Rational::zero()
                }
            }
            Repr::Dense { n, entries } => entries[i * n + j].clone(),
        }
    }

    /// Row-major entries at size `n`.
    pub fn to_rows(&self, n: usize) -> Vec<Vec<Rational>> {
        if let Some(d) = self.dim() {
            assert_eq!(d, n, "matrix of size {d} rendered at size {n}");
        }
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn trace(&self, n: usize) -> Rational {
        (0..n).map(|i| self.entry(i, i)).sum()
    }

    /// Determinant at size `n` by exact elimination.
    pub fn det(&self, n: usize) -> Rational {
        let mut a = self.to_rows(n);
        let mut det = Rational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Rational::zero();
            };
            if piv != col {
                a.swap(piv, col);
                det = -det;
            }
            let p = a[col][col].clone();
            det *= &p;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] / &p;
                let (top, bottom) = a.split_at_mut(r);
                for (dst, src) in bottom[0][col..n].iter_mut().zip(&top[col][col..n]) {
                    *dst -= &f * src;
                }
            }
        }
        det
    }

    fn common_dim(&self, other: &Self) -> Option<usize> {
        match (self.dim(), other.dim()) {
            (Some(a), Some(b)) => {
                assert_eq!(a, b, "matrix dimension mismatch: {a} vs {b}");
                Some(a)
            }
            (a, b) => a.or(b),
        }
    }
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn mat_invert(m: &RatMatrix) -> Result<RatMatrix> {
    let n = match &m.0 {
        Repr::Scalar(c) => {
            return if c.is_zero() {
                Err(AlgebraError::Singular)
            } else {
                Ok(RatMatrix::scalar(c.recip()))
            };
        }
        Repr::Dense { n, .. } => *n,
    };
    let mut a = m.to_rows(n);
    let mut inv = RatMatrix::scalar(Rational::one()).to_rows(n);
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(AlgebraError::Singular)?;
        a.swap(piv, col);
        inv.swap(piv, col);
        let p = a[col][col].recip();
        for c in 0..n {
            a[col][c] *= &p;
            inv[col][c] *= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let x = &f * &a[col][c];
                a[r][c] -= x;
                let y = &f * &inv[col][c];
                inv[r][c] -= y;
            }
        }
    }
    Ok(RatMatrix::from_rows(inv))
}

/// Deterministic pseudo-random integer matrix with entries in `[-bound, bound]`.
///
/// The stream is ChaCha8 seeded through `seed_from_u64(seed)`, which is
/// platform independent; entries are drawn row-major.
pub fn mat_random(n: usize, seed: u64, bound: u32) -> RatMatrix {
    assert!(n >= 1, "matrix size must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    mat_random_with(&mut rng, n, bound)
}

pub(crate) fn mat_random_with(rng: &mut impl Rng, n: usize, bound: u32) -> RatMatrix {
    let b = bound as i64;
    let entries = (0..n * n).map(|_| int(rng.random_range(-b..=b))).collect();
    RatMatrix::dense(n, entries)
}

impl Algebra for RatMatrix {
    fn zero() -> Self {
        Self::scalar(Rational::zero())
    }
    fn one() -> Self {
        Self::scalar(Rational::one())
    }
    fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Scalar(c) if c.is_zero())
    }
    fn add(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Scalar(a), Repr::Scalar(b)) => Self::scalar(a + b),
            _ => {
                let n = self.common_dim(other).unwrap();
                let entries = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .map(|(i, j)| self.entry(i, j) + other.entry(i, j))
                    .collect();
                Self::dense(n, entries)
            }
        }
    }
    fn neg(&self) -> Self {
        match &self.0 {
            Repr::Scalar(c) => Self::scalar(-c),
            Repr::Dense { n, entries } => RatMatrix(Repr::Dense {
                n: *n,
                entries: entries.iter().map(|e| -e).collect(),
            }),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Scalar(a), Repr::Scalar(b)) => Self::scalar(a * b),
            (Repr::Scalar(a), _) => other.scale(a),
            (_, Repr::Scalar(b)) => self.scale(b),
            (Repr::Dense { n, entries: x }, Repr::Dense { n: n2, entries: y }) => {
                assert_eq!(n, n2, "matrix dimension mismatch: {n} vs {n2}");
                let n = *n;
                let mut out = vec![Rational::zero(); n * n];
                for i in 0..n {
                    for k in 0..n {
                        let a = &x[i * n + k];
                        if a.is_zero() {
                            continue;
                        }
                        for j in 0..n {
                            let b = &y[k * n + j];
                            if !b.is_zero() {
                                out[i * n + j] += a * b;
                            }
                        }
                    }
                }
                Self::dense(n, out)
            }
        }
    }
    fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        match &self.0 {
            Repr::Scalar(a) => Self::scalar(a * c),
            Repr::Dense { n, entries } => RatMatrix(Repr::Dense {
                n: *n,
                entries: entries.iter().map(|e| e * c).collect(),
            }),
        }
    }
    fn try_inverse(&self) -> Option<Self> {
        mat_invert(self).ok()
    }
    fn max_abs(&self) -> Rational {
        match &self.0 {
            Repr::Scalar(c) => c.abs(),
            Repr::Dense { entries, .. } => entries
                .iter()
                .map(|e| e.abs())
                .max()
                .unwrap_or_else(Rational::zero),
        }
    }

    /// Normal form `Σ_{ab} L_ab ⊗ E_ab` over matrix units; at most `n²` pairs.
    fn reduce_tensor(terms: Vec<(Self, Self)>) -> Vec<(Self, Self)> {
        let n = terms.iter().find_map(|(_, r)| r.dim());
        let Some(n) = n else {
            // every right factor is scalar: collapse to a single left multiplication
            return merge_pairs(terms);
        };
        let mut lefts = vec![RatMatrix::zero(); n * n];
        for (l, r) in &terms {
            for a in 0..n {
                for b in 0..n {
                    let c = r.entry(a, b);
                    if !c.is_zero() {
                        lefts[a * n + b] = lefts[a * n + b].add(&l.scale(&c));
                    }
                }
            }
        }
        lefts
            .into_iter()
            .enumerate()
            .filter(|(_, l)| !l.is_zero())
            .map(|(idx, l)| (l, RatMatrix::unit(n, idx / n, idx % n)))
            .collect()
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Scalar(c) => write!(f, "{c}·I"),
            Repr::Dense { n, .. } => {
                let rows: Vec<String> = self
                    .to_rows(*n)
                    .iter()
                    .map(|r| {
                        let cells: Vec<String> = r.iter().map(|e| e.to_string()).collect();
                        format!("[{}]", cells.join(", "))
                    })
                    .collect();
                write!(f, "[{}]", rows.join(", "))
            }
        }
    }
}

/// One evaluation point of a truncation-error study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergencePoint {
    pub q: Rational,
    /// Max-entry error of the order-`N` solution against the reference, exact.
    pub error: Rational,
    /// `error(previous q) / error(this q)`; `None` for the first point or a zero error.
    pub ratio_to_prev: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub n: usize,
    pub ref_n: usize,
    pub points: Vec<ConvergencePoint>,
}

impl ConvergenceReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": "qlax.convergence/1",
            "N": self.n,
            "refN": self.ref_n,
            "points": self.points.iter().map(|p| serde_json::json!({
                "q": p.q.to_string(),
                "error": to_f64(&p.error),
                "ratio_to_prev": p.ratio_to_prev,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Compares the order-`N` solution with an order-`ref_n` reference at
/// `t = 1` and each `q` in `qs`.
///
/// When `q` is halved the error should shrink by about `2^(N+1)`.
pub fn convergence_study(
    prob: &LaxProblem<RatMatrix>,
    qs: &[Rational],
    ref_n: usize,
) -> Result<ConvergenceReport> {
    let n = prob.order();
    if ref_n < n + 2 {
        return Err(AlgebraError::InvalidProblem(format!(
            "reference order {ref_n} must be at least N + 2 = {}",
            n + 2
        )));
    }
    let reference = LaxProblem::new(prob.path().clone(), prob.initial().clone(), ref_n)?;
    let low = lax_solve(prob)?.lq;
    let high = lax_solve(&reference)?.lq;
    let t1 = Rational::one();
    let mut points: Vec<ConvergencePoint> = Vec::with_capacity(qs.len());
    for q0 in qs {
        let a = low.eval_at(q0, &t1);
        let b = high.eval_at(q0, &t1);
        let error = a.sub(&b).max_abs();
        let ratio_to_prev = points.last().and_then(|p| {
            if error.is_zero() {
                None
            } else {
                Some(to_f64(&(&p.error / &error)))
            }
        });
        points.push(ConvergencePoint {
            q: q0.clone(),
            error,
            ratio_to_prev,
        });
    }
    Ok(ConvergenceReport { n, ref_n, points })
}
