//! Differential polynomials in one dependent variable `u(x)`.
//!
//! The ring is `ℚ[u, u_1, u_2, ...]` where `u_j = ∂_x^j u`, with the total
//! derivative [`DiffPoly::dx`] acting by the Leibniz rule.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::Algebra;
use crate::error::ParseError;
use crate::rational::{int, Rational};

/// Product `Π u_j^{e_j}`; `exponents[j]` is the power of `u_j`, trailing zeros stripped.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct JetMonomial {
    exponents: Vec<u32>,
}

impl JetMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// `u_j`.
    pub fn jet(j: usize) -> Self {
        Self::from_exponents(std::iter::repeat_n(0, j).chain([1]).collect())
    }

    pub fn from_exponents(mut exponents: Vec<u32>) -> Self {
        while exponents.last() == Some(&0) {
            exponents.pop();
        }
        JetMonomial { exponents }
    }

    pub fn exponent(&self, j: usize) -> u32 {
        self.exponents.get(j).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// `Σ j e_j`.
    pub fn weight(&self) -> u32 {
        self.exponents
            .iter()
            .enumerate()
            .map(|(j, &e)| j as u32 * e)
            .sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.exponents.len().max(other.exponents.len());
        Self::from_exponents(
            (0..n)
                .map(|j| self.exponent(j) + other.exponent(j))
                .collect(),
        )
    }

    fn bump(&self, j: usize, delta: i32) -> Self {
        let mut e = self.exponents.clone();
        if e.len() <= j {
            e.resize(j + 1, 0);
        }
        e[j] = (e[j] as i32 + delta) as u32;
        Self::from_exponents(e)
    }
}

/// Graded: total degree first, then exponent vectors compared from `u_0` upward.
impl Ord for JetMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.exponents.len().max(other.exponents.len());
            (0..n)
                .map(|j| self.exponent(j).cmp(&other.exponent(j)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for JetMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for JetMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (j, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if j == 0 {
                write!(f, "u")?;
            } else {
                write!(f, "u_{j}")?;
            }
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for JetMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Finite sum of jet monomials with nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DiffPoly {
    terms: BTreeMap<JetMonomial, Rational>,
}

impl DiffPoly {
    pub fn constant(c: Rational) -> Self {
        Self::term(c, JetMonomial::one())
    }

    pub fn term(c: Rational, m: JetMonomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPoly { terms }
    }

    /// `u_j`.
    pub fn jet(j: usize) -> Self {
        Self::term(Rational::one(), JetMonomial::jet(j))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (JetMonomial, Rational)>) -> Self {
        let mut out = DiffPoly::default();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: JetMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn add_assign(&mut self, other: &DiffPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += c·a·b` in place.
    pub(crate) fn add_scaled_product(&mut self, a: &DiffPoly, b: &DiffPoly, c: &Rational) {
        let unit = c.is_one();
        for (m1, c1) in &a.terms {
            let c1 = if unit { c1.clone() } else { c1 * c };
            for (m2, c2) in &b.terms {
                self.add_term(m1.mul(m2), &c1 * c2);
            }
        }
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&JetMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &JetMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value if the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&JetMonomial::one()).cloned(),
            _ => None,
        }
    }

    /// Total x-derivative.
    pub fn dx(&self) -> Self {
        let mut out = DiffPoly::default();
        for (m, c) in &self.terms {
            for (j, &e) in m.exponents.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let next = m.bump(j, -1).bump(j + 1, 1);
                out.add_term(next, c * int(e as i64));
            }
        }
        out
    }

    /// `dx` applied `k` times.
    pub fn dx_n(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.dx())
    }

    /// `Some(w)` if every monomial has weight `w`.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut ws = self.terms.keys().map(JetMonomial::weight);
        let first = ws.next()?;
        ws.all(|w| w == first).then_some(first)
    }

    /// Parses the expression language restricted to polynomials (no `d`).
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        crate::expr::parse_expr(text)?.to_diffpoly()
    }
}

impl Algebra for DiffPoly {
    fn zero() -> Self {
        DiffPoly::default()
    }
    fn one() -> Self {
        Self::constant(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }
    fn neg(&self) -> Self {
        DiffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = DiffPoly::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
    fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        DiffPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }
    fn try_inverse(&self) -> Option<Self> {
        self.as_constant()
            .filter(|c| !c.is_zero())
            .map(|c| Self::constant(c.recip()))
    }
    fn max_abs(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Highest monomial first, e.g. `6*u*u_1 - u_3`.
impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffPoly({self})")
    }
}
