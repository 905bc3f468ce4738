//! Formal pseudo-differential symbols over [`DiffPoly`].
//!
//! A symbol `Σ_k a_k ξ^k` stands for the operator `Σ_k a_k ∂^k`. Products use
//! the composition rule
//!
//! ```text
//! σ(A∘B) = Σ_{j≥0} (1/j!) ∂_ξ^j σ(A) · D_x^j σ(B)
//! ```
//!
//! which is a finite sum when `A` is a differential operator. When `A` has
//! negative orders the sum is infinite and the result carries a precision
//! floor below which coefficients are unknown.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::diffpoly::DiffPoly;
use crate::error::{AlgebraError, Result};
use crate::rational::{factorial, falling_factorial, int, Rational};

/// Number of orders kept below the leading order when composing exact
/// symbols whose expansion does not terminate.
pub const DEFAULT_DEPTH: i64 = 8;

/// Lowest order at which coefficients of a symbol are known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Floor {
    /// Every coefficient is known.
    Exact,
    /// Coefficients of order `< f` are unknown.
    Truncated(i64),
}

impl Floor {
    fn value(self) -> Option<i64> {
        match self {
            Floor::Exact => None,
            Floor::Truncated(f) => Some(f),
        }
    }

    /// The tighter (higher) of two floors.
    fn max(self, other: Floor) -> Floor {
        match (self.value(), other.value()) {
            (None, None) => Floor::Exact,
            (a, b) => Floor::Truncated(a.into_iter().chain(b).max().unwrap()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PsdoSymbol {
    coeffs: BTreeMap<i64, DiffPoly>,
    floor: Floor,
}

impl PsdoSymbol {
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (i64, DiffPoly)>, floor: Floor) -> Self {
        let mut out = PsdoSymbol {
            coeffs: BTreeMap::new(),
            floor,
        };
        for (k, c) in coeffs {
            out.add_coeff(k, &c);
        }
        out.prune();
        out
    }

    pub fn exact(coeffs: impl IntoIterator<Item = (i64, DiffPoly)>) -> Self {
        Self::from_coeffs(coeffs, Floor::Exact)
    }

    /// `ξ^k`.
    pub fn xi(k: i64) -> Self {
        Self::exact([(k, DiffPoly::one())])
    }

    /// The multiplication operator by `a`.
    pub fn multiplication(a: DiffPoly) -> Self {
        Self::exact([(0, a)])
    }

    pub fn floor(&self) -> Floor {
        self.floor
    }

    /// Nonzero coefficients, descending order.
    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &DiffPoly)> {
        self.coeffs.iter().rev().map(|(k, c)| (*k, c))
    }

    /// Coefficient of `ξ^k`; fails below the precision floor.
    pub fn coeff(&self, k: i64) -> Result<DiffPoly> {
        if let Floor::Truncated(f) = self.floor {
            if k < f {
                return Err(AlgebraError::PrecisionExhausted {
                    requested: k,
                    floor: f,
                });
            }
        }
        Ok(self.coeffs.get(&k).cloned().unwrap_or_default())
    }

    /// Largest order with a nonzero coefficient; `None` stands for −∞.
    pub fn order(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Exact with no negative orders.
    pub fn is_differential(&self) -> bool {
        self.floor == Floor::Exact && self.coeffs.keys().all(|&k| k >= 0)
    }

    /// Highest order that is either stored or hidden below the floor.
    fn top(&self) -> Option<i64> {
        let hidden = self.floor.value().map(|f| f - 1);
        self.order().into_iter().chain(hidden).max()
    }

    fn add_coeff(&mut self, k: i64, c: &DiffPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_default();
        slot.add_assign(c);
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    fn prune(&mut self) {
        if let Floor::Truncated(f) = self.floor {
            self.coeffs.retain(|&k, _| k >= f);
        }
        self.coeffs.retain(|_, c| !c.is_zero());
    }

    /// Symbol composition, keeping `depth` orders below the leading order
    /// when the expansion does not terminate on its own.
    pub fn compose_with_depth(&self, other: &Self, depth: i64) -> Self {
        let (Some(top_a), Some(top_b)) = (self.top(), other.top()) else {
            return Self::zero();
        };
        let mut floor = Floor::Exact;
        if let Some(fa) = self.floor.value() {
            floor = floor.max(Floor::Truncated(fa + top_b));
        }
        if let Some(fb) = other.floor.value() {
            floor = floor.max(Floor::Truncated(top_a + fb));
        }
        let has_negative = self.coeffs.keys().any(|&k| k < 0);
        if has_negative && floor == Floor::Exact {
            floor = Floor::Truncated(top_a + top_b - depth);
        }
        let lowest = floor.value();

        // derivs[m][j] = D_x^j(b_m), shared across every k
        let mut derivs: BTreeMap<i64, Vec<DiffPoly>> = other
            .coeffs
            .iter()
            .map(|(&m, b)| (m, vec![b.clone()]))
            .collect();
        let mut acc: BTreeMap<i64, DiffPoly> = BTreeMap::new();
        for (&k, a) in &self.coeffs {
            for (&m, chain) in derivs.iter_mut() {
                let mut j = 0usize;
                loop {
                    let ord = k + m - j as i64;
                    if lowest.is_some_and(|f| ord < f) {
                        break;
                    }
                    let ff = falling_factorial(k, j);
                    if ff.is_zero() {
                        // k ≥ 0 and j > k: every further term vanishes too
                        break;
                    }
                    if chain.len() <= j {
                        let next = chain[j - 1].dx();
                        chain.push(next);
                    }
                    let db = &chain[j];
                    if db.is_zero() {
                        break;
                    }
                    let c = Rational::from_integer(ff) / factorial(j);
                    acc.entry(ord).or_default().add_scaled_product(a, db, &c);
                    j += 1;
                }
            }
        }
        let mut out = PsdoSymbol { coeffs: acc, floor };
        out.prune();
        out
    }

    pub fn compose(&self, other: &Self) -> Self {
        self.compose_with_depth(other, DEFAULT_DEPTH)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn to_json(&self) -> Value {
        let floor = match self.floor {
            Floor::Exact => json!("exact"),
            Floor::Truncated(f) => json!(f),
        };
        json!({
            "schema": "qlax.symbol/1",
            "floor": floor,
            "terms": self.coeffs().map(|(k, c)| json!({"order": k, "coeff": c.to_string()})).collect::<Vec<_>>(),
        })
    }
}

/// The KdV Lax pair `L = -∂² + u`, `P = -4∂³ + 6u∂ + 3u_1`.
pub fn kdv_pair() -> (PsdoSymbol, PsdoSymbol) {
    let u = DiffPoly::jet(0);
    let l = PsdoSymbol::exact([(2, DiffPoly::constant(int(-1))), (0, u.clone())]);
    let p = PsdoSymbol::exact([
        (3, DiffPoly::constant(int(-4))),
        (1, u.scale(&int(6))),
        (0, DiffPoly::jet(1).scale(&int(3))),
    ]);
    (l, p)
}

/// Right-hand side of KdV, `6 u u_1 - u_3`, as a multiplication operator.
pub fn kdv_flow() -> PsdoSymbol {
    let u = DiffPoly::jet(0);
    PsdoSymbol::multiplication(
        u.mul(&DiffPoly::jet(1))
            .scale(&int(6))
            .sub(&DiffPoly::jet(3)),
    )
}

impl Algebra for PsdoSymbol {
    fn zero() -> Self {
        PsdoSymbol {
            coeffs: BTreeMap::new(),
            floor: Floor::Exact,
        }
    }
    fn one() -> Self {
        Self::xi(0)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.floor == Floor::Exact
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = PsdoSymbol {
            coeffs: self.coeffs.clone(),
            floor: self.floor.max(other.floor),
        };
        for (&k, c) in &other.coeffs {
            out.add_coeff(k, c);
        }
        out.prune();
        out
    }
    fn neg(&self) -> Self {
        PsdoSymbol {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.neg())).collect(),
            floor: self.floor,
        }
    }
    fn mul(&self, other: &Self) -> Self {
        self.compose(other)
    }
    fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PsdoSymbol {
            coeffs: self.coeffs.iter().map(|(k, p)| (*k, p.scale(c))).collect(),
            floor: self.floor,
        }
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.floor != Floor::Exact || self.coeffs.len() != 1 {
            return None;
        }
        let c = self.coeffs.get(&0)?.as_constant()?;
        (!c.is_zero()).then(|| Self::multiplication(DiffPoly::constant(c.recip())))
    }
    fn max_abs(&self) -> Rational {
        self.coeffs
            .values()
            .map(DiffPoly::max_abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Renders in the expression language, e.g. `-d^2 + u`.
impl fmt::Display for PsdoSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.coeffs().map(|(k, c)| render_term(k, c)).collect();
        if let Floor::Truncated(fl) = self.floor {
            parts.push(format!("O(d^{fl})"));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (i, p) in parts.iter().enumerate() {
            match (i, p.strip_prefix('-')) {
                (0, _) => write!(f, "{p}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {p}")?,
            }
        }
        Ok(())
    }
}

fn render_term(k: i64, c: &DiffPoly) -> String {
    if k == 0 {
        return c.to_string();
    }
    let d = if k == 1 {
        "d".to_string()
    } else {
        format!("d^{k}")
    };
    if c.len() != 1 {
        return format!("({c})*{d}");
    }
    let (m, r) = c.terms().next().unwrap();
    let sign = if r.is_negative() { "-" } else { "" };
    let mag = r.abs();
    let mut factors = Vec::new();
    if !mag.is_one() {
        factors.push(mag.to_string());
    }
    if !m.is_one() {
        factors.push(m.to_string());
    }
    factors.push(d);
    format!("{sign}{}", factors.join("*"))
}

impl fmt::Debug for PsdoSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Psdo({self})")
    }
}
