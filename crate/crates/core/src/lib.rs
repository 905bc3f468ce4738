//! Exact computer algebra for time-scaled (q-deformed) Lax equations.
//!
//! The crate is organised bottom-up:
//!
//! - [`rational`], [`algebra`], [`tpoly`]: exact scalars, the [`Algebra`]
//!   contract every coefficient backend implements, and polynomials in `t`.
//! - [`diffpoly`], [`psdo`]: differential polynomials in `u` and formal
//!   pseudo-differential symbols over them (the KdV backend).
//! - [`matrix`]: exact rational matrices (the brute-force backend).
//! - [`qseries`]: truncated series in `q` with `exp`, `log` and inverses.
//! - [`laxflow`]: deformation `P_q(t) = q P(q t)`, the time-ordered
//!   exponential, and the conjugation solution `L_q = W L(0) W⁻¹`.
//! - [`symops`]: inner derivations, transport of symmetries, residuals.
//! - [`expr`]: the operator expression language.

pub mod algebra;
pub mod diffpoly;
pub mod error;
pub mod expr;
pub mod laxflow;
pub mod matrix;
pub mod psdo;
pub mod qseries;
pub mod random;
pub mod rational;
pub mod symops;
pub mod tpoly;

pub use algebra::Algebra;
pub use diffpoly::{DiffPoly, JetMonomial};
pub use error::{AlgebraError, ParseError};
pub use laxflow::{lax_residual, lax_solve, LaxProblem, LaxSolution, Path};
pub use matrix::RatMatrix;
pub use psdo::{kdv_pair, Floor, PsdoSymbol};
pub use qseries::QSeries;
pub use rational::Rational;
pub use symops::BiOp;
pub use tpoly::TPoly;
