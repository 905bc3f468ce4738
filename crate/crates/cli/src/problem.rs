//! Problem files.
//!
//! ```json
//! {
//!   "schema": "qlax.problem/1",
//!   "backend": "psdo",
//!   "N": 2,
//!   "L0": "-d^2 + u",
//!   "P": [{"t_degree": 0, "value": "-4*d^3 + 3*(d*u + u*d)"}],
//!   "S0": "identity"
//! }
//! ```
//!
//! With `"backend": "matrix"` every operator is an array of rows of
//! rational strings such as `[["1", "0"], ["0", "-1/2"]]`. `S0` is
//! `"identity"`, `"random"` (matrix backend, drawn from `--seed`) or an
//! array of `{"left": ..., "right": ...}` pairs.

use std::path::Path as FsPath;

use serde::Deserialize;
use serde_json::Value;

use qlax_core::algebra::Algebra;
use qlax_core::expr::parse_operator;
use qlax_core::laxflow::LaxProblem;
use qlax_core::rational::parse_rational;
use qlax_core::{BiOp, PsdoSymbol, RatMatrix, TPoly};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Psdo,
    Matrix,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathTerm {
    pub t_degree: usize,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default)]
    pub schema: Option<String>,
    pub backend: Backend,
    #[serde(rename = "N", default)]
    pub n: Option<i64>,
    #[serde(rename = "L0")]
    pub l0: Value,
    #[serde(rename = "P")]
    pub p: Vec<PathTerm>,
    #[serde(rename = "S0", default)]
    pub s0: Option<Value>,
}

pub const PROBLEM_SCHEMA: &str = "qlax.problem/1";

/// How `S0` was given.
#[derive(Debug, Clone, PartialEq)]
pub enum SymmetrySpec<A: Algebra> {
    Identity,
    Random,
    Pairs(BiOp<A>),
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let file: ProblemFile = serde_json::from_str(text)?;
        if let Some(s) = &file.schema {
            if s != PROBLEM_SCHEMA {
                return Err(CliError::Validation(format!(
                    "unsupported schema `{s}`, expected `{PROBLEM_SCHEMA}`"
                )));
            }
        }
        Ok(file)
    }

    pub fn load(path: &FsPath) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// `override_n` beats the file's `N`, which beats the default of 2.
    pub fn order(&self, override_n: Option<usize>) -> Result<usize, CliError> {
        let n = match (override_n, self.n) {
            (Some(n), _) => n as i64,
            (None, Some(n)) => n,
            (None, None) => 2,
        };
        if n < 1 {
            return Err(CliError::Validation(format!(
                "truncation order N must be at least 1, got {n}"
            )));
        }
        Ok(n as usize)
    }

    pub fn psdo_problem(&self, order: usize) -> Result<LaxProblem<PsdoSymbol>, CliError> {
        self.expect_backend(Backend::Psdo)?;
        let l0 = psdo_value(&self.l0, "L0")?;
        let path = self.path_with(psdo_value)?;
        Ok(LaxProblem::new(path, l0, order)?)
    }

    /// The matrix problem and its dimension.
    pub fn matrix_problem(&self, order: usize) -> Result<(LaxProblem<RatMatrix>, usize), CliError> {
        self.expect_backend(Backend::Matrix)?;
        let (l0, n) = matrix_value(&self.l0, "L0")?;
        let path = self.path_with(|v, what| {
            let (m, k) = matrix_value(v, what)?;
            check_dim(n, k, what)?;
            Ok(m)
        })?;
        Ok((LaxProblem::new(path, l0, order)?, n))
    }

    pub fn psdo_symmetry(&self) -> Result<SymmetrySpec<PsdoSymbol>, CliError> {
        self.symmetry_with(psdo_value)
    }

    pub fn matrix_symmetry(&self, n: usize) -> Result<SymmetrySpec<RatMatrix>, CliError> {
        self.symmetry_with(|v, what| {
            let (m, k) = matrix_value(v, what)?;
            check_dim(n, k, what)?;
            Ok(m)
        })
    }

    fn expect_backend(&self, b: Backend) -> Result<(), CliError> {
        if self.backend != b {
            return Err(CliError::Validation(format!(
                "problem declares backend {:?}, expected {:?}",
                self.backend, b
            )));
        }
        Ok(())
    }

    fn path_with<A: Algebra>(
        &self,
        parse: impl Fn(&Value, &str) -> Result<A, CliError>,
    ) -> Result<TPoly<A>, CliError> {
        let max = self.p.iter().map(|t| t.t_degree).max().unwrap_or(0);
        let mut coeffs = vec![A::zero(); max + 1];
        for (i, term) in self.p.iter().enumerate() {
            let v = parse(&term.value, &format!("P[{i}]"))?;
            coeffs[term.t_degree] = coeffs[term.t_degree].add(&v);
        }
        Ok(TPoly::new(coeffs))
    }

    fn symmetry_with<A: Algebra>(
        &self,
        parse: impl Fn(&Value, &str) -> Result<A, CliError>,
    ) -> Result<SymmetrySpec<A>, CliError> {
        let Some(s0) = &self.s0 else {
            return Err(CliError::Validation(
                "the symmetry command needs an `S0` field in the problem file".into(),
            ));
        };
        match s0 {
            Value::String(s) if s == "identity" => Ok(SymmetrySpec::Identity),
            Value::String(s) if s == "random" => Ok(SymmetrySpec::Random),
            Value::Array(items) => {
                let mut pairs = Vec::with_capacity(items.len());
                for (i, item) in items.iter().enumerate() {
                    let (Some(l), Some(r)) = (item.get("left"), item.get("right")) else {
                        return Err(CliError::Validation(format!(
                            "S0[{i}] must be an object with `left` and `right`"
                        )));
                    };
                    pairs.push((
                        parse(l, &format!("S0[{i}].left"))?,
                        parse(r, &format!("S0[{i}].right"))?,
                    ));
                }
                Ok(SymmetrySpec::Pairs(BiOp::from_pairs(pairs)))
            }
            _ => Err(CliError::Validation(
                "S0 must be \"identity\", \"random\" or an array of {left, right} pairs".into(),
            )),
        }
    }
}

fn check_dim(want: usize, got: usize, what: &str) -> Result<(), CliError> {
    if want != got {
        return Err(CliError::Validation(format!(
            "{what} is {got}×{got}, but L0 is {want}×{want}"
        )));
    }
    Ok(())
}

pub fn psdo_value(v: &Value, what: &str) -> Result<PsdoSymbol, CliError> {
    match v {
        Value::String(s) => Ok(parse_operator(s)?),
        _ => Err(CliError::Validation(format!(
            "{what} must be an operator expression string"
        ))),
    }
}

/// A square matrix literal and its size.
pub fn matrix_value(v: &Value, what: &str) -> Result<(RatMatrix, usize), CliError> {
    let bad = || CliError::Validation(format!("{what} must be a square array of rational strings"));
    let rows = v.as_array().ok_or_else(bad)?;
    let n = rows.len();
    let mut out = Vec::with_capacity(n);
    for row in rows {
        let cells = row.as_array().ok_or_else(bad)?;
        if cells.len() != n {
            return Err(bad());
        }
        let mut r = Vec::with_capacity(n);
        for c in cells {
            let s = c.as_str().ok_or_else(bad)?;
            r.push(parse_rational(s)?);
        }
        out.push(r);
    }
    Ok((RatMatrix::try_from_rows(out).map_err(|_| bad())?, n))
}
