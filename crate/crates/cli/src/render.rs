//! Text and JSON renderings of symbols, matrices and paths.

use serde_json::{json, Value};

use qlax_core::algebra::Algebra;
use qlax_core::{Path, PsdoSymbol, RatMatrix, TPoly};

/// How elements of a backend are printed.
pub trait Render {
    fn text(&self) -> String;
    fn json(&self) -> Value;
}

impl Render for PsdoSymbol {
    fn text(&self) -> String {
        self.to_string()
    }

    fn json(&self) -> Value {
        Value::String(self.to_string())
    }
}

/// A matrix together with the ambient size, so scalar matrices print in full.
pub struct Sized<'a>(pub &'a RatMatrix, pub usize);

impl Render for Sized<'_> {
    fn text(&self) -> String {
        let rows: Vec<String> = self
            .0
            .to_rows(self.1)
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }

    fn json(&self) -> Value {
        Value::Array(
            self.0
                .to_rows(self.1)
                .iter()
                .map(|r| Value::Array(r.iter().map(|c| Value::String(c.to_string())).collect()))
                .collect(),
        )
    }
}

fn wrap(s: String) -> String {
    if s.contains(' ') {
        format!("({s})")
    } else {
        s
    }
}

/// `t`-polynomial text, lowest degree first: `A + t*B + t^2*C`.
pub fn tpoly_text<A: Algebra>(p: &TPoly<A>, f: &impl Fn(&A) -> String) -> String {
    let parts: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| match j {
            0 => f(c),
            1 => format!("t*{}", wrap(f(c))),
            _ => format!("t^{j}*{}", wrap(f(c))),
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// One line per `q`-order.
pub fn path_text<A: Algebra>(p: &Path<A>, f: impl Fn(&A) -> String) -> String {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| format!("  q^{k}: {}", tpoly_text(c, &f)))
        .collect::<Vec<_>>()
        .join("\n")
}

/// A path as a `qlax.qseries/1` document whose coefficients list the
/// `t`-coefficients in increasing degree.
pub fn path_json<A: Algebra>(p: &Path<A>, f: impl Fn(&A) -> Value) -> Value {
    p.to_json(|c| Value::Array(c.coeffs().iter().map(&f).collect()))
}

pub fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn symbol_json(s: &PsdoSymbol) -> Value {
    let mut v = s.to_json();
    v["text"] = json!(s.to_string());
    v
}
