//! The verification commands.

use std::path::{Path as FsPath, PathBuf};

use serde_json::{json, Value};

use qlax_core::algebra::Algebra;
use qlax_core::diffpoly::DiffPoly;
use qlax_core::expr::parse_operator;
use qlax_core::laxflow::{iterated_integrals, LaxProblem, ResidualReport};
use qlax_core::matrix::convergence_study;
use qlax_core::psdo::{kdv_flow, DEFAULT_DEPTH};
use qlax_core::rational::parse_rational;
use qlax_core::symops::{
    matrix_probes, psdo_probes, symmetry2_residual, symmetry3_residual, transport,
    transported_solution_check, Probes,
};
use qlax_core::{kdv_pair, lax_residual, lax_solve, BiOp, PsdoSymbol, Rational};

use crate::problem::{matrix_value, psdo_value, Backend, ProblemFile, SymmetrySpec};
use crate::render::{path_json, path_text, symbol_json, verdict, Render, Sized};
use crate::{CliError, Outcome};

/// Flags shared by every command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    /// Overrides the problem file's `N`.
    pub qorder: Option<usize>,
    /// Orders kept below the leading one when composing symbols.
    pub depth: i64,
    pub seed: u64,
    pub probe_set: Option<PathBuf>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            qorder: None,
            depth: DEFAULT_DEPTH,
            seed: 0,
            probe_set: None,
        }
    }
}

fn commutator_with_depth(a: &PsdoSymbol, b: &PsdoSymbol, depth: i64) -> PsdoSymbol {
    a.compose_with_depth(b, depth)
        .sub(&b.compose_with_depth(a, depth))
}

/// `[P, L]` for the KdV pair, compared with `6 u u_1 - u_3`.
///
/// `perturb` adds `ε·u` to `P`.
pub fn cmd_kdv_verify(settings: &Settings, perturb: Option<&str>) -> Result<Outcome, CliError> {
    let (l, mut p) = kdv_pair();
    let mut eps = None;
    if let Some(e) = perturb {
        let e = parse_rational(e)?;
        p = p.add(&PsdoSymbol::multiplication(DiffPoly::jet(0).scale(&e)));
        eps = Some(e);
    }
    let bracket = commutator_with_depth(&p, &l, settings.depth);
    let expected = kdv_flow();
    let difference = bracket.sub(&expected);
    let passed = difference.is_zero();

    let mut text = format!("L = {l}\nP = {p}\n[P, L] = {bracket}\nexpected {expected}\n");
    if !passed {
        text.push_str(&format!("difference {difference}\n"));
    }
    text.push_str(verdict(passed));
    Ok(Outcome {
        passed,
        json: json!({
            "schema": "qlax.report/1",
            "command": "kdv-verify",
            "pass": passed,
            "perturbation": eps.map(|e| e.to_string()),
            "L": symbol_json(&l),
            "P": symbol_json(&p),
            "commutator": symbol_json(&bracket),
            "expected": symbol_json(&expected),
            "difference": symbol_json(&difference),
        }),
        text,
    })
}

/// `[A, B]` of two operator expressions.
pub fn cmd_commutator(settings: &Settings, a: &str, b: &str) -> Result<Outcome, CliError> {
    let a = parse_operator(a)?;
    let b = parse_operator(b)?;
    let c = commutator_with_depth(&a, &b, settings.depth);
    Ok(Outcome {
        passed: true,
        json: json!({
            "schema": "qlax.report/1",
            "command": "commutator",
            "A": symbol_json(&a),
            "B": symbol_json(&b),
            "commutator": symbol_json(&c),
        }),
        text: c.to_string(),
    })
}

/// Lowest `q`-power of each iterated integral paired with its index.
fn grading<A: Algebra>(pq: &qlax_core::Path<A>) -> Result<(Option<usize>, bool), CliError> {
    let ok = iterated_integrals(pq)?
        .iter()
        .enumerate()
        .all(|(i, a)| a.val().is_none_or(|v| v >= i));
    Ok((pq.val(), ok))
}

fn solve_report<A: Algebra>(
    prob: &LaxProblem<A>,
    backend: &str,
    text_of: impl Fn(&A) -> String,
    json_of: impl Fn(&A) -> Value,
) -> Result<Outcome, CliError> {
    let sol = lax_solve(prob)?;
    let residual = lax_residual(&sol.lq, &sol.pq)?;
    let report = ResidualReport::new(&residual, sol.lossy);
    let (val_p, graded) = grading(&sol.pq)?;
    let passed = report.is_zero();

    let mut text = format!(
        "backend {backend}, N = {}{}\nW =\n{}\nLq =\n{}\nval(Pq) = {}, iterated integrals graded: {}\nresidual: ",
        prob.order(),
        if sol.lossy { " (P truncated)" } else { "" },
        path_text(&sol.w, &text_of),
        path_text(&sol.lq, &text_of),
        val_p.map_or("none".into(), |v| v.to_string()),
        graded,
    );
    if passed {
        text.push_str("zero\n");
    } else {
        for (k, ts) in &report.orders {
            for (j, norm) in ts {
                text.push_str(&format!("\n  q^{k} t^{j}: {norm}"));
            }
        }
        text.push('\n');
    }
    text.push_str(verdict(passed));

    Ok(Outcome {
        passed,
        json: json!({
            "schema": "qlax.report/1",
            "command": "lax-solve",
            "backend": backend,
            "N": prob.order(),
            "pass": passed,
            "W": path_json(&sol.w, &json_of),
            "Lq": path_json(&sol.lq, &json_of),
            "val_Pq": val_p,
            "graded": graded,
            "residual": report.to_json(),
        }),
        text,
    })
}

pub fn cmd_lax_solve(settings: &Settings, file: &FsPath) -> Result<Outcome, CliError> {
    let pf = ProblemFile::load(file)?;
    let order = pf.order(settings.qorder)?;
    match pf.backend {
        Backend::Psdo => {
            let prob = pf.psdo_problem(order)?;
            solve_report(&prob, "psdo", |a| a.text(), |a| a.json())
        }
        Backend::Matrix => {
            let (prob, n) = pf.matrix_problem(order)?;
            solve_report(
                &prob,
                "matrix",
                |a| Sized(a, n).text(),
                |a| Sized(a, n).json(),
            )
        }
    }
}

fn load_probes<A>(
    settings: &Settings,
    parse: impl Fn(&Value, &str) -> Result<A, CliError>,
) -> Result<Vec<A>, CliError> {
    let Some(path) = &settings.probe_set else {
        return Ok(Vec::new());
    };
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let v: Value = serde_json::from_str(&text)?;
    let items = v.as_array().ok_or_else(|| {
        CliError::Validation("a probe set must be a JSON array of operators".into())
    })?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| parse(x, &format!("probe {i}")))
        .collect()
}

fn symmetry_report<A: Algebra>(
    prob: &LaxProblem<A>,
    s0: &BiOp<A>,
    probes: &Probes<A>,
    backend: &str,
    json_of: impl Fn(&A) -> Value,
) -> Result<Outcome, CliError> {
    let sol = lax_solve(prob)?;
    let sq = transport(s0, &sol.pq)?;
    let r3 = symmetry3_residual(&sq, &sol.pq)?;
    let sym3 = probes.annihilate(&r3);
    let r2 = symmetry2_residual(&sq, &sol.pq, &sol.lq)?;
    let report2 = ResidualReport::new(&r2, sol.lossy);
    let sym2 = report2.is_zero();
    let check = transported_solution_check(s0, prob)?;
    let passed = sym3 && sym2 && check.passed();

    let text = format!(
        "backend {backend}, N = {}, {} probes\nsymmetry equation (operator form): {}\nsymmetry equation (applied to Lq): {}\ntransported solution: {} (solves: {}, matches conjugated start: {})\n{}",
        prob.order(),
        probes.0.len(),
        verdict(sym3),
        verdict(sym2),
        verdict(check.passed()),
        check.solves,
        check.matches_conjugated,
        verdict(passed),
    );
    Ok(Outcome {
        passed,
        json: json!({
            "schema": "qlax.report/1",
            "command": "symmetry",
            "backend": backend,
            "N": prob.order(),
            "pass": passed,
            "S0": s0.to_json(&json_of),
            "probes": probes.0.len(),
            "symmetry3": sym3,
            "symmetry2": sym2,
            "symmetry2_residual": report2.to_json(),
            "transport": {
                "pass": check.passed(),
                "solves": check.solves,
                "matches_conjugated": check.matches_conjugated,
            },
        }),
        text,
    })
}

pub fn cmd_symmetry(settings: &Settings, file: &FsPath) -> Result<Outcome, CliError> {
    let pf = ProblemFile::load(file)?;
    let order = pf.order(settings.qorder)?;
    let mut rng = qlax_core::random::rng(settings.seed);
    match pf.backend {
        Backend::Psdo => {
            let prob = pf.psdo_problem(order)?;
            let s0 = match pf.psdo_symmetry()? {
                SymmetrySpec::Identity => BiOp::one(),
                SymmetrySpec::Random => BiOp::pair(
                    qlax_core::random::differential_operator(&mut rng, 1, 1, 2),
                    qlax_core::random::differential_operator(&mut rng, 1, 1, 2),
                ),
                SymmetrySpec::Pairs(b) => b,
            };
            let p0 = prob.path().coeff(0);
            let mut probes = psdo_probes(prob.initial(), &p0);
            probes.extend(load_probes(settings, psdo_value)?);
            symmetry_report(&prob, &s0, &probes, "psdo", |a| a.json())
        }
        Backend::Matrix => {
            let (prob, n) = pf.matrix_problem(order)?;
            let s0 = match pf.matrix_symmetry(n)? {
                SymmetrySpec::Identity => BiOp::one(),
                SymmetrySpec::Random => qlax_core::random::matrix_biop(&mut rng, n, 2, 3),
                SymmetrySpec::Pairs(b) => b,
            };
            let mut probes = matrix_probes(n);
            probes.extend(load_probes(settings, |v, what| {
                let (m, k) = matrix_value(v, what)?;
                if k != n {
                    return Err(CliError::Validation(format!("{what} is not {n}×{n}")));
                }
                Ok(m)
            })?);
            symmetry_report(&prob, &s0, &probes, "matrix", |a| Sized(a, n).json())
        }
    }
}

/// `qs` is a comma-separated list of rationals; `ref_n` defaults to `N + 6`.
pub fn cmd_convergence(
    settings: &Settings,
    file: &FsPath,
    qs: &str,
    ref_n: Option<usize>,
) -> Result<Outcome, CliError> {
    let pf = ProblemFile::load(file)?;
    if pf.backend != Backend::Matrix {
        return Err(CliError::Validation(
            "convergence needs a matrix problem: psdo symbols cannot be evaluated at a numeric q"
                .into(),
        ));
    }
    let order = pf.order(settings.qorder)?;
    let (prob, _) = pf.matrix_problem(order)?;
    let qs = qs
        .split(',')
        .map(|s| parse_rational(s.trim()))
        .collect::<Result<Vec<Rational>, _>>()?;
    if qs.is_empty() {
        return Err(CliError::Validation("--q needs at least one value".into()));
    }
    let report = convergence_study(&prob, &qs, ref_n.unwrap_or(order + 6))?;

    let mut text = format!("N = {}, refN = {}\n", report.n, report.ref_n);
    for p in &report.points {
        text.push_str(&format!(
            "q = {}: error {:.6e}{}\n",
            p.q,
            qlax_core::rational::to_f64(&p.error),
            p.ratio_to_prev
                .map_or(String::new(), |r| format!(", ratio {r:.4}")),
        ));
    }
    text.push_str(&format!(
        "expected ratio for halved q: {}",
        1u64 << (report.n + 1)
    ));
    Ok(Outcome {
        passed: true,
        json: report.to_json(),
        text,
    })
}
