//! Shared helpers for the CLI tests: running the binary and checking
//! documents against the shipped schemas.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn problem(name: &str) -> PathBuf {
    root().join("problems").join(name)
}

pub fn qlax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlax"))
        .args(args)
        .env_remove("QLAX_FORMAT")
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

pub fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

pub fn load_schema(file: &str) -> Value {
    let text = std::fs::read_to_string(root().join("schemas").join(file)).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Validates `doc` against `schemas/<file>`, returning every violation.
///
/// Supports the keywords the shipped schemas use; any other keyword panics
/// so that a constraint is never skipped silently.
pub fn validate(file: &str, doc: &Value) -> Vec<String> {
    let schema = load_schema(file);
    let mut errors = Vec::new();
    check(file, &schema, doc, "$", &mut errors);
    errors
}

fn resolve(file: &str, reference: &str) -> (String, Value) {
    let (target, pointer) = reference.split_once('#').unwrap_or((reference, ""));
    let target = if target.is_empty() { file } else { target };
    let root = load_schema(target);
    let node = if pointer.is_empty() {
        root
    } else {
        root.pointer(pointer)
            .unwrap_or_else(|| panic!("dangling $ref {reference}"))
            .clone()
    };
    (target.to_string(), node)
}

fn type_ok(name: &str, v: &Value) -> bool {
    match name {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        other => panic!("unknown type {other}"),
    }
}

fn check(file: &str, schema: &Value, v: &Value, at: &str, errors: &mut Vec<String>) {
    let obj = schema.as_object().expect("schema node is an object");
    for (key, rule) in obj {
        match key.as_str() {
            "$schema" | "$id" | "title" | "description" | "$defs" => {}
            "$ref" => {
                let (f, node) = resolve(file, rule.as_str().unwrap());
                check(&f, &node, v, at, errors);
            }
            "type" => {
                let ok = match rule {
                    Value::String(t) => type_ok(t, v),
                    Value::Array(ts) => ts.iter().any(|t| type_ok(t.as_str().unwrap(), v)),
                    _ => panic!("bad type rule"),
                };
                if !ok {
                    errors.push(format!("{at}: expected type {rule}, got {v}"));
                }
            }
            "const" => {
                if v != rule {
                    errors.push(format!("{at}: expected {rule}, got {v}"));
                }
            }
            "enum" => {
                if !rule.as_array().unwrap().contains(v) {
                    errors.push(format!("{at}: {v} not in {rule}"));
                }
            }
            "pattern" => {
                if let Some(text) = v.as_str() {
                    let re = regex::Regex::new(rule.as_str().unwrap()).expect("valid pattern");
                    if !re.is_match(text) {
                        errors.push(format!("{at}: {text:?} does not match {rule}"));
                    }
                }
            }
            "minimum" => {
                if let Some(x) = v.as_f64() {
                    if x < rule.as_f64().unwrap() {
                        errors.push(format!("{at}: {x} below {rule}"));
                    }
                }
            }
            "oneOf" | "anyOf" => {
                let matching = rule
                    .as_array()
                    .unwrap()
                    .iter()
                    .filter(|s| {
                        let mut e = Vec::new();
                        check(file, s, v, at, &mut e);
                        e.is_empty()
                    })
                    .count();
                if matching == 0 || (key == "oneOf" && matching > 1) {
                    errors.push(format!("{at}: {matching} {key} branches match"));
                }
            }
            "required" => {
                if let Some(o) = v.as_object() {
                    for r in rule.as_array().unwrap() {
                        if !o.contains_key(r.as_str().unwrap()) {
                            errors.push(format!("{at}: missing {r}"));
                        }
                    }
                }
            }
            "properties" => {
                if let Some(o) = v.as_object() {
                    for (k, sub) in rule.as_object().unwrap() {
                        if let Some(x) = o.get(k) {
                            check(file, sub, x, &format!("{at}.{k}"), errors);
                        }
                    }
                }
            }
            "additionalProperties" => {
                assert_eq!(rule, &Value::Bool(false), "only `false` is supported");
                let known = obj.get("properties").and_then(Value::as_object);
                if let Some(o) = v.as_object() {
                    for k in o.keys() {
                        if !known.is_some_and(|p| p.contains_key(k)) {
                            errors.push(format!("{at}: unexpected property {k}"));
                        }
                    }
                }
            }
            "items" => {
                if let Some(items) = v.as_array() {
                    for (i, x) in items.iter().enumerate() {
                        check(file, rule, x, &format!("{at}[{i}]"), errors);
                    }
                }
            }
            other => panic!("schema keyword {other} is not supported by the test validator"),
        }
    }
}
