// Shared by the integration targets. Not every target uses every helper.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_quasilin")
}

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn quasilin")
}

pub fn schema() -> Value {
    let text = std::fs::read_to_string(crate_dir().join("schema/report.schema.json")).expect("schema file");
    serde_json::from_str(&text).expect("schema parses")
}

/// Validates `doc` against the keyword subset the report schema uses:
/// type, const, enum, required, properties, additionalProperties (false),
/// items, minLength, minimum. Unknown keywords in the schema are an error
/// so the subset cannot silently drift.
pub fn validate(schema: &Value, doc: &Value) -> Result<(), String> {
    check(schema, doc, "$")
}

const KNOWN: &[&str] = &[
    "$schema",
    "$id",
    "title",
    "type",
    "const",
    "enum",
    "required",
    "properties",
    "additionalProperties",
    "items",
    "minLength",
    "minimum",
];

fn type_ok(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "number" => v.is_number(),
        "integer" => v.is_u64() || v.is_i64(),
        "null" => v.is_null(),
        "boolean" => v.is_boolean(),
        _ => false,
    }
}

fn check(s: &Value, v: &Value, at: &str) -> Result<(), String> {
    let s = s.as_object().ok_or_else(|| format!("{}: schema node is not an object", at))?;
    if let Some(k) = s.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(format!("{}: unsupported schema keyword `{}`", at, k));
    }
    if let Some(t) = s.get("type") {
        let ok = match t {
            Value::String(t) => type_ok(t, v),
            Value::Array(ts) => ts.iter().filter_map(Value::as_str).any(|t| type_ok(t, v)),
            _ => return Err(format!("{}: bad `type`", at)),
        };
        if !ok {
            return Err(format!("{}: expected type {}, got {}", at, t, v));
        }
    }
    if let Some(c) = s.get("const") {
        if c != v {
            return Err(format!("{}: expected {}, got {}", at, c, v));
        }
    }
    if let Some(Value::Array(opts)) = s.get("enum") {
        if !opts.contains(v) {
            return Err(format!("{}: {} not in {:?}", at, v, opts));
        }
    }
    if let (Some(min), Some(n)) = (s.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if n < min {
            return Err(format!("{}: {} below {}", at, n, min));
        }
    }
    if let (Some(min), Some(text)) = (s.get("minLength").and_then(Value::as_u64), v.as_str()) {
        if (text.chars().count() as u64) < min {
            return Err(format!("{}: string shorter than {}", at, min));
        }
    }
    if let Some(obj) = v.as_object() {
        if let Some(Value::Array(req)) = s.get("required") {
            for k in req.iter().filter_map(Value::as_str) {
                if !obj.contains_key(k) {
                    return Err(format!("{}: missing `{}`", at, k));
                }
            }
        }
        let props = s.get("properties").and_then(Value::as_object);
        for (k, sub) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(ps) => check(ps, sub, &format!("{}.{}", at, k))?,
                None if s.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{}: unexpected `{}`", at, k));
                }
                None => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (s.get("items"), v.as_array()) {
        for (i, e) in arr.iter().enumerate() {
            check(items, e, &format!("{}[{}]", at, i))?;
        }
    }
    Ok(())
}

/// The report invariants the schema cannot express: tallies match the list.
pub fn tallies_match(doc: &Value) -> Result<(), String> {
    let verdicts = doc["verdicts"].as_array().ok_or("no verdicts")?;
    let pass = verdicts.iter().filter(|v| v["status"] == "PASS").count() as u64;
    let s = &doc["summary"];
    let got = (s["total"].as_u64(), s["pass"].as_u64(), s["fail"].as_u64());
    let want = (Some(verdicts.len() as u64), Some(pass), Some(verdicts.len() as u64 - pass));
    if got != want {
        return Err(format!("summary {:?} does not match verdict list {:?}", got, want));
    }
    Ok(())
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).expect("write fixture");
    p
}
