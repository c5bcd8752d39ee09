//! JSON and text reports.
//!
//! Objects are `serde_json::Map`s (key-sorted) and floats print with 17
//! significant digits, so equal inputs give byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub input: Value,
    pub checks: Vec<Check>,
    pub residuals: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, Value>,
    pub results: Value,
    pub exit_status: i32,
}

impl Report {
    /// `input` should be an object; the command name is added to it.
    pub fn new(command: &'static str, mut input: Value) -> Self {
        if let Value::Object(map) = &mut input {
            map.insert("command".into(), json!(command));
        }
        Report {
            command,
            input,
            checks: Vec::new(),
            residuals: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            results: Value::Null,
            exit_status: 0,
        }
    }

    /// Record `residual <= tolerance` as a named check.
    pub fn check(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) -> bool {
        let passed = residual <= tolerance;
        self.checks.push(Check {
            name: name.into(),
            residual,
            tolerance,
            passed,
        });
        passed
    }

    /// Keep the largest value seen under `name`; NaN is sticky.
    pub fn residual(&mut self, name: impl Into<String>, value: f64) {
        let slot = self.residuals.entry(name.into()).or_insert(value);
        if value.is_nan() || value > *slot {
            *slot = value;
        }
    }

    /// Exit status 1 if any recorded check failed.
    pub fn finish(mut self) -> Self {
        if self.checks.iter().any(|c| !c.passed) {
            self.exit_status = 1;
        }
        self
    }

    pub fn verdict(&mut self, name: impl Into<String>, value: impl Into<Value>) {
        self.verdicts.insert(name.into(), value.into());
    }

    pub fn to_value(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "residual": c.residual, "tolerance": c.tolerance, "passed": c.passed}))
            .collect();
        let residuals: Map<String, Value> = self.residuals.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let verdicts: Map<String, Value> = self.verdicts.clone().into_iter().collect();
        json!({
            "tool_version": TOOL_VERSION,
            "input": self.input,
            "checks": checks,
            "residuals": residuals,
            "verdicts": verdicts,
            "results": self.results,
            "exit_status": self.exit_status,
        })
    }

    pub fn to_json(&self) -> String {
        to_json(&self.to_value())
    }

    /// Human-readable summary; the numeric results stay in the JSON form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "curvkit {} {}", TOOL_VERSION, self.command);
        if !self.checks.is_empty() {
            let _ = writeln!(out, "checks:");
            for c in &self.checks {
                let mark = if c.passed { "pass" } else { "FAIL" };
                let _ = writeln!(out, "  [{mark}] {:<40} {:.3e} (tol {:.1e})", c.name, c.residual, c.tolerance);
            }
        }
        if !self.residuals.is_empty() {
            let _ = writeln!(out, "residuals:");
            for (k, v) in &self.residuals {
                let _ = writeln!(out, "  {k:<42} {v:.6e}");
            }
        }
        if !self.verdicts.is_empty() {
            let _ = writeln!(out, "verdicts:");
            for (k, v) in &self.verdicts {
                let _ = writeln!(out, "  {k:<42} {v}");
            }
        }
        let _ = writeln!(out, "exit status: {}", self.exit_status);
        out
    }
}

/// Pretty printer that writes every float with 17 significant digits.
struct Sig17(PrettyFormatter<'static>);

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser).expect("serializing a Value into memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// Row-major data as nested arrays with the given shape.
pub fn nested(data: &[f64], shape: &[usize]) -> Value {
    match shape {
        [] => json!(data[0]),
        [_] => json!(data),
        [first, rest @ ..] => {
            let stride: usize = rest.iter().product();
            Value::Array((0..*first).map(|k| nested(&data[k * stride..(k + 1) * stride], rest)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits_and_keys_sort() {
        let text = to_json(&json!({"b": 0.1, "a": [1.0, -2.5e-300]}));
        assert_eq!(
            text,
            "{\n  \"a\": [\n    1.0000000000000000e0,\n    -2.5000000000000000e-300\n  ],\n  \"b\": 1.0000000000000001e-1\n}\n"
        );
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["b"].as_f64(), Some(0.1));
    }

    #[test]
    fn nan_serializes_as_null() {
        assert_eq!(to_json(&json!({"x": f64::NAN})), "{\n  \"x\": null\n}\n");
    }

    #[test]
    fn nested_shapes() {
        let v = nested(&[1.0, 2.0, 3.0, 4.0], &[2, 2]);
        assert_eq!(v, json!([[1.0, 2.0], [3.0, 4.0]]));
        assert_eq!(nested(&[5.0], &[]), json!(5.0));
    }

    #[test]
    fn residuals_keep_the_maximum() {
        let mut r = Report::new("x", json!({}));
        assert_eq!(r.input["command"], "x");
        r.residual("a", 1.0);
        r.residual("a", 0.5);
        r.residual("a", 2.0);
        assert_eq!(r.residuals["a"], 2.0);
        assert!(!r.check("c", 1.0, 0.5));
        assert!(r.to_text().contains("[FAIL] c"));
    }
}
