//! Deterministic analysis reports: canonical JSON (sorted keys, controlled
//! float formatting) and a human-readable text rendering.
//!
//! JSON output is byte-deterministic for a fixed input and flag set: object
//! keys are sorted, exact values are printed as canonical expression strings,
//! and the only floating-point numbers are flow residuals, printed with 17
//! significant digits. Wall-clock timings appear only in the text format.

use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// A JSON value with canonical rendering.
#[derive(Clone, Debug, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    /// Rendered with 17 significant digits (used only for flow residuals).
    Float(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(BTreeMap<String, Json>),
}

impl Json {
    pub fn obj(pairs: Vec<(&str, Json)>) -> Json {
        Json::Obj(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(n) => {
                let _ = write!(out, "{n}");
            }
            Json::Float(x) => {
                if x.is_finite() {
                    let _ = write!(out, "{:.16e}", x);
                } else if x.is_nan() {
                    out.push_str("\"nan\"");
                } else if *x > 0.0 {
                    out.push_str("\"inf\"");
                } else {
                    out.push_str("\"-inf\"");
                }
            }
            Json::Str(s) => write_json_string(out, s),
            Json::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Obj(map) => {
                out.push('{');
                for (i, (k, v)) in map.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_json_string(out, k);
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }
}

fn write_json_string(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// One invariant computation inside a report.
#[derive(Clone, Debug)]
pub struct ReportEntry {
    pub name: String,
    pub verdict: String,
    /// Printed certificate or witness, when one exists.
    pub certificate: Option<String>,
    /// The bounds the verdict was computed under; every entry carries them.
    pub bounds: BTreeMap<String, i64>,
    /// Extra entry-specific values (exact strings, integers, flow floats).
    pub details: BTreeMap<String, Json>,
    /// Wall time in milliseconds; text output only, never in JSON.
    pub wall_ms: u128,
}

impl ReportEntry {
    pub fn new(name: &str, verdict: impl Into<String>) -> Self {
        ReportEntry {
            name: name.to_string(),
            verdict: verdict.into(),
            certificate: None,
            bounds: BTreeMap::new(),
            details: BTreeMap::new(),
            wall_ms: 0,
        }
    }

    pub fn with_bound(mut self, key: &str, value: i64) -> Self {
        self.bounds.insert(key.to_string(), value);
        self
    }

    pub fn with_certificate(mut self, cert: impl Into<String>) -> Self {
        self.certificate = Some(cert.into());
        self
    }

    pub fn with_detail(mut self, key: &str, value: Json) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    fn to_json(&self) -> Json {
        let mut map = BTreeMap::new();
        map.insert("name".to_string(), Json::Str(self.name.clone()));
        map.insert("verdict".to_string(), Json::Str(self.verdict.clone()));
        if let Some(c) = &self.certificate {
            map.insert("certificate".to_string(), Json::Str(c.clone()));
        }
        map.insert(
            "bounds".to_string(),
            Json::Obj(self.bounds.iter().map(|(k, v)| (k.clone(), Json::Int(*v))).collect()),
        );
        if !self.details.is_empty() {
            map.insert(
                "details".to_string(),
                Json::Obj(self.details.clone().into_iter().collect()),
            );
        }
        Json::Obj(map)
    }
}

/// Structured result of an analysis run over one input.
#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub version: String,
    pub input_digest: String,
    pub name: String,
    pub entries: Vec<ReportEntry>,
}

impl AnalysisReport {
    pub fn new(name: &str, input: &[u8]) -> Self {
        AnalysisReport {
            version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest: digest_hex(input),
            name: name.to_string(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, entry: ReportEntry) {
        self.entries.push(entry);
    }

    pub fn to_json(&self) -> Json {
        Json::obj(vec![
            ("entries", Json::Arr(self.entries.iter().map(|e| e.to_json()).collect())),
            ("input", Json::Str(self.input_digest.clone())),
            ("name", Json::Str(self.name.clone())),
            ("version", Json::Str(self.version.clone())),
        ])
    }

    pub fn render_json(&self) -> String {
        self.to_json().render()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (input {})", self.name, self.input_digest);
        for e in &self.entries {
            let _ = write!(out, "  {:<28} {}", e.name, e.verdict);
            if !e.bounds.is_empty() {
                let bounds: Vec<String> =
                    e.bounds.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = write!(out, "  [{}]", bounds.join(", "));
            }
            let _ = writeln!(out, "  ({} ms)", e.wall_ms);
            if let Some(c) = &e.certificate {
                let _ = writeln!(out, "      certificate: {c}");
            }
            for (k, v) in &e.details {
                let _ = writeln!(out, "      {k}: {}", v.render());
            }
        }
        out
    }
}

pub fn digest_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    let mut hex = String::with_capacity(2 * out.len() + 7);
    hex.push_str("sha256:");
    for b in out {
        let _ = write!(hex, "{b:02x}");
    }
    hex
}
