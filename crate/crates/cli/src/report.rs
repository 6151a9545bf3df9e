//! Report assembly and the two output encodings.
//!
//! Reals are emitted as strings in C `%.12g` style so the bytes depend only on
//! the computed values, never on a float printer's shortest-round-trip choice.

use serde_json::{json, Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `%.12g`: twelve significant digits, trailing zeros dropped, exponent form
/// when the decimal exponent is below −4 or at least 12. Negative zero prints
/// as `0`.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let fixed = format!("{x:.*}", (11 - exp) as usize);
        trim_zeros(&fixed).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn real(x: f64) -> Value {
    Value::String(fmt_real(x))
}

pub fn reals(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| real(x)).collect())
}

/// One invariant evaluated by a command.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: String,
    pub relation: &'static str,
    pub bound: String,
}

impl Check {
    /// `value ≤ bound`; NaN fails.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            pass: value <= bound,
            value: fmt_real(value),
            relation: "<=",
            bound: fmt_real(bound),
        }
    }

    /// `value > bound`; NaN fails.
    pub fn above(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            pass: value > bound,
            value: fmt_real(value),
            relation: ">",
            bound: fmt_real(bound),
        }
    }

    pub fn count(name: impl Into<String>, value: usize, expected: usize) -> Self {
        Self {
            name: name.into(),
            pass: value == expected,
            value: value.to_string(),
            relation: "==",
            bound: expected.to_string(),
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            pass: ok,
            value: ok.to_string(),
            relation: "==",
            bound: "true".into(),
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "pass": self.pass,
            "value": self.value,
            "relation": self.relation,
            "bound": self.bound,
        })
    }
}

/// Output of a single command.
#[derive(Debug, Clone)]
pub struct Section {
    pub command: &'static str,
    pub checks: Vec<Check>,
    pub payload: Value,
}

impl Section {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn to_json(&self) -> Value {
        let mut checks = Map::new();
        for c in &self.checks {
            let previous = checks.insert(c.name.clone(), c.to_json());
            assert!(previous.is_none(), "duplicate check name {}", c.name);
        }
        json!({
            "pass": self.pass(),
            "checks": checks,
            "payload": self.payload,
        })
    }
}

#[derive(Debug, Clone)]
pub struct EmittedReport {
    pub command: &'static str,
    pub config: Value,
    pub sections: Vec<Section>,
}

impl EmittedReport {
    pub fn pass(&self) -> bool {
        self.sections.iter().all(Section::pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&'static str, &Check)> {
        self.sections.iter().flat_map(|s| {
            s.checks
                .iter()
                .filter(|c| !c.pass)
                .map(move |c| (s.command, c))
        })
    }

    pub fn to_json(&self) -> Value {
        let mut sections = Map::new();
        for s in &self.sections {
            sections.insert(s.command.to_owned(), s.to_json());
        }
        json!({
            "command": self.command,
            "config": self.config,
            "version": VERSION,
            "pass": self.pass(),
            "sections": sections,
        })
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }

    /// Header row then one `path<TAB>value` row per leaf. Path segments are
    /// object keys or array indices joined by `.`.
    pub fn render_tsv(&self) -> String {
        let mut rows = Vec::new();
        flatten(&self.to_json(), String::new(), &mut rows);
        let mut out = String::from("path\tvalue\n");
        for (path, value) in rows {
            out.push_str(&path);
            out.push('\t');
            out.push_str(&value);
            out.push('\n');
        }
        out
    }
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

fn flatten(v: &Value, path: String, rows: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if path.is_empty() {
            clean(key)
        } else {
            format!("{path}.{}", clean(key))
        }
    };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(child, join(k), rows);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(child, join(&i.to_string()), rows);
            }
        }
        Value::String(s) => rows.push((path, clean(s))),
        Value::Null => rows.push((path, String::new())),
        other => rows.push((path, other.to_string())),
    }
}
