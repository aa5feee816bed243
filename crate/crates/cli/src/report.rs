//! Deterministic output documents.
//!
//! Every command produces either a JSON object or a CSV table. Both carry the
//! same three metadata fields so any saved output can be traced back to the
//! exact invocation that produced it: the crate version, a short hash of the
//! parsed configuration, and the seed. JSON output puts them in the top-level
//! object; CSV output puts them in `# key=value` comment lines above the
//! header row.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Output format selected by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// First 12 hex digits of SHA-256 over the canonical `key=value` rendering of
/// the parsed arguments. Key order is fixed by the caller, so equal
/// invocations hash equally and the hash changes whenever any argument does.
pub fn config_hash(parts: &[(&str, String)]) -> String {
    let canon = parts
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ");
    let digest = Sha256::digest(canon.as_bytes());
    let mut hex = String::with_capacity(12);
    for byte in &digest[..6] {
        write!(hex, "{byte:02x}").expect("writing to a String cannot fail");
    }
    hex
}

/// Metadata stamped on every document.
#[derive(Debug, Clone)]
pub struct Meta {
    pub command: &'static str,
    pub config_hash: String,
    pub seed: u64,
}

impl Meta {
    /// `parts` lists the command's arguments in declaration order; the
    /// command name and seed are folded into the hash automatically.
    pub fn new(command: &'static str, seed: u64, parts: &[(&str, String)]) -> Self {
        let mut all = vec![("cmd", command.to_string())];
        all.extend(parts.iter().map(|(k, v)| (*k, v.clone())));
        all.push(("seed", seed.to_string()));
        Meta {
            command,
            config_hash: config_hash(&all),
            seed,
        }
    }
}

/// A finished document ready to write.
#[derive(Debug, Clone)]
pub enum Rendered {
    Json(Value),
    Csv(String),
}

impl Rendered {
    /// Build a JSON document: metadata fields first (by construction they
    /// also sort first alphabetically), then the command's own fields.
    pub fn json(meta: &Meta, fields: Vec<(&str, Value)>) -> Rendered {
        let mut map = Map::new();
        map.insert("command".into(), Value::String(meta.command.into()));
        map.insert("config_hash".into(), Value::String(meta.config_hash.clone()));
        map.insert("seed".into(), Value::from(meta.seed));
        map.insert("version".into(), Value::String(VERSION.into()));
        for (k, v) in fields {
            map.insert(k.into(), v);
        }
        Rendered::Json(Value::Object(map))
    }

    /// Build a CSV document: `# key=value` metadata lines, optional extra
    /// metadata, a header row, then the data rows.
    pub fn csv(meta: &Meta, extra_meta: &[(&str, String)], header: &str, rows: &[String]) -> Rendered {
        let mut out = String::new();
        out.push_str(&format!("# command={}\n", meta.command));
        out.push_str(&format!("# version={VERSION}\n"));
        out.push_str(&format!("# config_hash={}\n", meta.config_hash));
        out.push_str(&format!("# seed={}\n", meta.seed));
        for (k, v) in extra_meta {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(header);
        out.push('\n');
        for row in rows {
            out.push_str(row);
            out.push('\n');
        }
        Rendered::Csv(out)
    }

    /// Serialize to the final byte string (pretty JSON or raw CSV), always
    /// ending in exactly one newline.
    pub fn to_output(&self) -> Result<String, CliError> {
        match self {
            Rendered::Json(v) => {
                let mut s = serde_json::to_string_pretty(v)?;
                s.push('\n');
                Ok(s)
            }
            Rendered::Csv(s) => Ok(s.clone()),
        }
    }

    /// Write to `out` if given, else stdout.
    pub fn emit(&self, out: Option<&Path>) -> Result<(), CliError> {
        let text = self.to_output()?;
        match out {
            Some(path) => std::fs::write(path, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

/// Command output before format dispatch. Object-shaped results render
/// naturally as JSON and fall back to `key,value` rows in CSV; table-shaped
/// results render naturally as CSV and fall back to an array of
/// string-valued row objects in JSON (strings keep exact integers exact).
#[derive(Debug, Clone)]
pub enum Doc {
    Object {
        fields: Vec<(&'static str, Value)>,
    },
    Table {
        columns: &'static [&'static str],
        rows: Vec<Vec<String>>,
        extra_meta: Vec<(&'static str, String)>,
    },
}

pub fn render(meta: &Meta, doc: Doc, format: Format) -> Result<Rendered, CliError> {
    match (doc, format) {
        (Doc::Object { fields }, Format::Json) => Ok(Rendered::json(meta, fields)),
        (Doc::Object { fields }, Format::Csv) => {
            let rows: Vec<String> = fields
                .iter()
                .map(|(k, v)| {
                    let cell = match v {
                        Value::String(s) => s.clone(),
                        other => serde_json::to_string(other).expect("serializing JSON values"),
                    };
                    format!("{k},{cell}")
                })
                .collect();
            Ok(Rendered::csv(meta, &[], "key,value", &rows))
        }
        (
            Doc::Table {
                columns,
                rows,
                extra_meta,
            },
            Format::Csv,
        ) => {
            let header = columns.join(",");
            let lines: Vec<String> = rows.iter().map(|r| r.join(",")).collect();
            Ok(Rendered::csv(meta, &extra_meta, &header, &lines))
        }
        (
            Doc::Table {
                columns,
                rows,
                extra_meta,
            },
            Format::Json,
        ) => {
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut obj = Map::new();
                    for (c, cell) in columns.iter().zip(r) {
                        obj.insert((*c).into(), Value::String(cell.clone()));
                    }
                    Value::Object(obj)
                })
                .collect();
            let mut fields: Vec<(&'static str, Value)> = extra_meta
                .iter()
                .map(|(k, v)| (*k, Value::String(v.clone())))
                .collect();
            fields.push(("rows", Value::Array(json_rows)));
            Ok(Rendered::json(meta, fields))
        }
    }
}

/// JSON value for an exact rational: `{"num": "...", "den": "...", "float": x}`.
/// Numerator and denominator are decimal strings because they routinely
/// exceed the integer range JSON numbers can hold exactly.
pub fn rational_value(r: &moments::ExactRational) -> Value {
    let mut map = Map::new();
    map.insert("num".into(), Value::String(r.numer().to_string()));
    map.insert("den".into(), Value::String(r.denom().to_string()));
    map.insert("float".into(), Value::from(moments::rational_to_f64(r)));
    Value::Object(map)
}
