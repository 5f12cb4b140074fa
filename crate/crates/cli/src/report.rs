//! The JSON report envelope and its canonical rendering.

use std::fmt::Write;

use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// Everything a command produced, plus what is needed to reproduce it.
pub struct Report {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub results: Value,
    pub tolerances: Value,
    pub seed: u64,
}

impl Report {
    pub fn to_value(&self) -> Value {
        serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "results": self.results,
            "tolerances": self.tolerances,
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }
}

/// SHA-256 over the argument vector and the bytes of every file read, in order.
pub fn digest(argv: &[String], inputs: &[(String, Vec<u8>)]) -> String {
    let mut h = Sha256::new();
    for a in argv {
        h.update((a.len() as u64).to_le_bytes());
        h.update(a.as_bytes());
    }
    for (name, bytes) in inputs {
        h.update((name.len() as u64).to_le_bytes());
        h.update(name.as_bytes());
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    format!("{:x}", h.finalize())
}

fn number(n: &serde_json::Number) -> String {
    if n.is_i64() || n.is_u64() {
        n.to_string()
    } else {
        format!("{:.16e}", n.as_f64().expect("json numbers are finite"))
    }
}

/// Pretty JSON with sorted keys and every float at 17 significant digits.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&number(n)),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(xs) if xs.is_empty() => out.push_str("[]"),
        Value::Array(xs) if xs.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push('[');
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(x, indent, out);
            }
            out.push(']');
        }
        Value::Array(xs) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            for (i, k) in keys.iter().enumerate() {
                let _ = write!(out, "{}{}: ", pad(indent + 1), Value::String((*k).clone()));
                write_value(&m[*k], indent + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// Flat `path = value` lines for `--format text`.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    flatten("", v, &mut out);
    out
}

fn flatten(path: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            for k in keys {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten(&p, &m[k], out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), x, out);
            }
        }
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            let _ = writeln!(out, "{path} = {:.6e}", n.as_f64().unwrap_or(f64::NAN));
        }
        _ => {
            let mut s = String::new();
            write_value(v, 0, &mut s);
            let _ = writeln!(out, "{path} = {s}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_carry_seventeen_digits() {
        let s = render(&json!({"b": 0.1, "a": 3}));
        assert_eq!(s, "{\n  \"a\": 3,\n  \"b\": 1.0000000000000001e-1\n}\n");
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"].as_f64(), Some(0.1));
    }

    #[test]
    fn digest_depends_on_file_contents() {
        let argv = vec!["x".to_string()];
        let a = digest(&argv, &[("f".into(), b"1".to_vec())]);
        let b = digest(&argv, &[("f".into(), b"2".to_vec())]);
        assert_ne!(a, b);
        assert_eq!(a.len(), 64);
    }
}
