//! Plain-text problem files.
//!
//! One `key: values` pair per line, `#` starts a comment line:
//!
//! ```text
//! n: 2
//! m: 1
//! A.first_col: 4+0j -1+0j
//! A.first_row: 4+0j -1+0j
//! B.first_col: 3+0j
//! B.first_row: 3+0j
//! C[0]: 6+0j
//! C[1]: 6+0j
//! X_true[0]: 1+0j        (optional, all rows or none)
//! meta.generator: example3
//! meta.r: 0.1
//! ```
//!
//! Complex entries are written `re+imj` with shortest round-trip decimals, so
//! save followed by load reproduces every value exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use cscs_core::problems::{ProblemInstance, ProblemMeta};
use cscs_core::{Complex64, DenseMatrix, ToeplitzSpec};

use crate::error::{BenchError, Result};

const HEADER: &str = "# cscs problem file v1";

fn fmt_real(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}j", fmt_real(z.re), fmt_real(z.im.abs()))
}

/// Accepts `re+imj`, `re-imj` and bare reals.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('j') else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))?;
    let re = body[..split].parse().ok()?;
    let im = body[split..].parse().ok()?;
    Some(Complex64::new(re, im))
}

fn join(values: impl IntoIterator<Item = Complex64>) -> String {
    values.into_iter().map(format_complex).collect::<Vec<_>>().join(" ")
}

fn write_rows(out: &mut String, name: &str, m: &DenseMatrix) {
    for (i, row) in m.row_iter().enumerate() {
        let _ = writeln!(out, "{name}[{i}]: {}", join(row.iter().copied()));
    }
}

pub fn render_problem(p: &ProblemInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "n: {}", p.n());
    let _ = writeln!(out, "m: {}", p.m());
    let _ = writeln!(out, "A.first_col: {}", join(p.a.first_col().iter().copied()));
    let _ = writeln!(out, "A.first_row: {}", join(p.a.first_row().iter().copied()));
    let _ = writeln!(out, "B.first_col: {}", join(p.b.first_col().iter().copied()));
    let _ = writeln!(out, "B.first_row: {}", join(p.b.first_row().iter().copied()));
    write_rows(&mut out, "C", &p.c);
    if let Some(x) = &p.x_true {
        write_rows(&mut out, "X_true", x);
    }
    let _ = writeln!(out, "meta.generator: {}", p.meta.generator);
    for (k, v) in &p.meta.params {
        let _ = writeln!(out, "meta.{k}: {v}");
    }
    out
}

pub fn save_problem_file(p: &ProblemInstance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_problem(p)).map_err(|e| BenchError::io(path, e))
}

pub fn load_problem_file(path: impl AsRef<Path>) -> Result<ProblemInstance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    parse_problem(&text)
}

struct Field<'a> {
    line: usize,
    value: &'a str,
}

struct Fields<'a>(BTreeMap<String, Field<'a>>);

impl<'a> Fields<'a> {
    fn get(&self, key: &str) -> Result<&Field<'a>> {
        self.0.get(key).ok_or_else(|| BenchError::MissingField(key.to_string()))
    }

    fn order(&self, key: &str) -> Result<usize> {
        let f = self.get(key)?;
        match f.value.parse::<usize>() {
            Ok(k) if k > 0 => Ok(k),
            _ => Err(parse_error(f.line, key, format!("expected a positive integer, got `{}`", f.value))),
        }
    }

    fn vector(&self, key: &str, len: usize) -> Result<Vec<Complex64>> {
        let f = self.get(key)?;
        let values = f
            .value
            .split_whitespace()
            .enumerate()
            .map(|(i, tok)| {
                parse_complex(tok)
                    .ok_or_else(|| parse_error(f.line, key, format!("entry {i}: `{tok}` is not a complex number")))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != len {
            return Err(parse_error(f.line, key, format!("expected {len} entries, found {}", values.len())));
        }
        Ok(values)
    }

    fn matrix(&self, name: &str, rows: usize, cols: usize) -> Result<DenseMatrix> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            data.extend(self.vector(&format!("{name}[{i}]"), cols)?);
        }
        Ok(DenseMatrix::from_row_slice(rows, cols, &data))
    }

    fn has_prefix(&self, prefix: &str) -> bool {
        self.0.keys().any(|k| k.starts_with(prefix))
    }
}

fn parse_error(line: usize, field: &str, message: impl Into<String>) -> BenchError {
    BenchError::Parse { line, field: field.to_string(), message: message.into() }
}

fn toeplitz(fields: &Fields, name: &str, order: usize) -> Result<ToeplitzSpec> {
    let col_key = format!("{name}.first_col");
    let row_key = format!("{name}.first_row");
    let col = fields.vector(&col_key, order)?;
    let row = fields.vector(&row_key, order)?;
    if col[0] != row[0] {
        return Err(BenchError::Invariant(format!(
            "{col_key}[0] = {} differs from {row_key}[0] = {} (line {})",
            format_complex(col[0]),
            format_complex(row[0]),
            fields.get(&row_key)?.line
        )));
    }
    ToeplitzSpec::new(col, row).map_err(|e| BenchError::Invariant(format!("{name}: {e}")))
}

pub fn parse_problem(text: &str) -> Result<ProblemInstance> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once(':') else {
            return Err(parse_error(line, trimmed, "expected `key: value`"));
        };
        let key = key.trim();
        if map.insert(key.to_string(), Field { line, value: value.trim() }).is_some() {
            return Err(parse_error(line, key, "duplicate field"));
        }
    }
    let fields = Fields(map);

    let known = |k: &str| {
        matches!(k, "n" | "m" | "A.first_col" | "A.first_row" | "B.first_col" | "B.first_row")
            || k.starts_with("C[")
            || k.starts_with("X_true[")
            || k.starts_with("meta.")
    };
    if let Some((key, f)) = fields.0.iter().find(|(k, _)| !known(k)) {
        return Err(parse_error(f.line, key, "unknown field"));
    }

    let n = fields.order("n")?;
    let m = fields.order("m")?;
    let a = toeplitz(&fields, "A", n)?;
    let b = toeplitz(&fields, "B", m)?;
    let c = fields.matrix("C", n, m)?;
    let x_true = if fields.has_prefix("X_true[") { Some(fields.matrix("X_true", n, m)?) } else { None };
    for (key, f) in &fields.0 {
        let row = key
            .strip_prefix("C[")
            .or_else(|| key.strip_prefix("X_true["))
            .and_then(|r| r.strip_suffix(']'))
            .map(|r| r.parse::<usize>());
        if matches!(row, Some(Ok(i)) if i >= n) || matches!(row, Some(Err(_))) {
            return Err(parse_error(f.line, key, format!("row index outside 0..{n}")));
        }
    }

    let mut meta = ProblemMeta::new(fields.0.get("meta.generator").map_or("file", |f| f.value));
    for (key, f) in &fields.0 {
        if let Some(k) = key.strip_prefix("meta.") {
            if k != "generator" {
                meta = meta.with(k, f.value);
            }
        }
    }
    ProblemInstance::new(a, b, c, meta, x_true).map_err(|e| BenchError::Invariant(e.to_string()))
}
