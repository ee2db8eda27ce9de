use serde_json::{json, Map, Value};

use crate::config::OutputFormat;
use crate::run::BenchRecord;

pub const COLUMNS: [&str; 11] = ["method", "problem", "n", "m", "alpha", "beta", "omega", "iters", "resid", "seconds", "status"];

/// Six significant digits in the style of C's `%g`, independent of locale.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // Rounding decides the exponent, so format first and read it back.
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("LowerExp always has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn optional(x: Option<f64>) -> String {
    x.map(sig6).unwrap_or_default()
}

/// The eleven cells of a record, as text.
fn cells(r: &BenchRecord) -> [String; 11] {
    [
        r.method.to_string(),
        r.problem.clone(),
        r.n.to_string(),
        r.m.to_string(),
        optional(r.alpha),
        optional(r.beta),
        optional(r.omega),
        r.iterations.to_string(),
        sig6(r.residual),
        sig6(r.seconds),
        r.status.to_string(),
    ]
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_number(x: f64) -> Value {
    // Round through the printed form so JSON carries the same payload as the
    // text formats; non-finite values become null.
    sig6(x).parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number)
}

fn json_record(r: &BenchRecord) -> Value {
    let opt = |x: Option<f64>| x.map_or(Value::Null, json_number);
    let mut obj = Map::new();
    obj.insert("method".into(), json!(r.method.as_str()));
    obj.insert("problem".into(), json!(r.problem));
    obj.insert("n".into(), json!(r.n));
    obj.insert("m".into(), json!(r.m));
    obj.insert("alpha".into(), opt(r.alpha));
    obj.insert("beta".into(), opt(r.beta));
    obj.insert("omega".into(), opt(r.omega));
    obj.insert("iters".into(), json!(r.iterations));
    obj.insert("resid".into(), json_number(r.residual));
    obj.insert("seconds".into(), json_number(r.seconds));
    obj.insert("status".into(), json!(r.status.as_str()));
    if let Some(detail) = &r.detail {
        obj.insert("detail".into(), json!(detail));
    }
    Value::Object(obj)
}

pub fn emit_report(records: &[BenchRecord], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = COLUMNS.join(",");
            out.push('\n');
            for r in records {
                let row: Vec<String> = cells(r).iter().map(|c| csv_field(c)).collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
        OutputFormat::Markdown => {
            let mut out = format!("| {} |\n", COLUMNS.join(" | "));
            out.push_str(&format!("|{}\n", "---|".repeat(COLUMNS.len())));
            for r in records {
                let row: Vec<String> = cells(r).iter().map(|c| c.replace('|', "\\|")).collect();
                out.push_str(&format!("| {} |\n", row.join(" | ")));
            }
            out
        }
        OutputFormat::Json => {
            let list: Vec<Value> = records.iter().map(json_record).collect();
            let mut out = serde_json::to_string_pretty(&list).expect("records serialize");
            out.push('\n');
            out
        }
    }
}
