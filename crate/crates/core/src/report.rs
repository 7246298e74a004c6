//! Versioned JSON envelopes and CSV tables.
//!
//! Floats are rounded to 12 significant digits before serialization, so the
//! same inputs always produce byte-identical output.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::Result;
use crate::index_classify::{HankelRow, SchattenRow};
use crate::toeplitz_ops::SweepRow;
use crate::two_projections::PathSample;

pub const SCHEMA: &str = "hgeo/1";
pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().unwrap_or(0.0));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

/// `{"schema": "hgeo/1", "command": .., "input": .., "result": ..}` with rounded floats.
pub fn envelope(command: &str, input: Value, result: &impl Serialize) -> Result<Value> {
    Ok(round_value(json!({
        "schema": SCHEMA,
        "command": command,
        "input": input,
        "result": serde_json::to_value(result)?,
    })))
}

pub fn to_json_string(v: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn fmt(x: f64) -> String {
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

pub fn write_sweep_csv(w: impl Write, rows: &[SweepRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "s_max", "s_min", "gamma", "kernel_dim"])?;
    for r in rows {
        out.write_record([r.n.to_string(), fmt(r.s_max), fmt(r.s_min), fmt_opt(r.gamma), r.kernel_dim.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_hankel_csv(w: impl Write, rows: &[HankelRow], schatten: &[(String, Vec<SchattenRow>)]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["n".to_string(), "s_max".into(), "tail".into(), "count_above_half".into()];
    header.extend(schatten.iter().map(|(p, _)| format!("schatten_{p}")));
    out.write_record(&header)?;
    for (i, r) in rows.iter().enumerate() {
        let mut rec = vec![r.n.to_string(), fmt(r.s_max), fmt(r.tail), r.count_above_half.to_string()];
        rec.extend(schatten.iter().map(|(_, s)| fmt(s[i].norm)));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_path_csv(w: impl Write, samples: &[PathSample]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "idempotency_defect", "dist_to_start", "dist_to_end"])?;
    for s in samples {
        out.write_record([fmt(s.t), fmt(s.idempotency_defect), fmt(s.dist_to_start), fmt(s.dist_to_end)])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_significant(std::f64::consts::PI), 3.14159265359);
        assert_eq!(round_significant(1.0 / 3.0e-20), 3.33333333333e19);
        assert_eq!(round_significant(0.0), 0.0);
    }

    #[test]
    fn envelope_is_deterministic_and_ordered() {
        #[derive(Serialize)]
        struct R {
            z: f64,
            a: Vec<f64>,
        }
        let r = R {
            z: 0.1 + 0.2,
            a: vec![f64::NAN, 2.0],
        };
        let s = to_json_string(&envelope("index", json!({"symbol": "chi:1"}), &r).unwrap()).unwrap();
        assert_eq!(s, to_json_string(&envelope("index", json!({"symbol": "chi:1"}), &r).unwrap()).unwrap());
        assert!(s.find("\"schema\"").unwrap() < s.find("\"result\"").unwrap());
        assert!(s.find("\"z\"").unwrap() < s.find("\"a\"").unwrap());
        assert!(s.contains("0.3,") && s.contains("null"));
    }

    #[test]
    fn sweep_csv_layout() {
        let rows = [SweepRow {
            n: 8,
            s_max: 1.0,
            s_min: 0.0,
            gamma: None,
            kernel_dim: 1,
        }];
        let mut buf = vec![];
        write_sweep_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "n,s_max,s_min,gamma,kernel_dim");
        assert!(text.lines().nth(1).unwrap().ends_with(",,1"));
    }
}
