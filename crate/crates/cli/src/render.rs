//! Output plumbing. Every float leaves the program with 12 significant
//! digits, in text, CSV and JSON alike, so repeated runs are byte-identical.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Rounds to 12 significant digits; the result prints in shortest form.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 {
        // folds -0 into 0
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("float round-trips through its own exponent form")
}

/// Shortest form of `round12(x)`; exponent notation outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let r = round12(x);
    if r != 0.0 && (r.abs() < 1e-4 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

pub fn nums(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",")
}

fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().expect("f64 number"));
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

pub fn write_json<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> Result<()> {
    let mut v = serde_json::to_value(value)?;
    round_json(&mut v);
    serde_json::to_writer_pretty(&mut *out, &v)?;
    writeln!(out)?;
    Ok(())
}

/// RFC 4180 with a header row.
pub fn write_csv(out: &mut dyn Write, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(num(0.1 + 0.2), "0.3");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(2.0f64.sqrt()), "1.41421356237");
        assert_eq!(num(1.0 / 3.0 * 1e-7), "3.33333333333e-8");
        assert_eq!(num(123456789012345.0), "123456789012000");
        assert_eq!(num(-2.5e17), "-2.5e17");
    }

    #[test]
    fn json_floats_are_rounded_and_integers_kept() {
        let mut buf = Vec::new();
        write_json(&mut buf, &serde_json::json!({"x": [0.1 + 0.2, 7], "n": 3u64})).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("0.3") && !s.contains("0.30000000000000004"), "{s}");
        assert!(s.contains("\"n\": 3"), "{s}");
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["k", "v"], [vec!["a,b".to_string(), "1".to_string()]]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "k,v\r\n\"a,b\",1\r\n");
    }
}
