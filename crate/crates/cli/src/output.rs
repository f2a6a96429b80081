//! Result documents and their JSON and CSV renderings.

use serde::Serialize;
use serde_json::Value;

use sympindex::Error;

/// Rounds to 12 significant digits; non-finite values pass through.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = sig12(n.as_f64().unwrap());
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// A result ready to print: the JSON body and, for tabular commands, a table.
pub struct Rendered {
    pub json: Value,
    pub table: Option<Table>,
}

pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub fn cell_f(x: f64) -> String {
    format!("{}", sig12(x))
}

pub fn cell<T: ToString>(x: T) -> String {
    x.to_string()
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    let mut v = serde_json::to_value(x).expect("result types serialize");
    round_floats(&mut v);
    v
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn render_csv(table: &Table) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidInput(format!("csv output: {e}"));
    w.write_record(&table.headers).map_err(io)?;
    for row in &table.rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(format!("csv output: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 cells"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(std::f64::consts::PI), 3.14159265359);
        assert_eq!(sig12(-1.0 / 3.0), -0.333333333333);
        assert_eq!(sig12(2.0), 2.0);
        assert_eq!(sig12(1e-300 / 3.0), 3.33333333333e-301);
    }

    #[test]
    fn rounding_reaches_nested_values() {
        let v = to_value(&serde_json::json!({"a": [1.0 / 3.0, 2], "b": {"c": 2.0f64.sqrt()}}));
        assert_eq!(render_json(&v), "{\n  \"a\": [\n    0.333333333333,\n    2\n  ],\n  \"b\": {\n    \"c\": 1.41421356237\n  }\n}\n");
    }

    #[test]
    fn csv_table() {
        let t = Table { headers: vec!["p", "mas"], rows: vec![vec![cell(1), cell(-2)]] };
        assert_eq!(render_csv(&t).unwrap(), "p,mas\n1,-2\n");
    }
}
