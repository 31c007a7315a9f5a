use std::io::Write;

use serde_json::{Map, Value};

use crate::Format;

/// Row-oriented output with a fixed column order.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(cell))?;
                }
                w.flush()
            }
            Format::Json => {
                let objects: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let m: Map<String, Value> = self.columns.iter().map(|c| c.to_string()).zip(row.iter().cloned()).collect();
                        Value::Object(m)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *out, &objects)?;
                writeln!(out)
            }
        }
    }
}

/// Floats with 17 significant digits, everything else verbatim.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => float(x),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

/// JSON number for finite values, a string otherwise.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(x.to_string()))
}

pub fn text(s: impl Into<String>) -> Value {
    Value::String(s.into())
}

pub fn int(i: impl Into<i64>) -> Value {
    Value::from(i.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_floats_have_17_digits() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![num(0.1), int(3), text("x")]);
        let mut buf = Vec::new();
        t.write(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b,c\n1.0000000000000001e-1,3,x\n");
    }

    #[test]
    fn json_rows_are_objects() {
        let mut t = Table::new(&["a"]);
        t.push(vec![num(f64::INFINITY)]);
        let mut buf = Vec::new();
        t.write(Format::Json, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[0]["a"], "inf");
    }
}
