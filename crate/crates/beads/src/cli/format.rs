//! Tabular output as CSV or a JSON envelope, with numbers at 17 significant
//! digits.

use serde_json::{Map, Number, Value};

/// `printf("%.17g")`: 17 significant digits, trailing zeros trimmed,
/// scientific notation outside `1e-5 <= |v| < 1e17`.
pub fn g17(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mant.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => g17(*f),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Float(f) => float_value(*f),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

/// JSON number carrying the `g17` text verbatim; non-finite values become
/// `null`.
pub fn float_value(f: f64) -> Value {
    if !f.is_finite() {
        return Value::Null;
    }
    let s = g17(f);
    match s.parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::Null,
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// `{spec: {...}, seed, rows: [...]}`.
    pub fn to_json(&self, spec: &[(&str, Cell)], seed: Option<u64>) -> String {
        let mut sp = Map::new();
        for (k, v) in spec {
            sp.insert((*k).to_string(), v.json());
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(r) {
                    m.insert((*c).to_string(), v.json());
                }
                Value::Object(m)
            })
            .collect();
        let mut env = Map::new();
        env.insert("spec".into(), Value::Object(sp));
        env.insert("seed".into(), seed.map_or(Value::Null, Value::from));
        env.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(env)).expect("serialisable");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_printf() {
        assert_eq!(g17(1.5), "1.5");
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(g17(100.0), "100");
        assert_eq!(g17(1e-7), "9.9999999999999995e-08");
        assert_eq!(g17(1e20), "1e+20");
        assert_eq!(g17(-2.5e-3), "-0.0025000000000000001");
        assert_eq!(g17(0.0), "0");
    }

    #[test]
    fn round_trip() {
        for v in [0.1, 1.0 / 7.0, 123456.789, 6.02e23, -1e-300] {
            assert_eq!(g17(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn json_envelope() {
        let mut t = Table::new(&["x", "name"]);
        t.push(vec![Cell::from(0.1), Cell::from("a")]);
        let s = t.to_json(&[("p", Cell::from(2usize))], Some(7));
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["spec"]["p"], 2);
        assert_eq!(v["seed"], 7);
        assert_eq!(v["rows"][0]["name"], "a");
        assert!(s.contains("0.10000000000000001"));
    }
}
