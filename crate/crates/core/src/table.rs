//! Numeric CSV tables with `# key=value` metadata lines.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! written table reads back bit-identical.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// 1-based line of the header in the parsed text, 0 for built tables.
    pub header_line: usize,
}

impl PartialEq for Table {
    fn eq(&self, other: &Self) -> bool {
        self.meta == other.meta && self.header == other.header && self.rows == other.rows
    }
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Self { meta: Vec::new(), header, rows: Vec::new(), header_line: 0 }
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.meta.push((key.into(), value.into()));
        self
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}={v}");
        }
        s.push_str(&self.header.join(","));
        s.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    s.push(',');
                }
                first = false;
                let _ = write!(s, "{v}");
            }
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }

    /// Parses a table; every data row must have as many finite numbers as the header.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut table = Table::default();
        let mut have_header = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if !have_header {
                    if let Some((k, v)) = rest.trim().split_once('=') {
                        table.meta.push((k.trim().to_string(), v.trim().to_string()));
                    }
                }
                continue;
            }
            if !have_header {
                table.header = line.split(',').map(|h| h.trim().to_string()).collect();
                table.header_line = line_no;
                have_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != table.header.len() {
                return Err(Error::parse(
                    origin,
                    line_no,
                    format!("expected {} fields, found {}", table.header.len(), fields.len()),
                ));
            }
            let mut row = Vec::with_capacity(fields.len());
            for (col, f) in fields.iter().enumerate() {
                let f = f.trim();
                let v: f64 = f
                    .parse()
                    .map_err(|_| Error::parse(origin, line_no, format!("column '{}': invalid number '{f}'", table.header[col])))?;
                if !v.is_finite() {
                    return Err(Error::parse(origin, line_no, format!("column '{}': non-finite value '{f}'", table.header[col])));
                }
                row.push(v);
            }
            table.rows.push(row);
        }
        if !have_header {
            return Err(Error::parse(origin, 1, "missing header line"));
        }
        Ok(table)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}

/// `x1,x2,...,xm`
pub fn feature_header(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("x{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let mut t = Table::new(vec!["a".into(), "b".into()]).with_meta("seed", "7");
        t.rows.push(vec![0.1 + 0.2, -1e-300]);
        t.rows.push(vec![std::f64::consts::PI, 123456789.123456789]);
        let back = Table::parse(&t.to_csv(), Path::new("t.csv")).unwrap();
        assert_eq!(back, t);
        for (r, s) in back.rows.iter().zip(&t.rows) {
            for (a, b) in r.iter().zip(s) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
        assert_eq!(back.meta("seed"), Some("7"));
    }

    #[test]
    fn rejects_nan_and_short_rows() {
        let e = Table::parse("a,b\n1,NaN\n", Path::new("t.csv")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = Table::parse("a,b\n1,2\n3\n", Path::new("t.csv")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
    }
}
