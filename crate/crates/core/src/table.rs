//! Numeric CSV tables: one header line, comma separated, LF endings,
//! every value written with 17 significant digits so a read-back is
//! bit-exact.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Formats a value with 17 significant digits.
pub fn format_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

impl Table {
    pub fn new(header: Vec<String>, rows: Vec<Vec<f64>>) -> Self {
        Self { header, rows }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("table output is ASCII")
    }

    pub fn read_from(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let header = match lines.next() {
            Some(line) => line
                .map_err(|e| Error::usage(format!("reading CSV header: {e}")))?
                .split(',')
                .map(|s| s.trim().to_string())
                .collect::<Vec<_>>(),
            None => return Err(Error::usage("empty CSV input")),
        };
        let mut rows = Vec::new();
        for (k, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::usage(format!("reading CSV row {}: {e}", k + 1)))?;
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|e| Error::usage(format!("row {}: bad number {s:?}: {e}", k + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != header.len() {
                return Err(Error::usage(format!(
                    "row {} has {} fields, header has {}",
                    k + 1,
                    row.len(),
                    header.len()
                )));
            }
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        let io = |source| Error::Io { path: path.to_path_buf(), source };
        let file = std::fs::File::create(path).map_err(io)?;
        let mut w = std::io::BufWriter::new(file);
        self.write_to(&mut w).map_err(io)?;
        w.flush().map_err(io)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::read_from(std::io::BufReader::new(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_and_line_endings() {
        let t = Table::new(vec!["x".into(), "value".into()], vec![vec![1.0, -0.5], vec![f64::INFINITY, 0.0]]);
        let s = t.to_csv_string();
        assert_eq!(s, "x,value\n1.0000000000000000e0,-5.0000000000000000e-1\ninf,0.0000000000000000e0\n");
        assert!(!s.contains('\r'));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Table::read_from("a,b\n1,2,3\n".as_bytes()).is_err());
        assert!(Table::read_from("a,b\n1,x\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_bit_exact(values in proptest::collection::vec(proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO, 1..40)) {
            let rows: Vec<Vec<f64>> = values.chunks(2).filter(|c| c.len() == 2).map(|c| c.to_vec()).collect();
            let t = Table::new(vec!["x".into(), "value".into()], rows);
            let back = Table::read_from(t.to_csv_string().as_bytes()).unwrap();
            for (a, b) in t.rows.iter().flatten().zip(back.rows.iter().flatten()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
