//! CSV and JSON writers shared by the sweep and the CLI.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{LabError, Result};

/// Twelve significant digits, scientific notation.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        x.to_string()
    }
}

/// Header plus rows of already formatted cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, w: W) -> std::result::Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Writes a CSV file, creating or truncating `path`.
pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut t = Table::new(header);
    rows.into_iter().for_each(|r| t.push(r));
    let file = File::create(path).map_err(|source| LabError::Io {
        path: path.into(),
        source,
    })?;
    t.write_to(file).map_err(|source| LabError::Csv {
        path: path.into(),
        source,
    })
}

/// Pretty JSON followed by a newline.
pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_twelve_significant_digits() {
        assert_eq!(fmt_float(0.1), "1.00000000000e-1");
        assert_eq!(fmt_float(1234.5), "1.23450000000e3");
        assert_eq!(fmt_float(-2.0 / 3.0), "-6.66666666667e-1");
        assert_eq!(fmt_float(f64::INFINITY), "inf");
    }

    #[test]
    fn io_errors_carry_the_path() {
        let err = write_csv(Path::new("/nonexistent-dir/x.csv"), &["a"], []).unwrap_err();
        assert!(err.to_string().starts_with("/nonexistent-dir/x.csv"));
    }
}
