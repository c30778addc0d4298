//! Float formatting and table writers shared by the sweep commands.

use std::io::Write;

use serde::Serialize;

use crate::config::Format;
use crate::error::Result;

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_float(x: f64) -> String {
    match serde_json::Number::from_f64(x) {
        Some(n) => n.to_string(),
        None if x.is_nan() => "nan".into(),
        None if x > 0.0 => "inf".into(),
        None => "-inf".into(),
    }
}

/// What a column's numbers mean relative to the quantity it estimates.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Semantics {
    Input,
    Exact,
    Lower,
    Upper,
    Ratio,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Column {
    pub name: &'static str,
    pub semantics: Semantics,
}

/// A rectangular table of optional floats; `None` is an omitted value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn write<W: Write>(&self, format: Format, w: W) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => {
                let mut w = w;
                serde_json::to_writer_pretty(&mut w, self)?;
                writeln!(w)?;
                Ok(())
            }
        }
    }

    fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(self.columns.iter().map(|c| c.name))?;
        for row in &self.rows {
            out.write_record(row.iter().map(|x| x.map(fmt_float).unwrap_or_default()))?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.35, 1.0, 1e-300, 0.1 + 0.2, 123456.789, 5e-324] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_float(0.35), "0.35");
        assert_eq!(fmt_float(f64::INFINITY), "inf");
    }

    #[test]
    fn omitted_cells_are_empty() {
        let t = Table {
            columns: vec![
                Column {
                    name: "ns",
                    semantics: Semantics::Input,
                },
                Column {
                    name: "x",
                    semantics: Semantics::Exact,
                },
            ],
            rows: vec![vec![Some(1.5), None], vec![Some(2.0), Some(0.25)]],
        };
        let mut buf = Vec::new();
        t.write(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "ns,x\n1.5,\n2.0,0.25\n");
    }
}
