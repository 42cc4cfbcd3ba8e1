use serde::Serialize;

use crate::{usage, Failure, Format};

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn csv(&self) -> Result<String, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(usage)?;
        for r in &self.rows {
            w.write_record(r).map_err(usage)?;
        }
        let bytes = w.into_inner().map_err(usage)?;
        String::from_utf8(bytes).map_err(usage)
    }

    fn text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: Vec<&str>| {
            let mut s = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ");
            s.truncate(s.trim_end().len());
            s.push('\n');
            s
        };
        let mut out = line(self.header.clone());
        for r in &self.rows {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
        }
        out
    }
}

pub fn render_rows<T: Serialize>(format: Format, table: &Table, rows: &[T]) -> Result<String, Failure> {
    match format {
        Format::Csv => table.csv(),
        Format::Text => Ok(table.text()),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(usage)?;
            s.push('\n');
            Ok(s)
        }
    }
}
