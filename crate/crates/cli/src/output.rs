//! Row-oriented emitters shared by the subcommands.

use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    Csv,
    #[default]
    Text,
}

/// A header plus rows of already formatted cells.
#[derive(Debug, Clone, Default)]
pub struct Grid {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Grid {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn text(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| {
                self.rows
                    .iter()
                    .map(|r| r[c].len())
                    .chain([self.header[c].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, &w)| format!("{cell:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        out
    }
}

/// Two-column `key value` listing in text mode, a one-row table in CSV.
pub fn record(fields: &[(&str, String)], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut grid = Grid::new(fields.iter().map(|(k, _)| *k));
            grid.push(fields.iter().map(|(_, v)| v.clone()).collect());
            grid.render(Format::Csv)
        }
        Format::Text => {
            let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            fields
                .iter()
                .map(|(k, v)| format!("{k:<width$}  {v}\n"))
                .collect()
        }
    }
}

pub fn fixed2(x: f64) -> String {
    format!("{x:.2}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Grid {
        let mut g = Grid::new(["shift", "arl"]);
        g.push(vec!["0.0".into(), "370.40".into()]);
        g.push(vec!["1.0".into(), "16.18".into()]);
        g
    }

    #[test]
    fn csv_is_plain_lf_separated() {
        assert_eq!(
            sample().render(Format::Csv),
            "shift,arl\n0.0,370.40\n1.0,16.18\n"
        );
    }

    #[test]
    fn text_is_right_aligned() {
        assert_eq!(
            sample().render(Format::Text),
            "shift     arl\n  0.0  370.40\n  1.0   16.18\n"
        );
    }

    #[test]
    fn record_layouts() {
        let fields = [
            ("limit", "1.5".to_string()),
            ("iterations", "9".to_string()),
        ];
        assert_eq!(record(&fields, Format::Csv), "limit,iterations\n1.5,9\n");
        assert_eq!(
            record(&fields, Format::Text),
            "limit       1.5\niterations  9\n"
        );
    }
}
