//! Result tables and their CSV form.

use std::io::{self, Write};

use crate::config::RunConfig;

pub const NA: &str = "NA";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Text(String),
    Na,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Cell {
        v.map_or(Cell::Na, Cell::Num)
    }

    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Num(v) if v.is_finite() => Some(v),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            // 17 significant digits round-trip every f64.
            // `+ 0.0` folds −0 into 0.
            Cell::Num(v) if v.is_finite() => format!("{:.16e}", v + 0.0),
            Cell::Num(_) | Cell::Na => NA.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    /// Column names, units included (`pressure_N_m2`).
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of a numeric column; `None` for NA cells.
    pub fn numbers(&self, name: &str) -> Vec<Option<f64>> {
        let Some(i) = self.column(name) else {
            return Vec::new();
        };
        self.rows.iter().map(|r| r[i].as_f64()).collect()
    }

    /// Writes the table with a `#` comment block holding the library version
    /// and the resolved configuration.
    pub fn write_csv<W: Write>(&self, config: &RunConfig, mut w: W) -> io::Result<()> {
        writeln!(w, "# cfs {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(w, "# command: {}", config.command)?;
        writeln!(w, "# config:")?;
        for line in config.to_toml().lines() {
            if line.is_empty() {
                writeln!(w, "#")?;
            } else {
                writeln!(w, "#   {line}")?;
            }
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self, config: &RunConfig) -> String {
        let mut buf = Vec::new();
        self.write_csv(config, &mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Command;

    #[test]
    fn cells_render_losslessly() {
        let v = 0.1 + 0.2;
        let s = Cell::Num(v).render();
        assert_eq!(s.parse::<f64>().unwrap(), v);
        assert_eq!(Cell::Num(f64::NAN).render(), "NA");
        assert_eq!(Cell::Num(f64::INFINITY).render(), "NA");
        assert_eq!(Cell::opt(None).render(), "NA");
        assert_eq!(Cell::Bool(true).render(), "true");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["a_m", "b"]);
        t.push(vec![Cell::Num(1.0), Cell::text("ok")]);
        let out = t.to_csv_string(&RunConfig::new(Command::ElasticReport));
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].starts_with("# cfs "));
        assert_eq!(lines[1], "# command: elastic-report");
        assert!(lines.iter().any(|l| l.contains("schema_version = 1")));
        let header = lines.iter().position(|l| !l.starts_with('#')).unwrap();
        assert_eq!(lines[header], "a_m,b");
        assert_eq!(lines[header + 1], "1.0000000000000000e0,ok");
    }
}
