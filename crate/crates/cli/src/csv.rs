//! Minimal CSV writer: comma separator, LF endings, 17 significant digits.

use std::io::{self, Write};

pub struct CsvWriter<W: Write> {
    out: W,
}

/// A cell: a number, or empty when the quantity is undefined at that row.
pub enum Cell {
    Num(f64),
    Int(usize),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

/// Scientific notation with a 16-digit mantissa fraction, which round-trips every `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

impl<W: Write> CsvWriter<W> {
    pub fn new(out: W) -> Self {
        CsvWriter { out }
    }

    /// A `#` line ahead of the header row.
    pub fn comment(&mut self, text: &str) -> io::Result<()> {
        writeln!(self.out, "# {text}")
    }

    pub fn header(&mut self, names: &[&str]) -> io::Result<()> {
        writeln!(self.out, "{}", names.join(","))
    }

    pub fn row(&mut self, cells: impl IntoIterator<Item = Cell>) -> io::Result<()> {
        let line: Vec<String> = cells
            .into_iter()
            .map(|c| match c {
                Cell::Num(v) => format_f64(v),
                Cell::Int(k) => k.to_string(),
                Cell::Empty => String::new(),
            })
            .collect();
        writeln!(self.out, "{}", line.join(","))
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}
