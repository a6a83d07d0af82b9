//! Numeric CSV reading and table writing.
//!
//! Output files are RFC-4180-style: comma separated, `.` decimal point, LF
//! line endings, floats printed at full round-trip precision. Lines starting
//! with `#` carry configuration echo and are skipped by the reader, so every
//! emitted table parses back through [`read_csv_vectors`].

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Whether CSV vectors are taken per column or per row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorAxis {
    Columns,
    Rows,
}

fn perr(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

/// Reads a rectangular numeric CSV as one vector per column.
pub fn read_csv_vectors(path: impl AsRef<Path>, has_header: bool) -> Result<Vec<Vec<f64>>> {
    read_csv_vectors_axis(path, has_header, VectorAxis::Columns)
}

/// Reads a rectangular numeric CSV along the requested axis.
pub fn read_csv_vectors_axis(
    path: impl AsRef<Path>,
    has_header: bool,
    axis: VectorAxis,
) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut width: Option<usize> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut header_skipped = !has_header;
    let mut saw_line = false;

    for (no, raw) in text.lines().enumerate() {
        let no = no + 1;
        let line = raw.trim_start_matches('\u{feff}').trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        saw_line = true;
        let cells: Vec<&str> = line.split(',').collect();
        if !header_skipped {
            header_skipped = true;
            width = Some(cells.len());
            continue;
        }
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => {
                return Err(perr(
                    path,
                    no,
                    format!("ragged row: expected {w} fields, found {}", cells.len()),
                ))
            }
            _ => {}
        }
        let mut row = Vec::with_capacity(cells.len());
        for (col, cell) in cells.iter().enumerate() {
            let value: f64 = cell.trim().parse().map_err(|_| {
                perr(
                    path,
                    no,
                    format!("non-numeric cell '{}' in field {}", cell.trim(), col + 1),
                )
            })?;
            row.push(value);
        }
        rows.push(row);
    }

    if !saw_line {
        return Err(perr(path, 1, "empty file"));
    }

    let width = width.unwrap_or(0);
    match axis {
        VectorAxis::Rows => Ok(rows),
        VectorAxis::Columns => {
            let mut columns = vec![Vec::with_capacity(rows.len()); width];
            for row in rows {
                for (c, value) in row.into_iter().enumerate() {
                    columns[c].push(value);
                }
            }
            Ok(columns)
        }
    }
}

/// Formats a float with full round-trip precision.
pub fn format_f64(v: f64) -> String {
    format!("{v}")
}

/// A rectangular table of pre-formatted cells with leading `#` comments.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table {
            comments: Vec::new(),
            header,
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, text: impl Into<String>) {
        self.comments.push(text.into());
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len(), "ragged table row");
        self.rows.push(cells);
    }

    pub fn write_to(&self, mut out: impl Write) -> Result<()> {
        for comment in &self.comments {
            writeln!(out, "# {comment}")?;
        }
        writeln!(out, "{}", encode_row(&self.header))?;
        for row in &self.rows {
            writeln!(out, "{}", encode_row(row))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("tables are utf-8")
    }
}

fn encode_row(cells: &[String]) -> String {
    cells
        .iter()
        .map(|cell| {
            if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
                format!("\"{}\"", cell.replace('"', "\"\""))
            } else {
                cell.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Writes a table to a file (LF endings).
pub fn write_csv(table: &Table, path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path.as_ref())?;
    table.write_to(std::io::BufWriter::new(file))
}
