//! MatrixMarket reader.
//!
//! Accepts the coordinate and array formats with `real` or `pattern` fields
//! (pattern values default to 1.0) and `general` or `symmetric` symmetry;
//! symmetric storage is expanded on read. Complex, integer, skew-symmetric
//! and hermitian kinds are rejected with a clear message. Indices are
//! 1-based in the file, duplicate coordinates are summed, and every parse
//! failure carries its line number.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::dataio::{SparseColumn, SparseDataset};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Real,
    Pattern,
}

#[derive(Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
}

struct Banner {
    format: Format,
    field: Field,
    symmetry: Symmetry,
}

fn perr(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn parse_banner(path: &Path, line: &str) -> Result<Banner> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.is_empty() || !tokens[0].eq_ignore_ascii_case("%%MatrixMarket") {
        return Err(perr(path, 1, "malformed banner: expected '%%MatrixMarket matrix ...'"));
    }
    if tokens.len() != 5 {
        return Err(perr(
            path,
            1,
            format!("malformed banner: expected 5 tokens, found {}", tokens.len()),
        ));
    }
    if !tokens[1].eq_ignore_ascii_case("matrix") {
        return Err(perr(path, 1, format!("unsupported object '{}'", tokens[1])));
    }
    let format = match tokens[2].to_ascii_lowercase().as_str() {
        "coordinate" => Format::Coordinate,
        "array" => Format::Array,
        other => return Err(perr(path, 1, format!("unsupported format '{other}'"))),
    };
    let field = match tokens[3].to_ascii_lowercase().as_str() {
        "real" => Field::Real,
        "pattern" => Field::Pattern,
        "integer" | "complex" => {
            return Err(perr(
                path,
                1,
                format!("unsupported field '{}': only real and pattern are handled", tokens[3]),
            ))
        }
        other => return Err(perr(path, 1, format!("unsupported field '{other}'"))),
    };
    let symmetry = match tokens[4].to_ascii_lowercase().as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" | "hermitian" => {
            return Err(perr(
                path,
                1,
                format!("unsupported symmetry '{}': only general and symmetric are handled", tokens[4]),
            ))
        }
        other => return Err(perr(path, 1, format!("unsupported symmetry '{other}'"))),
    };
    if format == Format::Array && field == Field::Pattern {
        return Err(perr(path, 1, "array format cannot be pattern"));
    }
    Ok(Banner {
        format,
        field,
        symmetry,
    })
}

fn parse_index(path: &Path, line: usize, token: &str, what: &str, limit: usize) -> Result<usize> {
    let value: usize = token
        .parse()
        .map_err(|_| perr(path, line, format!("invalid {what} index '{token}'")))?;
    if value == 0 || value > limit {
        return Err(perr(
            path,
            line,
            format!("{what} index {value} out of range 1..={limit}"),
        ));
    }
    Ok(value - 1)
}

fn parse_value(path: &Path, line: usize, token: &str) -> Result<f64> {
    token
        .parse()
        .map_err(|_| perr(path, line, format!("invalid numeric value '{token}'")))
}

/// Reads a MatrixMarket file into a column-compressed dataset.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseDataset> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    let checksum = {
        let digest = Sha256::digest(&bytes);
        digest.iter().map(|b| format!("{b:02x}")).collect::<String>()
    };
    let text = String::from_utf8_lossy(&bytes);
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, banner_line) = lines
        .next()
        .ok_or_else(|| perr(path, 1, "empty file"))?;
    let banner = parse_banner(path, banner_line)?;

    // data lines: skip '%' comments and blanks, keep line numbers
    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });

    let (size_no, size_line) = data
        .next()
        .ok_or_else(|| perr(path, 1, "missing size line"))?;
    let size_tokens: Vec<&str> = size_line.split_whitespace().collect();

    let mut entries: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut add = |col: usize, row: usize, value: f64| {
        *entries.entry((col, row)).or_insert(0.0) += value;
    };

    let (rows, cols) = match banner.format {
        Format::Coordinate => {
            if size_tokens.len() != 3 {
                return Err(perr(
                    path,
                    size_no,
                    format!("size line needs 'rows cols nnz', found {} fields", size_tokens.len()),
                ));
            }
            let rows: usize = size_tokens[0]
                .parse()
                .map_err(|_| perr(path, size_no, "invalid row count"))?;
            let cols: usize = size_tokens[1]
                .parse()
                .map_err(|_| perr(path, size_no, "invalid column count"))?;
            let nnz: usize = size_tokens[2]
                .parse()
                .map_err(|_| perr(path, size_no, "invalid entry count"))?;
            if banner.symmetry == Symmetry::Symmetric && rows != cols {
                return Err(perr(path, size_no, "symmetric matrix must be square"));
            }
            let expected_fields = match banner.field {
                Field::Real => 3,
                Field::Pattern => 2,
            };
            let mut seen = 0usize;
            let mut last_line = size_no;
            for (no, line) in data.by_ref() {
                if seen == nnz {
                    return Err(perr(path, no, format!("unexpected entry beyond declared count {nnz}")));
                }
                let tokens: Vec<&str> = line.split_whitespace().collect();
                if tokens.len() != expected_fields {
                    return Err(perr(
                        path,
                        no,
                        format!("expected {expected_fields} fields, found {}", tokens.len()),
                    ));
                }
                let i = parse_index(path, no, tokens[0], "row", rows)?;
                let j = parse_index(path, no, tokens[1], "column", cols)?;
                let value = match banner.field {
                    Field::Real => parse_value(path, no, tokens[2])?,
                    Field::Pattern => 1.0,
                };
                add(j, i, value);
                if banner.symmetry == Symmetry::Symmetric && i != j {
                    add(i, j, value);
                }
                seen += 1;
                last_line = no;
            }
            if seen != nnz {
                return Err(perr(
                    path,
                    last_line,
                    format!("unexpected end of file: expected {nnz} entries, found {seen}"),
                ));
            }
            (rows, cols)
        }
        Format::Array => {
            if size_tokens.len() != 2 {
                return Err(perr(
                    path,
                    size_no,
                    format!("size line needs 'rows cols', found {} fields", size_tokens.len()),
                ));
            }
            let rows: usize = size_tokens[0]
                .parse()
                .map_err(|_| perr(path, size_no, "invalid row count"))?;
            let cols: usize = size_tokens[1]
                .parse()
                .map_err(|_| perr(path, size_no, "invalid column count"))?;
            if banner.symmetry == Symmetry::Symmetric && rows != cols {
                return Err(perr(path, size_no, "symmetric matrix must be square"));
            }
            // column-major positions; symmetric stores the lower triangle
            let mut positions: Vec<(usize, usize)> = Vec::new();
            for j in 0..cols {
                let start = if banner.symmetry == Symmetry::Symmetric { j } else { 0 };
                for i in start..rows {
                    positions.push((i, j));
                }
            }
            let mut filled = 0usize;
            let mut last_line = size_no;
            for (no, line) in data.by_ref() {
                for token in line.split_whitespace() {
                    if filled == positions.len() {
                        return Err(perr(path, no, "unexpected value beyond declared dimensions"));
                    }
                    let value = parse_value(path, no, token)?;
                    let (i, j) = positions[filled];
                    add(j, i, value);
                    if banner.symmetry == Symmetry::Symmetric && i != j {
                        add(i, j, value);
                    }
                    filled += 1;
                }
                last_line = no;
            }
            if filled != positions.len() {
                return Err(perr(
                    path,
                    last_line,
                    format!(
                        "unexpected end of file: expected {} values, found {filled}",
                        positions.len()
                    ),
                ));
            }
            (rows, cols)
        }
    };

    // assemble the column store, dropping explicit zeros (including
    // duplicate groups that cancel)
    let mut columns = vec![SparseColumn::default(); cols];
    let mut dropped = 0usize;
    for ((col, row), value) in entries {
        if value == 0.0 {
            dropped += 1;
        } else {
            columns[col].indices.push(row);
            columns[col].values.push(value);
        }
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    Ok(SparseDataset {
        name,
        rows,
        cols,
        columns,
        source: path.to_path_buf(),
        checksum,
        dropped_zeros: dropped,
    })
}
