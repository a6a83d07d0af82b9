//! Sparse dataset ingestion and CSV emission.
//!
//! Real-world test vectors come in as columns of MatrixMarket or CSV files;
//! results go out as plain comma-separated tables with `#` comment lines for
//! configuration echo. Stored explicit zeros are dropped from the sparse
//! column store (and counted), since the sparsity `K = ‖x‖₀` of a column
//! counts nonzero components, not file entries.

mod csv;
mod matrix_market;

use std::path::PathBuf;

pub use csv::{format_f64, read_csv_vectors, read_csv_vectors_axis, write_csv, Table, VectorAxis};
pub use matrix_market::read_matrix_market;

use crate::error::{Error, Result};

/// One sparse column: strictly increasing row indices with nonzero values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseColumn {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseColumn {
    /// Number of stored nonzeros (`K` of the column).
    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// A named collection of sparse columns loaded from one file.
#[derive(Clone, Debug)]
pub struct SparseDataset {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<SparseColumn>,
    pub source: PathBuf,
    /// SHA-256 of the raw file bytes, hex-encoded.
    pub checksum: String,
    /// Explicit zero entries dropped while loading.
    pub dropped_zeros: usize,
}

impl SparseDataset {
    /// Builds a dataset from dense columns (all of equal length), dropping
    /// and counting zero entries.
    pub fn from_dense_columns(name: &str, columns: &[Vec<f64>]) -> Result<SparseDataset> {
        if columns.is_empty() {
            return Err(Error::EmptyVector);
        }
        let rows = columns[0].len();
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Invalid("columns have differing lengths".into()));
        }
        let mut dropped = 0usize;
        let sparse = columns
            .iter()
            .map(|col| {
                let mut sc = SparseColumn::default();
                for (i, &v) in col.iter().enumerate() {
                    if v == 0.0 {
                        dropped += 1;
                    } else {
                        sc.indices.push(i);
                        sc.values.push(v);
                    }
                }
                sc
            })
            .collect();
        Ok(SparseDataset {
            name: name.to_string(),
            rows,
            cols: columns.len(),
            columns: sparse,
            source: PathBuf::new(),
            checksum: String::new(),
            dropped_zeros: dropped,
        })
    }

    /// Total stored nonzeros.
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.k()).sum()
    }

    /// Densifies one column.
    pub fn column_dense(&self, c: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        let col = &self.columns[c];
        for (&i, &v) in col.indices.iter().zip(&col.values) {
            out[i] = v;
        }
        out
    }
}

/// Sparsity and spread statistics of one column.
#[derive(Clone, Copy, Debug)]
pub struct ColumnStats {
    pub column: usize,
    pub k: usize,
    pub norm: f64,
    /// `(Σ x_i²)² / (K · Σ x_i⁴) ∈ (0, 1]`; equals 1 iff all nonzero
    /// magnitudes coincide. Reported as 0 for empty columns.
    pub flatness: f64,
}

/// Per-column `(K, ‖x‖₂, flatness ratio)`, ranking columns by spread.
pub fn sparsity_stats(dataset: &SparseDataset) -> Vec<ColumnStats> {
    dataset
        .columns
        .iter()
        .enumerate()
        .map(|(column, col)| {
            let k = col.k();
            let sum_sq: f64 = col.values.iter().map(|v| v * v).sum();
            let sum_quad: f64 = col.values.iter().map(|v| v * v * v * v).sum();
            let flatness = if k == 0 {
                0.0
            } else {
                sum_sq * sum_sq / (k as f64 * sum_quad)
            };
            ColumnStats {
                column,
                k,
                norm: sum_sq.sqrt(),
                flatness,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatness_ratio_examples() {
        let data = SparseDataset::from_dense_columns(
            "t",
            &[
                vec![1.0, 1.0, 1.0],
                vec![1.0, 0.0, 0.0],
                vec![3.0, 4.0, 0.0],
                vec![0.0, 0.0, 0.0],
            ],
        )
        .unwrap();
        let stats = sparsity_stats(&data);
        assert_eq!(stats[0].k, 3);
        assert!((stats[0].flatness - 1.0).abs() < 1e-15);
        assert_eq!(stats[1].k, 1);
        assert!((stats[1].flatness - 1.0).abs() < 1e-15);
        assert_eq!(stats[2].k, 2);
        assert!((stats[2].flatness - 625.0 / 674.0).abs() < 1e-15);
        assert_eq!(stats[3].k, 0);
        assert_eq!(stats[3].flatness, 0.0);
        assert_eq!(data.dropped_zeros, 3 + 1 + 2);
    }

    #[test]
    fn dense_column_round_trip() {
        let cols = vec![vec![0.0, 2.0, 0.0, -1.5], vec![1.0, 0.0, 0.0, 0.0]];
        let data = SparseDataset::from_dense_columns("t", &cols).unwrap();
        assert_eq!(data.column_dense(0), cols[0]);
        assert_eq!(data.column_dense(1), cols[1]);
        assert_eq!(data.nnz(), 3);
    }
}
