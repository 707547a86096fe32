use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use crate::error::{Error, Result};

/// A dense row-major matrix of prime-field elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Precondition(format!(
                "matrix entries length {} != {rows} x {cols}",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.entries[i * size + i] = 1;
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Precondition(format!(
                    "row of length {} in a matrix with {cols} columns",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(Self {
            rows: n,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &DenseMatrix) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Precondition(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }
}

/// Rank of `m` over `field` by Gaussian elimination.
///
/// The pivot is the first nonzero entry of the current column at or below the
/// current pivot row. Entries are reduced into the field first, so matrices
/// built for a different modulus can be passed as-is.
pub fn rank_mod_p(m: &DenseMatrix, field: &PrimeField) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut a: Vec<u64> = m.entries.iter().map(|&x| field.reduce(x)).collect();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for c in col..cols {
                a.swap(pivot * cols + c, rank * cols + c);
            }
        }
        let inv = field.inv(a[rank * cols + col]).expect("pivot is nonzero");
        for c in col..cols {
            a[rank * cols + c] = field.mul(a[rank * cols + c], inv);
        }
        let (head, tail) = a.split_at_mut((rank + 1) * cols);
        let pivot_row = &head[rank * cols..];
        for row in tail.chunks_exact_mut(cols) {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for c in col..cols {
                row[c] = field.sub(row[c], field.mul(factor, pivot_row[c]));
            }
        }
        rank += 1;
    }
    rank
}
