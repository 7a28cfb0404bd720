//! Integer sparse matrices in coordinate form.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

/// Integer matrix stored as sorted `(row, col, value)` triples with no
/// explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerSparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, i64)>,
}

impl IntegerSparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: Vec::new() }
    }

    /// Sums duplicate coordinates and drops zeros.
    pub fn from_triplets<I: IntoIterator<Item = (usize, usize, i64)>>(
        rows: usize,
        cols: usize,
        triplets: I,
    ) -> Self {
        let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            *acc.entry((r, c)).or_insert(0) += v;
        }
        let entries = acc.into_iter().filter(|&(_, v)| v != 0).map(|((r, c), v)| (r, c, v)).collect();
        Self { rows, cols, entries }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let triplets = rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &v)| (i, j, v)));
        Self::from_triplets(rows.len(), cols, triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Triples in row-major order.
    pub fn entries(&self) -> &[(usize, usize, i64)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries
            .binary_search_by(|&(er, ec, _)| (er, ec).cmp(&(r, c)))
            .map_or(0, |idx| self.entries[idx].2)
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        entries.sort_unstable();
        Self { rows: self.cols, cols: self.rows, entries }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let rhs_rows = rhs.row_slices();
        let mut triplets = Vec::new();
        let mut row_acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (r, lhs_row) in self.row_slices().iter().enumerate() {
            row_acc.clear();
            for &(_, k, v) in *lhs_row {
                for &(_, c, w) in rhs_rows[k] {
                    *row_acc.entry(c).or_insert(0) += v * w;
                }
            }
            triplets.extend(row_acc.iter().filter(|(_, &v)| v != 0).map(|(&c, &v)| (r, c, v)));
        }
        Self { rows: self.rows, cols: rhs.cols, entries: triplets }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_triplets(self.rows, self.cols, self.entries.iter().chain(&rhs.entries).copied())
    }

    /// Entries grouped per row.
    pub fn row_slices(&self) -> Vec<&[(usize, usize, i64)]> {
        let mut out = Vec::with_capacity(self.rows);
        let mut start = 0;
        for r in 0..self.rows {
            let mut end = start;
            while end < self.entries.len() && self.entries[end].0 == r {
                end += 1;
            }
            out.push(&self.entries[start..end]);
            start = end;
        }
        out
    }

    /// Nonzeros in each column.
    pub fn column_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.cols];
        for &(_, c, _) in &self.entries {
            counts[c] += 1;
        }
        counts
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            out[r][c] = v;
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    /// Symmetric permutation `P A P^T` where row `i` of the result is row
    /// `perm[i]` of `self`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Self {
        let mut inverse = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        Self::from_triplets(
            self.rows,
            self.cols,
            self.entries.iter().map(|&(r, c, v)| (inverse[r], inverse[c], v)),
        )
    }

    /// Compressed-row form with `f64` values for fast products.
    pub fn to_csr_f64(&self) -> CsrMatrix {
        let mut row_ptr = vec![0usize; self.rows + 1];
        for &(r, _, _) in &self.entries {
            row_ptr[r + 1] += 1;
        }
        for r in 0..self.rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        CsrMatrix {
            rows: self.rows,
            cols: self.cols,
            row_ptr,
            col_idx: self.entries.iter().map(|e| e.1).collect(),
            values: self.entries.iter().map(|e| e.2 as f64).collect(),
        }
    }

    /// Writes MatrixMarket coordinate format (1-based indices).
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate integer general")?;
        writeln!(w, "{} {} {}", self.rows, self.cols, self.entries.len())?;
        for &(r, c, v) in &self.entries {
            writeln!(w, "{} {} {}", r + 1, c + 1, v)?;
        }
        Ok(())
    }
}

/// Compressed sparse rows over `f64`.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    pub rows: usize,
    pub cols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl CsrMatrix {
    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for r in 0..self.rows {
            let mut s = 0.0;
            for idx in self.row_ptr[r]..self.row_ptr[r + 1] {
                s += self.values[idx] * x[self.col_idx[idx]];
            }
            y[r] = s;
        }
    }

    /// `y = A^T x`.
    pub fn mul_vec_transpose(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for r in 0..self.rows {
            let xr = x[r];
            if xr == 0.0 {
                continue;
            }
            for idx in self.row_ptr[r]..self.row_ptr[r + 1] {
                y[self.col_idx[idx]] += self.values[idx] * xr;
            }
        }
    }
}
