//! Exact rank over ℚ of integer matrices.
//!
//! Elimination first runs sparse with unit pivots, choosing among the
//! sparsest columns the pivot whose row is shortest (a Markowitz-style
//! count). Unit pivots keep every step unimodular, so the arithmetic stays
//! in ℤ without division. Whatever remains once no ±1 entry is left is
//! finished by fraction-free Bareiss elimination over big integers.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::sparse::IntegerSparseMatrix;

/// Rank of `a` over ℚ.
pub fn exact_rank(a: &IntegerSparseMatrix) -> usize {
    let mut rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); a.rows()];
    for &(r, c, v) in a.entries() {
        rows[r].push((c, v));
    }
    let mut elim = SparseElimination::new(rows, a.cols());
    let mut rank = elim.run();
    let rest = elim.remaining_dense();
    rank += bareiss_rank(rest);
    rank
}

struct SparseElimination {
    rows: Vec<Vec<(usize, i64)>>,
    col_rows: Vec<HashSet<usize>>,
    by_count: BTreeSet<(usize, usize)>,
}

impl SparseElimination {
    fn new(rows: Vec<Vec<(usize, i64)>>, cols: usize) -> Self {
        let mut col_rows = vec![HashSet::new(); cols];
        for (r, row) in rows.iter().enumerate() {
            for &(c, _) in row {
                col_rows[c].insert(r);
            }
        }
        let by_count = col_rows
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(c, s)| (s.len(), c))
            .collect();
        Self { rows, col_rows, by_count }
    }

    fn pick_pivot(&self) -> Option<(usize, usize)> {
        for &(_, c) in &self.by_count {
            let best = self.col_rows[c]
                .iter()
                .filter(|&&r| self.entry(r, c).map_or(false, |v| v.abs() == 1))
                .min_by_key(|&&r| (self.rows[r].len(), r));
            if let Some(&r) = best {
                return Some((r, c));
            }
        }
        None
    }

    fn entry(&self, r: usize, c: usize) -> Option<i64> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0).ok().map(|i| row[i].1)
    }

    fn set_col_count(&mut self, c: usize, old: usize) {
        self.by_count.remove(&(old, c));
        let new = self.col_rows[c].len();
        if new > 0 {
            self.by_count.insert((new, c));
        }
    }

    fn run(&mut self) -> usize {
        let mut rank = 0;
        while let Some((pr, pc)) = self.pick_pivot() {
            let pivot_row = std::mem::take(&mut self.rows[pr]);
            let p = pivot_row[pivot_row.binary_search_by_key(&pc, |e| e.0).unwrap()].1;
            // Remove the pivot row from the column index.
            for &(c, _) in &pivot_row {
                let old = self.col_rows[c].len();
                self.col_rows[c].remove(&pr);
                self.set_col_count(c, old);
            }
            let others: Vec<usize> = self.col_rows[pc].iter().copied().collect();
            for r in others {
                let factor = self.entry(r, pc).unwrap() * p; // p = ±1, so a/p = a*p
                if !self.subtract_scaled(r, &pivot_row, factor) {
                    // An i64 overflow: hand everything left to Bareiss.
                    // Re-index the restored pivot row and stop.
                    for &(c, _) in &pivot_row {
                        let old = self.col_rows[c].len();
                        self.col_rows[c].insert(pr);
                        self.set_col_count(c, old);
                    }
                    self.rows[pr] = pivot_row;
                    return rank;
                }
            }
            rank += 1;
        }
        rank
    }

    /// `row_r -= factor * pivot_row`, keeping the column index in sync.
    fn subtract_scaled(&mut self, r: usize, pivot_row: &[(usize, i64)], factor: i64) -> bool {
        let row = std::mem::take(&mut self.rows[r]);
        let mut merged = Vec::with_capacity(row.len() + pivot_row.len());
        let (mut i, mut j) = (0, 0);
        let mut ok = true;
        while i < row.len() || j < pivot_row.len() {
            let take_row = j >= pivot_row.len() || (i < row.len() && row[i].0 < pivot_row[j].0);
            let take_piv = i >= row.len() || (j < pivot_row.len() && pivot_row[j].0 < row[i].0);
            if take_row {
                merged.push(row[i]);
                i += 1;
            } else if take_piv {
                match factor.checked_mul(pivot_row[j].1).and_then(i64::checked_neg) {
                    Some(v) => merged.push((pivot_row[j].0, v)),
                    None => ok = false,
                }
                j += 1;
            } else {
                let c = row[i].0;
                match factor.checked_mul(pivot_row[j].1).and_then(|t| row[i].1.checked_sub(t)) {
                    Some(v) if v != 0 => merged.push((c, v)),
                    Some(_) => {}
                    None => ok = false,
                }
                i += 1;
                j += 1;
            }
        }
        if !ok {
            self.rows[r] = row;
            return false;
        }
        // Update column membership for changed supports.
        let old_cols: HashSet<usize> = row.iter().map(|e| e.0).collect();
        let new_cols: HashSet<usize> = merged.iter().map(|e| e.0).collect();
        for &c in old_cols.difference(&new_cols) {
            let old = self.col_rows[c].len();
            self.col_rows[c].remove(&r);
            self.set_col_count(c, old);
        }
        for &c in new_cols.difference(&old_cols) {
            let old = self.col_rows[c].len();
            self.col_rows[c].insert(r);
            self.set_col_count(c, old);
        }
        self.rows[r] = merged;
        true
    }

    /// Nonempty rows restricted to nonempty columns, as a dense big-integer
    /// matrix.
    fn remaining_dense(&self) -> Vec<Vec<BigInt>> {
        let cols: Vec<usize> = self
            .col_rows
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(c, _)| c)
            .collect();
        let pos: std::collections::HashMap<usize, usize> =
            cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        self.rows
            .iter()
            .filter(|r| !r.is_empty())
            .map(|row| {
                let mut dense = vec![BigInt::zero(); cols.len()];
                for &(c, v) in row {
                    dense[pos[&c]] = BigInt::from(v);
                }
                dense
            })
            .collect()
    }
}

/// Fraction-free (Bareiss) row echelon rank of a dense integer matrix.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        // Smallest nonzero pivot keeps intermediate entries small.
        let Some(p) = (rank..rows)
            .filter(|&r| !a[r][c].is_zero())
            .min_by(|&x, &y| a[x][c].abs().cmp(&a[y][c].abs()))
        else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for cc in c + 1..cols {
                let v = (&a[r][cc] * &a[rank][c] - &a[r][c] * &a[rank][cc]) / &prev;
                a[r][cc] = v;
            }
            a[r][c] = BigInt::zero();
        }
        // Rows above the next pivot keep their scale; divide by this pivot next.
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}
