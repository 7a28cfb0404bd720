//! Reduced complex for the twist `σⁿ` closed up as the twisted unknot.
//!
//! Degrees `0..n-1` carry `V⊗V` with basis `𝟙𝟙, 𝟙X, X𝟙, XX`; degree `n`
//! carries `V`. Matrices act on column vectors, `d_k: C_k → C_{k+1}`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::homology::{exact_rank, KhovanovComplex};
use crate::knot_io::twisted_unknot;
use crate::resolution::build_cube;
use crate::error::Result;
use crate::sparse::IntegerSparseMatrix;
use crate::spectral::{dense_eigenvalues, knot_gap_profile, SpectralConfig};

const ODD_MAP: [[i64; 4]; 4] = [[0, 1, -1, 0], [0, 0, 0, -1], [0, 0, 0, 1], [0, 0, 0, 0]];
const EVEN_MAP: [[i64; 4]; 4] = [[0, 1, 1, 0], [0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 0]];
const END_MAP: [[i64; 4]; 2] = [[0, 1, 1, 0], [0, 0, 0, 1]];

/// Internal q-degree of the `V⊗V` basis vectors.
const PAIR_DEGREES: [i32; 4] = [2, 0, 0, -2];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedTwistComplex {
    pub n: usize,
    /// `differentials[k]` is `d_k: C_k → C_{k+1}`.
    pub differentials: Vec<IntegerSparseMatrix>,
}

/// The reduced complex of `TU_n`, `n >= 1`.
pub fn reduced_tu_complex(n: usize) -> ReducedTwistComplex {
    assert!(n >= 1, "twist length must be positive");
    let mut differentials = Vec::with_capacity(n);
    for k in 0..n - 1 {
        // Counting from the right end, d_{n-i} uses the odd map for odd i.
        let i = n - 1 - k;
        let m = if i % 2 == 1 { &ODD_MAP } else { &EVEN_MAP };
        differentials.push(IntegerSparseMatrix::from_dense(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>()));
    }
    differentials.push(IntegerSparseMatrix::from_dense(&END_MAP.iter().map(|r| r.to_vec()).collect::<Vec<_>>()));
    ReducedTwistComplex { n, differentials }
}

impl ReducedTwistComplex {
    pub fn chain_dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.differentials.iter().map(|m| m.cols()).collect();
        d.push(self.differentials.last().map_or(0, |m| m.rows()));
        d
    }

    /// `d_{k+1} d_k = 0` for every `k`.
    pub fn is_complex(&self) -> bool {
        self.differentials.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// `Δ_k = d_kᵀ d_k + d_{k-1} d_{k-1}ᵀ`.
    pub fn laplacian(&self, k: usize) -> IntegerSparseMatrix {
        let dims = self.chain_dims();
        let mut l = IntegerSparseMatrix::zeros(dims[k], dims[k]);
        if let Some(up) = self.differentials.get(k) {
            l = l.add(&up.transpose().mul(up));
        }
        if k > 0 {
            let down = &self.differentials[k - 1];
            l = l.add(&down.mul(&down.transpose()));
        }
        l
    }

    /// q-degree of basis vector `b` in homological degree `k`.
    pub fn q_degree(&self, k: usize, b: usize) -> i32 {
        let n = self.n as i32;
        if k < self.n {
            1 - n + 2 * k as i32 + PAIR_DEGREES[b]
        } else {
            n + if b == 0 { 1 } else { -1 }
        }
    }

    /// Whether every Laplacian is block-diagonal in q-degree, so nullities
    /// can be split by bidegree.
    pub fn laplacians_graded(&self) -> bool {
        (0..=self.n).all(|k| self.laplacian(k).entries().iter().all(|&(r, c, _)| self.q_degree(k, r) == self.q_degree(k, c)))
    }

    /// Nullity of each q-block of each Laplacian.
    pub fn betti(&self) -> BTreeMap<(i32, i32), usize> {
        let mut out = BTreeMap::new();
        for k in 0..=self.n {
            let l = self.laplacian(k);
            let mut blocks: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
            for b in 0..l.rows() {
                blocks.entry(self.q_degree(k, b)).or_default().push(b);
            }
            for (q, idx) in blocks {
                let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(a, &b)| (b, a)).collect();
                let sub = IntegerSparseMatrix::from_triplets(
                    idx.len(),
                    idx.len(),
                    l.entries().iter().filter_map(|&(r, c, v)| Some((*pos.get(&r)?, *pos.get(&c)?, v))),
                );
                let nullity = idx.len() - exact_rank(&sub);
                if nullity > 0 {
                    out.insert((k as i32, q), nullity);
                }
            }
        }
        out
    }

    /// Smallest nonzero eigenvalue over all homological degrees.
    pub fn min_gap(&self) -> Option<f64> {
        (0..=self.n)
            .filter_map(|k| dense_eigenvalues(&self.laplacian(k)).into_iter().find(|&e| e > 1e-9))
            .min_by(f64::total_cmp)
    }
}

/// Translates a Betti table so its smallest `i` and smallest `j` are zero.
pub fn shift_normalized(betti: &BTreeMap<(i32, i32), usize>) -> BTreeMap<(i32, i32), usize> {
    let i0 = betti.keys().map(|k| k.0).min().unwrap_or(0);
    let j0 = betti.keys().map(|k| k.1).min().unwrap_or(0);
    betti.iter().map(|(&(i, j), &b)| ((i - i0, j - j0), b)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReductionReport {
    pub n: usize,
    pub full_min_gap: Option<f64>,
    pub reduced_min_gap: Option<f64>,
    pub full_betti: BTreeMap<(i32, i32), usize>,
    pub reduced_betti: BTreeMap<(i32, i32), usize>,
    pub betti_agree: bool,
}

/// Full pipeline on `TU_n` against the reduced complex.
pub fn gap_reduction_report(n: usize, cfg: &SpectralConfig) -> Result<GapReductionReport> {
    let knot = twisted_unknot(n);
    let cube = build_cube(&knot)?;
    let cx = KhovanovComplex::new(&knot, &cube);
    let profile = knot_gap_profile(&cx, &format!("TU{n}"), cfg)?;
    let full_betti = cx.betti_table(&format!("TU{n}"))?.nonzero();
    let red = reduced_tu_complex(n);
    let reduced_betti = red.betti();
    let betti_agree = shift_normalized(&full_betti) == shift_normalized(&reduced_betti);
    Ok(GapReductionReport {
        n,
        full_min_gap: profile.min_gap().map(|g| g.0),
        reduced_min_gap: red.min_gap(),
        full_betti,
        reduced_betti,
        betti_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[i64]) -> IntegerSparseMatrix {
        IntegerSparseMatrix::from_triplets(v.len(), v.len(), v.iter().enumerate().map(|(i, &x)| (i, i, x)))
    }

    #[test]
    fn three_twists() {
        let c = reduced_tu_complex(3);
        assert_eq!(c.chain_dims(), vec![4, 4, 4, 2]);
        assert!(c.is_complex());
        assert_eq!(c.laplacian(1), diag(&[2, 2, 2, 2]));
        assert_eq!(c.laplacian(2), diag(&[2, 2, 2, 1]));
        assert_eq!(c.laplacian(3), diag(&[2, 1]));
        // Δ₀ has spectrum {0,0,2,2}: Δ₀² = 2Δ₀ with trace 4.
        let l0 = c.laplacian(0);
        assert_eq!(l0.mul(&l0), l0.add(&l0));
        assert_eq!(l0.diagonal().iter().sum::<i64>(), 4);
    }

    #[test]
    fn kernel_total_two() {
        for n in 1..12 {
            let c = reduced_tu_complex(n);
            assert!(c.laplacians_graded());
            let b = c.betti();
            assert_eq!(b.values().sum::<usize>(), 2);
            assert!(b.keys().all(|k| k.0 == 0));
            assert_eq!(shift_normalized(&b), BTreeMap::from([((0, 0), 1), ((0, 2), 1)]));
        }
    }

    #[test]
    fn reduced_gap_at_least_one() {
        for n in 2..20 {
            assert_eq!(reduced_tu_complex(n).min_gap(), Some(1.0));
        }
    }

    #[test]
    fn two_twists_agree() {
        let r = gap_reduction_report(2, &SpectralConfig::default()).unwrap();
        assert!(r.betti_agree);
        assert!((r.full_min_gap.unwrap() - 0.585786).abs() < 1e-6);
    }
}
