//! Floating-point spectra of Hodge Laplacians.
//!
//! Kernel dimensions always come from the exact rank computation, so gaps
//! never depend on a numerical zero threshold. Small matrices get a full
//! dense eigendecomposition; large ones go through shift-invert Lanczos.

pub mod lanczos;

use std::collections::BTreeMap;
use std::io::{self, Write};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::GradingShift;
use crate::error::{Error, Result};
use crate::homology::{HodgeLaplacian, KhovanovComplex};
use crate::output::{fmt_opt, fmt_sig};
use crate::sparse::{CsrMatrix, IntegerSparseMatrix};
use lanczos::{lanczos, random_start, Operator, ShiftInvert, Which};

/// Tuning for eigenvalue computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    /// Largest dimension that gets a full dense decomposition in
    /// [`spectrum_with`].
    pub dense_cutoff: usize,
    /// Largest dimension solved densely when only the gap is needed.
    pub gap_dense_cutoff: usize,
    /// Relative residual for the iterative solver.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self { dense_cutoff: 4096, gap_dense_cutoff: 400, tol: 1e-10, seed: 0x6b68_6c61_62 }
    }
}

/// Eigenvalues of one Hodge Laplacian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub i_raw: i32,
    pub j_raw: i32,
    pub dim: usize,
    /// Ascending. Complete when `complete`; otherwise the smallest nonzero
    /// eigenvalues found by the iterative solver (distinct values only).
    pub eigenvalues: Vec<f64>,
    pub complete: bool,
    pub kernel_dim: usize,
    pub gap: Option<f64>,
    pub max_eig: Option<f64>,
    /// Maximum absolute row sum of `Δ`.
    pub norm_inf: f64,
}

impl Spectrum {
    /// `1e-8 * max(1, ‖Δ‖∞)`.
    pub fn gap_floor(&self) -> f64 {
        1e-8 * self.norm_inf.max(1.0)
    }

    /// For complete spectra: the `kernel_dim` smallest eigenvalues lie below
    /// the floor and the next one above it.
    pub fn kernel_separated(&self) -> Option<bool> {
        if !self.complete {
            return None;
        }
        let floor = self.gap_floor();
        let below = self.eigenvalues[..self.kernel_dim].iter().all(|v| v.abs() < floor);
        let above = self.eigenvalues.get(self.kernel_dim).map_or(true, |&v| v > floor);
        Some(below && above)
    }
}

fn norm_inf(m: &IntegerSparseMatrix) -> f64 {
    m.row_slices()
        .iter()
        .map(|row| row.iter().map(|e| e.2.unsigned_abs() as f64).sum::<f64>())
        .fold(0.0, f64::max)
}

pub(crate) fn dense_eigenvalues(m: &IntegerSparseMatrix) -> Vec<f64> {
    let n = m.rows();
    if n == 0 {
        return Vec::new();
    }
    let mut dense = DMatrix::<f64>::zeros(n, n);
    for &(r, c, v) in m.entries() {
        dense[(r, c)] = v as f64;
    }
    let mut eig: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// `x -> Δ (Δ⁺)² x`: the pseudo-inverse on the range, exactly zero on the
/// kernel, so Lanczos on it cannot pick up kernel directions.
struct RangeInverse<'a> {
    delta: &'a CsrMatrix,
    inv: ShiftInvert<'a, CsrMatrix>,
}

impl Operator for RangeInverse<'_> {
    fn dim(&self) -> usize {
        self.delta.rows
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut t = vec![0.0; x.len()];
        self.inv.apply(x, &mut t);
        let mut u = vec![0.0; x.len()];
        self.inv.apply(&t, &mut u);
        self.delta.apply(&u, y);
    }
}

/// Smallest `count` nonzero eigenvalues (distinct, ascending) of a positive
/// semidefinite matrix with known nullity.
fn smallest_nonzero_iterative(m: &IntegerSparseMatrix, kernel_dim: usize, count: usize, cfg: &SpectralConfig) -> Result<Vec<f64>> {
    let csr = m.to_csr_f64();
    let n = csr.rows;
    let mut start = random_start(n, cfg.seed);
    let result = if kernel_dim == 0 {
        let inv = ShiftInvert::new(&csr, 1e-13);
        let r = lanczos(&inv, start, count, Which::Largest, cfg.tol, 400, 0.0)?;
        if let Some(e) = inv.take_failure() {
            return Err(e);
        }
        r
    } else {
        let mut in_range = vec![0.0; n];
        csr.apply(&start, &mut in_range);
        start = in_range;
        let op = RangeInverse { delta: &csr, inv: ShiftInvert::new(&csr, 1e-13) };
        let r = lanczos(&op, start, count, Which::Largest, cfg.tol, 400, 0.0)?;
        if let Some(e) = op.inv.take_failure() {
            return Err(e);
        }
        r
    };
    let mut values: Vec<f64> = result.values.iter().filter(|&&mu| mu > 0.0).map(|mu| 1.0 / mu).collect();
    values.sort_by(f64::total_cmp);
    if values.is_empty() {
        return Err(Error::ConvergenceFailure { iterations: result.iterations, residual: result.residual });
    }
    Ok(values)
}

fn largest_iterative(m: &IntegerSparseMatrix, cfg: &SpectralConfig) -> Result<f64> {
    let csr = m.to_csr_f64();
    let r = lanczos(&csr, random_start(csr.rows, cfg.seed ^ 1), 1, Which::Largest, 1e-9, 600, 0.0)?;
    Ok(r.values[0])
}

/// Spectrum with default configuration.
pub fn spectrum(l: &HodgeLaplacian, kernel_dim: usize) -> Result<Spectrum> {
    spectrum_with(l, kernel_dim, &SpectralConfig::default())
}

/// Full dense spectrum up to `dense_cutoff`; above it the smallest
/// `kernel_dim + 5` eigenvalues, of which the kernel ones are known to be
/// zero and the rest come from shift-invert Lanczos.
pub fn spectrum_with(l: &HodgeLaplacian, kernel_dim: usize, cfg: &SpectralConfig) -> Result<Spectrum> {
    let dim = l.dim();
    let norm_inf = norm_inf(&l.matrix);
    if dim <= cfg.dense_cutoff {
        let eigenvalues = dense_eigenvalues(&l.matrix);
        let gap = eigenvalues.get(kernel_dim).copied();
        let max_eig = eigenvalues.last().copied();
        return Ok(Spectrum { i_raw: l.i_raw, j_raw: l.j_raw, dim, eigenvalues, complete: true, kernel_dim, gap, max_eig, norm_inf });
    }
    let (gap, eigenvalues) = if kernel_dim < dim {
        let ev = smallest_nonzero_iterative(&l.matrix, kernel_dim, 5.min(dim - kernel_dim), cfg)?;
        (Some(ev[0]), ev)
    } else {
        (None, Vec::new())
    };
    let max_eig = if l.matrix.is_zero() { Some(0.0) } else { Some(largest_iterative(&l.matrix, cfg)?) };
    Ok(Spectrum { i_raw: l.i_raw, j_raw: l.j_raw, dim, eigenvalues, complete: false, kernel_dim, gap, max_eig, norm_inf })
}

/// Gap and top eigenvalue only, switching to the iterative solver above
/// `gap_dense_cutoff`.
pub fn gap_with(l: &HodgeLaplacian, kernel_dim: usize, cfg: &SpectralConfig) -> Result<(Option<f64>, Option<f64>)> {
    let dim = l.dim();
    if dim == 0 {
        return Ok((None, None));
    }
    if dim <= cfg.gap_dense_cutoff {
        let ev = dense_eigenvalues(&l.matrix);
        return Ok((ev.get(kernel_dim).copied(), ev.last().copied()));
    }
    let gap = if kernel_dim < dim { Some(smallest_nonzero_iterative(&l.matrix, kernel_dim, 1, cfg)?[0]) } else { None };
    let max_eig = if l.matrix.is_zero() { 0.0 } else { largest_iterative(&l.matrix, cfg)? };
    Ok((gap, Some(max_eig)))
}

/// One row of a knot's gap profile, at a published bidegree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub i: i32,
    pub j: i32,
    pub dim: usize,
    pub kernel_dim: usize,
    pub gap: Option<f64>,
    pub max_eig: Option<f64>,
}

/// Per-bidegree gaps of a knot with their minimum and mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapProfile {
    pub knot: String,
    pub rows: Vec<GapRow>,
}

impl GapProfile {
    /// Smallest defined gap and where it occurs (first in bidegree order on
    /// ties within 1e-12).
    pub fn min_gap(&self) -> Option<(f64, (i32, i32))> {
        let mut best: Option<(f64, (i32, i32))> = None;
        for r in &self.rows {
            if let Some(g) = r.gap {
                if best.map_or(true, |(b, _)| g < b - 1e-12) {
                    best = Some((g, (r.i, r.j)));
                }
            }
        }
        best
    }

    /// Mean over bidegrees whose gap is defined; empty and all-kernel
    /// bidegrees are left out.
    pub fn avg_gap(&self) -> Option<f64> {
        let gaps: Vec<f64> = self.rows.iter().filter_map(|r| r.gap).collect();
        (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64)
    }

    /// `knot,i,j,dim,kernel_dim,gap,max_eig` rows after a metadata line.
    pub fn write_csv<W: Write>(&self, mut w: W, metadata: &str) -> io::Result<()> {
        writeln!(w, "{metadata}")?;
        writeln!(w, "knot,i,j,dim,kernel_dim,gap,max_eig")?;
        for r in &self.rows {
            writeln!(w, "{},{},{},{},{},{},{}", self.knot, r.i, r.j, r.dim, r.kernel_dim, fmt_opt(r.gap), fmt_opt(r.max_eig))?;
        }
        Ok(())
    }
}

/// Gap of every nonempty bidegree, computed in parallel.
pub fn knot_gap_profile(cx: &KhovanovComplex<'_>, name: &str, cfg: &SpectralConfig) -> Result<GapProfile> {
    let shift = GradingShift::of(cx.knot);
    let keys: Vec<(i32, i32)> = cx.dims().keys().copied().collect();
    let rows: Vec<Result<GapRow>> = keys
        .par_iter()
        .map(|&(i, j)| {
            let kernel_dim = cx.betti_raw(i, j)?;
            let lap = cx.laplacian(i, j);
            let (gap, max_eig) = gap_with(&lap, kernel_dim, cfg)?;
            let (pi, pj) = shift.publish(i, j);
            Ok(GapRow { i: pi, j: pj, dim: lap.dim(), kernel_dim, gap, max_eig })
        })
        .collect();
    let mut rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.i, r.j));
    Ok(GapProfile { knot: name.to_string(), rows })
}

/// Complete spectra of every nonempty bidegree (dense, any size).
pub fn knot_spectra(cx: &KhovanovComplex<'_>) -> Result<Vec<Spectrum>> {
    let cfg = SpectralConfig { dense_cutoff: usize::MAX, ..SpectralConfig::default() };
    let keys: Vec<(i32, i32)> = cx.dims().keys().copied().collect();
    keys.par_iter()
        .map(|&(i, j)| spectrum_with(&cx.laplacian(i, j), cx.betti_raw(i, j)?, &cfg))
        .collect()
}

/// Number of pairs `{a < b}` in `1..=n+1`.
fn pair_index(n: usize) -> BTreeMap<(usize, usize), usize> {
    let mut idx = BTreeMap::new();
    for a in 1..=n + 1 {
        for b in a + 1..=n + 1 {
            let k = idx.len();
            idx.insert((a, b), k);
        }
    }
    idx
}

/// Laplacian of the twisted unknot on the pair basis `{a, b}`.
pub fn tu_pair_laplacian(n: usize) -> IntegerSparseMatrix {
    let idx = pair_index(n);
    let mut t = Vec::new();
    for (&(a, b), &k) in &idx {
        let diag = 4 - i64::from(a == 1) - i64::from(b == n + 1) - i64::from(b == a + 1);
        t.push((k, k, diag));
        let neighbours = [(a.wrapping_sub(1), b), (a + 1, b), (a, b.wrapping_sub(1)), (a, b + 1)];
        for (x, y) in neighbours {
            if let Some(&l) = idx.get(&(x, y)) {
                t.push((k, l, 1));
            }
        }
    }
    IntegerSparseMatrix::from_triplets(idx.len(), idx.len(), t)
}

/// Smallest eigenvalue of [`tu_pair_laplacian`].
pub fn tu_bidegree_gap(n: usize) -> f64 {
    let m = tu_pair_laplacian(n);
    if m.rows() <= 400 {
        return dense_eigenvalues(&m)[0];
    }
    let csr = m.to_csr_f64();
    lanczos::smallest_eigenvalue_spd(&csr, 1e-12, 17).expect("pair Laplacian is positive definite")
}

/// The Lorentzian `a / (1 + (x - b)² / c²)`.
pub fn lorentzian(x: f64, a: f64, b: f64, c: f64) -> f64 {
    a / (1.0 + (x - b).powi(2) / (c * c))
}

/// Eigenvalue counts in bins of fixed width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DosHistogram {
    pub bin_width: f64,
    /// Bin `k` covers `[k w, (k+1) w)`.
    pub counts: BTreeMap<i64, u64>,
    pub scope: Vec<(String, i32, i32)>,
}

/// Exponential fit `log N ≈ intercept + slope E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DosFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

impl DosHistogram {
    pub fn new(bin_width: f64) -> Self {
        Self { bin_width, counts: BTreeMap::new(), scope: Vec::new() }
    }

    /// Adds a complete spectrum; its kernel lands in bin 0.
    pub fn add(&mut self, knot: &str, s: &Spectrum) {
        assert!(s.complete, "histogram needs complete spectra");
        self.scope.push((knot.to_string(), s.i_raw, s.j_raw));
        for (k, &v) in s.eigenvalues.iter().enumerate() {
            let bin = if k < s.kernel_dim { 0 } else { (v / self.bin_width).floor().max(0.0) as i64 };
            *self.counts.entry(bin).or_insert(0) += 1;
        }
    }

    /// Associative merge.
    pub fn merge(mut self, other: Self) -> Self {
        for (k, c) in other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
        self.scope.extend(other.scope);
        self
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Bin centre of bin `k`.
    pub fn energy(&self, k: i64) -> f64 {
        (k as f64 + 0.5) * self.bin_width
    }

    /// Tightest exponential upper envelope anchored at the kernel bin: the
    /// smallest `s` with `N(E) <= N(0) e^{sE}` for every bin, where `E` is
    /// the bin centre. `intercept` is `log N(0)`.
    pub fn envelope_fit(&self) -> Option<DosFit> {
        let n0 = *self.counts.get(&0)? as f64;
        let mut slope = f64::NEG_INFINITY;
        let mut points = 0;
        for (&k, &c) in self.counts.range(1..) {
            slope = slope.max(((c as f64).ln() - n0.ln()) / self.energy(k));
            points += 1;
        }
        (points > 0).then_some(DosFit { slope, intercept: n0.ln(), points })
    }

    /// Ordinary least squares of `log N` over the nonempty bins between the
    /// kernel bin and the highest bin, inclusive of the latter.
    pub fn rising_fit(&self) -> Option<DosFit> {
        let (&peak, _) = self.counts.range(1..).max_by_key(|(&k, &c)| (c, std::cmp::Reverse(k)))?;
        let pts: Vec<(f64, f64)> = self.counts.range(1..=peak).map(|(&k, &c)| (self.energy(k), (c as f64).ln())).collect();
        linear_fit(&pts)
    }

    /// `bin_lo,count` rows after a metadata line.
    pub fn write_csv<W: Write>(&self, mut w: W, metadata: &str) -> io::Result<()> {
        writeln!(w, "{metadata}")?;
        writeln!(w, "bin_lo,count")?;
        for (&k, &c) in &self.counts {
            writeln!(w, "{},{c}", fmt_sig(k as f64 * self.bin_width))?;
        }
        Ok(())
    }
}

/// Ordinary least squares `y = intercept + slope x`.
pub fn linear_fit(pts: &[(f64, f64)]) -> Option<DosFit> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some(DosFit { slope, intercept: my - slope * mx, points: pts.len() })
}

/// Histogram over the complete spectra of several knots.
pub fn dos_histogram(spectra: &[(String, Vec<Spectrum>)], bin_width: f64) -> DosHistogram {
    spectra
        .par_iter()
        .map(|(name, list)| {
            let mut h = DosHistogram::new(bin_width);
            for s in list {
                h.add(name, s);
            }
            h
        })
        .reduce(|| DosHistogram::new(bin_width), DosHistogram::merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot_io::twisted_unknot;
    use crate::resolution::build_cube;

    #[test]
    fn tridiagonal_example() {
        let m = IntegerSparseMatrix::from_dense(&[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]);
        let l = HodgeLaplacian { i_raw: 0, j_raw: 1, matrix: m };
        let s = spectrum(&l, 0).unwrap();
        let r2 = 2f64.sqrt();
        for (a, b) in s.eigenvalues.iter().zip([2.0 - r2, 2.0, 2.0 + r2]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((s.gap.unwrap() - 0.585786).abs() < 1e-6);
    }

    #[test]
    fn empty_matrix_has_no_gap() {
        let l = HodgeLaplacian { i_raw: 0, j_raw: 0, matrix: IntegerSparseMatrix::zeros(0, 0) };
        let s = spectrum(&l, 0).unwrap();
        assert_eq!(s.gap, None);
        assert!(s.eigenvalues.is_empty());
    }

    #[test]
    fn pair_laplacian_small_n() {
        assert!((tu_bidegree_gap(2) - 0.585786).abs() < 1e-6);
        assert!((tu_bidegree_gap(3) - 0.381966).abs() < 1e-6);
        assert!((tu_bidegree_gap(10) - 0.0681483).abs() < 1e-6);
    }

    #[test]
    fn iterative_matches_dense() {
        let k = twisted_unknot(6);
        let cube = build_cube(&k).unwrap();
        let cx = KhovanovComplex::new(&k, &cube);
        let dense = SpectralConfig { gap_dense_cutoff: usize::MAX, ..Default::default() };
        let iter = SpectralConfig { gap_dense_cutoff: 0, ..Default::default() };
        for (&(i, j), &dim) in cx.dims() {
            if dim < 10 {
                continue;
            }
            let lap = cx.laplacian(i, j);
            let kd = cx.betti_raw(i, j).unwrap();
            let (g1, m1) = gap_with(&lap, kd, &dense).unwrap();
            let (g2, m2) = gap_with(&lap, kd, &iter).unwrap();
            match (g1, g2) {
                (Some(a), Some(b)) => assert!((a - b).abs() < 1e-8 * a.max(1.0), "({i},{j}) {a} vs {b}"),
                (None, None) => {}
                other => panic!("({i},{j}) {other:?}"),
            }
            assert!((m1.unwrap() - m2.unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn histogram_counts_dimensions() {
        let k = twisted_unknot(3);
        let cube = build_cube(&k).unwrap();
        let cx = KhovanovComplex::new(&k, &cube);
        let spectra = knot_spectra(&cx).unwrap();
        let total: usize = spectra.iter().map(|s| s.dim).sum();
        let h = dos_histogram(&[("tu3".into(), spectra)], 0.05);
        assert_eq!(h.total() as usize, total);
        assert_eq!(DosHistogram::new(0.05).total(), 0);
    }

    #[test]
    fn lorentzian_peak() {
        assert_eq!(lorentzian(1.0, 2.0, 1.0, 3.0), 2.0);
    }
}
