//! Lanczos iteration with full reorthogonalization, plus a conjugate
//! gradient solver used to run it in shift-invert mode.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Symmetric linear operator `y = A x`.
pub trait Operator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl Operator for CsrMatrix {
    fn dim(&self) -> usize {
        self.rows
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.mul_vec(x, y);
    }
}

/// Which end of the spectrum to resolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Smallest,
    Largest,
}

/// Converged Ritz values at the requested end, ordered from that end.
#[derive(Debug, Clone)]
pub struct LanczosResult {
    pub values: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Deterministic pseudo-random start vector.
pub fn random_start(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random::<f64>() - 0.5).collect()
}

/// Runs Lanczos from `start` until the `count` extreme Ritz values at
/// `which` have relative residual at most `tol`, or the Krylov space is
/// exhausted. Ritz values with magnitude below `discard_below` are skipped
/// when counting (used to step over kernel leakage).
pub fn lanczos<O: Operator>(
    op: &O,
    start: Vec<f64>,
    count: usize,
    which: Which,
    tol: f64,
    max_iter: usize,
    discard_below: f64,
) -> Result<LanczosResult> {
    let n = op.dim();
    let max_iter = max_iter.min(n).max(1);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut v = start;
    let nv = norm(&v);
    if nv == 0.0 {
        return Err(Error::DomainError("zero start vector".into()));
    }
    v.iter_mut().for_each(|x| *x /= nv);
    let mut w = vec![0.0; n];
    let mut next_check = 8usize;
    loop {
        op.apply(&v, &mut w);
        let a = dot(&w, &v);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi -= a * vi;
        }
        if let (Some(prev), Some(&b)) = (basis.last(), beta.last()) {
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= b * pi;
            }
        }
        basis.push(v.clone());
        alpha.push(a);
        // Two passes of classical Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&w, q);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let b = norm(&w);
        let k = basis.len();
        let scale = alpha.iter().fold(1.0f64, |m, x| m.max(x.abs())) + beta.iter().fold(0.0f64, |m, x| m.max(*x));
        let exhausted = b <= 1e-12 * scale || k >= max_iter;
        if exhausted || k >= next_check {
            let (values, residual) = ritz(&alpha, &beta, b, count, which, discard_below, scale);
            if values.len() >= count.min(k) && residual <= tol {
                return Ok(LanczosResult { values, iterations: k, residual });
            }
            if exhausted {
                if b <= 1e-12 * scale {
                    // Invariant subspace: Ritz values are exact.
                    return Ok(LanczosResult { values, iterations: k, residual });
                }
                return Err(Error::ConvergenceFailure { iterations: k, residual });
            }
            next_check = k + (k / 8).max(8);
        }
        beta.push(b);
        v = w.iter().map(|x| x / b).collect();
    }
}

/// Ritz values of the tridiagonal matrix and the worst relative residual
/// among the wanted ones.
fn ritz(
    alpha: &[f64],
    beta: &[f64],
    b_next: f64,
    count: usize,
    which: Which,
    discard_below: f64,
    scale: f64,
) -> (Vec<f64>, f64) {
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    if which == Which::Largest {
        order.reverse();
    }
    let mut values = Vec::new();
    let mut worst = 0.0f64;
    for idx in order {
        let theta = eig.eigenvalues[idx];
        if theta.abs() < discard_below {
            continue;
        }
        let res = (b_next * eig.eigenvectors[(k - 1, idx)]).abs() / scale.max(theta.abs()).max(1e-300);
        worst = worst.max(res);
        values.push(theta);
        if values.len() == count {
            break;
        }
    }
    (values, worst)
}

/// Solves `A x = b` for symmetric positive (semi)definite `A` by conjugate
/// gradients; returns the iteration count.
pub fn conjugate_gradient<O: Operator>(op: &O, b: &[f64], x: &mut [f64], rel_tol: f64, max_iter: usize) -> Result<usize> {
    let n = op.dim();
    x.iter_mut().for_each(|v| *v = 0.0);
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok(0);
    }
    let mut rr = dot(&r, &r);
    for it in 0..max_iter {
        if rr.sqrt() <= rel_tol * bnorm {
            return Ok(it);
        }
        op.apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::ConvergenceFailure { iterations: it, residual: rr.sqrt() / bnorm });
        }
        let step = rr / pap;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        let rr_new = dot(&r, &r);
        let ratio = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + ratio * p[i];
        }
    }
    if rr.sqrt() <= rel_tol * bnorm * 100.0 {
        return Ok(max_iter);
    }
    Err(Error::ConvergenceFailure { iterations: max_iter, residual: rr.sqrt() / bnorm })
}

/// `x -> A^{-1} x` through conjugate gradients.
pub struct ShiftInvert<'a, O: Operator> {
    pub op: &'a O,
    pub rel_tol: f64,
    pub max_iter: usize,
    failure: std::cell::Cell<Option<Error>>,
}

impl<'a, O: Operator> ShiftInvert<'a, O> {
    pub fn new(op: &'a O, rel_tol: f64) -> Self {
        let max_iter = 20 * op.dim() + 100;
        Self { op, rel_tol, max_iter, failure: std::cell::Cell::new(None) }
    }

    /// First inner-solve failure, if any.
    pub fn take_failure(&self) -> Option<Error> {
        self.failure.take()
    }
}

impl<O: Operator> Operator for ShiftInvert<'_, O> {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        if let Err(e) = conjugate_gradient(self.op, x, y, self.rel_tol, self.max_iter) {
            let prev = self.failure.take();
            self.failure.set(prev.or(Some(e)));
        }
    }
}

/// Smallest eigenvalue of a symmetric positive definite operator via
/// shift-invert Lanczos (largest eigenvalue of `A^{-1}`).
pub fn smallest_eigenvalue_spd<O: Operator>(op: &O, tol: f64, seed: u64) -> Result<f64> {
    let inv = ShiftInvert::new(op, 1e-13);
    let res = lanczos(&inv, random_start(op.dim(), seed), 1, Which::Largest, tol, 300, 0.0)?;
    if let Some(e) = inv.take_failure() {
        return Err(e);
    }
    let mu = res.values[0];
    if mu <= 0.0 {
        return Err(Error::ConvergenceFailure { iterations: res.iterations, residual: res.residual });
    }
    Ok(1.0 / mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::IntegerSparseMatrix;

    fn path_matrix(n: usize) -> CsrMatrix {
        // Tridiagonal [1 2 1] pattern: eigenvalues 2 + 2 cos(kπ/(n+1)).
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2));
            if i + 1 < n {
                t.push((i, i + 1, 1));
                t.push((i + 1, i, 1));
            }
        }
        IntegerSparseMatrix::from_triplets(n, n, t).to_csr_f64()
    }

    #[test]
    fn extremes_of_a_path() {
        let n = 200;
        let a = path_matrix(n);
        let exact_min = 2.0 + 2.0 * (n as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
        let exact_max = 2.0 + 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        let top = lanczos(&a, random_start(n, 1), 1, Which::Largest, 1e-10, n, 0.0).unwrap();
        assert!((top.values[0] - exact_max).abs() < 1e-8);
        let low = smallest_eigenvalue_spd(&a, 1e-12, 7).unwrap();
        assert!((low - exact_min).abs() < 1e-9, "{low} vs {exact_min}");
    }

    #[test]
    fn cg_solves() {
        let a = path_matrix(50);
        let b: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let mut x = vec![0.0; 50];
        conjugate_gradient(&a, &b, &mut x, 1e-12, 1000).unwrap();
        let mut ax = vec![0.0; 50];
        a.apply(&x, &mut ax);
        assert!(ax.iter().zip(&b).all(|(p, q)| (p - q).abs() < 1e-8));
    }
}
