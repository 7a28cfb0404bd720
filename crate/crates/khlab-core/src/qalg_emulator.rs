//! Measurement statistics of the thermalize, project, SWAP-test pipeline,
//! sampled from exact spectra.

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{HodgeLaplacian, KhovanovComplex};
use crate::knot_io::KnotDiagram;
use crate::resolution::{build_cube, ResolutionCube};
use crate::spectral::{spectrum, Spectrum};

/// Minimum expected accepted projections for an estimate.
pub const MIN_ACCEPTANCES: u64 = 10;
/// Shards are fixed so results do not depend on the thread count.
const SHARDS: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GibbsProfile {
    pub i_raw: i32,
    pub j_raw: i32,
    pub temperature: f64,
    /// `Tr(P_ker e^{-Δ/T}) / Tr(e^{-Δ/T})`.
    pub overlap: f64,
    pub partition: f64,
}

/// Kernel overlap of the Gibbs state, kernel eigenvalues taken as exactly 0.
pub fn gibbs_overlap_from_spectrum(s: &Spectrum, temperature: f64) -> Result<GibbsProfile> {
    if !s.complete {
        return Err(Error::SizeLimitExceeded { what: "Gibbs spectrum dimension", value: s.dim, limit: s.eigenvalues.len() });
    }
    if !(temperature > 0.0) {
        return Err(Error::DomainError(format!("temperature must be positive, got {temperature}")));
    }
    let k = s.kernel_dim as f64;
    let partition = k + s.eigenvalues[s.kernel_dim..].iter().map(|&l| (-l / temperature).exp()).sum::<f64>();
    let overlap = if partition > 0.0 { k / partition } else { 0.0 };
    Ok(GibbsProfile { i_raw: s.i_raw, j_raw: s.j_raw, temperature, overlap, partition })
}

pub fn gibbs_overlap(l: &HodgeLaplacian, kernel_dim: usize, temperature: f64) -> Result<GibbsProfile> {
    gibbs_overlap_from_spectrum(&spectrum(l, kernel_dim)?, temperature)
}

/// `k / (k + (dim - k) e^{-gap/T})`: a lower bound on the overlap using only
/// the gap.
pub fn gap_overlap_bound(s: &Spectrum, temperature: f64) -> Option<f64> {
    let gap = s.gap?;
    let k = s.kernel_dim as f64;
    Some(k / (k + (s.dim - s.kernel_dim) as f64 * (-gap / temperature).exp()))
}

/// `1/2 + 1/(2β)`.
pub fn swap_test_prob(beta: u64) -> Result<Rational64> {
    if beta == 0 {
        return Err(Error::DomainError("SWAP test needs a nonzero kernel".into()));
    }
    Ok(Rational64::new(1, 2) + Rational64::new(1, 2 * beta as i64))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BettiEstimate {
    pub i_raw: i32,
    pub j_raw: i32,
    pub temperature: f64,
    pub overlap: f64,
    pub beta_true: usize,
    pub beta_hat: f64,
    pub stderr: f64,
    pub shots: u64,
    pub accepted: u64,
    pub seed: u64,
}

/// Samples `shots` projections at acceptance rate `overlap`, pairs accepted
/// copies for SWAP tests and inverts the success frequency.
/// Returns `(beta_hat, stderr, accepted)`.
pub fn emulate_swap_estimate(overlap: f64, beta_true: usize, shots: u64, seed: u64) -> Result<(f64, f64, u64)> {
    if overlap * shots as f64 <= MIN_ACCEPTANCES as f64 || beta_true == 0 {
        return Err(Error::InsufficientAcceptances { accepted: (overlap * shots as f64) as u64, needed: MIN_ACCEPTANCES });
    }
    let p = 0.5 + 0.5 / beta_true as f64;
    let (accepted, pairs, successes) = (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let n = shots / SHARDS + u64::from(shard < shots % SHARDS);
            let acc = (0..n).filter(|_| rng.random_bool(overlap)).count() as u64;
            let pairs = acc / 2;
            let succ = (0..pairs).filter(|_| rng.random_bool(p)).count() as u64;
            (acc, pairs, succ)
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    if accepted < MIN_ACCEPTANCES || pairs == 0 {
        return Err(Error::InsufficientAcceptances { accepted, needed: MIN_ACCEPTANCES });
    }
    let p_hat = successes as f64 / pairs as f64;
    let excess = 2.0 * p_hat - 1.0;
    if excess <= 0.0 {
        return Err(Error::ConvergenceFailure { iterations: pairs as usize, residual: excess });
    }
    let se_p = (p_hat * (1.0 - p_hat) / pairs as f64).sqrt();
    Ok((1.0 / excess, 2.0 * se_p / (excess * excess), accepted))
}

/// Full emulation at raw bidegree `(i, j)`.
pub fn estimate_betti_via_emulation(k: &KnotDiagram, i_raw: i32, j_raw: i32, temperature: f64, shots: u64, seed: u64) -> Result<BettiEstimate> {
    let cube = build_cube(k)?;
    let cx = KhovanovComplex::new(k, &cube);
    let beta_true = cx.betti_raw(i_raw, j_raw)?;
    let g = gibbs_overlap(&cx.laplacian(i_raw, j_raw), beta_true, temperature)?;
    let (beta_hat, stderr, accepted) = emulate_swap_estimate(g.overlap, beta_true, shots, seed)?;
    Ok(BettiEstimate { i_raw, j_raw, temperature, overlap: g.overlap, beta_true, beta_hat, stderr, shots, accepted, seed })
}

/// `m⁴ β⁴ t_therm / √δ`.
pub fn runtime_model(m: f64, beta: f64, delta: f64, t_therm: f64) -> f64 {
    m.powi(4) * beta.powi(4) * t_therm / delta.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LoopLipschitz {
    /// `|ℓ(r) − ℓ(r′)| = 1` on every cube edge.
    pub holds: bool,
    /// `Σ_r 2^{ℓ(r)}`.
    pub z: u128,
}

pub fn loop_lipschitz_check(cube: &ResolutionCube) -> LoopLipschitz {
    let mut holds = true;
    let mut z: u128 = 0;
    for r in cube.resolutions() {
        let l = cube.loop_count(r);
        z += 1u128 << l;
        for k in (0..cube.m()).filter(|&k| !r.bit(k)) {
            holds &= cube.loop_count(r.with_one(k)).abs_diff(l) == 1;
        }
    }
    LoopLipschitz { holds, z }
}
