//! Weighted graphs whose signless Laplacian is the degree-zero Laplacian,
//! and the Ψ-based eigenvalue bounds built on them.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{binomial, enumerate_basis};
use crate::error::{Error, Result};
use crate::resolution::{CubeEdge, Resolution, ResolutionCube};
use crate::sparse::IntegerSparseMatrix;

/// Exhaustive subset search limit for Ψ.
pub const SUBSET_SEARCH_LIMIT: usize = 20;
/// Largest vertex count for which `e'_min(V)` is found by brute force on a
/// non-bipartite graph.
pub const MAXCUT_LIMIT: usize = 24;

/// Merge and split terms of the degree-zero Laplacian, one per crossing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionProfile {
    /// Loop labels of the all-0 resolution, ascending.
    pub loop_labels: Vec<u32>,
    /// `(i, j)` loop labels with `i < j`, in crossing order.
    pub merge_pairs: Vec<(u32, u32)>,
    /// Loop labels of split terms, in crossing order.
    pub split_indices: Vec<u32>,
}

impl DecompositionProfile {
    pub fn p(&self) -> usize {
        self.merge_pairs.len()
    }

    pub fn t(&self) -> usize {
        self.split_indices.len()
    }

    pub fn ell(&self) -> usize {
        self.loop_labels.len()
    }

    fn position(&self, label: u32) -> usize {
        self.loop_labels.binary_search(&label).expect("label of the all-0 resolution")
    }

    /// Merge pairs as 1-based positions among the loop labels.
    pub fn merge_index_pairs(&self) -> Vec<(usize, usize)> {
        self.merge_pairs.iter().map(|&(a, b)| (self.position(a) + 1, self.position(b) + 1)).collect()
    }

    /// Merge pairs with multiplicities.
    pub fn pair_weights(&self) -> BTreeMap<(u32, u32), i64> {
        let mut w = BTreeMap::new();
        for &p in &self.merge_pairs {
            *w.entry(p).or_insert(0) += 1;
        }
        w
    }
}

/// Classifies each crossing's cube edge out of the all-0 resolution.
pub fn degree_zero_profile(cube: &ResolutionCube) -> DecompositionProfile {
    let r0 = Resolution::new(0, cube.m());
    let loop_labels = cube.labeling(r0).loop_labels().to_vec();
    let mut merge_pairs = Vec::new();
    let mut split_indices = Vec::new();
    for k in 0..cube.m() {
        match cube.edge_kind(r0, k) {
            CubeEdge::Merge { kept, removed } => merge_pairs.push((kept.min(removed), kept.max(removed))),
            CubeEdge::Split { kept, .. } => split_indices.push(kept),
            CubeEdge::Neither => unreachable!("every cube edge merges or splits"),
        }
    }
    DecompositionProfile { loop_labels, merge_pairs, split_indices }
}

/// Graph on label words with rational edge and loop weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    pub ell: usize,
    pub k: usize,
    /// Words over the all-0 loops, most significant bit = smallest label,
    /// set bit = `X`; in the chain-basis order.
    pub vertices: Vec<u32>,
    pub edges: BTreeMap<(usize, usize), Rational64>,
    pub loops: BTreeMap<usize, Rational64>,
}

impl WeightedGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Word of vertex `v` as `1`/`X` characters.
    pub fn word(&self, v: usize) -> String {
        (0..self.ell).map(|t| if (self.vertices[v] >> (self.ell - 1 - t)) & 1 == 1 { 'X' } else { '1' }).collect()
    }

    /// Weighted degree, each loop counted once.
    pub fn degree(&self, v: usize) -> Rational64 {
        let mut d = self.loops.get(&v).copied().unwrap_or_else(Rational64::zero);
        for (&(a, b), &w) in &self.edges {
            if a == v || b == v {
                d += w;
            }
        }
        d
    }

    /// `d*`, the largest weighted degree.
    pub fn max_degree(&self) -> Rational64 {
        (0..self.len()).map(|v| self.degree(v)).max().unwrap_or_else(Rational64::zero)
    }

    /// Bipartiteness of the graph with loops removed.
    pub fn loop_free_bipartite(&self) -> bool {
        is_bipartite(&doubled_adjacency(self))
    }

    /// Connectivity of the graph with loops removed.
    pub fn is_connected(&self) -> bool {
        let adj = doubled_adjacency(self);
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            if v < seen.len() && !seen[v] {
                seen[v] = true;
                stack.extend(adj[v].iter().map(|e| e.0));
            }
        }
        seen.iter().all(|&x| x)
    }

    pub fn loop_total(&self) -> Rational64 {
        self.loops.values().copied().sum()
    }

    /// Edge-list text: `u v weight` lines, then a `loops` section of
    /// `v weight` lines.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# G_{{{},{}}}: {} vertices", self.ell - self.k, self.k, self.len())?;
        for (&(a, b), &wt) in &self.edges {
            writeln!(w, "{} {} {}", self.word(a), self.word(b), wt)?;
        }
        writeln!(w, "loops")?;
        for (&v, &wt) in &self.loops {
            writeln!(w, "{} {}", self.word(v), wt)?;
        }
        Ok(())
    }
}

/// `G_{ℓ−k,k}`: vertices are words with `k` copies of `𝟙`.
pub fn build_graph(profile: &DecompositionProfile, k: usize) -> WeightedGraph {
    let ell = profile.ell();
    assert!(k <= ell, "k = {k} exceeds ℓ = {ell}");
    let x_count = ell - k;
    // Same order as the chain basis at homological degree zero.
    let mut vertices: Vec<u32> = (0..1u32 << ell).filter(|w| w.count_ones() as usize == x_count).collect();
    vertices.sort_unstable();
    let index: BTreeMap<u32, usize> = vertices.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let bit = |pos: usize| 1u32 << (ell - 1 - pos);
    let half = Rational64::new(1, 2);
    let one = Rational64::from_integer(1);
    let mut edges: BTreeMap<(usize, usize), Rational64> = BTreeMap::new();
    let mut loops: BTreeMap<usize, Rational64> = BTreeMap::new();
    for (v, &word) in vertices.iter().enumerate() {
        for &(a, b) in &profile.merge_pairs {
            let (ba, bb) = (bit(profile.position(a)), bit(profile.position(b)));
            let (xa, xb) = (word & ba != 0, word & bb != 0);
            match (xa, xb) {
                (false, false) => *loops.entry(v).or_insert_with(Rational64::zero) += half,
                (true, false) | (false, true) => {
                    let u = index[&(word ^ ba ^ bb)];
                    if v < u {
                        *edges.entry((v, u)).or_insert_with(Rational64::zero) += one;
                    }
                }
                (true, true) => {}
            }
        }
        for &s in &profile.split_indices {
            let w = if word & bit(profile.position(s)) != 0 { half } else { one };
            *loops.entry(v).or_insert_with(Rational64::zero) += w;
        }
    }
    WeightedGraph { ell, k, vertices, edges, loops }
}

/// `Q = D + A`, loops counted in both `D` and `A`; always integral.
pub fn signless_laplacian(g: &WeightedGraph) -> IntegerSparseMatrix {
    let n = g.len();
    let to_int = |r: Rational64| {
        assert!(r.is_integer(), "Q entry {r} is not an integer");
        r.to_integer()
    };
    let mut t = Vec::new();
    for v in 0..n {
        let lp = g.loops.get(&v).copied().unwrap_or_else(Rational64::zero);
        t.push((v, v, to_int(g.degree(v) + lp)));
    }
    for (&(a, b), &w) in &g.edges {
        let w = to_int(w);
        t.push((a, b, w));
        t.push((b, a, w));
    }
    IntegerSparseMatrix::from_triplets(n, n, t)
}

/// Raw quantum degree of the degree-zero chain space matching `G_{ℓ−k,k}`.
pub fn raw_quantum_degree(ell: usize, k: usize) -> i32 {
    2 * k as i32 - ell as i32
}

/// Enhanced-state words at raw `(0, 2k − ℓ)`, for checking vertex order.
pub fn chain_words(cube: &ResolutionCube, k: usize) -> Vec<u32> {
    let ell = cube.loop_count(Resolution::new(0, cube.m()));
    enumerate_basis(cube, 0, raw_quantum_degree(ell, k)).states().iter().map(|s| s.word).collect()
}

/// A simple odd cycle in the merge-pair graph, as loop labels in order.
pub type OddCycle = Vec<u32>;

/// All simple odd cycles of the merge-pair graph (pairs taken once, with
/// their multiplicity as weight), each listed once.
pub fn odd_cycles(profile: &DecompositionProfile) -> Vec<OddCycle> {
    let weights = profile.pair_weights();
    let labels = profile.loop_labels.clone();
    let n = labels.len();
    let pos = |l: u32| labels.binary_search(&l).expect("label");
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in weights.keys() {
        adj[pos(a)].push(pos(b));
        adj[pos(b)].push(pos(a));
    }
    let mut out = Vec::new();
    // Cycles rooted at their smallest vertex; each undirected cycle is
    // found twice (two directions), keep the one whose second vertex is
    // smaller than its last.
    for s in 0..n {
        let mut path = vec![s];
        let mut on_path = vec![false; n];
        on_path[s] = true;
        walk(s, &adj, &mut path, &mut on_path, &mut |p: &[usize]| {
            if p.len() >= 3 && p.len() % 2 == 1 && p[1] < p[p.len() - 1] {
                out.push(p.iter().map(|&i| labels[i]).collect());
            }
        });
    }
    out
}

fn walk(s: usize, adj: &[Vec<usize>], path: &mut Vec<usize>, on_path: &mut [bool], emit: &mut dyn FnMut(&[usize])) {
    let v = *path.last().expect("nonempty");
    for &u in &adj[v] {
        if u == s && path.len() >= 3 {
            emit(path);
        } else if u > s && !on_path[u] {
            on_path[u] = true;
            path.push(u);
            walk(s, adj, path, on_path, emit);
            path.pop();
            on_path[u] = false;
        }
    }
}

/// `Υ_K = Σ_u ϱ(u)`, `ϱ(u)` the smallest pair multiplicity along `u`.
pub fn upsilon(profile: &DecompositionProfile) -> i64 {
    let w = profile.pair_weights();
    odd_cycles(profile)
        .iter()
        .map(|c| {
            (0..c.len())
                .map(|i| {
                    let (a, b) = (c[i], c[(i + 1) % c.len()]);
                    w[&(a.min(b), a.max(b))]
                })
                .min()
                .expect("cycle has edges")
        })
        .sum()
}

/// Ψ bounds and the observed smallest eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiReport {
    pub ell: usize,
    pub k: usize,
    pub vertices: usize,
    pub p: usize,
    pub t: usize,
    /// `Ψ_V = e_min(V) / |V|`.
    pub psi_v: Rational64,
    /// False when `e'_min(V)` was replaced by its `2Υ_K` upper bound.
    pub psi_v_exact: bool,
    pub psi_exact: Option<Rational64>,
    pub upsilon_k: i64,
    pub d_star: Rational64,
    /// `Ψ² / (4 d*)`, known only with the exact Ψ.
    pub lower_bound: Option<Rational64>,
    /// `4 Ψ_V`.
    pub upper_bound: Rational64,
    pub pair_upper: Rational64,
    pub lambda_min: f64,
}

impl PsiReport {
    /// Lower bound ≤ λ_min ≤ both upper bounds (with a floating tolerance).
    pub fn sandwich_holds(&self) -> bool {
        let tol = 1e-9;
        let lo = self.lower_bound.map_or(true, |b| ratio_f64(b) <= self.lambda_min + tol);
        let exact_upper = self.psi_exact.map_or(true, |p| self.lambda_min <= 4.0 * ratio_f64(p) + tol);
        lo && exact_upper && self.lambda_min <= ratio_f64(self.upper_bound) + tol
    }

    /// Whether `λ_min` is below the closed-form odd-cycle bound.
    pub fn pair_bound_holds(&self) -> bool {
        self.lambda_min <= ratio_f64(self.pair_upper) + 1e-9
    }
}

pub fn ratio_f64(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn binom(n: usize, k: i64) -> i64 {
    if k < 0 || k as usize > n {
        0
    } else {
        binomial(n as u64, k as u64) as i64
    }
}

/// Adjacency of the loop-free graph with doubled (integral) weights.
fn doubled_adjacency(g: &WeightedGraph) -> Vec<Vec<(usize, i64)>> {
    let mut adj = vec![Vec::new(); g.len()];
    for (&(a, b), &w) in &g.edges {
        let w2 = (w * 2).to_integer();
        adj[a].push((b, w2));
        adj[b].push((a, w2));
    }
    adj
}

fn is_bipartite(adj: &[Vec<(usize, i64)>]) -> bool {
    let mut side = vec![None; adj.len()];
    for s in 0..adj.len() {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let sv = side[v].expect("coloured");
            for &(u, _) in &adj[v] {
                match side[u] {
                    None => {
                        side[u] = Some(!sv);
                        stack.push(u);
                    }
                    Some(su) if su == sv => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Minimum doubled weight to delete from the loop-free graph to make it
/// bipartite, by brute force over two-colourings.
fn edge_bipartization_doubled(adj: &[Vec<(usize, i64)>]) -> i64 {
    let n = adj.len();
    let total: i64 = adj.iter().flatten().map(|e| e.1).sum::<i64>() / 2;
    if n <= 1 {
        return 0;
    }
    let mut best_cut = 0;
    // Vertex 0 fixed on side 0.
    for mask in 0u64..(1 << (n - 1)) {
        let side = |v: usize| v > 0 && (mask >> (v - 1)) & 1 == 1;
        let mut cut = 0;
        for v in 0..n {
            for &(u, w) in &adj[v] {
                if u > v && side(u) != side(v) {
                    cut += w;
                }
            }
        }
        best_cut = best_cut.max(cut);
    }
    total - best_cut
}

/// `Ψ = min_S (e_min(S) + |cut(S)|) / |S|` by exhaustive search over
/// subsets and their two-colourings.
pub fn psi_exhaustive(g: &WeightedGraph) -> Result<Rational64> {
    let n = g.len();
    if n > SUBSET_SEARCH_LIMIT {
        return Err(Error::SubsetSearchSkipped { vertices: n, limit: SUBSET_SEARCH_LIMIT });
    }
    if n == 0 {
        return Ok(Rational64::zero());
    }
    // Highest-degree vertices first tightens pruning.
    let adj = doubled_adjacency(g);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].iter().map(|e| e.1).sum::<i64>()));
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let earlier: Vec<Vec<(usize, i64)>> = order
        .iter()
        .map(|&v| adj[v].iter().filter(|e| rank[e.0] < rank[v]).map(|&(u, w)| (rank[u], w)).collect())
        .collect();
    let loops2: Vec<i64> = order.iter().map(|v| (g.loops.get(v).copied().unwrap_or_else(Rational64::zero) * 2).to_integer()).collect();
    let mut search = PsiSearch { earlier, loops2, state: vec![0u8; n], best: (i64::MAX, 1) };
    search.dfs(0, 0, 0);
    let (num2, den) = search.best;
    Ok(Rational64::new(num2, 2 * den))
}

struct PsiSearch {
    earlier: Vec<Vec<(usize, i64)>>,
    loops2: Vec<i64>,
    /// 0 = outside S, 1 = side A, 2 = side B.
    state: Vec<u8>,
    best: (i64, i64),
}

impl PsiSearch {
    fn better(&self, num: i64, den: i64) -> bool {
        // num/den < best.0/best.1
        self.best.0 == i64::MAX || (num as i128) * (self.best.1 as i128) < (self.best.0 as i128) * (den as i128)
    }

    fn dfs(&mut self, v: usize, num: i64, size: i64) {
        let n = self.state.len();
        let remaining = (n - v) as i64;
        if size + remaining == 0 || !self.better(num, size + remaining) {
            return;
        }
        if v == n {
            if size > 0 && self.better(num, size) {
                self.best = (num, size);
            }
            return;
        }
        // The first vertex of S goes to A; colourings come in mirrored pairs.
        let choices: &[u8] = if size == 0 { &[0, 1] } else { &[0, 1, 2] };
        for &c in choices {
            let mut delta = 0;
            for &(u, w) in &self.earlier[v] {
                let su = self.state[u];
                delta += match (c, su) {
                    (0, 0) => 0,
                    (0, _) | (_, 0) => w,   // cut edge
                    (a, b) if a == b => w, // same side: must be deleted
                    _ => 0,
                };
            }
            if c != 0 {
                delta += self.loops2[v];
            }
            self.state[v] = c;
            self.dfs(v + 1, num + delta, size + i64::from(c != 0));
        }
        self.state[v] = 0;
    }
}

/// Full Ψ report for `G_{ℓ−k,k}`; `lambda_min` from a dense solve of `Q`.
pub fn psi_bounds(g: &WeightedGraph, profile: &DecompositionProfile) -> PsiReport {
    let (ell, k) = (g.ell, g.k);
    let (p, t) = (profile.p() as i64, profile.t() as i64);
    let kk = k as i64;
    let nv = binom(ell, kk);
    let half = |x: i64| Rational64::new(x, 2);
    // Loop sum, by the closed-form count.
    let loop_sum = half(p * binom(ell.saturating_sub(2), kk - 2)) + Rational64::from_integer(t * binom(ell.saturating_sub(1), kk - 1)) + half(t * binom(ell.saturating_sub(1), kk));
    debug_assert_eq!(loop_sum, g.loop_total());
    let upsilon_k = upsilon(profile);
    let adj = doubled_adjacency(g);
    let (odd2, psi_v_exact) = if is_bipartite(&adj) {
        (0, true)
    } else if g.len() <= MAXCUT_LIMIT {
        (edge_bipartization_doubled(&adj), true)
    } else {
        (4 * upsilon_k, false)
    };
    let psi_v = if nv == 0 { Rational64::zero() } else { (loop_sum + half(odd2)) / nv };
    let psi_exact = psi_exhaustive(g).ok();
    let d_star = g.max_degree();
    let lower_bound = psi_exact.map(|ps| if d_star.is_zero() { Rational64::zero() } else { ps * ps / (d_star * 4) });
    let pair_numerator = half(p * binom(ell.saturating_sub(2), kk - 2))
        + Rational64::from_integer(2 * t * binom(ell.saturating_sub(1), kk - 1))
        + Rational64::from_integer(t * binom(ell.saturating_sub(1), kk))
        + Rational64::from_integer(2 * upsilon_k);
    let pair_upper = if nv == 0 { Rational64::zero() } else { pair_numerator / nv };
    let lambda_min = crate::spectral::dense_eigenvalues(&signless_laplacian(g)).first().copied().unwrap_or(0.0);
    PsiReport {
        ell,
        k,
        vertices: g.len(),
        p: profile.p(),
        t: profile.t(),
        psi_v,
        psi_v_exact,
        psi_exact,
        upsilon_k,
        d_star,
        lower_bound,
        upper_bound: psi_v * 4,
        pair_upper,
        lambda_min,
    }
}

/// `Ψ_V = (2 + (N/2) C(N−2, k−2)) / C(N, k)` for the `(2, N)` torus knot.
pub fn torus_psi(n: usize, k: usize) -> Result<Rational64> {
    if n % 2 == 0 || n < 3 {
        return Err(Error::EvenParameter(n));
    }
    let top = Rational64::from_integer(2) + Rational64::new(n as i64 * binom(n - 2, k as i64 - 2), 2);
    Ok(top / binom(n, k as i64))
}

/// Human-readable report.
pub fn render_report(r: &PsiReport) -> String {
    let mut s = String::new();
    let f = |x: Rational64| format!("{x} ({})", crate::output::fmt_sig(ratio_f64(x)));
    let _ = writeln!(s, "ell={} k={} |V|={} p={} t={}", r.ell, r.k, r.vertices, r.p, r.t);
    let _ = writeln!(s, "psi_V={}{}", f(r.psi_v), if r.psi_v_exact { "" } else { " [odd-cycle term bounded by 2*Upsilon_K]" });
    let _ = writeln!(s, "psi={}", r.psi_exact.map_or("UNKNOWN".to_string(), f));
    let _ = writeln!(s, "Upsilon_K={} d*={}", r.upsilon_k, r.d_star);
    let _ = writeln!(s, "lower_bound={}", r.lower_bound.map_or("UNKNOWN".to_string(), f));
    let _ = writeln!(s, "upper_bound_4psi_V={}", f(r.upper_bound));
    let _ = writeln!(s, "prop_upper={}", f(r.pair_upper));
    let _ = writeln!(s, "lambda_min={}", crate::output::fmt_sig(r.lambda_min));
    s
}
