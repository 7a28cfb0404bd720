//! Bigraded chain spaces and boundary matrices.
//!
//! An enhanced state is a resolution `r` plus a label word over the loops of
//! `r`. The word is stored as an integer whose most significant of `ℓ(r)`
//! bits belongs to the loop with the smallest label; a set bit means `X`, a
//! clear bit means `𝟙`. Sorting by `(r, word)` is therefore the canonical
//! order: `r` big-endian first, then the word lexicographically with
//! `𝟙 < X`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::knot_io::KnotDiagram;
use crate::resolution::{Resolution, ResolutionCube};
use crate::sparse::IntegerSparseMatrix;

/// Loop label value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    One,
    X,
}

/// A basis vector of the chain space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnhancedState {
    pub r: Resolution,
    pub word: u32,
    pub loops: u8,
}

impl EnhancedState {
    /// Label of the loop at sorted position `t`.
    pub fn label(&self, t: usize) -> Label {
        if (self.word >> (self.loops as usize - 1 - t)) & 1 == 1 {
            Label::X
        } else {
            Label::One
        }
    }

    pub fn labels(&self) -> Vec<Label> {
        (0..self.loops as usize).map(|t| self.label(t)).collect()
    }

    pub fn x_count(&self) -> usize {
        self.word.count_ones() as usize
    }

    pub fn i_raw(&self) -> i32 {
        self.r.hamming() as i32
    }

    /// `|r| + ℓ(r) - 2 #X`.
    pub fn j_raw(&self) -> i32 {
        self.i_raw() + self.loops as i32 - 2 * self.x_count() as i32
    }

    /// Word rendered with `1` for `𝟙` and `X` for `X`.
    pub fn word_string(&self) -> String {
        self.labels()
            .iter()
            .map(|l| if *l == Label::One { '1' } else { 'X' })
            .collect()
    }
}

fn word_from_labels(labels: &[Label]) -> u32 {
    labels.iter().fold(0, |w, l| (w << 1) | u32::from(*l == Label::X))
}

/// Ordered basis of one bidegree.
#[derive(Debug, Clone)]
pub struct BidegreeBasis {
    pub i_raw: i32,
    pub j_raw: i32,
    states: Vec<EnhancedState>,
    index: HashMap<EnhancedState, usize>,
}

impl BidegreeBasis {
    pub fn states(&self) -> &[EnhancedState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: &EnhancedState) -> Option<usize> {
        self.index.get(s).copied()
    }
}

/// Words of length `len` with exactly `ones` set bits, ascending.
fn words_with_weight(len: usize, ones: usize) -> impl Iterator<Item = u32> {
    let first: u64 = if ones == 0 { 0 } else { (1u64 << ones) - 1 };
    let limit = 1u64 << len;
    let mut next = if ones <= len { Some(first) } else { None };
    std::iter::from_fn(move || {
        let w = next?;
        next = if w == 0 {
            None
        } else {
            // Gosper's hack: next integer with the same popcount.
            let c = w & w.wrapping_neg();
            let r = w + c;
            let n = (((r ^ w) >> 2) / c) | r;
            (n < limit).then_some(n)
        };
        Some(w as u32)
    })
}

/// Enhanced states at raw bidegree `(i_raw, j_raw)` in canonical order.
pub fn enumerate_basis(cube: &ResolutionCube, i_raw: i32, j_raw: i32) -> BidegreeBasis {
    let mut states = Vec::new();
    if i_raw >= 0 && i_raw as usize <= cube.m() {
        for r in cube.layer(i_raw as usize) {
            let ell = cube.loop_count(r) as i32;
            let twice_x = i_raw + ell - j_raw;
            if twice_x < 0 || twice_x % 2 != 0 || twice_x / 2 > ell {
                continue;
            }
            for word in words_with_weight(ell as usize, (twice_x / 2) as usize) {
                states.push(EnhancedState { r, word, loops: ell as u8 });
            }
        }
    }
    let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    BidegreeBasis { i_raw, j_raw, states, index }
}

/// Closed-form dimension `Σ_{|r|=i} C(ℓ(r), (j - i + ℓ(r))/2)`.
pub fn basis_dimension_formula(cube: &ResolutionCube, i_raw: i32, j_raw: i32) -> usize {
    if i_raw < 0 || i_raw as usize > cube.m() {
        return 0;
    }
    cube.layer(i_raw as usize)
        .map(|r| {
            let ell = cube.loop_count(r) as i64;
            let twice_ones = j_raw as i64 - i_raw as i64 + ell;
            if twice_ones < 0 || twice_ones % 2 != 0 || twice_ones / 2 > ell {
                0
            } else {
                binomial(ell as u64, (twice_ones / 2) as u64) as usize
            }
        })
        .sum()
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimension of every nonempty raw bidegree.
pub fn chain_dimensions(cube: &ResolutionCube) -> BTreeMap<(i32, i32), usize> {
    let mut dims = BTreeMap::new();
    for r in cube.resolutions() {
        let i = r.hamming() as i32;
        let ell = cube.loop_count(r) as u64;
        for x in 0..=ell {
            let j = i + ell as i32 - 2 * x as i32;
            *dims.entry((i, j)).or_insert(0) += binomial(ell, x) as usize;
        }
    }
    dims
}

/// Image of one state under the direct-sign differential.
pub fn differential_terms(k: &KnotDiagram, cube: &ResolutionCube, s: &EnhancedState) -> Vec<(EnhancedState, i64)> {
    let mut out = Vec::new();
    let src = cube.labeling(s.r);
    for (ci, &[a, _b, c, _d]) in k.crossings().iter().enumerate() {
        if s.r.bit(ci) {
            continue;
        }
        let sign = if s.r.ones_before(ci) % 2 == 0 { 1 } else { -1 };
        let target_r = s.r.with_one(ci);
        let dst = cube.labeling(target_r);
        let u = src.index_of_edge(a);
        let v = src.index_of_edge(c);
        let ta = dst.index_of_edge(a);
        let tc = dst.index_of_edge(c);
        // Loops away from the crossing keep their edge sets, hence their labels.
        let mut labels: Vec<Label> = dst
            .loop_labels()
            .iter()
            .map(|&l| s.label(src.index_of_edge(l)))
            .collect();
        let mut emit = |labels: &[Label]| {
            out.push((
                EnhancedState { r: target_r, word: word_from_labels(labels), loops: labels.len() as u8 },
                sign,
            ));
        };
        if u != v {
            // Merge: m(𝟙𝟙) = 𝟙, m(𝟙X) = m(X𝟙) = X, m(XX) = 0.
            labels[ta] = match (s.label(u), s.label(v)) {
                (Label::One, Label::One) => Label::One,
                (Label::X, Label::X) => continue,
                _ => Label::X,
            };
            emit(&labels);
        } else {
            // Split: δ(𝟙) = 𝟙X + X𝟙, δ(X) = XX.
            match s.label(u) {
                Label::One => {
                    labels[ta] = Label::One;
                    labels[tc] = Label::X;
                    emit(&labels);
                    labels[ta] = Label::X;
                    labels[tc] = Label::One;
                    emit(&labels);
                }
                Label::X => {
                    labels[ta] = Label::X;
                    labels[tc] = Label::X;
                    emit(&labels);
                }
            }
        }
    }
    out
}

fn assemble<F>(cube: &ResolutionCube, i_raw: i32, j_raw: i32, mut terms: F) -> IntegerSparseMatrix
where
    F: FnMut(&EnhancedState) -> Vec<(EnhancedState, i64)>,
{
    let source = enumerate_basis(cube, i_raw, j_raw);
    let target = enumerate_basis(cube, i_raw + 1, j_raw);
    let mut triplets = Vec::new();
    for (col, s) in source.states().iter().enumerate() {
        for (t, coeff) in terms(s) {
            let row = target.index_of(&t).expect("differential preserves the quantum grading");
            triplets.push((row, col, coeff));
        }
    }
    IntegerSparseMatrix::from_triplets(target.len(), source.len(), triplets)
}

/// Matrix of `d: C^{i,j} -> C^{i+1,j}` (columns indexed by the source).
pub fn boundary_matrix(k: &KnotDiagram, cube: &ResolutionCube, i_raw: i32, j_raw: i32) -> IntegerSparseMatrix {
    assemble(cube, i_raw, j_raw, |s| differential_terms(k, cube, s))
}

/// Qutrit values of the label register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Qutrit {
    Zero,
    One,
    Bottom,
}

/// Image of one state under `Σ_k a_k† ⊗ Γ_k`, acting on the resolution
/// register and a label register indexed by edge labels (`1` for `𝟙`, `0`
/// for `X`, `⊥` off the loop labels).
pub fn jordan_wigner_terms(k: &KnotDiagram, cube: &ResolutionCube, s: &EnhancedState) -> Vec<(EnhancedState, i64)> {
    let m = k.m();
    let src = cube.labeling(s.r);
    let mut register = vec![Qutrit::Bottom; k.edge_count() + 1];
    for (t, &l) in src.loop_labels().iter().enumerate() {
        register[l as usize] = if s.label(t) == Label::One { Qutrit::One } else { Qutrit::Zero };
    }
    let mut out = Vec::new();
    for kk in 0..m {
        // a_k† = σ_z ⊗ ... ⊗ σ_z ⊗ |1><0| ⊗ 1 ⊗ ... ⊗ 1
        if s.r.bit(kk) {
            continue;
        }
        let sign: i64 = (0..kk).map(|l| if s.r.bit(l) { -1 } else { 1 }).product();
        let target_r = s.r.with_one(kk);
        let dst = cube.labeling(target_r);
        let mut outputs: Vec<Vec<Qutrit>> = Vec::new();
        match cube.edge_kind(s.r, kk) {
            crate::resolution::CubeEdge::Merge { kept, removed } => {
                // Γ⁻(i,j): |1>|⊥><11| + |0>|⊥><10| + |0>|⊥><01|
                let (i, j) = (kept as usize, removed as usize);
                let value = match (register[i], register[j]) {
                    (Qutrit::One, Qutrit::One) => Some(Qutrit::One),
                    (Qutrit::One, Qutrit::Zero) | (Qutrit::Zero, Qutrit::One) => Some(Qutrit::Zero),
                    _ => None,
                };
                if let Some(v) = value {
                    let mut reg = register.clone();
                    reg[i] = v;
                    reg[j] = Qutrit::Bottom;
                    outputs.push(reg);
                }
            }
            crate::resolution::CubeEdge::Split { kept, created } => {
                // Γ⁺(i,j): (|10> + |01>)<1⊥| + |00><0⊥|
                let (i, j) = (kept as usize, created as usize);
                debug_assert_eq!(register[j], Qutrit::Bottom);
                match register[i] {
                    Qutrit::One => {
                        for (vi, vj) in [(Qutrit::One, Qutrit::Zero), (Qutrit::Zero, Qutrit::One)] {
                            let mut reg = register.clone();
                            reg[i] = vi;
                            reg[j] = vj;
                            outputs.push(reg);
                        }
                    }
                    Qutrit::Zero => {
                        let mut reg = register.clone();
                        reg[j] = Qutrit::Zero;
                        outputs.push(reg);
                    }
                    Qutrit::Bottom => unreachable!("loop label register holds a value"),
                }
            }
            crate::resolution::CubeEdge::Neither => unreachable!("cube edges merge or split"),
        }
        for reg in outputs {
            let labels: Vec<Label> = dst
                .loop_labels()
                .iter()
                .map(|&l| match reg[l as usize] {
                    Qutrit::One => Label::One,
                    Qutrit::Zero => Label::X,
                    Qutrit::Bottom => unreachable!("target loop labels are populated"),
                })
                .collect();
            out.push((
                EnhancedState { r: target_r, word: word_from_labels(&labels), loops: labels.len() as u8 },
                sign,
            ));
        }
    }
    out
}

/// Boundary matrix built from the Jordan–Wigner form of the differential.
pub fn boundary_matrix_jw(k: &KnotDiagram, cube: &ResolutionCube, i_raw: i32, j_raw: i32) -> IntegerSparseMatrix {
    assemble(cube, i_raw, j_raw, |s| jordan_wigner_terms(k, cube, s))
}

/// Overall shifts taking raw to published bidegrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingShift {
    pub h_shift: i32,
    pub q_shift: i32,
}

impl GradingShift {
    pub fn of(k: &KnotDiagram) -> Self {
        let (np, nm) = (k.n_plus() as i32, k.n_minus() as i32);
        Self { h_shift: -nm, q_shift: np - 2 * nm }
    }

    pub fn publish(&self, i_raw: i32, j_raw: i32) -> (i32, i32) {
        (i_raw + self.h_shift, j_raw + self.q_shift)
    }

    pub fn raw(&self, i: i32, j: i32) -> (i32, i32) {
        (i - self.h_shift, j - self.q_shift)
    }
}

/// `(i_raw - n₋, j_raw + n₊ - 2n₋)`.
pub fn published_bidegree(k: &KnotDiagram, i_raw: i32, j_raw: i32) -> (i32, i32) {
    GradingShift::of(k).publish(i_raw, j_raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot_io::{hopf_link, parse_pd, twisted_unknot, Handedness};
    use crate::resolution::build_cube;

    #[test]
    fn gosper_enumeration() {
        let words: Vec<u32> = words_with_weight(4, 2).collect();
        assert_eq!(words, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(words_with_weight(3, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(words_with_weight(3, 3).collect::<Vec<_>>(), vec![7]);
        assert_eq!(words_with_weight(2, 3).count(), 0);
    }

    #[test]
    fn trefoil_degree_zero_layer() {
        let k = parse_pd("X[5,2,4,1] X[3,6,2,5] X[1,4,6,3]").unwrap();
        let cube = build_cube(&k).unwrap();
        let dims: Vec<usize> = [3, 1, -1, -3].iter().map(|&j| enumerate_basis(&cube, 0, j).len()).collect();
        assert_eq!(dims, vec![1, 3, 3, 1]);
    }

    #[test]
    fn hopf_signs_match_merge_and_split_pattern() {
        let k = hopf_link();
        let cube = build_cube(&k).unwrap();
        // Layer 0 -> 1 at j = 2: source 𝟙𝟙 merges to 𝟙 in both targets.
        let d0 = boundary_matrix(&k, &cube, 0, 2);
        assert_eq!(d0.to_dense(), vec![vec![1], vec![1]]);
        // Layer 1 -> 2 at j = 2: sources 𝟙 at r=01 and r=10 split with
        // signs +1 and -1 onto 𝟙X and X𝟙 at r=11.
        let d1 = boundary_matrix(&k, &cube, 1, 2);
        assert_eq!(d1.to_dense(), vec![vec![1, -1], vec![1, -1]]);
    }

    #[test]
    fn kink_differential_is_the_merge() {
        let k = twisted_unknot(1);
        let cube = build_cube(&k).unwrap();
        // 𝟙X and X𝟙 both merge to X at j_raw = 0.
        assert_eq!(boundary_matrix(&k, &cube, 0, 0).to_dense(), vec![vec![1, 1]]);
        assert_eq!(boundary_matrix(&k, &cube, 0, 2).to_dense(), vec![vec![1]]);
        assert!(boundary_matrix(&k, &cube, 0, -2).is_zero());
    }

    #[test]
    fn jordan_wigner_matches_direct_signs() {
        for k in [hopf_link(), twisted_unknot(3), twisted_unknot_with_neg(3)] {
            let cube = build_cube(&k).unwrap();
            for ((i, j), _) in chain_dimensions(&cube) {
                assert_eq!(boundary_matrix(&k, &cube, i, j), boundary_matrix_jw(&k, &cube, i, j));
            }
        }
    }

    fn twisted_unknot_with_neg(n: usize) -> KnotDiagram {
        crate::knot_io::twisted_unknot_with(n, Handedness::Negative)
    }

    #[test]
    fn shifts() {
        let k = twisted_unknot_with_neg(3);
        assert_eq!(published_bidegree(&k, 3, 6), (0, 0));
        let k = twisted_unknot(3);
        assert_eq!(published_bidegree(&k, 0, -1), (0, 2));
        assert_eq!(published_bidegree(&KnotDiagram::unknot(), 0, 1), (0, 1));
        let g = GradingShift::of(&k);
        assert_eq!(g.raw(0, 2), (0, -1));
    }

    #[test]
    fn state_gradings() {
        let s = EnhancedState { r: Resolution::parse("01").unwrap(), word: 0b01, loops: 2 };
        assert_eq!(s.word_string(), "1X");
        assert_eq!((s.i_raw(), s.j_raw()), (1, 1));
    }
}
