//! Resolutions of a diagram and their loops.
//!
//! Bit `k` of a resolution (0-based, in PD order) is stored at position
//! `m - 1 - k`, so the integer value of `bits` reads the bitstring
//! `r_1 r_2 ... r_m` as a big-endian number.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::knot_io::KnotDiagram;

/// Largest crossing count accepted by [`build_cube`].
pub const CUBE_LIMIT: usize = 24;
/// Largest crossing count for which labelings are kept in memory.
pub const IN_MEMORY_LIMIT: usize = 20;

/// A bitstring `r` of 0- and 1-smoothings.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Resolution {
    bits: u64,
    m: usize,
}

impl Resolution {
    pub fn new(bits: u64, m: usize) -> Self {
        debug_assert!(m == 64 || bits < (1u64 << m));
        Self { bits, m }
    }

    /// Parses a `0`/`1` string such as `"110"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        for (i, ch) in s.chars().enumerate() {
            bits <<= 1;
            match ch {
                '0' => {}
                '1' => bits |= 1,
                _ => {
                    return Err(Error::MalformedToken {
                        offset: i,
                        detail: "resolution bits must be 0 or 1".into(),
                    })
                }
            }
        }
        Ok(Self { bits, m: s.len() })
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// Smoothing at crossing `k` (0-based).
    pub fn bit(&self, k: usize) -> bool {
        (self.bits >> (self.m - 1 - k)) & 1 == 1
    }

    /// `|r|`, the number of 1-smoothings.
    pub fn hamming(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Number of 1-smoothings among crossings `0..k`.
    pub fn ones_before(&self, k: usize) -> usize {
        if k == 0 {
            0
        } else {
            (self.bits >> (self.m - k)).count_ones() as usize
        }
    }

    /// Copy with crossing `k` switched to a 1-smoothing.
    pub fn with_one(&self, k: usize) -> Self {
        Self { bits: self.bits | (1 << (self.m - 1 - k)), m: self.m }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.m {
            write!(f, "{}", u8::from(self.bit(k)))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{self}")
    }
}

/// Loops of one resolution, each named by its smallest edge label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopLabeling {
    /// `edge_to_loop[e]` is the loop label of edge `e` (index 0 unused).
    edge_to_loop: Vec<u32>,
    /// Sorted loop labels.
    loop_labels: Vec<u32>,
    /// `edge_to_index[e]` is the position of edge `e`'s loop in `loop_labels`.
    edge_to_index: Vec<u8>,
}

impl LoopLabeling {
    /// `ℓ(r)`.
    pub fn loop_count(&self) -> usize {
        self.loop_labels.len()
    }

    pub fn loop_labels(&self) -> &[u32] {
        &self.loop_labels
    }

    /// Loop label of edge `e`.
    pub fn loop_of(&self, edge: u32) -> u32 {
        self.edge_to_loop[edge as usize]
    }

    /// Position of edge `e`'s loop within [`Self::loop_labels`].
    pub fn index_of_edge(&self, edge: u32) -> usize {
        self.edge_to_index[edge as usize] as usize
    }

    /// Position of a loop label, if present.
    pub fn index_of_label(&self, label: u32) -> Option<usize> {
        self.loop_labels.binary_search(&label).ok()
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let ra = find(parent, a);
    let rb = find(parent, b);
    // Keep the smaller label as root so roots are loop labels.
    if ra < rb {
        parent[rb as usize] = ra;
    } else if rb < ra {
        parent[ra as usize] = rb;
    }
}

/// Loops of `K` under resolution `r`: the 0-smoothing joins `{a,b}` and
/// `{c,d}`, the 1-smoothing joins `{a,d}` and `{c,b}`.
pub fn resolve(k: &KnotDiagram, r: Resolution) -> Result<LoopLabeling> {
    if r.len() != k.m() {
        return Err(Error::LengthMismatch { expected: k.m(), got: r.len() });
    }
    Ok(resolve_unchecked(k, r))
}

pub(crate) fn resolve_unchecked(k: &KnotDiagram, r: Resolution) -> LoopLabeling {
    let edges = k.edge_count() as u32;
    if edges == 0 {
        return LoopLabeling { edge_to_loop: vec![0], loop_labels: vec![1], edge_to_index: vec![0] };
    }
    let mut parent: Vec<u32> = (0..=edges).collect();
    for (ci, &[a, b, c, d]) in k.crossings().iter().enumerate() {
        if r.bit(ci) {
            union(&mut parent, a, d);
            union(&mut parent, c, b);
        } else {
            union(&mut parent, a, b);
            union(&mut parent, c, d);
        }
    }
    let mut edge_to_loop = vec![0u32; edges as usize + 1];
    let mut loop_labels = Vec::new();
    for e in 1..=edges {
        let root = find(&mut parent, e);
        edge_to_loop[e as usize] = root;
        if root == e {
            loop_labels.push(e);
        }
    }
    let mut edge_to_index = vec![0u8; edges as usize + 1];
    for e in 1..=edges as usize {
        edge_to_index[e] = loop_labels.binary_search(&edge_to_loop[e]).expect("root") as u8;
    }
    LoopLabeling { edge_to_loop, loop_labels, edge_to_index }
}

/// Loop labelings for all `2^m` resolutions.
#[derive(Debug, Clone)]
pub struct ResolutionCube {
    m: usize,
    entries: Vec<LoopLabeling>,
}

impl ResolutionCube {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labeling(&self, r: Resolution) -> &LoopLabeling {
        &self.entries[r.bits() as usize]
    }

    pub fn loop_count(&self, r: Resolution) -> usize {
        self.labeling(r).loop_count()
    }

    /// All resolutions in ascending big-endian order.
    pub fn resolutions(&self) -> impl Iterator<Item = Resolution> + '_ {
        (0..self.entries.len() as u64).map(move |b| Resolution::new(b, self.m))
    }

    /// Resolutions with exactly `i` 1-smoothings, in ascending order.
    pub fn layer(&self, i: usize) -> impl Iterator<Item = Resolution> + '_ {
        self.resolutions().filter(move |r| r.hamming() == i)
    }

    /// Classifies the cube edge `r -> r` with crossing `k` switched to 1.
    pub fn edge_kind(&self, r: Resolution, k: usize) -> CubeEdge {
        let src = self.labeling(r);
        let dst = self.labeling(r.with_one(k));
        if dst.loop_count() + 1 == src.loop_count() {
            let gone = src
                .loop_labels()
                .iter()
                .copied()
                .find(|l| dst.index_of_label(*l).is_none())
                .expect("merge removes a label");
            CubeEdge::Merge { kept: dst.loop_of(gone), removed: gone }
        } else if dst.loop_count() == src.loop_count() + 1 {
            let new = dst
                .loop_labels()
                .iter()
                .copied()
                .find(|l| src.index_of_label(*l).is_none())
                .expect("split adds a label");
            CubeEdge::Split { kept: src.loop_of(new), created: new }
        } else {
            CubeEdge::Neither
        }
    }

    /// Writes `r,loops,labels` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "r,loops,labels")?;
        for r in self.resolutions() {
            let l = self.labeling(r);
            let labels: Vec<String> = l.loop_labels().iter().map(u32::to_string).collect();
            writeln!(w, "{r},{},{}", l.loop_count(), labels.join(" "))?;
        }
        Ok(())
    }
}

/// Merge/split type of a cube edge, in minimal-edge labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeEdge {
    Merge { kept: u32, removed: u32 },
    Split { kept: u32, created: u32 },
    /// Never produced for a valid diagram.
    Neither,
}

/// Builds the full cube for `m <= IN_MEMORY_LIMIT`.
pub fn build_cube(k: &KnotDiagram) -> Result<ResolutionCube> {
    if k.m() > IN_MEMORY_LIMIT {
        return Err(Error::SizeLimitExceeded {
            what: "crossings for an in-memory cube",
            value: k.m(),
            limit: IN_MEMORY_LIMIT,
        });
    }
    let m = k.m();
    let entries = (0..1u64 << m)
        .into_par_iter()
        .map(|b| resolve_unchecked(k, Resolution::new(b, m)))
        .collect();
    Ok(ResolutionCube { m, entries })
}

/// Streams `(r, ℓ(r))` for every resolution without storing labelings;
/// accepts up to [`CUBE_LIMIT`] crossings.
pub fn for_each_loop_count<F: FnMut(Resolution, usize)>(k: &KnotDiagram, mut f: F) -> Result<()> {
    if k.m() > CUBE_LIMIT {
        return Err(Error::SizeLimitExceeded { what: "crossings", value: k.m(), limit: CUBE_LIMIT });
    }
    let m = k.m();
    for b in 0..1u64 << m {
        let r = Resolution::new(b, m);
        f(r, resolve_unchecked(k, r).loop_count());
    }
    Ok(())
}
