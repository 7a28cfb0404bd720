//! Planar-diagram (PD) codes: parsing, validation, orientation and crossing
//! signs, plus generators for the twisted-unknot and `T(2,N)` families.
//!
//! A crossing `X[a,b,c,d]` lists its four edge labels counterclockwise,
//! starting from the incoming under-strand, so the under-strand runs `a -> c`.
//! The over-strand direction is solved for globally: every edge must enter
//! exactly one of its two endpoints. A crossing is positive when its
//! over-strand runs `d -> b`; for codes whose labels increase along the
//! orientation this is the familiar test `b = d + 1 (mod 2m)`.

mod generators;
mod laurent;
mod parse;

pub use generators::{hopf_link, torus_knot_2n, twisted_unknot, twisted_unknot_with, Handedness};
pub use laurent::LaurentPolynomial;
pub use parse::{normalize_labels, parse_pd, parse_pd_json, parse_pd_tuples, render};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Crossing sign in the usual right-hand convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

/// A validated, oriented PD code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KnotDiagram {
    crossings: Vec<[u32; 4]>,
    signs: Vec<Sign>,
    n_plus: usize,
    n_minus: usize,
    components: usize,
}

impl KnotDiagram {
    /// Validates the tuples and derives orientation, signs and components.
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self> {
        check_edge_counts(&crossings)?;
        let signs = solve_orientation(&crossings)?;
        let components = check_component_runs(&crossings, &signs)?;
        let n_plus = signs.iter().filter(|s| **s == Sign::Positive).count();
        let n_minus = signs.len() - n_plus;
        Ok(Self { crossings, signs, n_plus, n_minus, components })
    }

    /// The crossingless unknot.
    pub fn unknot() -> Self {
        Self { crossings: Vec::new(), signs: Vec::new(), n_plus: 0, n_minus: 0, components: 1 }
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Number of crossings `m`.
    pub fn m(&self) -> usize {
        self.crossings.len()
    }

    /// Number of edge labels, `2m`.
    pub fn edge_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn writhe(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    /// Mirror image: reflecting the plane reverses the counterclockwise
    /// reading, which swaps the roles of `b` and `d` at every crossing.
    pub fn mirror(&self) -> Self {
        let crossings = self.crossings.iter().map(|&[a, b, c, d]| [a, d, c, b]).collect();
        Self::new(crossings).expect("mirror of a valid diagram is valid")
    }

    /// Same diagram with crossings listed in the order `perm[0], perm[1], ...`.
    pub fn permute_crossings(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.m() {
            return Err(Error::LengthMismatch { expected: self.m(), got: perm.len() });
        }
        let mut seen = vec![false; self.m()];
        for &p in perm {
            if p >= self.m() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::DomainError("not a permutation".into()));
            }
        }
        Self::new(perm.iter().map(|&p| self.crossings[p]).collect())
    }
}

fn check_edge_counts(crossings: &[[u32; 4]]) -> Result<()> {
    let max = 2 * crossings.len() as u32;
    let mut counts = vec![0usize; max as usize + 1];
    for &label in crossings.iter().flatten() {
        if label == 0 || label > max {
            return Err(Error::EdgeCountError { label, count: 1, max });
        }
        counts[label as usize] += 1;
    }
    if let Some(label) = (1..=max).find(|&l| counts[l as usize] != 2) {
        return Err(Error::EdgeCountError { label, count: counts[label as usize], max });
    }
    Ok(())
}

/// Occurrences `(crossing, slot)` of every edge label, indexed by label.
pub(crate) fn edge_occurrences(crossings: &[[u32; 4]]) -> Vec<Vec<(usize, usize)>> {
    let mut occ = vec![Vec::with_capacity(2); 2 * crossings.len() + 1];
    for (ci, x) in crossings.iter().enumerate() {
        for (slot, &label) in x.iter().enumerate() {
            occ[label as usize].push((ci, slot));
        }
    }
    occ
}

/// Union-find with parity, used to solve `x_i xor x_j = p` constraints.
struct ParityDsu {
    parent: Vec<usize>,
    parity: Vec<u8>,
}

impl ParityDsu {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), parity: vec![0; n] }
    }

    fn find(&mut self, x: usize) -> (usize, u8) {
        let p = self.parent[x];
        if p == x {
            return (x, 0);
        }
        let (root, par) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= par;
        (root, self.parity[x])
    }

    /// Imposes `value(x) xor value(y) = rel`; false on contradiction.
    fn relate(&mut self, x: usize, y: usize, rel: u8) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == rel;
        }
        self.parent[rx] = ry;
        self.parity[rx] = px ^ py ^ rel;
        true
    }
}

/// Solves for the over-strand direction at each crossing.
///
/// Variable `x_c` is true when the over-strand enters at `d`. The literal
/// "this slot is incoming" is constant for `a` (true) and `c` (false), `x_c`
/// for `d` and `!x_c` for `b`. Node `m` of the DSU is pinned to false.
fn solve_orientation(crossings: &[[u32; 4]]) -> Result<Vec<Sign>> {
    let m = crossings.len();
    let anchor = m;
    let mut dsu = ParityDsu::new(m + 1);
    let literal = |(ci, slot): (usize, usize)| -> (usize, u8) {
        match slot {
            0 => (anchor, 1),
            1 => (ci, 1),
            2 => (anchor, 0),
            _ => (ci, 0),
        }
    };
    for (label, occ) in edge_occurrences(crossings).iter().enumerate().skip(1) {
        let (n1, p1) = literal(occ[0]);
        let (n2, p2) = literal(occ[1]);
        if !dsu.relate(n1, n2, 1 ^ p1 ^ p2) {
            return Err(Error::OrientationError(format!(
                "edge {label} would enter (or leave) at both of its endpoints"
            )));
        }
    }
    let (anchor_root, anchor_par) = dsu.find(anchor);
    Ok((0..m)
        .map(|ci| {
            let (root, par) = dsu.find(ci);
            // Unconstrained groups (components that only pass over) default
            // to `d -> b` at their representative.
            let value = if root == anchor_root { par ^ anchor_par } else { par ^ 1 };
            if value == 1 {
                Sign::Positive
            } else {
                Sign::Negative
            }
        })
        .collect())
}

/// Walks every component along the solved orientation and checks that its
/// labels form a consecutive cyclic run (in either direction). Returns the
/// number of components.
fn check_component_runs(crossings: &[[u32; 4]], signs: &[Sign]) -> Result<usize> {
    let edges = 2 * crossings.len();
    if edges == 0 {
        return Ok(1);
    }
    let occ = edge_occurrences(crossings);
    // Slot through which the strand leaves when entering at `slot`.
    let exit_slot = |slot: usize| -> usize { (slot + 2) % 4 };
    let incoming = |ci: usize, slot: usize| -> bool {
        match slot {
            0 => true,
            2 => false,
            3 => signs[ci] == Sign::Positive,
            _ => signs[ci] == Sign::Negative,
        }
    };
    let mut visited = vec![false; edges + 1];
    let mut components = 0;
    for start in 1..=edges {
        if visited[start] {
            continue;
        }
        components += 1;
        let mut walk = Vec::new();
        let mut e = start;
        while !visited[e] {
            visited[e] = true;
            walk.push(e as u32);
            let &(ci, slot) = occ[e].iter().find(|&&(ci, s)| incoming(ci, s)).expect("solved");
            e = crossings[ci][exit_slot(slot)] as usize;
        }
        let lo = *walk.iter().min().unwrap();
        let hi = *walk.iter().max().unwrap();
        let len = walk.len() as u32;
        if hi - lo + 1 != len {
            return Err(Error::OrientationError(format!(
                "component through edge {start} uses non-consecutive labels {lo}..{hi}"
            )));
        }
        let succ = |x: u32| if x == hi { lo } else { x + 1 };
        let pred = |x: u32| if x == lo { hi } else { x - 1 };
        let steps: Vec<(u32, u32)> =
            walk.iter().copied().zip(walk.iter().copied().cycle().skip(1)).collect();
        let increasing = steps.iter().all(|&(x, y)| y == succ(x));
        let decreasing = steps.iter().all(|&(x, y)| y == pred(x));
        if !increasing && !decreasing {
            return Err(Error::OrientationError(format!(
                "labels along the component through edge {start} are not a cyclic run"
            )));
        }
    }
    Ok(components)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kink_orientations() {
        let k = parse_pd("X[1,1,2,2]").unwrap();
        assert_eq!(k.m(), 1);
        assert_eq!(k.signs(), &[Sign::Positive]);
        let k = parse_pd("X[1,2,2,1]").unwrap();
        assert_eq!(k.signs(), &[Sign::Negative]);
        assert_eq!(k.components(), 1);
    }

    #[test]
    fn increasing_labels_agree_with_modular_rule() {
        // b = d + 1 (mod 6) at every crossing.
        let k = parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]").unwrap();
        assert_eq!(k.n_plus(), 3);
        assert_eq!(k.mirror().n_minus(), 3);
    }

    #[test]
    fn figure_three_trefoil_is_left_handed() {
        // Labels decrease along the orientation fixed by the under-strands.
        let k = parse_pd("X[5,2,4,1] X[3,6,2,5] X[1,4,6,3]").unwrap();
        assert_eq!((k.n_plus(), k.n_minus()), (0, 3));
    }

    #[test]
    fn hopf_link_has_two_components() {
        let k = hopf_link();
        assert_eq!(k.components(), 2);
        assert_eq!(k.n_minus(), 2);
    }

    #[test]
    fn inconsistent_orientation_is_rejected() {
        // Edge 1 sits in slot `a` twice, so it would enter at both ends.
        let err = KnotDiagram::new(vec![[1, 2, 3, 4], [1, 4, 3, 2]]).unwrap_err();
        assert!(matches!(err, Error::OrientationError(_)));
    }

    #[test]
    fn non_consecutive_labels_are_rejected() {
        let err = KnotDiagram::new(vec![[1, 3, 4, 2], [2, 4, 3, 1]]);
        assert!(err.is_err());
    }

    #[test]
    fn permutation_keeps_signs_as_a_multiset() {
        let k = torus_knot_2n(5).unwrap();
        let p = k.permute_crossings(&[4, 2, 0, 1, 3]).unwrap();
        assert_eq!(p.n_plus(), k.n_plus());
        assert!(k.permute_crossings(&[0, 0, 1, 2, 3]).is_err());
    }
}
