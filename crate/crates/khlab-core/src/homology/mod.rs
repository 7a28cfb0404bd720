//! Exact Betti numbers and Hodge Laplacians.

mod rank;

pub use rank::{bareiss_rank, exact_rank};

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::complex::{boundary_matrix, chain_dimensions, GradingShift};
use crate::error::{Error, Result};
use crate::knot_io::KnotDiagram;
use crate::resolution::ResolutionCube;
use crate::sparse::IntegerSparseMatrix;

/// Column cutoff for exact elimination.
pub const RANK_COLUMN_LIMIT: usize = 20_000;

fn checked_rank(d: &IntegerSparseMatrix) -> Result<usize> {
    if d.cols() > RANK_COLUMN_LIMIT {
        return Err(Error::SizeLimitExceeded {
            what: "columns for exact rank",
            value: d.cols(),
            limit: RANK_COLUMN_LIMIT,
        });
    }
    Ok(exact_rank(d))
}

/// Betti numbers keyed by published bidegree, with chain dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub knot: String,
    /// `(i, j) -> (dim C_{i,j}, β_{i,j})` over every nonempty chain space.
    pub entries: BTreeMap<(i32, i32), (usize, usize)>,
}

impl BettiTable {
    pub fn betti(&self, i: i32, j: i32) -> usize {
        self.entries.get(&(i, j)).map_or(0, |e| e.1)
    }

    /// Nonzero Betti numbers only.
    pub fn nonzero(&self) -> BTreeMap<(i32, i32), usize> {
        self.entries.iter().filter(|(_, e)| e.1 > 0).map(|(&k, e)| (k, e.1)).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.entries.values().map(|e| e.1).sum()
    }

    /// Writes `knot,i,j,dim,betti` rows after a `#` metadata line.
    pub fn write_csv<W: Write>(&self, mut w: W, metadata: &str) -> io::Result<()> {
        writeln!(w, "{metadata}")?;
        writeln!(w, "knot,i,j,dim,betti")?;
        for (&(i, j), &(dim, b)) in &self.entries {
            writeln!(w, "{},{i},{j},{dim},{b}", self.knot)?;
        }
        Ok(())
    }
}

/// Boundary matrices of every raw bidegree, assembled once per knot.
pub struct KhovanovComplex<'a> {
    pub knot: &'a KnotDiagram,
    pub cube: &'a ResolutionCube,
    dims: BTreeMap<(i32, i32), usize>,
    /// `d[(i, j)]: C^{i,j} -> C^{i+1,j}`.
    d: BTreeMap<(i32, i32), IntegerSparseMatrix>,
}

impl<'a> KhovanovComplex<'a> {
    pub fn new(knot: &'a KnotDiagram, cube: &'a ResolutionCube) -> Self {
        let dims = chain_dimensions(cube);
        let d = dims
            .keys()
            .filter(|&&(i, j)| dims.contains_key(&(i + 1, j)))
            .map(|&(i, j)| ((i, j), boundary_matrix(knot, cube, i, j)))
            .collect();
        Self { knot, cube, dims, d }
    }

    /// Nonempty raw bidegrees with their dimensions.
    pub fn dims(&self) -> &BTreeMap<(i32, i32), usize> {
        &self.dims
    }

    pub fn dim(&self, i: i32, j: i32) -> usize {
        self.dims.get(&(i, j)).copied().unwrap_or(0)
    }

    /// `d: C^{i,j} -> C^{i+1,j}`, zero-sized where either side is empty.
    pub fn d(&self, i: i32, j: i32) -> IntegerSparseMatrix {
        self.d
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| IntegerSparseMatrix::zeros(self.dim(i + 1, j), self.dim(i, j)))
    }

    pub fn boundary_rank(&self, i: i32, j: i32) -> Result<usize> {
        match self.d.get(&(i, j)) {
            Some(m) => checked_rank(m),
            None => Ok(0),
        }
    }

    /// `β` at a raw bidegree: `dim - rank d_i - rank d_{i-1}`.
    pub fn betti_raw(&self, i: i32, j: i32) -> Result<usize> {
        Ok(self.dim(i, j) - self.boundary_rank(i, j)? - self.boundary_rank(i - 1, j)?)
    }

    /// `Δ = d_iᵀ d_i + d_{i-1} d_{i-1}ᵀ` at a raw bidegree.
    pub fn laplacian(&self, i: i32, j: i32) -> HodgeLaplacian {
        let n = self.dim(i, j);
        let up = self.d(i, j);
        let down = self.d(i - 1, j);
        let matrix = up.transpose().mul(&up).add(&down.mul(&down.transpose()));
        debug_assert_eq!((matrix.rows(), matrix.cols()), (n, n));
        HodgeLaplacian { i_raw: i, j_raw: j, matrix }
    }

    pub fn betti_table(&self, name: &str) -> Result<BettiTable> {
        let shift = GradingShift::of(self.knot);
        let mut entries = BTreeMap::new();
        for (&(i, j), &dim) in &self.dims {
            entries.insert(shift.publish(i, j), (dim, self.betti_raw(i, j)?));
        }
        Ok(BettiTable { knot: name.to_string(), entries })
    }
}

/// Hodge Laplacian at a raw bidegree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeLaplacian {
    pub i_raw: i32,
    pub j_raw: i32,
    pub matrix: IntegerSparseMatrix,
}

impl HodgeLaplacian {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `dim - rank Δ`, computed exactly.
    pub fn nullity(&self) -> Result<usize> {
        Ok(self.dim() - checked_rank(&self.matrix)?)
    }
}

/// `β_{i,j}` at a published bidegree.
pub fn betti(k: &KnotDiagram, cube: &ResolutionCube, i: i32, j: i32) -> Result<usize> {
    let (ri, rj) = GradingShift::of(k).raw(i, j);
    let dim = crate::complex::basis_dimension_formula(cube, ri, rj);
    let rank_of = |a: i32| checked_rank(&boundary_matrix(k, cube, a, rj));
    Ok(dim - rank_of(ri)? - rank_of(ri - 1)?)
}

/// Full Betti table of `k`.
pub fn betti_table(k: &KnotDiagram, cube: &ResolutionCube, name: &str) -> Result<BettiTable> {
    KhovanovComplex::new(k, cube).betti_table(name)
}

/// Laplacian at a raw bidegree.
pub fn hodge_laplacian(k: &KnotDiagram, cube: &ResolutionCube, i_raw: i32, j_raw: i32) -> HodgeLaplacian {
    let up = boundary_matrix(k, cube, i_raw, j_raw);
    let down = boundary_matrix(k, cube, i_raw - 1, j_raw);
    let matrix = up.transpose().mul(&up).add(&down.mul(&down.transpose()));
    HodgeLaplacian { i_raw, j_raw, matrix }
}

/// Outcome of comparing the rank pipeline with the Laplacian kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelCheck {
    pub exact_betti: usize,
    pub laplacian_nullity: usize,
    pub agree: bool,
}

/// Compares `β` from ranks with `dim ker Δ` at a raw bidegree.
pub fn kernel_dim_check(k: &KnotDiagram, cube: &ResolutionCube, i_raw: i32, j_raw: i32) -> Result<KernelCheck> {
    let shift = GradingShift::of(k);
    let (i, j) = shift.publish(i_raw, j_raw);
    let exact_betti = betti(k, cube, i, j)?;
    let laplacian_nullity = hodge_laplacian(k, cube, i_raw, j_raw).nullity()?;
    Ok(KernelCheck { exact_betti, laplacian_nullity, agree: exact_betti == laplacian_nullity })
}
