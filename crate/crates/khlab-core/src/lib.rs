//! Khovanov homology from planar-diagram codes: exact Betti numbers, Hodge
//! Laplacian spectra, degree-zero graph bounds and an emulator for the
//! measurement statistics of a thermalized kernel-projection algorithm.
//!
//! The pipeline runs `knot_io` → `resolution` → `complex` → `homology`,
//! with `spectral`, `jones`, `degree_zero_graph`, `twist_reduce` and
//! `qalg_emulator` built on top.

pub mod complex;
pub mod corpus;
pub mod degree_zero_graph;
pub mod error;
pub mod homology;
pub mod jones;
pub mod knot_io;
pub mod output;
pub mod qalg_emulator;
pub mod resolution;
pub mod sparse;
pub mod spectral;
pub mod twist_reduce;

pub use complex::{BidegreeBasis, EnhancedState, GradingShift, Label};
pub use error::{Error, ErrorCategory, Result};
pub use homology::{BettiTable, HodgeLaplacian, KhovanovComplex};
pub use knot_io::{KnotDiagram, LaurentPolynomial, Sign};
pub use resolution::{LoopLabeling, Resolution, ResolutionCube};
pub use sparse::IntegerSparseMatrix;
pub use spectral::{GapProfile, Spectrum, SpectralConfig};
pub use degree_zero_graph::{DecompositionProfile, PsiReport, WeightedGraph};
