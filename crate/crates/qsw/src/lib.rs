//! Continuous-time classical, quantum and quantum stochastic walks on graphs
//! and digraphs, the nonmoralizing global-interaction walk built on
//! demoralized graphs, convergence diagnostics, and quantum spatial search.

pub mod analysis;
pub mod error;
pub mod gksl;
pub mod graphs;
pub mod nonmoral;
pub mod numkernel;
pub mod rng;
pub mod search;

pub use error::{QswError, Result};
pub use gksl::{DensityMatrix, EvolutionGenerator, WalkModel};
pub use graphs::{DiGraph, Graph, GraphMatrixKind};
pub use nonmoral::DemoralizedGraph;
pub use numkernel::{CMatrix, CsrMatrix, EigenSystem, HermitianMatrix, C64};
