//! Inputs shared by the benchmarks.

use qsw::gksl::DensityMatrix;
use qsw::graphs::gen_er;
use qsw::{GraphMatrixKind, HermitianMatrix};

/// Adjacency matrix of a connected-looking `G(n, 8 / n)` sample.
pub fn er_adjacency(n: usize, seed: u64) -> HermitianMatrix {
    gen_er(n, (8.0 / n as f64).min(1.0), seed)
        .expect("valid probability")
        .matrix(GraphMatrixKind::Adjacency)
        .expect("adjacency always exists")
}

/// `|mid><mid|` on `n` sites.
pub fn centre_state(n: usize) -> DensityMatrix {
    DensityMatrix::basis(n, n / 2).expect("index in range")
}
