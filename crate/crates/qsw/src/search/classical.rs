//! Classical baseline: mean first-passage time of the discrete uniform
//! random walk started from its stationary distribution.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{graph_hamiltonian, SearchProblem};
use crate::error::{QswError, Result};
use crate::graphs::{Graph, GraphMatrixKind};
use crate::rng::seeded;

fn check(g: &Graph, w: usize) -> Result<()> {
    if w >= g.n() {
        return Err(QswError::InvalidParameter(format!("marked vertex {w} out of range for {} vertices", g.n())));
    }
    if !g.is_connected() || g.edge_count() == 0 {
        return Err(QswError::DisconnectedGraph);
    }
    Ok(())
}

/// `(2|E| / d_w) S_1`, with `S_1` taken from `I - normalized Laplacian`.
pub fn classical_mfpt(g: &Graph, w: usize) -> Result<f64> {
    check(g, w)?;
    let prob = SearchProblem::new(graph_hamiltonian(g, GraphMatrixKind::NormalizedLaplacian)?)?;
    let s1 = prob.s_sums(w, 1)?;
    Ok(2.0 * g.edge_count() as f64 / g.degree(w) as f64 * s1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub walks: usize,
}

/// Simulates `walks` uniform random walks, each started at a vertex drawn
/// with probability `deg(v) / 2|E|`, and averages the number of steps to
/// reach `w` (zero when starting on it).
pub fn classical_mfpt_mc(g: &Graph, w: usize, walks: usize, seed: u64) -> Result<MonteCarloEstimate> {
    check(g, w)?;
    if walks < 2 {
        return Err(QswError::InvalidParameter(format!("need at least two walks, got {walks}")));
    }
    // every edge endpoint once: a uniform pick is degree-proportional
    let ends: Vec<usize> = (0..g.n()).flat_map(|v| std::iter::repeat_n(v, g.degree(v))).collect();
    let mut rng = seeded(seed);
    let (mut sum, mut sumsq) = (0.0, 0.0);
    for _ in 0..walks {
        let mut v = ends[rng.random_range(0..ends.len())];
        let mut steps = 0u64;
        while v != w {
            let nb = g.neighbors(v);
            v = nb[rng.random_range(0..nb.len())];
            steps += 1;
        }
        let s = steps as f64;
        sum += s;
        sumsq += s * s;
    }
    let n = walks as f64;
    let mean = sum / n;
    let var = (sumsq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(MonteCarloEstimate { mean, std_err: (var / n).sqrt(), walks })
}
