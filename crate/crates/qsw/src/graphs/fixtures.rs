//! Named graphs. Labels `v1, v2, ...` from the drawings map to `0, 1, ...`
//! (and `v0..v5` to `0..5` for the period example).

use super::{DiGraph, Graph};
use crate::error::{QswError, Result};

fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::new(n, edges).expect("fixture edges are valid")
}

fn digraph(n: usize, arcs: &[(usize, usize)]) -> DiGraph {
    DiGraph::new(n, arcs).expect("fixture arcs are valid")
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    graph(n, &e)
}

/// Directed path `0 -> 1 -> ... -> (n-1)`.
pub fn directed_path(n: usize) -> DiGraph {
    let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    digraph(n, &e)
}

pub fn complete(n: usize) -> Graph {
    let e: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    graph(n, &e)
}

/// `K_{n-1,1}`: hub `0` joined to leaves `1..n`.
pub fn star(n: usize) -> Graph {
    let e: Vec<_> = (1..n).map(|v| (0, v)).collect();
    graph(n, &e)
}

/// `K_{n-1}` on `0..n-1` plus the leaf `n-1` hanging from vertex `0`.
pub fn complete_plus_leaf(n: usize) -> Graph {
    assert!(n >= 2, "complete_plus_leaf needs at least two vertices");
    let mut e: Vec<_> = (0..n - 1).flat_map(|u| (u + 1..n - 1).map(move |v| (u, v))).collect();
    e.push((0, n - 1));
    graph(n, &e)
}

/// Undirected ring on `n = 4k` vertices (`k > 1`) plus the arcs
/// `i + 2 -> i`.
pub fn circulant_jump2(n: usize) -> Result<DiGraph> {
    if n % 4 != 0 || n < 8 {
        return Err(QswError::InvalidParameter(format!("circulant size must be 4k with k > 1, got {n}")));
    }
    let mut arcs = Vec::with_capacity(3 * n);
    for i in 0..n {
        let j = (i + 1) % n;
        arcs.push((i, j));
        arcs.push((j, i));
        arcs.push(((i + 2) % n, i));
    }
    Ok(digraph(n, &arcs))
}

/// Two parents of a common child: `v1 -> v3`, `v2 -> v3`.
pub fn moral_triangle() -> DiGraph {
    digraph(3, &[(0, 2), (1, 2)])
}

/// Triangle `v1 v2 v3` with edges in both directions plus the arc
/// `v1 -> v4`.
pub fn premature_graph() -> DiGraph {
    digraph(4, &[(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1), (0, 3)])
}

/// Undirected star `v0 - {v1, ..., v5}` with the extra edge `v5 - v4`.
pub fn ngqsw_period_graph() -> DiGraph {
    graph(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (4, 5)]).to_digraph()
}
