//! Simple graphs and digraphs, their matrices, structural algorithms, random
//! samplers and the small named graphs used throughout the experiments.
//!
//! Adjacency follows the column convention `<w|A|v> = 1` iff `(v, w)` is an
//! arc, so a column lists the out-neighbours of a vertex.

mod fixtures;
mod io;
mod random;
mod structure;

use serde::{Deserialize, Serialize};

use crate::error::{QswError, Result};
use crate::numkernel::{CMatrix, CsrMatrix, HermitianMatrix, C64};

pub use fixtures::{
    circulant_jump2, complete, complete_plus_leaf, directed_path, moral_triangle, ngqsw_period_graph, path,
    premature_graph, star,
};
pub use io::{read_graph_json, write_graph_json, GraphJson};
pub use random::{cl_powerlaw_omega, gen_ba, gen_ba_directed, gen_cl, gen_er, gen_er_directed, random_orientation};
pub use structure::Condensation;

/// Which matrix of a graph drives an evolution or a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphMatrixKind {
    Adjacency,
    Laplacian,
    NormalizedLaplacian,
}

impl std::str::FromStr for GraphMatrixKind {
    type Err = QswError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "adjacency" | "a" => Ok(Self::Adjacency),
            "laplacian" | "l" => Ok(Self::Laplacian),
            "normalized_laplacian" | "normalized" | "nl" => Ok(Self::NormalizedLaplacian),
            other => Err(QswError::Parse(format!("unknown graph matrix kind '{other}'"))),
        }
    }
}

fn check_vertex(n: usize, v: usize) -> Result<()> {
    if v >= n {
        Err(QswError::InvalidParameter(format!("vertex {v} out of range for {n} vertices")))
    } else {
        Ok(())
    }
}

fn real_dense(n: usize, entries: impl Iterator<Item = (usize, usize)>) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for (i, j) in entries {
        m[(i, j)] = C64::new(1.0, 0.0);
    }
    m
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Empty graph.
    pub fn empty(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n] }
    }

    /// Rejects self-loops, duplicates (in either orientation) and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            check_vertex(n, u)?;
            check_vertex(n, v)?;
            if u == v {
                return Err(QswError::InvalidParameter(format!("self-loop at vertex {u}")));
            }
            if g.adj[u].contains(&v) {
                return Err(QswError::InvalidParameter(format!("duplicate edge {{{u},{v}}}")));
            }
            g.adj[u].push(v);
            g.adj[v].push(u);
        }
        g.adj.iter_mut().for_each(|a| a.sort_unstable());
        Ok(g)
    }

    /// Builds from sorted neighbour lists produced internally.
    pub(crate) fn from_adjacency_lists(mut adj: Vec<Vec<usize>>) -> Self {
        adj.iter_mut().for_each(|a| {
            a.sort_unstable();
            a.dedup();
        });
        Self { adj }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Every edge becomes a pair of opposite arcs.
    pub fn to_digraph(&self) -> DiGraph {
        DiGraph::from_out_lists(self.adj.clone())
    }

    pub fn adjacency(&self) -> CMatrix {
        real_dense(self.n(), self.edges().into_iter().flat_map(|(u, v)| [(u, v), (v, u)]))
    }

    pub fn adjacency_sparse(&self) -> CsrMatrix {
        let one = C64::new(1.0, 0.0);
        let t: Vec<_> = self.edges().into_iter().flat_map(|(u, v)| [(u, v, one), (v, u, one)]).collect();
        CsrMatrix::from_triplets(self.n(), self.n(), &t)
    }

    /// `L = D - A`.
    pub fn laplacian(&self) -> HermitianMatrix {
        let mut m = self.adjacency().scale_real(-1.0);
        for v in 0..self.n() {
            m[(v, v)] = C64::new(self.degree(v) as f64, 0.0);
        }
        HermitianMatrix::new(m).expect("graph Laplacian is symmetric")
    }

    /// `D^{-1/2} L D^{-1/2}`; undefined when some vertex is isolated.
    pub fn normalized_laplacian(&self) -> Result<HermitianMatrix> {
        let n = self.n();
        if let Some(v) = (0..n).find(|&v| self.degree(v) == 0) {
            return Err(QswError::IsolatedVertex(v));
        }
        let s: Vec<f64> = (0..n).map(|v| 1.0 / (self.degree(v) as f64).sqrt()).collect();
        let mut m = CMatrix::identity(n);
        for (u, v) in self.edges() {
            let x = C64::new(-s[u] * s[v], 0.0);
            m[(u, v)] = x;
            m[(v, u)] = x;
        }
        HermitianMatrix::new(m)
    }

    /// The requested graph matrix (adjacency, `L`, or normalized `L`).
    pub fn matrix(&self, kind: GraphMatrixKind) -> Result<HermitianMatrix> {
        match kind {
            GraphMatrixKind::Adjacency => HermitianMatrix::new(self.adjacency()),
            GraphMatrixKind::Laplacian => Ok(self.laplacian()),
            GraphMatrixKind::NormalizedLaplacian => self.normalized_laplacian(),
        }
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Subgraph induced by `vertices` (relabelled in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (k, &v) in vertices.iter().enumerate() {
            index[v] = k;
        }
        let adj = vertices
            .iter()
            .map(|&v| self.adj[v].iter().filter(|&&w| index[w] != usize::MAX).map(|&w| index[w]).collect())
            .collect();
        Self::from_adjacency_lists(adj)
    }

    /// Largest connected component and the original label of each of its
    /// vertices. Ties go to the component holding the smallest vertex.
    pub fn giant_component(&self) -> (Graph, Vec<usize>) {
        let comps = self.components();
        let best = comps.into_iter().fold(Vec::new(), |best, c| if c.len() > best.len() { c } else { best });
        (self.induced(&best), best)
    }
}

/// Simple digraph on vertices `0..n`; `(v, w)` is an arc from `v` to `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl DiGraph {
    pub fn empty(n: usize) -> Self {
        Self { out: vec![Vec::new(); n], inc: vec![Vec::new(); n] }
    }

    /// Rejects self-loops, duplicate arcs and out-of-range endpoints.
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut out = vec![Vec::new(); n];
        for &(v, w) in arcs {
            check_vertex(n, v)?;
            check_vertex(n, w)?;
            if v == w {
                return Err(QswError::InvalidParameter(format!("self-loop at vertex {v}")));
            }
            if out[v].contains(&w) {
                return Err(QswError::InvalidParameter(format!("duplicate arc ({v},{w})")));
            }
            out[v].push(w);
        }
        Ok(Self::from_out_lists(out))
    }

    pub(crate) fn from_out_lists(mut out: Vec<Vec<usize>>) -> Self {
        let n = out.len();
        let mut inc = vec![Vec::new(); n];
        for (v, nb) in out.iter_mut().enumerate() {
            nb.sort_unstable();
            nb.dedup();
            for &w in nb.iter() {
                inc[w].push(v);
            }
        }
        Self { out, inc }
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.out.iter().enumerate().flat_map(|(v, nb)| nb.iter().map(move |&w| (v, w))).collect()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Parents of `v` in increasing order.
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn indegree(&self, v: usize) -> usize {
        self.inc[v].len()
    }

    pub fn outdegree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn has_arc(&self, v: usize, w: usize) -> bool {
        v < self.n() && self.out[v].binary_search(&w).is_ok()
    }

    /// True when every arc has its reverse.
    pub fn is_symmetric(&self) -> bool {
        self.arcs().iter().all(|&(v, w)| self.has_arc(w, v))
    }

    /// `<w|A|v> = 1` for each arc `(v, w)`.
    pub fn adjacency(&self) -> CMatrix {
        real_dense(self.n(), self.arcs().into_iter().map(|(v, w)| (w, v)))
    }

    pub fn adjacency_sparse(&self) -> CsrMatrix {
        let t: Vec<_> = self.arcs().into_iter().map(|(v, w)| (w, v, C64::new(1.0, 0.0))).collect();
        CsrMatrix::from_triplets(self.n(), self.n(), &t)
    }

    /// Forget orientations; opposite arcs merge into one edge.
    pub fn underlying(&self) -> Graph {
        let mut adj = vec![Vec::new(); self.n()];
        for (v, w) in self.arcs() {
            adj[v].push(w);
            adj[w].push(v);
        }
        Graph::from_adjacency_lists(adj)
    }

    pub fn reversed(&self) -> DiGraph {
        DiGraph::from_out_lists(self.inc.clone())
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.underlying().is_connected()
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.n() <= 1 || self.condensation().partition.len() == 1
    }
}
