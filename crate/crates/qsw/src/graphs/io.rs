//! Graph JSON: `{"n": 3, "directed": true, "edges": [[1, 3], [2, 3]]}` with
//! 1-based labels.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DiGraph, Graph};
use crate::error::{QswError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub directed: bool,
    pub edges: Vec<[usize; 2]>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> Self {
        Self { n: g.n(), directed: false, edges: g.edges().into_iter().map(|(u, v)| [u + 1, v + 1]).collect() }
    }

    pub fn from_digraph(g: &DiGraph) -> Self {
        Self { n: g.n(), directed: true, edges: g.arcs().into_iter().map(|(u, v)| [u + 1, v + 1]).collect() }
    }

    fn zero_based(&self) -> Result<Vec<(usize, usize)>> {
        self.edges
            .iter()
            .map(|&[u, v]| {
                if u == 0 || v == 0 || u > self.n || v > self.n {
                    Err(QswError::Parse(format!("edge [{u}, {v}] outside labels 1..={}", self.n)))
                } else {
                    Ok((u - 1, v - 1))
                }
            })
            .collect()
    }

    /// Undirected reading; fails for directed files.
    pub fn to_graph(&self) -> Result<Graph> {
        if self.directed {
            return Err(QswError::Parse("expected an undirected graph".into()));
        }
        Graph::new(self.n, &self.zero_based()?)
    }

    /// Directed reading; an undirected file yields arcs in both directions.
    pub fn to_digraph(&self) -> Result<DiGraph> {
        if self.directed {
            DiGraph::new(self.n, &self.zero_based()?)
        } else {
            Ok(self.to_graph()?.to_digraph())
        }
    }
}

pub fn read_graph_json(path: &Path) -> Result<GraphJson> {
    let text = std::fs::read_to_string(path)?;
    let g: GraphJson = serde_json::from_str(&text).map_err(|e| QswError::Parse(format!("{}: {e}", path.display())))?;
    // validate eagerly
    g.to_digraph()?;
    Ok(g)
}

pub fn write_graph_json(path: &Path, g: &GraphJson) -> Result<()> {
    let text = serde_json::to_string(g).map_err(|e| QswError::Io(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}
