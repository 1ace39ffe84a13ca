use std::collections::VecDeque;

use super::DiGraph;
use crate::error::{QswError, Result};

/// Strongly connected components and the acyclic digraph between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    /// Components, each sorted; ordered by their smallest vertex.
    pub partition: Vec<Vec<usize>>,
    /// Component index of every vertex.
    pub component_of: Vec<usize>,
    pub dag: DiGraph,
    /// Components without outgoing arcs.
    pub sinks: Vec<usize>,
}

impl Condensation {
    /// Vertices of the sink component when it is unique.
    pub fn unique_sink(&self) -> Result<&[usize]> {
        match self.sinks.as_slice() {
            [s] => Ok(&self.partition[*s]),
            other => Err(QswError::MultipleSinks(other.len())),
        }
    }
}

/// Tarjan's algorithm with an explicit call stack.
fn tarjan(g: &DiGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (vertex, position in its out-list)
        let mut calls = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            if let Some(&w) = g.out_neighbors(v).get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

impl DiGraph {
    pub fn condensation(&self) -> Condensation {
        let partition = tarjan(self);
        let mut component_of = vec![0; self.n()];
        for (k, comp) in partition.iter().enumerate() {
            for &v in comp {
                component_of[v] = k;
            }
        }
        let mut out = vec![Vec::new(); partition.len()];
        for (v, w) in self.arcs() {
            let (a, b) = (component_of[v], component_of[w]);
            if a != b {
                out[a].push(b);
            }
        }
        let dag = DiGraph::from_out_lists(out);
        let sinks = (0..partition.len()).filter(|&k| dag.outdegree(k) == 0).collect();
        Condensation { partition, component_of, dag, sinks }
    }

    /// Directed distance from every vertex to the unique sink component,
    /// zero inside it.
    pub fn distances_to_sink_set(&self) -> Result<Vec<usize>> {
        let cond = self.condensation();
        let sink = cond.unique_sink()?;
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::new();
        for &v in sink {
            dist[v] = 0;
            queue.push_back(v);
        }
        // BFS against arc direction
        while let Some(w) = queue.pop_front() {
            for &v in self.in_neighbors(w) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[w] + 1;
                    queue.push_back(v);
                }
            }
        }
        debug_assert!(dist.iter().all(|&d| d != usize::MAX));
        Ok(dist)
    }
}
