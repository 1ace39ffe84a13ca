//! Random graph samplers. Each is a deterministic function of its
//! parameters and seed.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{DiGraph, Graph};
use crate::error::{QswError, Result};
use crate::rng::seeded;

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(QswError::InvalidParameter(format!("probability {p} outside [0, 1]")))
    }
}

/// Erdos-Renyi graph: every unordered pair independently with probability
/// `p`.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = seeded(seed);
    let mut adj = vec![Vec::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
    }
    Ok(Graph::from_adjacency_lists(adj))
}

/// Directed Erdos-Renyi graph: every ordered pair independently, so both
/// `(v, w)` and `(w, v)` may appear.
pub fn gen_er_directed(n: usize, p: f64, seed: u64) -> Result<DiGraph> {
    check_probability(p)?;
    let mut rng = seeded(seed);
    let mut out = vec![Vec::new(); n];
    for (v, nb) in out.iter_mut().enumerate() {
        for w in 0..n {
            if w != v && rng.random::<f64>() < p {
                nb.push(w);
            }
        }
    }
    Ok(DiGraph::from_out_lists(out))
}

/// Chung-Lu graph with expected degrees `omega`: the pair `{i, j}` is an
/// edge with probability `omega_i omega_j / sum(omega)`.
pub fn gen_cl(omega: &[f64], seed: u64) -> Result<Graph> {
    let n = omega.len();
    if let Some(x) = omega.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(QswError::InvalidParameter(format!("expected degree {x} is not a finite nonnegative number")));
    }
    let total: f64 = omega.iter().sum();
    if total == 0.0 {
        return Ok(Graph::empty(n));
    }
    // the largest pair product decides feasibility
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| omega[b].total_cmp(&omega[a]));
    if n >= 2 && omega[order[0]] * omega[order[1]] > total * (1.0 + 1e-12) {
        return Err(QswError::ProbabilityOverflow(order[0].min(order[1]), order[0].max(order[1])));
    }
    let mut rng = seeded(seed);
    let mut adj = vec![Vec::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < omega[u] * omega[v] / total {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
    }
    Ok(Graph::from_adjacency_lists(adj))
}

/// Power-law expected degrees `omega_i = n^(a + b i / n)`, `i = 1..n`.
pub fn cl_powerlaw_omega(n: usize, a: f64, b: f64) -> Result<Vec<f64>> {
    if !(0.0 < a && 0.0 < b && a + b <= 1.0) {
        return Err(QswError::InvalidParameter(format!("need 0 < a < a + b <= 1, got a = {a}, b = {b}")));
    }
    let nf = n as f64;
    Ok((1..=n).map(|i| nf.powf(a + i as f64 / nf * b)).collect())
}

/// Preferential attachment on top of `K_{m0}`; returns the final edge lists
/// with each new vertex's targets.
fn ba_process(n: usize, m0: usize, seed: u64) -> Result<(Vec<(usize, usize)>, Vec<(usize, usize)>)> {
    if m0 == 0 || n < m0 {
        return Err(QswError::InvalidParameter(format!("need n >= m0 >= 1, got n = {n}, m0 = {m0}")));
    }
    let mut rng = seeded(seed);
    let base: Vec<(usize, usize)> = (0..m0).flat_map(|u| (u + 1..m0).map(move |v| (u, v))).collect();
    // every edge endpoint once: uniform draws are degree-proportional
    let mut ends: Vec<usize> = base.iter().flat_map(|&(u, v)| [u, v]).collect();
    let mut attached = Vec::with_capacity((n - m0) * m0);
    let mut chosen = Vec::with_capacity(m0);
    for v in m0..n {
        chosen.clear();
        if ends.is_empty() {
            // only the single initial vertex exists and it has degree 0
            let mut pool: Vec<usize> = (0..v).collect();
            pool.shuffle(&mut rng);
            chosen.extend(pool.into_iter().take(m0));
        } else {
            // rejection of repeats gives sequential sampling without
            // replacement, proportional to degree
            while chosen.len() < m0 {
                let w = ends[rng.random_range(0..ends.len())];
                if !chosen.contains(&w) {
                    chosen.push(w);
                }
            }
        }
        for &w in &chosen {
            attached.push((w, v));
            ends.push(w);
            ends.push(v);
        }
    }
    Ok((base, attached))
}

/// Barabasi-Albert graph, original variant: start from `K_{m0}` and attach
/// every new vertex to `m0` distinct existing vertices chosen with
/// probability proportional to degree.
pub fn gen_ba(n: usize, m0: usize, seed: u64) -> Result<Graph> {
    let (base, attached) = ba_process(n, m0, seed)?;
    let mut adj = vec![Vec::new(); n];
    for (u, v) in base.into_iter().chain(attached) {
        adj[u].push(v);
        adj[v].push(u);
    }
    Ok(Graph::from_adjacency_lists(adj))
}

/// Directed Barabasi-Albert graph: the same process, with arcs from the
/// chosen existing vertex to the new one and the seed clique `K_{m0}`
/// carrying arcs in both directions.
pub fn gen_ba_directed(n: usize, m0: usize, seed: u64) -> Result<DiGraph> {
    let (base, attached) = ba_process(n, m0, seed)?;
    let mut out = vec![Vec::new(); n];
    for (u, v) in base {
        out[u].push(v);
        out[v].push(u);
    }
    for (w, v) in attached {
        out[w].push(v);
    }
    Ok(DiGraph::from_out_lists(out))
}

/// Each edge replaced by one of its two orientations, uniformly.
pub fn random_orientation(g: &Graph, seed: u64) -> DiGraph {
    let mut rng = seeded(seed);
    let mut out = vec![Vec::new(); g.n()];
    for (u, v) in g.edges() {
        if rng.random::<bool>() {
            out[u].push(v);
        } else {
            out[v].push(u);
        }
    }
    DiGraph::from_out_lists(out)
}
