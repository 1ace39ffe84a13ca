//! Multi-sample search experiments on random graphs. Samples run on a small
//! thread pool; each one derives its own RNG stream from the root seed, so
//! results do not depend on scheduling.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{graph_hamiltonian, lambert_bound, optimal_shift_success_bound, GammaRule, InitialState, SearchProblem};
use crate::error::{QswError, Result};
use crate::graphs::{gen_ba, gen_er, GraphMatrixKind};
use crate::rng::stream;

/// Seed of sample `index` under `root`.
pub fn sample_seed(root: u64, index: u64) -> u64 {
    stream(root, index).next_u64()
}

/// Applies `f` to `0..count` on up to `available_parallelism` threads and
/// returns the results in index order. The first error wins.
pub fn parallel_map<T: Send>(count: usize, f: impl Fn(usize) -> Result<T> + Sync) -> Result<Vec<T>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(count.max(1));
    if workers <= 1 {
        return (0..count).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<T>>>> = Mutex::new((0..count).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let r = f(i);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(|r| r.expect("every index is visited")).collect()
}

/// Which vertex is marked in a Barabasi-Albert trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkedVertex {
    /// Vertex 0, part of the seed clique.
    First,
    /// The most recently attached vertex.
    Last,
}

/// One Laplacian search sample on the giant component of
/// `G(n, p0 ln n / n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErSample {
    pub p0: f64,
    pub n: usize,
    pub seed: u64,
    /// Order of the giant component.
    pub giant: usize,
    /// Success probabilities over all marked vertices at `pi sqrt(n) / 2`.
    pub min_p: f64,
    pub mean_p: f64,
    pub max_p: f64,
    /// `(1 - lambda_2) / (1 - lambda_n)` of `I - L / lambda_1(L)`.
    pub shift_bound: f64,
}

/// Runs the search for every vertex of the giant component with
/// `H_G = I - L / lambda_1(L)`, the normalized rate and the uniform start,
/// measured at `t = pi sqrt(n_giant) / 2`.
pub fn er_laplacian_sample(n: usize, p0: f64, seed: u64) -> Result<ErSample> {
    if n < 3 {
        return Err(QswError::InvalidParameter(format!("graph order {n} is too small")));
    }
    let p = (p0 * (n as f64).ln() / n as f64).min(1.0);
    let g = gen_er(n, p, seed)?.giant_component().0;
    if g.n() < 3 {
        return Err(QswError::InvalidParameter(format!("giant component of G({n}, {p}) has {} vertices", g.n())));
    }
    let prob = SearchProblem::new(graph_hamiltonian(&g, GraphMatrixKind::Laplacian)?)?;
    let vals = &prob.eigensystem()?.values;
    let shift_bound = optimal_shift_success_bound(vals[1], vals[vals.len() - 1])?;
    let t = PI * (g.n() as f64).sqrt() / 2.0;
    let mut ps = Vec::with_capacity(g.n());
    for w in 0..g.n() {
        ps.push(prob.run(w, GammaRule::Normalized, InitialState::PrincipalEigenvector, &[t])?.success[0]);
    }
    Ok(ErSample {
        p0,
        n,
        seed,
        giant: g.n(),
        min_p: ps.iter().copied().fold(f64::INFINITY, f64::min),
        mean_p: ps.iter().sum::<f64>() / ps.len() as f64,
        max_p: ps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        shift_bound,
    })
}

/// Aggregate of [`er_laplacian_sample`] over several seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErSweepRow {
    pub p0: f64,
    pub n: usize,
    pub samples: usize,
    pub min_p: f64,
    pub mean_p: f64,
    pub max_p: f64,
    pub mean_shift_bound: f64,
    /// `W_0(x) / W_-1(x)`; `None` for `p0 <= 1`, where it is undefined.
    pub lambert_bound: Option<f64>,
}

pub fn er_laplacian_sweep(n: usize, p0: f64, samples: usize, root_seed: u64) -> Result<(ErSweepRow, Vec<ErSample>)> {
    if samples == 0 {
        return Err(QswError::InvalidParameter("zero samples".into()));
    }
    let rows = parallel_map(samples, |i| er_laplacian_sample(n, p0, sample_seed(root_seed, i as u64)))?;
    let k = rows.len() as f64;
    let agg = ErSweepRow {
        p0,
        n,
        samples,
        min_p: rows.iter().map(|r| r.min_p).fold(f64::INFINITY, f64::min),
        mean_p: rows.iter().map(|r| r.mean_p).sum::<f64>() / k,
        max_p: rows.iter().map(|r| r.max_p).fold(f64::NEG_INFINITY, f64::max),
        mean_shift_bound: rows.iter().map(|r| r.shift_bound).sum::<f64>() / k,
        lambert_bound: if p0 > 1.0 { Some(lambert_bound(p0)?) } else { None },
    };
    Ok((agg, rows))
}

/// One point of a growing Barabasi-Albert trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub n: usize,
    pub w: usize,
    /// `sqrt(S2) / (sqrt(eps) S1)`.
    pub t: f64,
    pub p_t: f64,
    pub condition_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub seed: u64,
    pub points: Vec<TrajectoryPoint>,
    /// Least-squares fit `ln(T / p(T)) = alpha ln n + beta`.
    pub alpha: f64,
    pub beta: f64,
    /// `|| ln(T / p(T)) - alpha ln n - beta ||_2`.
    pub residual: f64,
}

/// Grows one `BA(m0)` graph to `max(orders)` and searches its prefixes of
/// the requested orders with `gamma = S1`, starting in `|lambda_1>` and
/// measuring at the predicted time.
pub fn ba_trajectory(
    orders: &[usize],
    m0: usize,
    kind: GraphMatrixKind,
    marked: MarkedVertex,
    seed: u64,
) -> Result<Trajectory> {
    if orders.len() < 2 {
        return Err(QswError::InvalidParameter("a trajectory needs at least two orders".into()));
    }
    let nmax = *orders.iter().max().unwrap();
    let full = gen_ba(nmax, m0, seed)?;
    let mut points = Vec::with_capacity(orders.len());
    for &n in orders {
        if n <= m0 {
            return Err(QswError::InvalidParameter(format!("order {n} does not exceed m0 = {m0}")));
        }
        // growth only appends vertices, so a prefix is the graph at order n
        let g = full.induced(&(0..n).collect::<Vec<_>>());
        let w = match marked {
            MarkedVertex::First => 0,
            MarkedVertex::Last => n - 1,
        };
        let st = SearchProblem::new(graph_hamiltonian(&g, kind)?)?.stats(w, super::DEFAULT_C_CONST)?;
        points.push(TrajectoryPoint { n, w, t: st.predicted_t, p_t: st.p_at_t, condition_holds: st.condition_holds });
    }
    let x: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| (p.t / p.p_t).ln()).collect();
    let (alpha, beta) = linear_fit(&x, &y);
    let residual = x.iter().zip(&y).map(|(a, b)| (b - alpha * a - beta).powi(2)).sum::<f64>().sqrt();
    Ok(Trajectory { seed, points, alpha, beta, residual })
}

pub fn ba_trajectories(
    orders: &[usize],
    m0: usize,
    kind: GraphMatrixKind,
    marked: MarkedVertex,
    count: usize,
    root_seed: u64,
) -> Result<Vec<Trajectory>> {
    if count == 0 {
        return Err(QswError::InvalidParameter("zero trajectories".into()));
    }
    parallel_map(count, |i| ba_trajectory(orders, m0, kind, marked, sample_seed(root_seed, i as u64)))
}

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
