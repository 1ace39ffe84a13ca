//! Config-driven multi-sample experiments.
//!
//! ```json
//! {"experiment": "er_laplacian", "n": [500], "p0": [1.5, 2.0], "samples": 20, "seed": 7}
//! {"experiment": "ba_trajectories", "orders": [100, 200, 400], "m0": 3,
//!  "matrix": "normalized_laplacian", "marked": "last", "trajectories": 20, "seed": 7}
//! ```

use std::path::{Path, PathBuf};
use std::time::Instant;

use qsw::search::{ba_trajectories, er_laplacian_sweep, sample_seed, ErSample, ErSweepRow, MarkedVertex, Trajectory};
use qsw::{GraphMatrixKind, QswError, Result};
use serde::{Deserialize, Serialize};

use crate::output::{num, opt, write_csv, write_envelope};

#[derive(clap::Args, Debug, Serialize)]
pub struct Args {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepConfig {
    ErLaplacian {
        n: Vec<usize>,
        p0: Vec<f64>,
        samples: usize,
        #[serde(default)]
        seed: u64,
    },
    BaTrajectories {
        orders: Vec<usize>,
        m0: usize,
        #[serde(default = "default_matrix")]
        matrix: GraphMatrixKind,
        #[serde(default = "default_marked")]
        marked: MarkedVertex,
        trajectories: usize,
        #[serde(default)]
        seed: u64,
    },
}

fn default_matrix() -> GraphMatrixKind {
    GraphMatrixKind::NormalizedLaplacian
}

fn default_marked() -> MarkedVertex {
    MarkedVertex::Last
}

#[derive(Serialize)]
struct BaSummary {
    trajectories: usize,
    mean_alpha: f64,
    std_alpha: f64,
    /// Fit of the pooled `ln(T / p(T))` against `ln n`.
    pooled_alpha: f64,
    alphas: Vec<f64>,
}

pub fn run(a: Args) -> Result<()> {
    let started = Instant::now();
    let text = std::fs::read_to_string(&a.config)?;
    let cfg: SweepConfig =
        serde_json::from_str(&text).map_err(|e| QswError::Parse(format!("{}: {e}", a.config.display())))?;
    let samples_dir = a.out.join("samples");
    std::fs::create_dir_all(&samples_dir)?;
    match &cfg {
        SweepConfig::ErLaplacian { n, p0, samples, seed } => {
            if *samples == 0 || n.is_empty() || p0.is_empty() {
                return Err(QswError::InvalidParameter("the sweep has zero samples".into()));
            }
            let mut rows = Vec::new();
            let mut cell = 0u64;
            for &nn in n {
                for &p in p0 {
                    let (row, per) = er_laplacian_sweep(nn, p, *samples, sample_seed(*seed, cell))?;
                    write_er_samples(&samples_dir.join(format!("er_n{nn}_p{p}.csv")), &per)?;
                    rows.push(row);
                    cell += 1;
                }
            }
            write_csv(&a.out.join("aggregate.csv"), ER_HEADER, rows.iter().map(er_row))?;
            write_envelope(&a.out.join("summary.json"), "sweep", *seed, started, &cfg, &rows)
        }
        SweepConfig::BaTrajectories { orders, m0, matrix, marked, trajectories, seed } => {
            if *trajectories == 0 || orders.is_empty() {
                return Err(QswError::InvalidParameter("the sweep has zero samples".into()));
            }
            let trs = ba_trajectories(orders, *m0, *matrix, *marked, *trajectories, *seed)?;
            for (i, tr) in trs.iter().enumerate() {
                write_trajectory(&samples_dir.join(format!("trajectory_{i:04}.csv")), tr)?;
            }
            write_csv(
                &a.out.join("aggregate.csv"),
                &["trajectory", "seed", "alpha", "beta", "residual"],
                trs.iter()
                    .enumerate()
                    .map(|(i, t)| vec![i.to_string(), t.seed.to_string(), num(t.alpha), num(t.beta), num(t.residual)]),
            )?;
            write_envelope(&a.out.join("summary.json"), "sweep", *seed, started, &cfg, &ba_summary(&trs))
        }
    }
}

const ER_HEADER: &[&str] = &["p0", "n", "samples", "min_p", "mean_p", "max_p", "mean_shift_bound", "lambert_bound"];

fn er_row(r: &ErSweepRow) -> Vec<String> {
    vec![
        num(r.p0),
        r.n.to_string(),
        r.samples.to_string(),
        num(r.min_p),
        num(r.mean_p),
        num(r.max_p),
        num(r.mean_shift_bound),
        opt(r.lambert_bound),
    ]
}

fn write_er_samples(path: &Path, per: &[ErSample]) -> Result<()> {
    write_csv(
        path,
        &["sample", "seed", "giant", "min_p", "mean_p", "max_p", "shift_bound"],
        per.iter().enumerate().map(|(i, s)| {
            vec![
                i.to_string(),
                s.seed.to_string(),
                s.giant.to_string(),
                num(s.min_p),
                num(s.mean_p),
                num(s.max_p),
                num(s.shift_bound),
            ]
        }),
    )
}

fn write_trajectory(path: &Path, tr: &Trajectory) -> Result<()> {
    write_csv(
        path,
        &["n", "w", "t", "p_t", "condition_holds"],
        tr.points.iter().map(|p| vec![p.n.to_string(), p.w.to_string(), num(p.t), num(p.p_t), p.condition_holds.to_string()]),
    )
}

fn ba_summary(trs: &[Trajectory]) -> BaSummary {
    let alphas: Vec<f64> = trs.iter().map(|t| t.alpha).collect();
    let k = alphas.len() as f64;
    let mean = alphas.iter().sum::<f64>() / k;
    let var = if alphas.len() > 1 { alphas.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (k - 1.0) } else { 0.0 };
    let (x, y): (Vec<f64>, Vec<f64>) =
        trs.iter().flat_map(|t| t.points.iter().map(|p| ((p.n as f64).ln(), (p.t / p.p_t).ln()))).unzip();
    let mx = x.iter().sum::<f64>() / x.len() as f64;
    let my = y.iter().sum::<f64>() / y.len() as f64;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    BaSummary { trajectories: trs.len(), mean_alpha: mean, std_alpha: var.sqrt(), pooled_alpha: sxy / sxx, alphas }
}
