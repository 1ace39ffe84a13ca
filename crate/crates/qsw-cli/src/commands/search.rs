use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use qsw::search::{graph_hamiltonian, GammaRule, InitialState, SearchProblem, SearchStats, DEFAULT_C_CONST};
use qsw::{GraphMatrixKind, QswError, Result};
use serde::Serialize;

use crate::output::{num, with_ext, write_csv, write_envelope};
use crate::spec::{parse_times, GraphSpec};

#[derive(clap::Args, Debug, Serialize)]
pub struct Args {
    /// Undirected graph spec, e.g. `complete:256`, `ba:500:3`, `file:g.json`.
    #[arg(long)]
    graph: String,
    /// adjacency, laplacian or normalized-laplacian.
    #[arg(long, default_value = "adjacency")]
    matrix: GraphMatrixKind,
    /// 1-based marked vertex; the last vertex when omitted.
    #[arg(long)]
    marked: Option<usize>,
    /// s1, normalized or a number.
    #[arg(long, default_value = "s1")]
    gamma: GammaRule,
    /// principal or uniform.
    #[arg(long, default_value = "principal")]
    initial: InitialState,
    /// `start:stop:step`, a comma list, or `auto` for `points` samples of
    /// `[0, 2 T]` around the predicted optimum `T`.
    #[arg(long, default_value = "auto")]
    times: String,
    #[arg(long, default_value_t = 401)]
    points: usize,
    #[arg(long, default_value_t = DEFAULT_C_CONST)]
    c_const: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Writes PREFIX.csv and PREFIX.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct Summary {
    n: usize,
    marked: usize,
    gamma: f64,
    initial: InitialState,
    stats: Option<SearchStats>,
    stats_error: Option<String>,
    /// Time the automatic grid is centred on.
    reference_t: Option<f64>,
    argmax_t: f64,
    p_max: f64,
}

pub fn run(a: Args) -> Result<()> {
    let started = Instant::now();
    let g = a.graph.parse::<GraphSpec>()?.build(a.seed)?.undirected()?;
    let n = g.n();
    let marked = a.marked.unwrap_or(n);
    if marked == 0 || marked > n {
        return Err(QswError::InvalidParameter(format!("marked vertex {marked} outside 1..={n}")));
    }
    let w = marked - 1;
    let prob = SearchProblem::new(graph_hamiltonian(&g, a.matrix)?)?;
    let (stats, stats_error) = match prob.stats(w, a.c_const) {
        Ok(s) => (Some(s), None),
        Err(e) if e.is_numerical() => return Err(e),
        Err(e) => (None, Some(e.to_string())),
    };
    let (times, reference_t) = if a.times.trim().eq_ignore_ascii_case("auto") {
        if a.points < 2 {
            return Err(QswError::InvalidParameter("--points must be at least 2".into()));
        }
        let t_ref = stats
            .map(|s| s.quarter_period_time())
            .filter(|t| t.is_finite() && *t > 0.0)
            .unwrap_or(PI * (n as f64).sqrt() / 2.0);
        let h = 2.0 * t_ref / (a.points - 1) as f64;
        ((0..a.points).map(|k| k as f64 * h).collect(), Some(t_ref))
    } else {
        (parse_times(&a.times)?, None)
    };
    let run = prob.run(w, a.gamma, a.initial, &times)?;
    write_csv(
        &with_ext(&a.out, "csv"),
        &["t", "p"],
        run.times.iter().zip(&run.success).map(|(t, p)| vec![num(*t), num(*p)]),
    )?;
    let summary = Summary {
        n,
        marked,
        gamma: run.gamma,
        initial: run.initial,
        stats,
        stats_error,
        reference_t,
        argmax_t: run.argmax_t,
        p_max: run.p_max,
    };
    write_envelope(&with_ext(&a.out, "json"), "search", a.seed, started, &a, &summary)
}
