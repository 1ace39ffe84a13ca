use std::path::PathBuf;

use qsw::graphs::{write_graph_json, GraphJson};
use qsw::{QswError, Result};
use serde::Serialize;

use crate::spec::{GraphSpec, Loaded};

#[derive(clap::Args, Debug, Serialize)]
pub struct Args {
    /// er, er-directed, ba, ba-directed, cl, path, dpath, complete, star,
    /// kplus or circulant.
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: usize,
    /// Edge probability (er, er-directed).
    #[arg(long)]
    p: Option<f64>,
    /// Edges per new vertex (ba, ba-directed).
    #[arg(long)]
    m0: Option<usize>,
    /// Chung-Lu expected degrees `omega_i = n^(a + b i / n)`.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; the graph goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn need<T>(x: Option<T>, flag: &str, model: &str) -> Result<T> {
    x.ok_or_else(|| QswError::InvalidParameter(format!("--{flag} is required for model {model}")))
}

fn to_spec(a: &Args) -> Result<GraphSpec> {
    if a.n == 0 {
        return Err(QswError::InvalidParameter("--n must be positive".into()));
    }
    let m = a.model.to_ascii_lowercase();
    Ok(match m.as_str() {
        "er" => GraphSpec::Er(a.n, need(a.p, "p", &m)?),
        "er-directed" => GraphSpec::ErDirected(a.n, need(a.p, "p", &m)?),
        "ba" => GraphSpec::Ba(a.n, need(a.m0, "m0", &m)?),
        "ba-directed" => GraphSpec::BaDirected(a.n, need(a.m0, "m0", &m)?),
        "cl" => GraphSpec::ChungLu(a.n, need(a.a, "a", &m)?, need(a.b, "b", &m)?),
        other => format!("{other}:{}", a.n).parse()?,
    })
}

pub fn run(a: Args) -> Result<()> {
    let spec = to_spec(&a)?;
    let json = match spec.build(a.seed)? {
        Loaded::Undirected(g) => GraphJson::from_graph(&g),
        Loaded::Directed(g) => GraphJson::from_digraph(&g),
    };
    match &a.out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            write_graph_json(p, &json)
        }
        None => {
            println!("{}", serde_json::to_string(&json).map_err(|e| QswError::Io(e.to_string()))?);
            Ok(())
        }
    }
}
