//! Graph-spec mini-language and time-grid syntax.
//!
//! Graphs: `path:61`, `dpath:5`, `complete:256`, `star:100`, `kplus:20`,
//! `circulant:8`, `moral-triangle`, `premature`, `period`, `file:<path>`,
//! and the random families `er:<n>:<p>`, `er-directed:<n>:<p>`,
//! `ba:<n>:<m0>`, `ba-directed:<n>:<m0>`, `cl:<n>:<a>:<b>` which draw from
//! the run seed.
//!
//! Time grids: `start:stop:step` (inclusive) or a comma list.

use std::path::PathBuf;

use qsw::graphs::{
    circulant_jump2, cl_powerlaw_omega, complete, complete_plus_leaf, directed_path, gen_ba, gen_ba_directed, gen_cl,
    gen_er, gen_er_directed, moral_triangle, ngqsw_period_graph, path, premature_graph, read_graph_json, star,
};
use qsw::{DiGraph, Graph, QswError, Result};

/// A loaded graph, directed or not.
#[derive(Debug, Clone)]
pub enum Loaded {
    Undirected(Graph),
    Directed(DiGraph),
}

impl Loaded {
    pub fn n(&self) -> usize {
        match self {
            Loaded::Undirected(g) => g.n(),
            Loaded::Directed(g) => g.n(),
        }
    }

    /// Undirected view; a directed graph qualifies only if it is symmetric.
    pub fn undirected(&self) -> Result<Graph> {
        match self {
            Loaded::Undirected(g) => Ok(g.clone()),
            Loaded::Directed(g) if g.is_symmetric() => Ok(g.underlying()),
            Loaded::Directed(_) => Err(QswError::InvalidParameter("this command needs an undirected graph".into())),
        }
    }

    pub fn directed(&self) -> DiGraph {
        match self {
            Loaded::Undirected(g) => g.to_digraph(),
            Loaded::Directed(g) => g.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Path(usize),
    DirectedPath(usize),
    Complete(usize),
    Star(usize),
    CompletePlusLeaf(usize),
    Circulant(usize),
    MoralTriangle,
    Premature,
    Period,
    File(PathBuf),
    Er(usize, f64),
    ErDirected(usize, f64),
    Ba(usize, usize),
    BaDirected(usize, usize),
    ChungLu(usize, f64, f64),
}

fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| QswError::Parse(format!("bad {what} '{s}'")))
}

fn order(s: &str) -> Result<usize> {
    let n: usize = num(s, "vertex count")?;
    if n == 0 {
        return Err(QswError::InvalidParameter("vertex count must be positive".into()));
    }
    Ok(n)
}

impl std::str::FromStr for GraphSpec {
    type Err = QswError;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(p) = s.strip_prefix("file:") {
            return Ok(GraphSpec::File(PathBuf::from(p)));
        }
        let parts: Vec<&str> = s.split(':').collect();
        let arity = |k: usize| {
            if parts.len() == k + 1 {
                Ok(())
            } else {
                Err(QswError::Parse(format!("graph spec '{s}' expects {k} parameter(s)")))
            }
        };
        let spec = match parts[0].to_ascii_lowercase().as_str() {
            "path" => arity(1).and_then(|_| Ok(GraphSpec::Path(order(parts[1])?)))?,
            "dpath" | "directed-path" => arity(1).and_then(|_| Ok(GraphSpec::DirectedPath(order(parts[1])?)))?,
            "complete" => arity(1).and_then(|_| Ok(GraphSpec::Complete(order(parts[1])?)))?,
            "star" => arity(1).and_then(|_| Ok(GraphSpec::Star(order(parts[1])?)))?,
            "kplus" => {
                arity(1)?;
                let n = order(parts[1])?;
                if n < 2 {
                    return Err(QswError::InvalidParameter("kplus needs at least two vertices".into()));
                }
                GraphSpec::CompletePlusLeaf(n)
            }
            "circulant" => arity(1).and_then(|_| Ok(GraphSpec::Circulant(order(parts[1])?)))?,
            "moral-triangle" => arity(0).map(|_| GraphSpec::MoralTriangle)?,
            "premature" => arity(0).map(|_| GraphSpec::Premature)?,
            "period" => arity(0).map(|_| GraphSpec::Period)?,
            "er" | "er-directed" => {
                arity(2)?;
                let (n, p) = (order(parts[1])?, num(parts[2], "probability")?);
                if parts[0] == "er" {
                    GraphSpec::Er(n, p)
                } else {
                    GraphSpec::ErDirected(n, p)
                }
            }
            "ba" | "ba-directed" => {
                arity(2)?;
                let (n, m0) = (order(parts[1])?, num(parts[2], "m0")?);
                if parts[0] == "ba" {
                    GraphSpec::Ba(n, m0)
                } else {
                    GraphSpec::BaDirected(n, m0)
                }
            }
            "cl" => {
                arity(3)?;
                GraphSpec::ChungLu(order(parts[1])?, num(parts[2], "exponent a")?, num(parts[3], "exponent b")?)
            }
            other => return Err(QswError::Parse(format!("unknown graph '{other}'"))),
        };
        Ok(spec)
    }
}

impl GraphSpec {
    pub fn build(&self, seed: u64) -> Result<Loaded> {
        use Loaded::{Directed, Undirected};
        Ok(match self {
            GraphSpec::Path(n) => Undirected(path(*n)),
            GraphSpec::DirectedPath(n) => Directed(directed_path(*n)),
            GraphSpec::Complete(n) => Undirected(complete(*n)),
            GraphSpec::Star(n) => Undirected(star(*n)),
            GraphSpec::CompletePlusLeaf(n) => Undirected(complete_plus_leaf(*n)),
            GraphSpec::Circulant(n) => Directed(circulant_jump2(*n)?),
            GraphSpec::MoralTriangle => Directed(moral_triangle()),
            GraphSpec::Premature => Directed(premature_graph()),
            GraphSpec::Period => Directed(ngqsw_period_graph()),
            GraphSpec::File(p) => {
                let j = read_graph_json(p)?;
                if j.directed {
                    Directed(j.to_digraph()?)
                } else {
                    Undirected(j.to_graph()?)
                }
            }
            GraphSpec::Er(n, p) => Undirected(gen_er(*n, *p, seed)?),
            GraphSpec::ErDirected(n, p) => Directed(gen_er_directed(*n, *p, seed)?),
            GraphSpec::Ba(n, m0) => Undirected(gen_ba(*n, *m0, seed)?),
            GraphSpec::BaDirected(n, m0) => Directed(gen_ba_directed(*n, *m0, seed)?),
            GraphSpec::ChungLu(n, a, b) => Undirected(gen_cl(&cl_powerlaw_omega(*n, *a, *b)?, seed)?),
        })
    }
}

/// Parses `start:stop:step` or `t1,t2,...`.
pub fn parse_times(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(QswError::InvalidParameter("empty time grid".into()));
    }
    let times: Vec<f64> = if s.contains(':') {
        let p: Vec<&str> = s.split(':').collect();
        if p.len() != 3 {
            return Err(QswError::Parse(format!("time range '{s}' must be start:stop:step")));
        }
        let (a, b, h): (f64, f64, f64) = (num(p[0], "time")?, num(p[1], "time")?, num(p[2], "time step")?);
        if !(h > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(QswError::InvalidParameter(format!("time range '{s}' needs a positive step")));
        }
        let count = ((b - a) / h + 1e-9).floor();
        if count < 0.0 {
            return Err(QswError::InvalidParameter(format!("time range '{s}' is empty")));
        }
        (0..=count as usize).map(|k| a + k as f64 * h).collect()
    } else {
        s.split(',').map(|t| num(t.trim(), "time")).collect::<Result<_>>()?
    };
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(QswError::InvalidParameter("times must be finite and nonnegative".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(QswError::InvalidParameter("times must be strictly increasing".into()));
    }
    Ok(times)
}
