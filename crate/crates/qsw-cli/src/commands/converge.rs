use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use qsw::analysis::{classify_convergence_capped, ConvergenceReport, SPECTRUM_CAP};
use qsw::gksl::{ctqw_spec, ctrw_spec, gqsw_spec, lqsw_spec};
use qsw::nonmoral::{
    demoralize, ngqsw_generator, random_rotating_hamiltonian, rotating_hamiltonian, NonmoralOperators,
    RotationEnsemble, RotationRule,
};
use qsw::search::sample_seed;
use qsw::{EvolutionGenerator, HermitianMatrix, QswError, Result, WalkModel};
use serde::Serialize;

use crate::output::write_envelope;
use crate::spec::{GraphSpec, Loaded};

#[derive(clap::Args, Debug, Serialize)]
pub struct Args {
    /// ctqw, ctrw, lqsw, gqsw or ngqsw.
    #[arg(long)]
    model: WalkModel,
    /// Graph spec, e.g. `circulant:8`, `er-directed:6:0.4` or `file:g.json`.
    #[arg(long)]
    graph: String,
    #[arg(long, default_value_t = 0.5)]
    omega: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Rotating Hamiltonian of NGQSW: chain, cyclic, zero, goe, gue or xy.
    #[arg(long, default_value = "chain")]
    rotation: String,
    /// Independent draws of the random parts (graph and rotation).
    #[arg(long, default_value_t = 1)]
    samples: usize,
    /// Largest generator dimension `n^2` for the dense spectrum.
    #[arg(long, default_value_t = SPECTRUM_CAP)]
    cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy)]
enum Rotation {
    Rule(RotationRule),
    Zero,
    Random(RotationEnsemble),
}

impl std::str::FromStr for Rotation {
    type Err = QswError;
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("zero") {
            return Ok(Rotation::Zero);
        }
        s.parse::<RotationRule>()
            .map(Rotation::Rule)
            .or_else(|_| s.parse::<RotationEnsemble>().map(Rotation::Random))
            .map_err(|_| QswError::Parse(format!("unknown rotation '{s}'")))
    }
}

#[derive(Serialize)]
struct Sample {
    index: usize,
    graph_seed: u64,
    rotation_seed: u64,
    n: usize,
    report: ConvergenceReport,
}

#[derive(Serialize)]
struct Summary {
    samples: Vec<Sample>,
    counts: BTreeMap<String, usize>,
}

fn generator(model: WalkModel, g: &Loaded, omega: f64, rot: Rotation, rot_seed: u64) -> Result<EvolutionGenerator> {
    match model {
        WalkModel::Ctqw => ctqw_spec(&g.undirected()?).generator(),
        WalkModel::Ctrw => ctrw_spec(&g.undirected()?).generator(),
        WalkModel::Lqsw => lqsw_spec(&g.directed(), omega)?.generator(),
        WalkModel::Gqsw => gqsw_spec(&g.directed(), omega)?.generator(),
        WalkModel::Ngqsw => {
            let dg = demoralize(&g.directed());
            let mut ops = NonmoralOperators::standard(&dg)?;
            ops.h_rot = match rot {
                Rotation::Rule(r) => rotating_hamiltonian(&dg, r),
                Rotation::Zero => HermitianMatrix::zeros(dg.dim()),
                Rotation::Random(e) => random_rotating_hamiltonian(&dg, e, rot_seed),
            };
            ngqsw_generator(&dg, &ops, omega)
        }
        WalkModel::Custom => Err(QswError::InvalidParameter("custom generators are not available here".into())),
    }
}

pub fn run(a: Args) -> Result<()> {
    let started = Instant::now();
    if a.samples == 0 {
        return Err(QswError::InvalidParameter("zero samples".into()));
    }
    let spec: GraphSpec = a.graph.parse()?;
    let rot: Rotation = a.rotation.parse()?;
    let mut samples = Vec::with_capacity(a.samples);
    let mut counts = BTreeMap::new();
    for i in 0..a.samples {
        let (graph_seed, rotation_seed) = (sample_seed(a.seed, 2 * i as u64), sample_seed(a.seed, 2 * i as u64 + 1));
        let g = spec.build(graph_seed)?;
        let gen = generator(a.model, &g, a.omega, rot, rotation_seed)?;
        let report = classify_convergence_capped(&gen, a.tol, a.cap)?;
        *counts.entry(format!("{:?}", report.classification)).or_insert(0) += 1;
        samples.push(Sample { index: i, graph_seed, rotation_seed, n: g.n(), report });
    }
    write_envelope(&a.out, "converge", a.seed, started, &a, &Summary { samples, counts })
}
