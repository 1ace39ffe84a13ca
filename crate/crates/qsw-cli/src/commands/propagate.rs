use std::path::PathBuf;
use std::time::Instant;

use qsw::analysis::{fit_limit_model, path_second_moments, scaling_exponents, LimitFit};
use qsw::{QswError, Result, WalkModel};
use serde::Serialize;

use crate::output::{num, opt, with_ext, write_csv, write_envelope};
use crate::spec::parse_times;

#[derive(clap::Args, Debug, Serialize)]
pub struct Args {
    /// ctqw, ctrw, lqsw, gqsw or ngqsw.
    #[arg(long)]
    model: WalkModel,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Odd path length; chosen from the time grid when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// `start:stop:step` or a comma list.
    #[arg(long, default_value = "20:300:20")]
    times: String,
    /// Points per log-log slope window.
    #[arg(long, default_value_t = 5)]
    batch: usize,
    /// Writes PREFIX.csv and PREFIX.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct Summary {
    path_length: usize,
    final_alpha: Option<f64>,
    fit: Option<LimitFit>,
    fit_error: Option<String>,
}

/// Odd length that keeps the walk away from the ends up to `t_max`: six
/// diffusive standard deviations plus the ballistic front, plus a margin.
pub fn auto_length(model: WalkModel, omega: f64, t_max: f64) -> usize {
    let w = match model {
        WalkModel::Ctqw => 0.0,
        WalkModel::Ctrw => 1.0,
        _ => omega,
    };
    let half = 6.0 * (2.0 * w * t_max).sqrt() + 2.2 * (1.0 - w) * t_max + 20.0;
    2 * half.ceil() as usize + 1
}

pub fn run(a: Args) -> Result<()> {
    let started = Instant::now();
    if !(0.0..=1.0).contains(&a.omega) {
        return Err(QswError::InvalidParameter(format!("omega {} outside [0, 1]", a.omega)));
    }
    let times = parse_times(&a.times)?;
    if times[0] <= 0.0 {
        return Err(QswError::InvalidParameter("propagation times must be positive".into()));
    }
    let n = a.n.unwrap_or_else(|| auto_length(a.model, a.omega, *times.last().unwrap()));
    let mu2 = path_second_moments(a.model, a.omega, n, &times)?;
    let trace = if times.len() >= a.batch { Some(scaling_exponents(&times, &mu2, a.batch)?) } else { None };

    let rows = times.iter().enumerate().map(|(i, t)| {
        let slope = trace.as_ref().and_then(|tr| tr.alphas.get(i).map(|&al| (tr.alpha_mid[i], al)));
        vec![num(*t), num(mu2[i]), opt(slope.map(|s| s.0)), opt(slope.map(|s| s.1))]
    });
    write_csv(&with_ext(&a.out, "csv"), &["t", "mu2", "alpha_mid", "alpha"], rows)?;

    let (fit, fit_error) = match &trace {
        Some(tr) => match fit_limit_model(&tr.alpha_mid, &tr.alphas) {
            Ok(f) => (Some(f), None),
            Err(e) => (None, Some(e.to_string())),
        },
        None => (None, Some(format!("fewer than {} timepoints", a.batch))),
    };
    let summary = Summary { path_length: n, final_alpha: trace.as_ref().and_then(|t| t.final_alpha()), fit, fit_error };
    write_envelope(&with_ext(&a.out, "json"), "propagate", 0, started, &a, &summary)
}
