//! Propagation measurements, limit-model fitting, convergence diagnostics and
//! closed-form path oracles.

mod closed_form;
mod convergence;
mod fit;

use serde::{Deserialize, Serialize};

use crate::error::{QswError, Result};
use crate::gksl::{
    ctrw_evolve, evolve_times, gqsw_spec, lqsw_spec, measure, schrodinger_evolve, DensityMatrix, WalkModel,
};
use crate::graphs::path;
use crate::nonmoral::{block_mixed_state, demoralize, natural_measure, ngqsw_generator, symmetrized_path_operators};
use crate::numkernel::C64;

pub use closed_form::{
    infinite_path_probability, infinite_path_probability_with, moment_mu2, path_probability_closed_form, taylor_a,
    taylor_b, taylor_series_probability, Quadrature,
};
pub use convergence::{
    classify_convergence, classify_convergence_capped, classify_spectrum, convergence_profile, structure_measures,
    Classification, ConvergenceProfile, ConvergenceReport, CLASSIFY_TOL, SPECTRUM_CAP,
};
pub use fit::{fit_limit_model, LimitFit};

/// `sum_k pos_k^2 p_k`; `p` must sum to one within `1e-6`.
pub fn second_moment(p: &[f64], positions: &[i64]) -> Result<f64> {
    if p.len() != positions.len() {
        return Err(QswError::Dimension(format!("{} probabilities for {} positions", p.len(), positions.len())));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(QswError::InvalidParameter(format!("probabilities sum to {total}")));
    }
    Ok(p.iter().zip(positions).map(|(q, &k)| q * (k * k) as f64).sum())
}

/// Moment series with per-batch log-log slopes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationTrace {
    pub timepoints: Vec<f64>,
    pub mu2: Vec<f64>,
    pub batch: usize,
    /// `(t_i + t_{i+l-1}) / 2` for each batch.
    pub alpha_mid: Vec<f64>,
    pub alphas: Vec<f64>,
}

impl PropagationTrace {
    pub fn final_alpha(&self) -> Option<f64> {
        self.alphas.last().copied()
    }
}

/// Least-squares slope of `log f` against `log t` over each window of `l`
/// consecutive points.
pub fn scaling_exponents(times: &[f64], values: &[f64], l: usize) -> Result<PropagationTrace> {
    if times.len() != values.len() {
        return Err(QswError::Dimension(format!("{} times for {} values", times.len(), values.len())));
    }
    if l < 2 || times.len() < l {
        return Err(QswError::InvalidParameter(format!("batch size {l} needs 2 <= l <= {}", times.len())));
    }
    if times.iter().chain(values).any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(QswError::InvalidParameter("times and values must be positive".into()));
    }
    let lx: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mut alpha_mid = Vec::new();
    let mut alphas = Vec::new();
    for i in 0..=times.len() - l {
        let (x, y) = (&lx[i..i + l], &ly[i..i + l]);
        let mx = x.iter().sum::<f64>() / l as f64;
        let my = y.iter().sum::<f64>() / l as f64;
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
        if sxx == 0.0 {
            return Err(QswError::InvalidParameter("repeated timepoints in a batch".into()));
        }
        alphas.push(sxy / sxx);
        alpha_mid.push(0.5 * (times[i] + times[i + l - 1]));
    }
    Ok(PropagationTrace { timepoints: times.to_vec(), mu2: values.to_vec(), batch: l, alpha_mid, alphas })
}

/// Distributions of a walk on the path with `n` vertices (`n` odd) started
/// at the middle vertex, at ascending `times`.
///
/// CTQW evolves a pure state, CTRW the classical master equation, LQSW and
/// GQSW the density matrix. NGQSW uses the symmetrized two-Lindblad
/// dissipator, starts in the uniform mixture over the middle block and is
/// read out by the natural measurement.
pub fn path_distributions(model: WalkModel, omega: f64, n: usize, times: &[f64]) -> Result<Vec<Vec<f64>>> {
    if n % 2 == 0 || n < 3 {
        return Err(QswError::InvalidParameter(format!("path length {n} must be odd and at least 3")));
    }
    let g = path(n);
    let mid = n / 2;
    match model {
        WalkModel::Ctqw => {
            let mut psi = vec![C64::new(0.0, 0.0); n];
            psi[mid] = C64::new(1.0, 0.0);
            let states = schrodinger_evolve(&g.adjacency_sparse(), &psi, times)?;
            Ok(states.iter().map(|s| s.iter().map(|z| z.norm_sqr()).collect()).collect())
        }
        WalkModel::Ctrw => {
            let mut p = vec![0.0; n];
            p[mid] = 1.0;
            ctrw_evolve(&g, &p, times)
        }
        WalkModel::Lqsw | WalkModel::Gqsw => {
            let dg = g.to_digraph();
            let spec = if model == WalkModel::Lqsw { lqsw_spec(&dg, omega)? } else { gqsw_spec(&dg, omega)? };
            let states = evolve_times(&spec.generator()?, &DensityMatrix::basis(n, mid)?, times)?;
            Ok(states.iter().map(measure).collect())
        }
        WalkModel::Ngqsw => {
            let dg = demoralize(&g.to_digraph());
            let gen = ngqsw_generator(&dg, &symmetrized_path_operators(&dg)?, omega)?;
            let states = evolve_times(&gen, &block_mixed_state(&dg, &[mid])?, times)?;
            states.iter().map(|r| natural_measure(r, &dg)).collect()
        }
        WalkModel::Custom => Err(QswError::InvalidParameter("custom generators have no path form".into())),
    }
}

/// `mu_2(t)` about the starting vertex for [`path_distributions`].
pub fn path_second_moments(model: WalkModel, omega: f64, n: usize, times: &[f64]) -> Result<Vec<f64>> {
    let pos: Vec<i64> = (0..n as i64).map(|k| k - (n / 2) as i64).collect();
    path_distributions(model, omega, n, times)?
        .iter()
        .map(|p| {
            // clipping can shave a few ulps off the total
            let s: f64 = p.iter().sum();
            let q: Vec<f64> = p.iter().map(|x| x / s).collect();
            second_moment(&q, &pos)
        })
        .collect()
}
