//! Spectral classification of generators, sink-localization measures and
//! convergence-in-probability profiles.

use serde::{Deserialize, Serialize};

use crate::error::{QswError, Result};
use crate::gksl::EvolutionGenerator;
use crate::graphs::DiGraph;
use crate::numkernel::C64;

/// Largest `n^2` for which the dense generator spectrum is computed.
pub const SPECTRUM_CAP: usize = 2500;
/// Default threshold for zero and purely imaginary eigenvalues.
pub const CLASSIFY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    /// Single stationary state and no oscillating modes.
    Relaxing,
    /// Several stationary states, no oscillating modes.
    ConvergentNonRelaxing,
    /// At least one purely imaginary eigenvalue.
    PossiblyPeriodic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub classification: Classification,
    /// Eigenvalues with `|lambda| < tol`.
    pub zero_multiplicity: usize,
    /// Second smallest `|lambda|`.
    pub second_smallest_abs: f64,
    /// Eigenvalues with `|Re lambda| < tol` and `|Im lambda| > tol`.
    pub imaginary_count: usize,
    pub tol: f64,
    pub cap: usize,
    /// The full spectrum, as `[re, im]` pairs.
    pub eigenvalues: Vec<[f64; 2]>,
}

impl ConvergenceReport {
    pub fn spectrum(&self) -> Vec<C64> {
        self.eigenvalues.iter().map(|&[re, im]| C64::new(re, im)).collect()
    }

    /// Distance from `z` to the nearest eigenvalue.
    pub fn distance_to(&self, z: C64) -> f64 {
        self.spectrum().iter().map(|l| (l - z).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// Classifies a generator from its full spectrum, with the default cap.
pub fn classify_convergence(gen: &EvolutionGenerator, tol: f64) -> Result<ConvergenceReport> {
    classify_convergence_capped(gen, tol, SPECTRUM_CAP)
}

pub fn classify_convergence_capped(gen: &EvolutionGenerator, tol: f64, cap: usize) -> Result<ConvergenceReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(QswError::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let d = gen.state_dim() * gen.state_dim();
    if d > cap {
        return Err(QswError::DimensionCap(d, cap));
    }
    let spec = gen.spectrum()?;
    Ok(classify_spectrum(&spec, tol, cap))
}

/// Classification rules applied to a given spectrum.
pub fn classify_spectrum(spec: &[C64], tol: f64, cap: usize) -> ConvergenceReport {
    let zero_multiplicity = spec.iter().filter(|z| z.norm() < tol).count();
    let imaginary_count = spec.iter().filter(|z| z.re.abs() < tol && z.im.abs() > tol).count();
    let mut abs: Vec<f64> = spec.iter().map(|z| z.norm()).collect();
    abs.sort_by(f64::total_cmp);
    let classification = if imaginary_count > 0 {
        Classification::PossiblyPeriodic
    } else if zero_multiplicity == 1 {
        Classification::Relaxing
    } else {
        Classification::ConvergentNonRelaxing
    };
    ConvergenceReport {
        classification,
        zero_multiplicity,
        second_smallest_abs: abs.get(1).copied().unwrap_or(f64::NAN),
        imaginary_count,
        tol,
        cap,
        eigenvalues: spec.iter().map(|z| [z.re, z.im]).collect(),
    }
}

/// Mass on the unique sink component and `sum_v d(v, V_s)^2 p_v`, with `d`
/// the directed distance to the nearest sink-component vertex.
pub fn structure_measures(g: &DiGraph, p: &[f64]) -> Result<(f64, f64)> {
    if p.len() != g.n() {
        return Err(QswError::Dimension(format!("{} probabilities for {} vertices", p.len(), g.n())));
    }
    let cond = g.condensation();
    let sink = cond.unique_sink()?;
    let dist = g.distances_to_sink_set()?;
    let ps = sink.iter().map(|&v| p[v]).sum();
    let mus = dist.iter().zip(p).map(|(&d, &q)| (d * d) as f64 * q).sum();
    Ok((ps, mus))
}

/// Where a trace of distributions settles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceProfile {
    pub t_min: f64,
    pub index: usize,
    /// `||p(t_i) - p(t_last)||_1`.
    pub distances: Vec<f64>,
}

/// Smallest index from which `||p(t) - p(T_max)||_1` is nonincreasing
/// (up to `1e-12` of slack for rounding).
pub fn convergence_profile(trace: &[Vec<f64>], times: &[f64]) -> Result<ConvergenceProfile> {
    if trace.len() != times.len() {
        return Err(QswError::Dimension(format!("{} distributions for {} times", trace.len(), times.len())));
    }
    if times.len() < 3 {
        return Err(QswError::InvalidParameter("need at least 3 timepoints".into()));
    }
    let last = trace.last().unwrap();
    let distances: Vec<f64> =
        trace.iter().map(|p| p.iter().zip(last).map(|(a, b)| (a - b).abs()).sum()).collect();
    let mut index = distances.len() - 1;
    while index > 0 && distances[index - 1] + 1e-12 >= distances[index] {
        index -= 1;
    }
    Ok(ConvergenceProfile { t_min: times[index], index, distances })
}
