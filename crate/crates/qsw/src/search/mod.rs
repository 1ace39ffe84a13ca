//! Continuous-time quantum spatial search: graph matrices normalized to a
//! unit top eigenvalue, spectral statistics of the marked vertex, search
//! evolution, and classical and schedule-based baselines.
//!
//! The search Hamiltonian is `gamma H_G + |w><w|`. Flipping its overall sign
//! conjugates every amplitude for real `H_G` and real initial states, so the
//! success probabilities are unchanged.

mod classical;
mod experiments;
mod lambert;
mod schedule;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{QswError, Result};
use crate::graphs::{Graph, GraphMatrixKind};
use crate::numkernel::{
    eig_hermitian, eigvals_hermitian, expm_action, CsrMatrix, EigenSystem, HermitianMatrix, C64,
};

pub use classical::{classical_mfpt, classical_mfpt_mc, MonteCarloEstimate};
pub use experiments::{
    ba_trajectories, ba_trajectory, er_laplacian_sample, er_laplacian_sweep, parallel_map, sample_seed, ErSample,
    ErSweepRow, MarkedVertex, Trajectory, TrajectoryPoint,
};
pub use lambert::{lambert_bound, lambert_w0, lambert_wm1};
pub use schedule::{geometric_schedule, ScheduleOutcome, ScheduleParams};

/// Gap below which the top eigenvalue counts as degenerate.
pub const TOP_GAP_TOL: f64 = 1e-12;
/// Default constant in the validity condition for the `S_1` rule.
pub const DEFAULT_C_CONST: f64 = 0.1;

const STEP_TOL: f64 = 1e-12;

fn top_eigenvalue(h: &HermitianMatrix) -> Result<f64> {
    eigvals_hermitian(h)?
        .first()
        .copied()
        .ok_or_else(|| QswError::InvalidParameter("empty graph matrix".into()))
}

/// Search-ready graph matrix with top eigenvalue one, and the factor the
/// raw matrix was divided by (`lambda_1(A)`, `lambda_1(L)`, or 1).
pub fn graph_hamiltonian_scaled(g: &Graph, kind: GraphMatrixKind) -> Result<(HermitianMatrix, f64)> {
    if g.n() == 0 {
        return Err(QswError::InvalidParameter("graph has no vertices".into()));
    }
    if kind != GraphMatrixKind::Adjacency && !g.is_connected() {
        return Err(QswError::DisconnectedGraph);
    }
    match kind {
        GraphMatrixKind::Adjacency => {
            let a = g.matrix(kind)?;
            let l1 = top_eigenvalue(&a)?;
            if l1 <= 0.0 {
                return Err(QswError::InvalidParameter("graph has no edges".into()));
            }
            Ok((a.affine(1.0 / l1, 0.0), l1))
        }
        GraphMatrixKind::Laplacian => {
            let l = g.laplacian();
            let l1 = top_eigenvalue(&l)?;
            if l1 <= 0.0 {
                return Err(QswError::InvalidParameter("graph has no edges".into()));
            }
            Ok((l.affine(-1.0 / l1, 1.0), l1))
        }
        GraphMatrixKind::NormalizedLaplacian => Ok((g.normalized_laplacian()?.affine(-1.0, 1.0), 1.0)),
    }
}

/// `A / lambda_1(A)`, `I - L / lambda_1(L)` or `I - normalized Laplacian`.
/// The Laplacian kinds require a connected graph.
pub fn graph_hamiltonian(g: &Graph, kind: GraphMatrixKind) -> Result<HermitianMatrix> {
    Ok(graph_hamiltonian_scaled(g, kind)?.0)
}

/// Affine map of a spectrum onto `lambda_1 = 1` and `|lambda_2| = |lambda_n|`.
#[derive(Debug, Clone)]
pub struct ShiftRescale {
    pub matrix: HermitianMatrix,
    /// `a = -(lambda_2 + lambda_n) / 2`, the minimizer of `c(a)`.
    pub shift: f64,
    /// `lambda_1 + a`.
    pub scale: f64,
    /// `max_{i>1} |lambda_i|` after the map.
    pub c: f64,
}

/// `H' = (H + a I) / (lambda_1 + a)` with `a = -(lambda_2 + lambda_n) / 2`.
pub fn shift_rescale(h: &HermitianMatrix) -> Result<ShiftRescale> {
    let ev = eigvals_hermitian(h)?;
    if ev.len() < 2 {
        return Err(QswError::InvalidParameter("shift_rescale needs at least two eigenvalues".into()));
    }
    let (l1, l2, ln) = (ev[0], ev[1], ev[ev.len() - 1]);
    if l1 - l2 <= TOP_GAP_TOL * l1.abs().max(1.0) {
        return Err(QswError::DegenerateTop);
    }
    let shift = -(l2 + ln) / 2.0;
    let scale = l1 + shift;
    let c = (l2 - ln) / (2.0 * scale);
    Ok(ShiftRescale { matrix: h.affine(1.0 / scale, shift / scale), shift, scale, c })
}

/// `(1 - lambda_2) / (1 - lambda_n)`, equal to `(1 - c) / (1 + c)` for the
/// balanced spectrum of a matrix with `lambda_1 = 1`.
pub fn optimal_shift_success_bound(lambda2: f64, lambda_n: f64) -> Result<f64> {
    if !(lambda_n <= lambda2 && lambda2 < 1.0) {
        return Err(QswError::InvalidParameter(format!(
            "need lambda_n <= lambda_2 < 1, got {lambda_n} and {lambda2}"
        )));
    }
    Ok((1.0 - lambda2) / (1.0 - lambda_n))
}

/// Spectral statistics of a marked vertex for a graph matrix with
/// `lambda_1 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub w: usize,
    /// `|<w|lambda_1>|^2`.
    pub eps: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    /// `lambda_1 - lambda_2`.
    pub gap: f64,
    pub c_const: f64,
    /// `sqrt(eps) < c_const min(S1 S2 / S3, gap sqrt(S2))`.
    pub condition_holds: bool,
    /// `T = sqrt(S2) / (sqrt(eps) S1)`.
    pub predicted_t: f64,
    /// `gamma = S1`.
    pub gamma: f64,
    /// Success probability at `predicted_t` starting from `|lambda_1>` with
    /// `gamma = S1`.
    pub p_at_t: f64,
}

impl SearchStats {
    /// `(pi / 2) predicted_t`: the time at which the rotation from
    /// `|lambda_1>` towards `|w>` completes a quarter period.
    pub fn quarter_period_time(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 * self.predicted_t
    }
}

/// How the hopping rate `gamma` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaRule {
    /// `gamma = S1`.
    S1,
    /// `sum_{i>1} |<w|lambda_i>|^2 / (1 - lambda_i)` over
    /// `sum_{i>1} |<w|lambda_i>|^2`.
    Normalized,
    Manual(f64),
}

impl std::str::FromStr for GammaRule {
    type Err = QswError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(Self::S1),
            "normalized" | "s1_normalized" => Ok(Self::Normalized),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|g| g.is_finite())
                .map(Self::Manual)
                .ok_or_else(|| QswError::Parse(format!("unknown gamma rule '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    PrincipalEigenvector,
    UniformSuperposition,
}

impl std::str::FromStr for InitialState {
    type Err = QswError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "principal" | "principal_eigenvector" | "lambda1" => Ok(Self::PrincipalEigenvector),
            "uniform" | "uniform_superposition" => Ok(Self::UniformSuperposition),
            other => Err(QswError::Parse(format!("unknown initial state '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRun {
    pub w: usize,
    pub gamma: f64,
    pub initial: InitialState,
    pub times: Vec<f64>,
    pub success: Vec<f64>,
    pub argmax_t: f64,
    pub p_max: f64,
}

/// A graph matrix prepared for repeated searches: the eigendecomposition is
/// computed once, on first use.
#[derive(Debug)]
pub struct SearchProblem {
    h: HermitianMatrix,
    sparse: CsrMatrix,
    eig: OnceLock<EigenSystem>,
}

impl SearchProblem {
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        if h.dim() == 0 {
            return Err(QswError::InvalidParameter("empty graph matrix".into()));
        }
        let sparse = CsrMatrix::from_dense(h.as_matrix());
        Ok(Self { h, sparse, eig: OnceLock::new() })
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.h
    }

    pub fn eigensystem(&self) -> Result<&EigenSystem> {
        if let Some(e) = self.eig.get() {
            return Ok(e);
        }
        let e = eig_hermitian(&self.h)?;
        Ok(self.eig.get_or_init(|| e))
    }

    /// `|lambda_1>` with the phase fixed so that its entry sum is real and
    /// positive (or, when that sum vanishes, its largest entry).
    pub fn principal(&self) -> Result<Vec<C64>> {
        let v = self.eigensystem()?.vector(0);
        let s: C64 = v.iter().sum();
        let anchor = if s.norm() > 1e-8 {
            s
        } else {
            *v.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap()
        };
        let phase = anchor.conj() / anchor.norm();
        Ok(v.iter().map(|z| z * phase).collect())
    }

    fn check_vertex(&self, w: usize) -> Result<()> {
        if w >= self.dim() {
            return Err(QswError::InvalidParameter(format!("marked vertex {w} out of range for {} vertices", self.dim())));
        }
        Ok(())
    }

    /// Checks `lambda_1 = 1` and a simple top eigenvalue.
    fn normalized_spectrum(&self) -> Result<&EigenSystem> {
        let es = self.eigensystem()?;
        let l = &es.values;
        if (l[0] - 1.0).abs() > 1e-8 {
            return Err(QswError::InvalidParameter(format!("top eigenvalue is {} instead of 1", l[0])));
        }
        if l.len() > 1 && l[0] - l[1] <= TOP_GAP_TOL {
            return Err(QswError::DegenerateTop);
        }
        Ok(es)
    }

    /// `S_k = sum_{i>1} |<w|lambda_i>|^2 / (1 - lambda_i)^k`.
    pub fn s_sums(&self, w: usize, k: i32) -> Result<f64> {
        self.check_vertex(w)?;
        let es = self.normalized_spectrum()?;
        Ok((1..self.dim()).map(|i| es.vectors[(w, i)].norm_sqr() / (1.0 - es.values[i]).powi(k)).sum())
    }

    /// `|<w|lambda_1>|^2`.
    pub fn eps(&self, w: usize) -> Result<f64> {
        self.check_vertex(w)?;
        Ok(self.eigensystem()?.vectors[(w, 0)].norm_sqr())
    }

    pub fn gamma(&self, w: usize, rule: GammaRule) -> Result<f64> {
        match rule {
            GammaRule::S1 => self.s_sums(w, 1),
            GammaRule::Normalized => {
                let rest = 1.0 - self.eps(w)?;
                if rest <= 0.0 {
                    return Err(QswError::InvalidParameter(format!("vertex {w} has no weight outside lambda_1")));
                }
                Ok(self.s_sums(w, 1)? / rest)
            }
            GammaRule::Manual(g) if g.is_finite() => Ok(g),
            GammaRule::Manual(g) => Err(QswError::InvalidParameter(format!("gamma {g} is not finite"))),
        }
    }

    pub fn stats(&self, w: usize, c_const: f64) -> Result<SearchStats> {
        self.check_vertex(w)?;
        let es = self.normalized_spectrum()?;
        let eps = self.eps(w)?;
        let (s1, s2, s3) = (self.s_sums(w, 1)?, self.s_sums(w, 2)?, self.s_sums(w, 3)?);
        let gap = if self.dim() > 1 { es.values[0] - es.values[1] } else { 0.0 };
        let condition_holds = eps.sqrt() < c_const * (s1 * s2 / s3).min(gap * s2.sqrt());
        let predicted_t = s2.sqrt() / (eps.sqrt() * s1);
        let p_at_t = if predicted_t.is_finite() {
            self.run(w, GammaRule::Manual(s1), InitialState::PrincipalEigenvector, &[predicted_t])?.success[0]
        } else {
            f64::NAN
        };
        Ok(SearchStats { w, eps, s1, s2, s3, gap, c_const, condition_holds, predicted_t, gamma: s1, p_at_t })
    }

    fn initial_vector(&self, initial: InitialState) -> Result<Vec<C64>> {
        match initial {
            InitialState::PrincipalEigenvector => self.principal(),
            InitialState::UniformSuperposition => {
                let n = self.dim();
                Ok(vec![C64::new(1.0 / (n as f64).sqrt(), 0.0); n])
            }
        }
    }

    /// `p(t) = |<w| exp(-i (gamma H_G + |w><w|) t) |init>|^2` on ascending
    /// `times`. Long grids go through one eigendecomposition of the search
    /// Hamiltonian, short ones through truncated Taylor steps on the sparse form.
    pub fn run(&self, w: usize, rule: GammaRule, initial: InitialState, times: &[f64]) -> Result<SearchRun> {
        self.check_vertex(w)?;
        if times.is_empty() {
            return Err(QswError::InvalidParameter("empty time grid".into()));
        }
        if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || times.windows(2).any(|p| p[1] < p[0]) {
            return Err(QswError::InvalidParameter("times must be finite, nonnegative and ascending".into()));
        }
        let gamma = self.gamma(w, rule)?;
        let init = self.initial_vector(initial)?;
        let n = self.dim();
        let success = if n <= 64 || times.len() > 8 {
            let mut hs = self.h.affine(gamma, 0.0).into_matrix();
            hs[(w, w)] += 1.0;
            let es = eig_hermitian(&HermitianMatrix::new(hs)?)?;
            let v = &es.vectors;
            let coef: Vec<C64> =
                (0..n).map(|k| v[(w, k)] * (0..n).map(|i| v[(i, k)].conj() * init[i]).sum::<C64>()).collect();
            times
                .iter()
                .map(|&t| {
                    let amp: C64 = coef.iter().zip(&es.values).map(|(c, &e)| c * C64::new(0.0, -e * t).exp()).sum();
                    amp.norm_sqr().min(1.0)
                })
                .collect()
        } else {
            let marker = CsrMatrix::from_triplets(n, n, &[(w, w, C64::new(1.0, 0.0))]);
            let gen = self.sparse.lincomb(C64::new(0.0, -gamma), &marker, C64::new(0.0, -1.0));
            let mut psi = init;
            let mut now = 0.0;
            let mut out = Vec::with_capacity(times.len());
            for &t in times {
                psi = expm_action(&gen, &psi, t - now, STEP_TOL)?;
                now = t;
                out.push(psi[w].norm_sqr().min(1.0));
            }
            out
        };
        let (imax, &p_max) = success.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
        Ok(SearchRun { w, gamma, initial, times: times.to_vec(), argmax_t: times[imax], p_max, success })
    }
}

/// [`SearchProblem::stats`] for a single query.
pub fn search_stats(h: &HermitianMatrix, w: usize, c_const: f64) -> Result<SearchStats> {
    SearchProblem::new(h.clone())?.stats(w, c_const)
}

/// [`SearchProblem::run`] for a single query.
pub fn run_search(
    h: &HermitianMatrix,
    w: usize,
    rule: GammaRule,
    initial: InitialState,
    times: &[f64],
) -> Result<SearchRun> {
    SearchProblem::new(h.clone())?.run(w, rule, initial, times)
}

/// Spectral summary of a search-ready graph matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub n: usize,
    /// Top eigenvalue of the raw graph matrix (1 for the normalized
    /// Laplacian kind).
    pub scale: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda_n: f64,
    pub gap: f64,
    /// `<s|lambda_1>` with `|s>` the uniform superposition.
    pub overlap: f64,
    /// `max_v |<v|lambda_1> - 1/sqrt(n)|`.
    pub maxdev: f64,
}

pub fn spectral_report(g: &Graph, kind: GraphMatrixKind) -> Result<SpectralReport> {
    let (h, scale) = graph_hamiltonian_scaled(g, kind)?;
    let prob = SearchProblem::new(h)?;
    let es = prob.eigensystem()?;
    let n = prob.dim();
    let v = prob.principal()?;
    let s = 1.0 / (n as f64).sqrt();
    let overlap = v.iter().map(|z| z.re * s).sum::<f64>();
    let maxdev = v.iter().map(|z| (z - s).norm()).fold(0.0, f64::max);
    let l = &es.values;
    let lambda2 = if n > 1 { l[1] } else { f64::NAN };
    Ok(SpectralReport {
        n,
        scale,
        lambda1: l[0],
        lambda2,
        lambda_n: l[n - 1],
        gap: l[0] - lambda2,
        overlap,
        maxdev,
    })
}
