//! GKSL generators for the walk families, density-matrix evolution and
//! canonical measurement.
//!
//! Generators act on `vec(rho)` in row-major order:
//! `S = -i(H (x) I - I (x) conj(H)) + sum_L (L (x) conj(L) - 1/2 L^dagger L (x) I - 1/2 I (x) L^T conj(L))`.
//! Interpolated walks weight the coherent part by `1 - omega` and the
//! dissipator by `omega`.

mod superop;

use serde::{Deserialize, Serialize};

use crate::error::{QswError, Result};
use crate::graphs::{DiGraph, Graph};
use crate::numkernel::{
    eig_general, eigvals_hermitian, expm_action, kron, unvec_slice, CMatrix, CsrMatrix,
    HermitianMatrix, LinearOperator, C64, EXPM_TOL,
};

pub use superop::Superoperator;

/// Entrywise tolerances accepted for a state handed in by a caller.
pub const DENSITY_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted for a state handed in by a caller.
pub const PSD_TOL: f64 = 1e-8;
/// Trace or Hermiticity drift that marks an evolution as numerically broken.
pub const DRIFT_TOL: f64 = 1e-7;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    /// Checks Hermiticity and trace within [`DENSITY_TOL`] and the smallest
    /// eigenvalue against [`PSD_TOL`].
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(QswError::Dimension(format!("{}x{} is not square", m.rows(), m.cols())));
        }
        let dev = m.hermitian_deviation();
        if dev > DENSITY_TOL {
            return Err(QswError::DensityInvariantViolated(format!("Hermitian deviation {dev:e}")));
        }
        let tr = m.trace();
        if (tr - 1.0).norm() > DENSITY_TOL {
            return Err(QswError::DensityInvariantViolated(format!("trace {tr}")));
        }
        let rho = Self(HermitianMatrix::new(m)?.into_matrix());
        let low = rho.min_eigenvalue()?;
        if low < -PSD_TOL {
            return Err(QswError::DensityInvariantViolated(format!("eigenvalue {low:e}")));
        }
        Ok(rho)
    }

    /// `|k><k|` in dimension `n`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(QswError::InvalidParameter(format!("basis index {k} out of range for dimension {n}")));
        }
        Ok(Self(CMatrix::ketbra(n, k, k)))
    }

    /// `|psi><psi|` for a unit vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = crate::numkernel::norm2(psi);
        if (norm - 1.0).abs() > DENSITY_TOL {
            return Err(QswError::DensityInvariantViolated(format!("state norm {norm}")));
        }
        Ok(Self(CMatrix::outer(psi)))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self(CMatrix::identity(n).scale_real(1.0 / n as f64))
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        let d: Vec<C64> = p.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::new(CMatrix::diag(&d))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let ev = eigvals_hermitian(&HermitianMatrix::new(self.0.clone())?)?;
        Ok(ev.last().copied().unwrap_or(0.0))
    }

    /// Accepts an evolved matrix if the trace and Hermiticity drift stay
    /// below [`DRIFT_TOL`], then symmetrizes it exactly.
    fn from_evolved(m: CMatrix) -> Result<Self> {
        let dev = m.hermitian_deviation();
        let tr = m.trace();
        if dev > DRIFT_TOL || (tr - 1.0).norm() > DRIFT_TOL || !dev.is_finite() {
            return Err(QswError::DensityInvariantViolated(format!(
                "evolution drifted: trace {tr}, Hermitian deviation {dev:e}"
            )));
        }
        Ok(Self(HermitianMatrix::hermitian_part(&m)?.into_matrix()))
    }
}

impl std::ops::Deref for DensityMatrix {
    type Target = CMatrix;
    fn deref(&self) -> &CMatrix {
        &self.0
    }
}

/// Walk family a generator was built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkModel {
    Ctqw,
    Ctrw,
    Lqsw,
    Gqsw,
    Ngqsw,
    Custom,
}

impl std::str::FromStr for WalkModel {
    type Err = QswError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ctqw" => Ok(Self::Ctqw),
            "ctrw" => Ok(Self::Ctrw),
            "lqsw" => Ok(Self::Lqsw),
            "gqsw" => Ok(Self::Gqsw),
            "ngqsw" => Ok(Self::Ngqsw),
            other => Err(QswError::Parse(format!("unknown walk model '{other}'"))),
        }
    }
}

impl std::fmt::Display for WalkModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Ctqw => "ctqw",
            Self::Ctrw => "ctrw",
            Self::Lqsw => "lqsw",
            Self::Gqsw => "gqsw",
            Self::Ngqsw => "ngqsw",
            Self::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// A walk before weighting: Hamiltonian, Lindblad operators and the two
/// weights.
#[derive(Debug, Clone)]
pub struct WalkSpec {
    pub model: WalkModel,
    pub omega: f64,
    pub hamiltonian: CsrMatrix,
    pub lindblads: Vec<CsrMatrix>,
    pub ham_weight: f64,
    pub diss_weight: f64,
}

impl WalkSpec {
    pub fn generator(&self) -> Result<EvolutionGenerator> {
        EvolutionGenerator::from_sparse(
            &self.hamiltonian,
            &self.lindblads,
            self.ham_weight,
            self.diss_weight,
            self.model,
            self.omega,
        )
    }

    pub fn state_dim(&self) -> usize {
        self.hamiltonian.rows()
    }
}

pub(crate) fn check_omega(omega: f64) -> Result<()> {
    if (0.0..=1.0).contains(&omega) {
        Ok(())
    } else {
        Err(QswError::InvalidParameter(format!("omega {omega} outside [0, 1]")))
    }
}

/// Local-interaction walk: `H` the underlying adjacency and one Lindblad
/// `|w><v|` per arc `(v, w)`.
pub fn lqsw_spec(g: &DiGraph, omega: f64) -> Result<WalkSpec> {
    check_omega(omega)?;
    let n = g.n();
    let one = C64::new(1.0, 0.0);
    let lindblads = g.arcs().into_iter().map(|(v, w)| CsrMatrix::from_triplets(n, n, &[(w, v, one)])).collect();
    Ok(WalkSpec {
        model: WalkModel::Lqsw,
        omega,
        hamiltonian: g.underlying().adjacency_sparse(),
        lindblads,
        ham_weight: 1.0 - omega,
        diss_weight: omega,
    })
}

/// Global-interaction walk: `H` the underlying adjacency and the single
/// Lindblad equal to the digraph adjacency.
pub fn gqsw_spec(g: &DiGraph, omega: f64) -> Result<WalkSpec> {
    check_omega(omega)?;
    Ok(WalkSpec {
        model: WalkModel::Gqsw,
        omega,
        hamiltonian: g.underlying().adjacency_sparse(),
        lindblads: vec![g.adjacency_sparse()],
        ham_weight: 1.0 - omega,
        diss_weight: omega,
    })
}

/// Quantum walk `-i[A, rho]` on an undirected graph.
pub fn ctqw_spec(g: &Graph) -> WalkSpec {
    WalkSpec {
        model: WalkModel::Ctqw,
        omega: 0.0,
        hamiltonian: g.adjacency_sparse(),
        lindblads: Vec::new(),
        ham_weight: 1.0,
        diss_weight: 0.0,
    }
}

/// Random walk `dp/dt = -L p` embedded as the fully dissipative local walk
/// on the symmetric digraph of `g`.
pub fn ctrw_spec(g: &Graph) -> WalkSpec {
    let mut s = lqsw_spec(&g.to_digraph(), 1.0).expect("omega = 1 is valid");
    s.model = WalkModel::Ctrw;
    s
}

/// Generator with weights folded in: the coherent part keeps `ham_weight *
/// H`, each Lindblad becomes `sqrt(diss_weight) * L`.
#[derive(Debug, Clone)]
pub struct EvolutionGenerator {
    h: CsrMatrix,
    lindblads: Vec<CsrMatrix>,
    model: WalkModel,
    omega: f64,
}

fn sparse_is_hermitian(h: &CsrMatrix) -> bool {
    let scale = h.iter().map(|e| e.2.norm()).fold(1.0, f64::max);
    h.iter().all(|(i, j, v)| (v - h.get(j, i).conj()).norm() <= crate::numkernel::TOL_HERM * scale)
}

impl EvolutionGenerator {
    pub fn from_sparse(
        h: &CsrMatrix,
        lindblads: &[CsrMatrix],
        ham_weight: f64,
        diss_weight: f64,
        model: WalkModel,
        omega: f64,
    ) -> Result<Self> {
        let n = h.rows();
        if h.cols() != n {
            return Err(QswError::Dimension(format!("Hamiltonian is {}x{}", n, h.cols())));
        }
        if let Some(l) = lindblads.iter().find(|l| l.rows() != n || l.cols() != n) {
            return Err(QswError::Dimension(format!("Lindblad is {}x{}, state dimension {n}", l.rows(), l.cols())));
        }
        if !(ham_weight >= 0.0 && diss_weight >= 0.0) {
            return Err(QswError::InvalidParameter("weights must be nonnegative".into()));
        }
        if !sparse_is_hermitian(h) {
            return Err(QswError::NotHermitian(f64::NAN));
        }
        let root = diss_weight.sqrt();
        let lindblads = if diss_weight == 0.0 {
            Vec::new()
        } else {
            lindblads.iter().map(|l| l.scale(C64::new(root, 0.0))).filter(|l| l.nnz() > 0).collect()
        };
        Ok(Self { h: h.scale(C64::new(ham_weight, 0.0)), lindblads, model, omega })
    }

    pub fn model(&self) -> WalkModel {
        self.model
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Dimension of the state space (not of `vec(rho)`).
    pub fn state_dim(&self) -> usize {
        self.h.rows()
    }

    /// Weighted Hamiltonian.
    pub fn hamiltonian(&self) -> &CsrMatrix {
        &self.h
    }

    /// Weighted Lindblad operators.
    pub fn lindblads(&self) -> &[CsrMatrix] {
        &self.lindblads
    }

    /// Matrix-free form; `hermitian_inputs` enables the faster path valid
    /// only on Hermitian arguments.
    pub fn superoperator(&self, hermitian_inputs: bool) -> Superoperator {
        Superoperator::new(&self.h, &self.lindblads, hermitian_inputs)
    }

    /// The dense `n^2 x n^2` matrix `S`.
    pub fn matrix(&self) -> CMatrix {
        let n = self.state_dim();
        let id = CMatrix::identity(n);
        let h = self.h.to_dense();
        let minus_i = C64::new(0.0, -1.0);
        let mut s = (&kron(&h, &id) - &kron(&id, &h.conj())).scale(minus_i);
        for l in &self.lindblads {
            let l = l.to_dense();
            let ll = l.adjoint().matmul(&l);
            let lt = l.transpose().matmul(&l.conj());
            s = &s + &kron(&l, &l.conj());
            s = &s - &kron(&ll, &id).scale_real(0.5);
            s = &s - &kron(&id, &lt).scale_real(0.5);
        }
        s
    }

    /// `S(rho)` for an arbitrary square matrix.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let n = self.state_dim();
        if rho.rows() != n || rho.cols() != n {
            return Err(QswError::Dimension(format!("{}x{} state for dimension {n}", rho.rows(), rho.cols())));
        }
        let op = self.superoperator(false);
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        op.apply(rho.data(), &mut out);
        unvec_slice(&out)
    }

    /// All `n^2` eigenvalues of `S`.
    pub fn spectrum(&self) -> Result<Vec<C64>> {
        eig_general(&self.matrix())
    }
}

/// Generator from dense operators: `ham_weight` times the coherent part plus
/// `diss_weight` times the dissipator.
pub fn build_generator(
    h: &HermitianMatrix,
    lindblads: &[CMatrix],
    ham_weight: f64,
    diss_weight: f64,
) -> Result<EvolutionGenerator> {
    let sparse: Vec<CsrMatrix> = lindblads.iter().map(CsrMatrix::from_dense).collect();
    if let Some(l) = lindblads.iter().find(|l| l.rows() != h.dim() || l.cols() != h.dim()) {
        return Err(QswError::Dimension(format!("Lindblad is {}x{}, Hamiltonian {}", l.rows(), l.cols(), h.dim())));
    }
    EvolutionGenerator::from_sparse(
        &CsrMatrix::from_dense(h),
        &sparse,
        ham_weight,
        diss_weight,
        WalkModel::Custom,
        f64::NAN,
    )
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(QswError::InvalidParameter(format!("time {t} must be finite and nonnegative")))
    }
}

/// `rho(t) = unvec(exp(S t) vec(rho0))`.
pub fn evolve(gen: &EvolutionGenerator, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    Ok(evolve_times(gen, rho0, &[t])?.pop().unwrap())
}

/// States at ascending `times`, each propagated from the previous one.
pub fn evolve_times(gen: &EvolutionGenerator, rho0: &DensityMatrix, times: &[f64]) -> Result<Vec<DensityMatrix>> {
    let n = gen.state_dim();
    if rho0.dim() != n {
        return Err(QswError::Dimension(format!("state of dimension {} for generator of dimension {n}", rho0.dim())));
    }
    let op = gen.superoperator(true);
    let mut out = Vec::with_capacity(times.len());
    let mut current = rho0.data().to_vec();
    let mut now = 0.0;
    for &t in times {
        check_time(t)?;
        if t < now {
            return Err(QswError::InvalidParameter("times must be ascending".into()));
        }
        if t > now {
            current = expm_action(&op, &current, t - now, EXPM_TOL)?;
            now = t;
        }
        out.push(DensityMatrix::from_evolved(unvec_slice(&current)?)?);
    }
    Ok(out)
}

/// Canonical-basis probabilities, clipped at zero.
pub fn measure(rho: &DensityMatrix) -> Vec<f64> {
    rho.diagonal().iter().map(|z| z.re.max(0.0)).collect()
}

/// Spectrum of the interpolated global walk on an undirected graph, where
/// `H` and `L` are both the adjacency matrix and commute:
/// `lambda_ij = -i(1 - omega)(d_i - d_j) - omega/2 (d_i - d_j)^2`.
pub fn gqsw_spectrum_commuting(g: &Graph, omega: f64) -> Result<Vec<C64>> {
    check_omega(omega)?;
    let d = eigvals_hermitian(&HermitianMatrix::new(g.adjacency())?)?;
    let mut out = Vec::with_capacity(d.len() * d.len());
    for &di in &d {
        for &dj in &d {
            let x = di - dj;
            out.push(C64::new(-0.5 * omega * x * x, -(1.0 - omega) * x));
        }
    }
    Ok(out)
}

/// Pure states `exp(-i H t) psi` at ascending `times` for a sparse `H`.
pub fn schrodinger_evolve(h: &CsrMatrix, psi: &[C64], times: &[f64]) -> Result<Vec<Vec<C64>>> {
    let a = crate::numkernel::schrodinger_operator(h);
    propagate_vector(&a, psi, times)
}

/// Classical random walk `dp/dt = -L p` at ascending `times`.
pub fn ctrw_evolve(g: &Graph, p0: &[f64], times: &[f64]) -> Result<Vec<Vec<f64>>> {
    if p0.len() != g.n() {
        return Err(QswError::Dimension(format!("{} probabilities for {} vertices", p0.len(), g.n())));
    }
    let l = CsrMatrix::from_dense(&g.laplacian()).scale(C64::new(-1.0, 0.0));
    let v: Vec<C64> = p0.iter().map(|&x| C64::new(x, 0.0)).collect();
    Ok(propagate_vector(&l, &v, times)?.into_iter().map(|s| s.iter().map(|z| z.re).collect()).collect())
}

fn propagate_vector<A: LinearOperator>(a: &A, v: &[C64], times: &[f64]) -> Result<Vec<Vec<C64>>> {
    let mut out = Vec::with_capacity(times.len());
    let mut current = v.to_vec();
    let mut now = 0.0;
    for &t in times {
        check_time(t)?;
        if t < now {
            return Err(QswError::InvalidParameter("times must be ascending".into()));
        }
        if t > now {
            current = expm_action(a, &current, t - now, EXPM_TOL)?;
            now = t;
        }
        out.push(current.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::path;

    #[test]
    fn zero_generator() {
        let g = build_generator(&HermitianMatrix::zeros(3), &[], 1.0, 1.0).unwrap();
        assert_eq!(g.matrix(), CMatrix::zeros(9, 9));
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(CMatrix::identity(2)).is_err());
        assert!(DensityMatrix::new(CMatrix::from_real_rows(&[vec![1.5, 0.0], vec![0.0, -0.5]])).is_err());
        assert!(DensityMatrix::new(CMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]])).is_ok());
        assert!(DensityMatrix::basis(2, 2).is_err());
    }

    #[test]
    fn measure_basic_states() {
        assert_eq!(measure(&DensityMatrix::basis(3, 1).unwrap()), vec![0.0, 1.0, 0.0]);
        assert_eq!(measure(&DensityMatrix::maximally_mixed(4)), vec![0.25; 4]);
    }

    #[test]
    fn zero_time_returns_input() {
        let gen = gqsw_spec(&path(4).to_digraph(), 0.4).unwrap().generator().unwrap();
        let rho = DensityMatrix::basis(4, 1).unwrap();
        assert_eq!(evolve(&gen, &rho, 0.0).unwrap(), rho);
        assert!(evolve(&gen, &rho, -1.0).is_err());
    }

    #[test]
    fn omega_range_checked() {
        assert!(lqsw_spec(&path(3).to_digraph(), 1.2).is_err());
    }
}
