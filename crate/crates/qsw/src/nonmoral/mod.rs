//! Nonmoralizing global-interaction walks.
//!
//! Every vertex `v` is split into `max(indeg(v), 1)` copies `v^0, v^1, ...`.
//! A single global Lindblad built from matrices with orthogonal columns then
//! moves amplitude along arcs without coupling parents that share a child.
//!
//! The enlarged basis is ordered copy-major: all `^0` copies in vertex order,
//! then all `^1` copies, and so on. For the four-vertex example with blocks
//! (2, 2, 2, 1) this gives `v1^0, v2^0, v3^0, v4^0, v1^1, v2^1, v3^1`.

use std::f64::consts::PI;

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{QswError, Result};
use crate::gksl::{check_omega, DensityMatrix, EvolutionGenerator, WalkModel};
use crate::graphs::DiGraph;
use crate::numkernel::{CMatrix, CsrMatrix, HermitianMatrix, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Tolerance for column orthogonality and for the vanishing cross-vertex
/// blocks of `L^dagger L`, relative to the squared column norms.
pub const ORTHO_TOL: f64 = 1e-12;

/// Base digraph together with its enlarged vertex set.
#[derive(Debug, Clone)]
pub struct DemoralizedGraph {
    base: DiGraph,
    /// `blocks[v][k]` is the enlarged index of `v^k`.
    blocks: Vec<Vec<usize>>,
    /// Natural homomorphism: enlarged index to base vertex.
    owner: Vec<usize>,
    copy: Vec<usize>,
}

pub fn demoralize(g: &DiGraph) -> DemoralizedGraph {
    let n = g.n();
    let sizes: Vec<usize> = (0..n).map(|v| g.indegree(v).max(1)).collect();
    let depth = sizes.iter().copied().max().unwrap_or(0);
    let mut blocks = vec![Vec::new(); n];
    let mut owner = Vec::new();
    let mut copy = Vec::new();
    for k in 0..depth {
        for v in 0..n {
            if k < sizes[v] {
                blocks[v].push(owner.len());
                owner.push(v);
                copy.push(k);
            }
        }
    }
    DemoralizedGraph { base: g.clone(), blocks, owner, copy }
}

impl DemoralizedGraph {
    pub fn base(&self) -> &DiGraph {
        &self.base
    }

    /// Dimension of the enlarged space, `|E| + #{v : indeg(v) = 0}`.
    pub fn dim(&self) -> usize {
        self.owner.len()
    }

    /// Enlarged indices of the copies of `v`, in superscript order.
    pub fn block(&self, v: usize) -> &[usize] {
        &self.blocks[v]
    }

    pub fn block_size(&self, v: usize) -> usize {
        self.blocks[v].len()
    }

    /// Enlarged index of `v^k`.
    pub fn index(&self, v: usize, k: usize) -> usize {
        self.blocks[v][k]
    }

    /// Base vertex of an enlarged index.
    pub fn owner(&self, i: usize) -> usize {
        self.owner[i]
    }

    /// Superscript of an enlarged index.
    pub fn copy_of(&self, i: usize) -> usize {
        self.copy[i]
    }

    /// Every `(w^l, v^k)` for a base arc `(w, v)`.
    pub fn enlarged_arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (w, v) in self.base.arcs() {
            for &a in &self.blocks[w] {
                for &b in &self.blocks[v] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Labels such as `v3^1`, with 1-based vertex numbers.
    pub fn label(&self, i: usize) -> String {
        format!("v{}^{}", self.owner[i] + 1, self.copy[i])
    }
}

/// `F_jk = exp(2 pi i jk / n)`.
pub fn fourier_matrix(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |j, k| C64::from_polar(1.0, 2.0 * PI * ((j * k) % n.max(1)) as f64 / n as f64))
}

/// The Fourier family: `L_v = F_{indeg(v)}`.
pub fn fourier_family(dg: &DemoralizedGraph) -> impl Fn(usize) -> CMatrix + '_ {
    move |v| fourier_matrix(dg.base.indegree(v))
}

fn check_columns(v: usize, m: &CMatrix) -> Result<()> {
    let norms: Vec<f64> = (0..m.cols()).map(|j| m.col(j).iter().map(|z| z.norm_sqr()).sum()).collect();
    for a in 0..m.cols() {
        for b in a + 1..m.cols() {
            let dot: C64 = (0..m.rows()).map(|r| m[(r, a)].conj() * m[(r, b)]).sum();
            let scale = (norms[a] * norms[b]).sqrt().max(1.0);
            if dot.norm() > ORTHO_TOL * scale {
                return Err(QswError::NonOrthogonalColumns(v));
            }
        }
    }
    Ok(())
}

/// `<v^k|L|w^l> = <k|L_v|j>` for every arc `(w, v)`, where `j` is the
/// position of `w` among the sorted parents of `v`.
///
/// `family(v)` must be `|V_v| x indeg(v)` with orthogonal columns; it is not
/// called for sources. The result is checked to have vanishing cross-vertex
/// blocks of `L^dagger L`.
pub fn build_nonmoral_lindblad(dg: &DemoralizedGraph, family: impl Fn(usize) -> CMatrix) -> Result<CMatrix> {
    let g = &dg.base;
    let mut l = CMatrix::zeros(dg.dim(), dg.dim());
    for v in 0..g.n() {
        let parents = g.in_neighbors(v);
        if parents.is_empty() {
            continue;
        }
        let lv = family(v);
        if lv.rows() != dg.block_size(v) || lv.cols() != parents.len() {
            return Err(QswError::Dimension(format!(
                "L_{v} is {}x{}, expected {}x{}",
                lv.rows(),
                lv.cols(),
                dg.block_size(v),
                parents.len()
            )));
        }
        check_columns(v, &lv)?;
        for (j, &w) in parents.iter().enumerate() {
            for (k, &row) in dg.block(v).iter().enumerate() {
                for &col in dg.block(w) {
                    l[(row, col)] = lv[(k, j)];
                }
            }
        }
    }
    check_lindblad(dg, &l)?;
    Ok(l)
}

/// Support on enlarged arcs and the vanishing of every cross-vertex entry of
/// `L^dagger L`.
pub fn check_lindblad(dg: &DemoralizedGraph, l: &CMatrix) -> Result<()> {
    let d = dg.dim();
    if l.rows() != d || l.cols() != d {
        return Err(QswError::Dimension(format!("Lindblad is {}x{}, enlarged dimension {d}", l.rows(), l.cols())));
    }
    for r in 0..d {
        for c in 0..d {
            if l[(r, c)] != ZERO && !dg.base.has_arc(dg.owner(c), dg.owner(r)) {
                return Err(QswError::WrongTopology(format!("entry ({}, {}) is not on an arc", dg.label(r), dg.label(c))));
            }
        }
    }
    let ll = l.adjoint().matmul(l);
    let diag: Vec<f64> = ll.diagonal().iter().map(|z| z.re.max(0.0)).collect();
    for a in 0..d {
        for b in 0..d {
            if dg.owner(a) != dg.owner(b) && ll[(a, b)].norm() > ORTHO_TOL * (diag[a] * diag[b]).sqrt().max(1.0) {
                return Err(QswError::NonOrthogonalColumns(dg.owner(a)));
            }
        }
    }
    Ok(())
}

/// All-ones Hamiltonian on the enlarged edges of the underlying graph.
pub fn standard_hamiltonian(dg: &DemoralizedGraph) -> HermitianMatrix {
    let mut h = CMatrix::zeros(dg.dim(), dg.dim());
    for (v, w) in dg.base.underlying().edges() {
        for &a in dg.block(v) {
            for &b in dg.block(w) {
                h[(a, b)] = ONE;
                h[(b, a)] = ONE;
            }
        }
    }
    HermitianMatrix::new(h).expect("real symmetric")
}

/// How the `+-i` couplings inside a block of the rotating Hamiltonian are
/// laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationRule {
    /// Open chain: `<k|H|k+1> = i`, `<k+1|H|k> = -i`.
    #[default]
    Chain,
    /// Indices taken modulo the block size and contributions added, so
    /// blocks of size 1 and 2 vanish.
    Cyclic,
}

impl std::str::FromStr for RotationRule {
    type Err = QswError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chain" => Ok(Self::Chain),
            "cyclic" => Ok(Self::Cyclic),
            other => Err(QswError::Parse(format!("unknown rotation rule '{other}'"))),
        }
    }
}

/// Random block ensembles for the rotating Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationEnsemble {
    /// `(X + X^T)/2`, `X` standard normal.
    Goe,
    /// `(G + G^dagger)/2`, `G` with independent standard normal real and
    /// imaginary parts.
    Gue,
    /// `X + X^T + i(Y - Y^T)`, `X, Y` uniform on `[0, 1]`.
    Xy,
}

impl std::str::FromStr for RotationEnsemble {
    type Err = QswError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "goe" => Ok(Self::Goe),
            "gue" => Ok(Self::Gue),
            "xy" => Ok(Self::Xy),
            other => Err(QswError::Parse(format!("unknown ensemble '{other}'"))),
        }
    }
}

fn block_diagonal(dg: &DemoralizedGraph, mut block: impl FnMut(usize) -> CMatrix) -> HermitianMatrix {
    let mut h = CMatrix::zeros(dg.dim(), dg.dim());
    for v in 0..dg.base.n() {
        let b = block(dg.block_size(v));
        for (k, &r) in dg.block(v).iter().enumerate() {
            for (l, &c) in dg.block(v).iter().enumerate() {
                h[(r, c)] = b[(k, l)];
            }
        }
    }
    HermitianMatrix::hermitian_part(&h).expect("square")
}

/// One block of the rotating Hamiltonian.
pub fn rotation_block(size: usize, rule: RotationRule) -> CMatrix {
    let mut b = CMatrix::zeros(size, size);
    match rule {
        RotationRule::Chain => {
            for k in 0..size.saturating_sub(1) {
                b[(k, k + 1)] = I;
                b[(k + 1, k)] = -I;
            }
        }
        RotationRule::Cyclic => {
            for k in 0..size {
                b[(k, (k + 1) % size)] += I;
                b[(k, (k + size - 1) % size)] -= I;
            }
        }
    }
    b
}

pub fn rotating_hamiltonian(dg: &DemoralizedGraph, rule: RotationRule) -> HermitianMatrix {
    block_diagonal(dg, |s| rotation_block(s, rule))
}

/// Rotating Hamiltonian with chain blocks.
pub fn standard_rotating_hamiltonian(dg: &DemoralizedGraph) -> HermitianMatrix {
    rotating_hamiltonian(dg, RotationRule::Chain)
}

/// Independently sampled Hermitian blocks.
pub fn random_rotating_hamiltonian(dg: &DemoralizedGraph, ensemble: RotationEnsemble, seed: u64) -> HermitianMatrix {
    let mut rng = crate::rng::seeded(seed);
    block_diagonal(dg, |s| {
        let mut x = CMatrix::zeros(s, s);
        for r in 0..s {
            for c in 0..s {
                x[(r, c)] = match ensemble {
                    RotationEnsemble::Goe => C64::new(rng.sample(StandardNormal), 0.0),
                    RotationEnsemble::Gue => C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
                    RotationEnsemble::Xy => C64::new(rng.random::<f64>(), rng.random::<f64>()),
                };
            }
        }
        match ensemble {
            RotationEnsemble::Goe | RotationEnsemble::Gue => (&x + &x.adjoint()).scale_real(0.5),
            RotationEnsemble::Xy => {
                let re = CMatrix::from_fn(s, s, |r, c| C64::new(x[(r, c)].re + x[(c, r)].re, 0.0));
                let im = CMatrix::from_fn(s, s, |r, c| C64::new(0.0, x[(r, c)].im - x[(c, r)].im));
                &re + &im
            }
        }
    })
}

/// Operators of one NGQSW: `H`, `H_rot` and the Lindblad set.
#[derive(Debug, Clone)]
pub struct NonmoralOperators {
    pub h: HermitianMatrix,
    pub h_rot: HermitianMatrix,
    pub lindblads: Vec<CMatrix>,
}

impl NonmoralOperators {
    /// All-ones `H`, chain `H_rot` and the Fourier Lindblad.
    pub fn standard(dg: &DemoralizedGraph) -> Result<Self> {
        Ok(Self {
            h: standard_hamiltonian(dg),
            h_rot: standard_rotating_hamiltonian(dg),
            lindblads: vec![build_nonmoral_lindblad(dg, fourier_family(dg))?],
        })
    }

    /// Checks supports: `H` on enlarged edges, `H_rot` inside blocks, every
    /// Lindblad as in [`check_lindblad`].
    pub fn validate(&self, dg: &DemoralizedGraph) -> Result<()> {
        let d = dg.dim();
        for m in [&self.h, &self.h_rot] {
            if m.dim() != d {
                return Err(QswError::Dimension(format!("Hamiltonian of dimension {}, enlarged {d}", m.dim())));
            }
        }
        let und = dg.base.underlying();
        for r in 0..d {
            for c in 0..d {
                let (v, w) = (dg.owner(r), dg.owner(c));
                if self.h.as_matrix()[(r, c)] != ZERO && !und.has_edge(v, w) {
                    return Err(QswError::WrongTopology(format!(
                        "H couples {} and {} without an edge",
                        dg.label(r),
                        dg.label(c)
                    )));
                }
                if self.h_rot.as_matrix()[(r, c)] != ZERO && v != w {
                    return Err(QswError::WrongTopology(format!(
                        "H_rot couples {} and {} across blocks",
                        dg.label(r),
                        dg.label(c)
                    )));
                }
            }
        }
        self.lindblads.iter().try_for_each(|l| check_lindblad(dg, l))
    }
}

fn to_sparse(m: &HermitianMatrix, s: f64) -> CsrMatrix {
    CsrMatrix::from_dense(&m.as_matrix().scale_real(s))
}

/// `-i[(1 - omega) H + omega H_rot, rho] + omega D(rho)`.
pub fn ngqsw_generator(dg: &DemoralizedGraph, ops: &NonmoralOperators, omega: f64) -> Result<EvolutionGenerator> {
    check_omega(omega)?;
    ops.validate(dg)?;
    let h = to_sparse(&ops.h, 1.0 - omega).lincomb(ONE, &to_sparse(&ops.h_rot, omega), ONE);
    let ls: Vec<CsrMatrix> = ops.lindblads.iter().map(CsrMatrix::from_dense).collect();
    EvolutionGenerator::from_sparse(&h, &ls, 1.0, omega, WalkModel::Ngqsw, omega)
}

/// Lindblads built from `[[1, 1], [1, -1]]` and `[[1, 1], [-1, 1]]` at every
/// interior vertex of an undirected path; endpoints use `[1]`.
pub fn symmetrized_path_lindblads(dg: &DemoralizedGraph) -> Result<[CMatrix; 2]> {
    let g = &dg.base;
    let und = g.underlying();
    let n = g.n();
    let is_path = g.is_symmetric()
        && n >= 2
        && und.is_connected()
        && und.edge_count() == n - 1
        && und.degrees().iter().all(|&d| d <= 2);
    if !is_path {
        return Err(QswError::WrongTopology("expected an undirected path".into()));
    }
    let fam = |rows: [[f64; 2]; 2]| {
        move |v: usize| {
            if g.indegree(v) == 1 {
                CMatrix::identity(1)
            } else {
                CMatrix::from_real_rows(&[rows[0].to_vec(), rows[1].to_vec()])
            }
        }
    };
    Ok([
        build_nonmoral_lindblad(dg, fam([[1.0, 1.0], [1.0, -1.0]]))?,
        build_nonmoral_lindblad(dg, fam([[1.0, 1.0], [-1.0, 1.0]]))?,
    ])
}

/// Standard NGQSW on an undirected path with the two-Lindblad symmetrized
/// dissipator.
pub fn symmetrized_path_operators(dg: &DemoralizedGraph) -> Result<NonmoralOperators> {
    Ok(NonmoralOperators {
        h: standard_hamiltonian(dg),
        h_rot: standard_rotating_hamiltonian(dg),
        lindblads: symmetrized_path_lindblads(dg)?.to_vec(),
    })
}

/// `p(v) = sum over copies of v of the diagonal of rho`.
pub fn natural_measure(rho: &DensityMatrix, dg: &DemoralizedGraph) -> Result<Vec<f64>> {
    if rho.dim() != dg.dim() {
        return Err(QswError::Dimension(format!("state of dimension {}, enlarged {}", rho.dim(), dg.dim())));
    }
    let d = rho.diagonal();
    Ok((0..dg.base.n()).map(|v| dg.block(v).iter().map(|&i| d[i].re.max(0.0)).sum()).collect())
}

/// Diagonal state giving `1/(|V| |V_v|)` to every copy of `v`.
pub fn uniform_block_state(dg: &DemoralizedGraph) -> DensityMatrix {
    block_mixed_state(dg, &(0..dg.base.n()).collect::<Vec<_>>()).expect("nonempty vertex set")
}

/// Uniform mixture over `vertices`, each spread evenly over its copies.
pub fn block_mixed_state(dg: &DemoralizedGraph, vertices: &[usize]) -> Result<DensityMatrix> {
    if vertices.is_empty() {
        return Err(QswError::InvalidParameter("empty vertex set".into()));
    }
    let mut p = vec![0.0; dg.dim()];
    for &v in vertices {
        if v >= dg.base.n() {
            return Err(QswError::InvalidParameter(format!("vertex {v} out of range")));
        }
        for &i in dg.block(v) {
            p[i] += 1.0 / (vertices.len() * dg.block_size(v)) as f64;
        }
    }
    DensityMatrix::diagonal(&p)
}
