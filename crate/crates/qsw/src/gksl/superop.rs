//! Matrix-free action of a GKSL generator on row-major `vec(rho)`.
//!
//! With `K = -iH - 1/2 sum L^dagger L` the generator reads
//! `S(rho) = K rho + rho K^dagger + sum L rho L^dagger`. Lindblad operators
//! with a single nonzero entry `c |w><v|` are kept as jumps, since
//! `L rho L^dagger = |c|^2 rho_vv |w><w|` costs O(1).

use crate::numkernel::{CsrMatrix, LinearOperator, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone)]
pub struct Superoperator {
    n: usize,
    k: CsrMatrix,
    lindblads: Vec<CsrMatrix>,
    /// `(w, v, |c|^2)` for `L = c |w><v|`.
    jumps: Vec<(usize, usize, f64)>,
    /// Inputs are Hermitian matrices; lets `rho K^dagger = (K rho)^dagger`.
    hermitian: bool,
}

impl Superoperator {
    /// `h` already carries its coherent weight and each `L` the square root
    /// of the dissipative weight.
    pub fn new(h: &CsrMatrix, lindblads: &[CsrMatrix], hermitian: bool) -> Self {
        let n = h.rows();
        let mut kt: Vec<(usize, usize, C64)> = h.iter().map(|(i, j, v)| (i, j, v * C64::new(0.0, -1.0))).collect();
        let mut dense = Vec::new();
        let mut jumps = Vec::new();
        for l in lindblads {
            if l.nnz() == 1 {
                let (w, v, c) = l.iter().next().unwrap();
                jumps.push((w, v, c.norm_sqr()));
                kt.push((v, v, C64::new(-0.5 * c.norm_sqr(), 0.0)));
            } else if l.nnz() > 1 {
                let ll = l.adjoint().matmul(l);
                kt.extend(ll.iter().map(|(i, j, v)| (i, j, v * -0.5)));
                dense.push(l.clone());
            }
        }
        Self { n, k: CsrMatrix::from_triplets(n, n, &kt), lindblads: dense, jumps, hermitian }
    }

    /// Same operator, declared safe (or not) for Hermitian-only inputs.
    pub fn with_hermitian(mut self, hermitian: bool) -> Self {
        self.hermitian = hermitian;
        self
    }

    pub fn state_dim(&self) -> usize {
        self.n
    }
}

fn adjoint_into(x: &[C64], n: usize, out: &mut [C64]) {
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = x[i * n + j].conj();
        }
    }
}

/// `y += z^dagger`.
fn add_adjoint(y: &mut [C64], z: &[C64], n: usize) {
    for i in 0..n {
        for j in 0..n {
            y[i * n + j] += z[j * n + i].conj();
        }
    }
}

impl LinearOperator for Superoperator {
    fn dim(&self) -> usize {
        self.n * self.n
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let n = self.n;
        // On the fast path only the Hermitian part of x is used; feeding the
        // adjoint-symmetric formula an anti-Hermitian residue would amplify it.
        let sym;
        let x = if self.hermitian {
            let mut h = vec![ZERO; n * n];
            for i in 0..n {
                h[i * n + i] = C64::new(x[i * n + i].re, 0.0);
                for j in i + 1..n {
                    let a = (x[i * n + j] + x[j * n + i].conj()) * 0.5;
                    h[i * n + j] = a;
                    h[j * n + i] = a.conj();
                }
            }
            sym = h;
            &sym[..]
        } else {
            x
        };
        self.k.mul_dense_into(x, n, y);
        let mut z = vec![ZERO; n * n];
        if self.hermitian {
            // y = X + X^dagger, done pairwise in place
            for i in 0..n {
                let d = y[i * n + i];
                y[i * n + i] = C64::new(2.0 * d.re, 0.0);
                for j in i + 1..n {
                    let (a, b) = (y[i * n + j], y[j * n + i]);
                    y[i * n + j] = a + b.conj();
                    y[j * n + i] = b + a.conj();
                }
            }
        } else {
            let mut xt = vec![ZERO; n * n];
            adjoint_into(x, n, &mut xt);
            self.k.mul_dense_into(&xt, n, &mut z);
            add_adjoint(y, &z, n);
        }
        if !self.lindblads.is_empty() {
            let mut t = vec![ZERO; n * n];
            for l in &self.lindblads {
                l.mul_dense_into(x, n, &mut z);
                adjoint_into(&z, n, &mut t);
                // z = L (L rho)^dagger = L rho^dagger L^dagger
                l.mul_dense_into(&t, n, &mut z);
                if self.hermitian {
                    y.iter_mut().zip(&z).for_each(|(a, b)| *a += b);
                } else {
                    add_adjoint(y, &z, n);
                }
            }
        }
        for &(w, v, r) in &self.jumps {
            y[w * n + w] += x[v * n + v] * r;
        }
    }

    fn norm_one_shifted(&self, mu: C64) -> f64 {
        let n = self.n;
        let kd: Vec<C64> = (0..n).map(|i| self.k.get(i, i)).collect();
        let mut rk = vec![0.0; n];
        for (i, j, v) in self.k.iter() {
            if i != j {
                rk[j] += v.norm();
            }
        }
        let ld: Vec<Vec<C64>> = self.lindblads.iter().map(|l| (0..n).map(|i| l.get(i, i)).collect()).collect();
        let lc: Vec<Vec<f64>> = self.lindblads.iter().map(CsrMatrix::column_abs_sums).collect();
        let mut jump_out = vec![0.0; n];
        for &(_, v, r) in &self.jumps {
            jump_out[v] += r;
        }
        let mut best: f64 = 0.0;
        for x in 0..n {
            for y in 0..n {
                let mut d = kd[x] + kd[y].conj() - mu;
                let mut off = rk[x] + rk[y];
                for (dl, cl) in ld.iter().zip(&lc) {
                    d += dl[x] * dl[y].conj();
                    off += cl[x] * cl[y];
                }
                if x == y {
                    off += jump_out[x];
                }
                best = best.max(d.norm() + off);
            }
        }
        best
    }

    fn trace(&self) -> C64 {
        let n = self.n as f64;
        let tk = self.k.trace();
        let mut t = tk * n + tk.conj() * n;
        for l in &self.lindblads {
            t += l.trace().norm_sqr();
        }
        for &(w, v, r) in &self.jumps {
            if w == v {
                t += r;
            }
        }
        t
    }
}
