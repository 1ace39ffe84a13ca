//! Hermitian eigensolver: Householder reduction to a real tridiagonal matrix
//! followed by implicit QL iterations.

use num_complex::Complex64 as C64;

use super::matrix::{CMatrix, HermitianMatrix};
use super::scalar::Scalar;
use crate::error::{QswError, Result};

/// Eigenvalues in descending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// The `i`-th eigenvector.
    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.vectors.col(i)
    }

    /// Reassembles `V diag(f(lambda)) V^dagger`.
    pub fn apply_function(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.dim();
        let fl: Vec<C64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        CMatrix::from_fn(n, n, |i, j| (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj()).sum())
    }
}

struct Tridiagonal<T> {
    diag: Vec<f64>,
    /// Real nonnegative couplings `e[i]` between `i` and `i+1`; `e[n-1] = 0`.
    off: Vec<f64>,
    /// Unit Householder vectors acting on indices `k+1..n`.
    reflectors: Vec<Option<Vec<T>>>,
    /// Diagonal phases making the reduced matrix real.
    phases: Vec<T>,
}

fn tridiagonalize<T: Scalar>(mut a: Vec<T>, n: usize) -> Tridiagonal<T> {
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x: Vec<T> = (k + 1..n).map(|i| a[i * n + k]).collect();
        let tail: f64 = x[1..].iter().map(|z| z.abs_sqr()).sum();
        if tail == 0.0 {
            reflectors.push(None);
            continue;
        }
        let xnorm = (tail + x[0].abs_sqr()).sqrt();
        let beta = x[0].phase() * (-xnorm);
        let mut u = x;
        u[0] -= beta;
        let unorm = u.iter().map(|z| z.abs_sqr()).sum::<f64>().sqrt();
        u.iter_mut().for_each(|z| *z = *z * (1.0 / unorm));

        let off = k + 1;
        let mut p = vec![T::default(); m];
        for i in 0..m {
            let row = &a[(off + i) * n + off..(off + i) * n + n];
            let mut acc = T::default();
            for (aij, uj) in row.iter().zip(&u) {
                acc += *aij * *uj;
            }
            p[i] = acc;
        }
        let mut kk = T::default();
        for (ui, pi) in u.iter().zip(&p) {
            kk += ui.conj() * *pi;
        }
        let q: Vec<T> = p.iter().zip(&u).map(|(pi, ui)| *pi - *ui * kk).collect();
        for i in 0..m {
            let (ui, qi) = (u[i] * 2.0, q[i] * 2.0);
            let row = &mut a[(off + i) * n + off..(off + i) * n + n];
            for j in 0..m {
                row[j] -= ui * q[j].conj() + qi * u[j].conj();
            }
        }
        a[(k + 1) * n + k] = beta;
        a[k * n + k + 1] = beta.conj();
        for i in k + 2..n {
            a[i * n + k] = T::default();
            a[k * n + i] = T::default();
        }
        reflectors.push(Some(u));
    }

    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].to_c64().re).collect();
    let mut off = vec![0.0; n];
    let mut phases = vec![T::from_re(1.0); n];
    for i in 0..n.saturating_sub(1) {
        let s = a[(i + 1) * n + i];
        off[i] = s.abs_sqr().sqrt();
        phases[i + 1] = phases[i] * s.phase();
    }
    Tridiagonal { diag, off, reflectors, phases }
}

impl<T: Scalar> Tridiagonal<T> {
    /// Rows `(Q D)^T` restricted to the requested original indices: entry
    /// `(i, j)` of the returned `n x rows.len()` block is `(QD)[rows[j]][i]`.
    fn transformed_rows(&self, rows: &[usize]) -> Vec<T> {
        let n = self.diag.len();
        let m = rows.len();
        let mut x = vec![T::default(); n * m];
        for (j, &w) in rows.iter().enumerate() {
            let mut r = vec![T::default(); n];
            r[w] = T::from_re(1.0);
            // r <- r H_0 H_1 ... ; H = I - 2 u u^dagger on indices k+1..
            for (k, u) in self.reflectors.iter().enumerate() {
                if let Some(u) = u {
                    let seg = &mut r[k + 1..];
                    let mut dot = T::default();
                    for (ri, ui) in seg.iter().zip(u) {
                        dot += *ri * *ui;
                    }
                    let dot = dot * 2.0;
                    for (ri, ui) in seg.iter_mut().zip(u) {
                        *ri -= dot * ui.conj();
                    }
                }
            }
            for i in 0..n {
                x[i * m + j] = r[i] * self.phases[i];
            }
        }
        x
    }

    /// `(Q D)^T` for all rows, via backward accumulation of the reflectors.
    fn transformed_all(&self) -> Vec<T> {
        let n = self.diag.len();
        let mut q = vec![T::default(); n * n];
        for i in 0..n {
            q[i * n + i] = T::from_re(1.0);
        }
        for (k, u) in self.reflectors.iter().enumerate().rev() {
            let Some(u) = u else { continue };
            let off = k + 1;
            // Q[off.., off..] -= 2 u (u^dagger Q[off.., off..])
            let mut w = vec![T::default(); n - off];
            for (i, ui) in u.iter().enumerate() {
                let uc = ui.conj();
                let row = &q[(off + i) * n + off..(off + i) * n + n];
                for (wj, qij) in w.iter_mut().zip(row) {
                    *wj += uc * *qij;
                }
            }
            for (i, ui) in u.iter().enumerate() {
                let f = *ui * 2.0;
                let row = &mut q[(off + i) * n + off..(off + i) * n + n];
                for (qij, wj) in row.iter_mut().zip(&w) {
                    *qij -= f * *wj;
                }
            }
        }
        // transpose while applying the phases on columns
        let mut x = vec![T::default(); n * n];
        for r in 0..n {
            for i in 0..n {
                x[i * n + r] = q[r * n + i] * self.phases[i];
            }
        }
        x
    }
}

/// Implicit QL on a real symmetric tridiagonal matrix. Rotations are applied
/// to the rows of `x` (shape `n x m`), one row per tridiagonal index.
fn tql<T: Scalar>(d: &mut [f64], e: &mut [f64], x: &mut [T], m: usize) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let max_iter = 30 * n.max(1);
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut mm = l;
        while mm < n - 1 && e[mm].abs() > eps * tst1 {
            mm += 1;
        }
        if mm > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > max_iter {
                    return Err(QswError::NoConvergence(format!(
                        "tridiagonal QL stalled at index {l}"
                    )));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[mm];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..mm).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = x.split_at_mut((i + 1) * m);
                    let xi = &mut lo[i * m..];
                    let xi1 = &mut hi[..m];
                    for (a, b) in xi.iter_mut().zip(xi1.iter_mut()) {
                        let h = *b;
                        *b = *a * s + h * c;
                        *a = *a * c - h * s;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    idx
}

fn solve<T: Scalar>(a: Vec<T>, n: usize, rows: Option<&[usize]>) -> Result<(Vec<f64>, Vec<T>, usize)> {
    let tri = tridiagonalize(a, n);
    let (mut x, m) = match rows {
        Some(r) => (tri.transformed_rows(r), r.len()),
        None => (tri.transformed_all(), n),
    };
    let mut d = tri.diag.clone();
    let mut e = tri.off.clone();
    tql(&mut d, &mut e, &mut x, m)?;
    let order = descending_order(&d);
    let values = order.iter().map(|&i| d[i]).collect();
    let mut sorted = Vec::with_capacity(n * m);
    for &i in &order {
        sorted.extend_from_slice(&x[i * m..(i + 1) * m]);
    }
    Ok((values, sorted, m))
}

/// Full eigendecomposition of a Hermitian matrix; real input runs in real
/// arithmetic.
pub fn eig_hermitian(h: &HermitianMatrix) -> Result<EigenSystem> {
    let n = h.dim();
    let (values, x, m) = if h.is_real() {
        let (v, x, m) = solve(h.data().iter().map(|z| z.re).collect(), n, None)?;
        (v, x.into_iter().map(|r| C64::new(r, 0.0)).collect::<Vec<_>>(), m)
    } else {
        solve(h.data().to_vec(), n, None)?
    };
    // x is (eigen index) x (coordinate); eigenvectors become columns.
    let vectors = CMatrix::from_fn(n, n, |r, i| x[i * m + r]);
    Ok(EigenSystem { values, vectors })
}

/// Validates Hermiticity before decomposing a plain matrix.
pub fn eig_hermitian_checked(m: &CMatrix) -> Result<EigenSystem> {
    eig_hermitian(&HermitianMatrix::new(m.clone())?)
}

/// Eigenvalues (descending) together with selected eigenvector components:
/// entry `(j, i)` of the returned matrix is `<rows[j] | lambda_i>`.
/// Costs one tridiagonalization instead of a full eigenvector accumulation.
pub fn eig_hermitian_rows(h: &HermitianMatrix, rows: &[usize]) -> Result<(Vec<f64>, CMatrix)> {
    let n = h.dim();
    if let Some(&bad) = rows.iter().find(|&&r| r >= n) {
        return Err(QswError::Dimension(format!("row {bad} out of range for dimension {n}")));
    }
    let (values, x, m) = if h.is_real() {
        let (v, x, m) = solve(h.data().iter().map(|z| z.re).collect(), n, Some(rows))?;
        (v, x.into_iter().map(|r| C64::new(r, 0.0)).collect::<Vec<_>>(), m)
    } else {
        solve(h.data().to_vec(), n, Some(rows))?
    };
    let comps = CMatrix::from_fn(m, n, |j, i| x[i * m + j]);
    Ok((values, comps))
}

/// Eigenvalues only, descending.
pub fn eigvals_hermitian(h: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian_rows(h, &[])?.0)
}
