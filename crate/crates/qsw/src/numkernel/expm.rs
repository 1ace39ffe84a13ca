//! Action of the matrix exponential, `exp(tA) v`, by scaled truncated Taylor
//! series with early termination (Al-Mohy and Higham's expmv scheme).

use num_complex::Complex64 as C64;

use super::eigh::eig_hermitian;
use super::matrix::{CMatrix, HermitianMatrix};
use super::sparse::CsrMatrix;
use crate::error::{QswError, Result};

/// Default relative tolerance for [`expm_action`].
pub const EXPM_TOL: f64 = 1e-10;

/// A square operator known only through its action.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    /// `y = A x`; `y` is fully overwritten.
    fn apply(&self, x: &[C64], y: &mut [C64]);
    /// An upper bound on `|A - mu I|_1`.
    fn norm_one_shifted(&self, mu: C64) -> f64;
    fn trace(&self) -> C64;
}

impl LinearOperator for CMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
    fn norm_one_shifted(&self, mu: C64) -> f64 {
        (0..self.cols())
            .map(|j| {
                (0..self.rows())
                    .map(|i| if i == j { (self[(i, j)] - mu).norm() } else { self[(i, j)].norm() })
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
    fn trace(&self) -> C64 {
        CMatrix::trace(self)
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.mul_vec_into(x, y);
    }
    fn norm_one_shifted(&self, mu: C64) -> f64 {
        let mut sums = vec![0.0; self.cols()];
        let mut diag = vec![C64::new(0.0, 0.0); self.cols()];
        for (i, j, v) in self.iter() {
            if i == j {
                diag[j] += v;
            } else {
                sums[j] += v.norm();
            }
        }
        sums.iter().zip(&diag).map(|(s, d)| s + (d - mu).norm()).fold(0.0, f64::max)
    }
    fn trace(&self) -> C64 {
        CsrMatrix::trace(self)
    }
}

// theta_m for unit roundoff 2^-53, m = 5, 10, ..., 55.
const THETA: [(usize, f64); 11] = [
    (5, 2.4e-3),
    (10, 1.44e-1),
    (15, 6.41e-1),
    (20, 1.44),
    (25, 2.43),
    (30, 3.54),
    (35, 4.7),
    (40, 6.0),
    (45, 7.2),
    (50, 8.5),
    (55, 9.9),
];

fn inf_norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `exp(t A) v` with relative tolerance `tol`. Returns `v` unchanged for
/// `t = 0`.
pub fn expm_action<A: LinearOperator + ?Sized>(a: &A, v: &[C64], t: f64, tol: f64) -> Result<Vec<C64>> {
    let n = a.dim();
    if v.len() != n {
        return Err(QswError::Dimension(format!("vector of length {} for operator of dimension {n}", v.len())));
    }
    if t == 0.0 || n == 0 {
        return Ok(v.to_vec());
    }
    if !t.is_finite() {
        return Err(QswError::InvalidParameter(format!("time {t} is not finite")));
    }
    let mu = a.trace() / n as f64;
    let norm = t.abs() * a.norm_one_shifted(mu);
    let eta_total = (mu * t).exp();
    if norm == 0.0 {
        return Ok(v.iter().map(|z| z * eta_total).collect());
    }
    let (m, s) = THETA
        .iter()
        .map(|&(m, th)| (m, ((norm / th).ceil() as usize).max(1)))
        .min_by_key(|&(m, s)| m * s)
        .unwrap();
    let eta = (mu * (t / s as f64)).exp();
    // truncation errors add up over the s sub-steps
    let step_tol = (tol / s as f64).max(f64::EPSILON);
    let mut f = v.to_vec();
    let mut b = v.to_vec();
    let mut tmp = vec![C64::new(0.0, 0.0); n];
    for _ in 0..s {
        let mut c1 = inf_norm(&b);
        for j in 1..=m {
            a.apply(&b, &mut tmp);
            let coef = t / (s as f64 * j as f64);
            for (bi, ai) in b.iter_mut().zip(&tmp) {
                *bi = (ai - mu * *bi) * coef;
            }
            let c2 = inf_norm(&b);
            for (fi, bi) in f.iter_mut().zip(&b) {
                *fi += bi;
            }
            if c1 + c2 <= step_tol * inf_norm(&f) {
                break;
            }
            c1 = c2;
        }
        f.iter_mut().for_each(|z| *z *= eta);
        b.copy_from_slice(&f);
    }
    if f.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(QswError::NoConvergence("exponential action overflowed".into()));
    }
    Ok(f)
}

/// `exp(t m) v` for a dense square matrix at the default tolerance.
pub fn expm_apply(m: &CMatrix, v: &[C64], t: f64) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(QswError::Dimension(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    expm_action(m, v, t, EXPM_TOL)
}

/// `exp(-i t H) psi` through the eigendecomposition of `H`.
pub fn unitary_apply(h: &HermitianMatrix, psi: &[C64], t: f64) -> Result<Vec<C64>> {
    let n = h.dim();
    if psi.len() != n {
        return Err(QswError::Dimension(format!("state of length {} for dimension {n}", psi.len())));
    }
    let es = eig_hermitian(h)?;
    let v = &es.vectors;
    let mut coeffs = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        let c: C64 = (0..n).map(|i| v[(i, k)].conj() * psi[i]).sum();
        coeffs[k] = c * C64::new(0.0, -t * es.values[k]).exp();
    }
    Ok((0..n).map(|i| (0..n).map(|k| v[(i, k)] * coeffs[k]).sum()).collect())
}

/// `-i H` as a sparse operator, for Schroedinger evolution via
/// [`expm_action`].
pub fn schrodinger_operator(h: &CsrMatrix) -> CsrMatrix {
    h.scale(C64::new(0.0, -1.0))
}
