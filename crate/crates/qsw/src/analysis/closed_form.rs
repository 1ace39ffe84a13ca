//! Closed forms for the interpolated global walk on finite and infinite
//! paths started from a single vertex.

use std::f64::consts::PI;

use crate::error::{QswError, Result};

/// `ln n!` for `n` up to the requested size.
struct LnFactorial(Vec<f64>);

impl LnFactorial {
    fn upto(n: usize) -> Self {
        let mut t = Vec::with_capacity(n + 1);
        t.push(0.0);
        for k in 1..=n {
            t.push(t[k - 1] + (k as f64).ln());
        }
        Self(t)
    }

    fn binom(&self, n: usize, k: usize) -> f64 {
        if k > n {
            f64::NEG_INFINITY
        } else {
            self.0[n] - self.0[k] - self.0[n - k]
        }
    }
}

/// `<k|rho(t)|k>` on the path with `n` vertices started in `|l><l|`
/// (vertices numbered from 1):
/// `(2/(n+1))^2 sum_ij s_ki s_kj s_li s_lj exp(-t omega (l_i - l_j)^2 / 2) exp(-i t (1 - omega)(l_i - l_j))`
/// with `s_ki = sin(k i pi / (n+1))` and `l_i = 2 cos(i pi / (n+1))`.
pub fn path_probability_closed_form(n: usize, l: usize, k: usize, t: f64, omega: f64) -> Result<f64> {
    if !(1..=n).contains(&l) || !(1..=n).contains(&k) {
        return Err(QswError::InvalidParameter(format!("vertices {l}, {k} must lie in 1..={n}")));
    }
    crate::gksl::check_omega(omega)?;
    let h = PI / (n + 1) as f64;
    let lam: Vec<f64> = (1..=n).map(|i| 2.0 * (i as f64 * h).cos()).collect();
    let w: Vec<f64> = (1..=n).map(|i| (k as f64 * i as f64 * h).sin() * (l as f64 * i as f64 * h).sin()).collect();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = lam[i] - lam[j];
            // the imaginary parts cancel pairwise under i <-> j
            sum += w[i] * w[j] * (-0.5 * t * omega * d * d).exp() * (t * (1.0 - omega) * d).cos();
        }
    }
    let c = 2.0 / (n + 1) as f64;
    Ok(c * c * sum)
}

/// Result of the infinite-path integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Imaginary part of the computed integral, zero up to quadrature error.
    pub imag: f64,
    /// Nodes per axis used for the accepted estimate.
    pub nodes: usize,
}

/// `(1/pi^2) int_0^pi int_0^pi cos(ku) cos(kv) exp(-2 omega t d^2) exp(-2i(1 - omega) t d) du dv`
/// with `d = cos u - cos v`.
///
/// The integrand extends to a smooth even periodic function, so the
/// trapezoid rule converges geometrically; the node count is doubled until
/// successive estimates agree to `tol`.
pub fn infinite_path_probability_with(k: i64, t: f64, omega: f64, tol: f64) -> Result<Quadrature> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(QswError::InvalidParameter(format!("time {t} must be finite and nonnegative")));
    }
    crate::gksl::check_omega(omega)?;
    let eval = |m: usize| -> (f64, f64) {
        let h = PI / m as f64;
        let nodes: Vec<(f64, f64, f64)> = (0..=m)
            .map(|a| {
                let u = a as f64 * h;
                let wt = if a == 0 || a == m { 0.5 } else { 1.0 };
                (u.cos(), (k as f64 * u).cos(), wt)
            })
            .collect();
        let (mut re, mut im) = (0.0, 0.0);
        for &(cu, ku, wu) in &nodes {
            for &(cv, kv, wv) in &nodes {
                let d = cu - cv;
                let amp = wu * wv * ku * kv * (-2.0 * omega * t * d * d).exp();
                let ph = 2.0 * (1.0 - omega) * t * d;
                re += amp * ph.cos();
                im -= amp * ph.sin();
            }
        }
        let s = 1.0 / (m * m) as f64;
        (re * s, im * s)
    };
    let mut m = 16usize;
    let mut prev = eval(m);
    loop {
        m *= 2;
        let cur = eval(m);
        if (cur.0 - prev.0).abs() <= tol && m >= 32 {
            return Ok(Quadrature { value: cur.0, imag: cur.1, nodes: m });
        }
        if m >= 1 << 13 {
            return Err(QswError::NoConvergence(format!("quadrature at k = {k}, t = {t} did not settle")));
        }
        prev = cur;
    }
}

/// [`infinite_path_probability_with`] at absolute tolerance `1e-10`.
pub fn infinite_path_probability(k: i64, t: f64, omega: f64) -> Result<f64> {
    Ok(infinite_path_probability_with(k, t, omega, 1e-10)?.value)
}

/// `A_{n,k} = (-1)^{n+k} 2^{-n} C(2n, n) C(2n, n+k)`, zero for `|k| > n`.
pub fn taylor_a(n: usize, k: i64) -> f64 {
    taylor_b(n, k, 1.0)
}

/// `B_{n,k}(omega) = (-1)^{n+k} 2^{-n} sum_l C(n, 2l) 4^l omega^{n-2l} (1-omega)^{2l} (-1)^l C(2n-2l, n-l) C(2n-2l, n-l+k)`
/// over `0 <= l <= min(floor(n/2), n - |k|)`.
pub fn taylor_b(n: usize, k: i64, omega: f64) -> f64 {
    let ka = k.unsigned_abs() as usize;
    if ka > n {
        return 0.0;
    }
    let lf = LnFactorial::upto(2 * n);
    b_with(&lf, n, ka, omega)
}

fn b_with(lf: &LnFactorial, n: usize, ka: usize, omega: f64) -> f64 {
    let mut sum = 0.0;
    for l in 0..=(n / 2).min(n - ka) {
        let p = n - 2 * l;
        // omega^p (1-omega)^{2l} with 0^0 = 1
        let wpow = if p == 0 { 1.0 } else { omega.powi(p as i32) };
        let vpow = if l == 0 { 1.0 } else { (1.0 - omega).powi(2 * l as i32) };
        if wpow == 0.0 || vpow == 0.0 {
            continue;
        }
        let m = n - l;
        let ln = lf.binom(n, 2 * l) + (2 * l) as f64 * 2f64.ln() + lf.binom(2 * m, m) + lf.binom(2 * m, m + ka)
            - n as f64 * 2f64.ln();
        let sign = if (l + n + ka) % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * ln.exp() * wpow * vpow;
    }
    sum
}

/// `sum_n B_{n,k}(omega) t^n / n!`, stopped once a term falls below
/// `1e-14` of the partial sum and `n >= 2|k| + 10`.
pub fn taylor_series_probability(k: i64, t: f64, omega: f64) -> Result<f64> {
    crate::gksl::check_omega(omega)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(QswError::InvalidParameter(format!("time {t} must be finite and nonnegative")));
    }
    if t == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    let ka = k.unsigned_abs() as usize;
    const MAX_TERMS: usize = 400;
    let lf = LnFactorial::upto(2 * MAX_TERMS);
    let mut sum = 0.0;
    for n in ka..MAX_TERMS {
        let b = b_with(&lf, n, ka, omega);
        let term = if b == 0.0 { 0.0 } else { b.signum() * (b.abs().ln() + n as f64 * t.ln() - lf.0[n]).exp() };
        sum += term;
        if n >= 2 * ka + 10 && term.abs() < 1e-14 * sum.abs().max(f64::MIN_POSITIVE) {
            return Ok(sum);
        }
    }
    Err(QswError::NoConvergence(format!("series at k = {k}, t = {t} needs more than {MAX_TERMS} terms")))
}

/// Second moment on the infinite path: `2 omega t + 2 (1 - omega)^2 t^2`.
pub fn moment_mu2(omega: f64, t: f64) -> f64 {
    2.0 * omega * t + 2.0 * (1.0 - omega).powi(2) * t * t
}
