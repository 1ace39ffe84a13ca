//! Least-squares fit of `f(t; p) = p1 - p2 / (t - p3)^p4` to a slope series.

use serde::{Deserialize, Serialize};

use crate::error::{QswError, Result};

/// Fitted limit model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitFit {
    pub p: [f64; 4],
    /// Euclidean norm of the residual vector.
    pub residual: f64,
    pub iterations: usize,
    /// Set when `p4` fell below `1e-6`; `p1` is then not a trustworthy limit.
    pub degenerate: bool,
}

const MAX_ITER: usize = 500;
const P4_FLOOR: f64 = 1e-6;

/// The search runs in `theta = (p1, p2, r, q)` with `p3 = t_min - exp(r)`
/// and `p4 = exp(q)`, which keeps `t - p3 > 0` and `p4 > 0`.
struct Problem<'a> {
    t: &'a [f64],
    y: &'a [f64],
    t0: f64,
}

impl Problem<'_> {
    fn params(&self, th: &[f64; 4]) -> [f64; 4] {
        [th[0], th[1], self.t0 - th[2].exp(), th[3].exp()]
    }

    fn residuals(&self, th: &[f64; 4]) -> Vec<f64> {
        let p = self.params(th);
        self.t.iter().zip(self.y).map(|(&t, &y)| p[0] - p[1] * (t - p[2]).powf(-p[3]) - y).collect()
    }

    fn jacobian(&self, th: &[f64; 4]) -> Vec<[f64; 4]> {
        let p = self.params(th);
        self.t
            .iter()
            .map(|&t| {
                let x = t - p[2];
                let g = x.powf(-p[3]);
                // d/dp3 of -p2 x^{-p4} is -p2 p4 x^{-p4-1}; dp3/dr = -exp(r)
                let d3 = -p[1] * p[3] * g / x;
                let d4 = p[1] * g * x.ln();
                [1.0, -g, d3 * -th[2].exp(), d4 * p[3]]
            })
            .collect()
    }
}

fn sumsq(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum()
}

/// Solves the 4x4 system by Gaussian elimination with partial pivoting.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for c in 0..4 {
        let piv = (c..4).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[piv][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, piv);
        b.swap(c, piv);
        for r in c + 1..4 {
            let f = a[r][c] / a[c][c];
            for k in c..4 {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = [0.0; 4];
    for r in (0..4).rev() {
        let s: f64 = (r + 1..4).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// `(p1, p2)` minimizing the residual for fixed `p3, p4`: the model is
/// linear in them.
fn linear_part(t: &[f64], y: &[f64], p3: f64, p4: f64) -> (f64, f64) {
    let g: Vec<f64> = t.iter().map(|&t| (t - p3).powf(-p4)).collect();
    let n = t.len() as f64;
    let (sg, sy) = (g.iter().sum::<f64>(), y.iter().sum::<f64>());
    let (mg, my) = (sg / n, sy / n);
    let sgg: f64 = g.iter().map(|x| (x - mg).powi(2)).sum();
    let sgy: f64 = g.iter().zip(y).map(|(x, v)| (x - mg) * (v - my)).sum();
    let slope = if sgg > 0.0 { sgy / sgg } else { 0.0 };
    (my - slope * mg, -slope)
}

/// Levenberg-Marquardt fit of `p1 - p2 / (t - p3)^p4`.
///
/// Starting points come from a grid over `(p3, p4)` with `(p1, p2)` solved
/// exactly; the best one is refined on all four parameters.
pub fn fit_limit_model(t: &[f64], y: &[f64]) -> Result<LimitFit> {
    if t.len() != y.len() {
        return Err(QswError::Dimension(format!("{} times for {} values", t.len(), y.len())));
    }
    if t.len() < 8 {
        return Err(QswError::InvalidParameter(format!("need at least 8 points, got {}", t.len())));
    }
    if t.iter().chain(y).any(|x| !x.is_finite()) {
        return Err(QswError::InvalidParameter("non-finite data".into()));
    }
    let t0 = t.iter().copied().fold(f64::INFINITY, f64::min);
    let span = (t.iter().copied().fold(f64::NEG_INFINITY, f64::max) - t0).max(1.0);
    let prob = Problem { t, y, t0 };

    let mut best: Option<([f64; 4], f64)> = None;
    for gap in [1e-3, 1e-2, 0.1, 0.5, 1.0, 3.0, 10.0] {
        for p4 in [0.25, 0.5, 1.0, 1.5, 2.0, 3.0] {
            let p3 = t0 - gap * span;
            let (p1, p2) = linear_part(t, y, p3, p4);
            let th = [p1, p2, (gap * span).ln(), f64::ln(p4)];
            let f = sumsq(&prob.residuals(&th));
            if f.is_finite() && best.is_none_or(|(_, b)| f < b) {
                best = Some((th, f));
            }
        }
    }
    let (mut th, mut f) = best.expect("grid is nonempty");

    let mut lambda = 1e-3;
    // a residual at rounding level cannot be improved meaningfully
    let floor = (1e-12 * y.iter().map(|v| v * v).sum::<f64>().sqrt()).powi(2);
    let mut converged = f <= floor;
    let mut iterations = 0;
    while !converged && iterations < MAX_ITER {
        iterations += 1;
        if f <= floor {
            converged = true;
            break;
        }
        let r = prob.residuals(&th);
        let jac = prob.jacobian(&th);
        let mut jtj = [[0.0; 4]; 4];
        let mut jtr = [0.0; 4];
        for (row, ri) in jac.iter().zip(&r) {
            for a in 0..4 {
                jtr[a] += row[a] * ri;
                for b in 0..4 {
                    jtj[a][b] += row[a] * row[b];
                }
            }
        }
        let gnorm = jtr.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if gnorm <= 1e-15 * (1.0 + f) {
            converged = true;
            break;
        }
        let scale = (0..4).map(|a| jtj[a][a]).fold(0.0, f64::max).max(1e-300);
        let mut accepted = false;
        while lambda < 1e16 {
            let mut m = jtj;
            for a in 0..4 {
                m[a][a] += lambda * (jtj[a][a] + 1e-12 * scale);
            }
            let Some(step) = solve4(m, jtr.map(|x| -x)) else {
                lambda *= 10.0;
                continue;
            };
            let cand = [th[0] + step[0], th[1] + step[1], th[2] + step[2], th[3] + step[3]];
            let fc = sumsq(&prob.residuals(&cand));
            if fc.is_finite() && fc <= f {
                let small = step.iter().zip(&th).all(|(s, x)| s.abs() <= 1e-12 * (1.0 + x.abs()));
                converged = small || (f - fc) <= 1e-15 * f;
                th = cand;
                f = fc;
                lambda = (lambda / 10.0).max(1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            // no descent direction left at any damping: a stationary point
            converged = true;
        }
    }
    if !converged {
        return Err(QswError::NoConvergence(format!("limit-model fit after {MAX_ITER} iterations")));
    }
    let p = prob.params(&th);
    Ok(LimitFit { p, residual: f.sqrt(), iterations, degenerate: p[3] < P4_FLOOR })
}
