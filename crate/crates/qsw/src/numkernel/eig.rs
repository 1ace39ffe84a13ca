//! Eigenvalues of general complex matrices: Householder reduction to upper
//! Hessenberg form followed by single-shift complex QR iterations.

use num_complex::Complex64 as C64;

use super::matrix::CMatrix;
use crate::error::{QswError, Result};

fn hessenberg(m: &CMatrix) -> Vec<C64> {
    let n = m.rows();
    let mut h = m.data().to_vec();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[i * n + k]).collect();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let xnorm = (tail + x[0].norm_sqr()).sqrt();
        let phase = if x[0].norm() == 0.0 { C64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let beta = -phase * xnorm;
        let mut u = x;
        u[0] -= beta;
        let unorm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        u.iter_mut().for_each(|z| *z /= unorm);
        let off = k + 1;
        // left: rows off.., columns k..
        let mut w = vec![C64::new(0.0, 0.0); n - k];
        for (i, ui) in u.iter().enumerate() {
            let uc = ui.conj();
            for j in k..n {
                w[j - k] += uc * h[(off + i) * n + j];
            }
        }
        for (i, ui) in u.iter().enumerate() {
            let f = ui * 2.0;
            for j in k..n {
                h[(off + i) * n + j] -= f * w[j - k];
            }
        }
        // right: all rows, columns off..
        for r in 0..n {
            let row = &mut h[r * n + off..r * n + n];
            let dot: C64 = row.iter().zip(&u).map(|(a, b)| a * b).sum();
            let dot = dot * 2.0;
            for (a, b) in row.iter_mut().zip(&u) {
                *a -= dot * b.conj();
            }
        }
        for i in k + 2..n {
            h[i * n + k] = C64::new(0.0, 0.0);
        }
    }
    h
}

fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    let (l1, l2) = (half_tr + root, half_tr - root);
    // recompute the smaller one through the determinant for accuracy
    let det = a * d - b * c;
    if l1.norm() >= l2.norm() {
        let alt = if l1.norm() > 0.0 { det / l1 } else { l2 };
        (l1, alt)
    } else {
        let alt = if l2.norm() > 0.0 { det / l2 } else { l1 };
        (alt, l2)
    }
}

/// All eigenvalues of a square complex matrix (unordered). Fails if the QR
/// iteration needs more than `30 n` sweeps.
pub fn eig_general(m: &CMatrix) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(QswError::Dimension(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = hessenberg(m);
    let idx = |i: usize, j: usize| i * n + j;
    let anorm = m.norm_one().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let max_sweeps = 30 * n;
    let mut sweeps = 0;
    let mut values = vec![C64::new(0.0, 0.0); n];
    let mut hi = n as isize - 1;
    let mut its = 0;
    while hi >= 0 {
        let hiu = hi as usize;
        let mut l = hiu;
        while l > 0 {
            let mut s = h[idx(l, l)].norm() + h[idx(l - 1, l - 1)].norm();
            if s == 0.0 {
                s = anorm;
            }
            if h[idx(l, l - 1)].norm() <= eps * s {
                h[idx(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hiu {
            values[hiu] = h[idx(hiu, hiu)];
            hi -= 1;
            its = 0;
            continue;
        }
        if l + 1 == hiu {
            let (a, b, c, d) = (h[idx(l, l)], h[idx(l, hiu)], h[idx(hiu, l)], h[idx(hiu, hiu)]);
            let (l1, l2) = eig2(a, b, c, d);
            values[l] = l1;
            values[hiu] = l2;
            hi -= 2;
            its = 0;
            continue;
        }
        sweeps += 1;
        its += 1;
        if sweeps > max_sweeps {
            return Err(QswError::NoConvergence(format!(
                "Hessenberg QR exceeded {max_sweeps} sweeps"
            )));
        }
        let mu = if its % 10 == 0 {
            h[idx(hiu, hiu)]
                + C64::new(h[idx(hiu, hiu - 1)].re.abs() + h[idx(hiu - 1, hiu - 2)].re.abs(), 0.0)
        } else {
            let (a, b, c, d) = (
                h[idx(hiu - 1, hiu - 1)],
                h[idx(hiu - 1, hiu)],
                h[idx(hiu, hiu - 1)],
                h[idx(hiu, hiu)],
            );
            let (l1, l2) = eig2(a, b, c, d);
            if (l1 - d).norm() < (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };
        for i in l..=hiu {
            h[idx(i, i)] -= mu;
        }
        let mut rots = Vec::with_capacity(hiu - l);
        for k in l..hiu {
            let a = h[idx(k, k)];
            let b = h[idx(k + 1, k)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 { (C64::new(1.0, 0.0), C64::new(0.0, 0.0)) } else { (a / r, b / r) };
            for j in k..=hiu {
                let x = h[idx(k, j)];
                let y = h[idx(k + 1, j)];
                h[idx(k, j)] = c.conj() * x + s.conj() * y;
                h[idx(k + 1, j)] = -s * x + c * y;
            }
            rots.push((c, s));
        }
        for (off, (c, s)) in rots.into_iter().enumerate() {
            let k = l + off;
            for i in l..=(k + 1).min(hiu) {
                let x = h[idx(i, k)];
                let y = h[idx(i, k + 1)];
                h[idx(i, k)] = x * c + y * s;
                h[idx(i, k + 1)] = -x * s.conj() + y * c.conj();
            }
        }
        for i in l..=hiu {
            h[idx(i, i)] += mu;
        }
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn upper_triangular_gives_diagonal() {
        let m = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 1.0), c(3.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 2.0), c(5.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(4.0, 0.0)],
        ]);
        let mut ev = eig_general(&m).unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((ev[0] - c(-1.0, 2.0)).norm() < 1e-12);
        assert!((ev[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((ev[2] - c(4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rotation_block_has_imaginary_pair() {
        let m = CMatrix::from_real_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]);
        let mut ev = eig_general(&m).unwrap();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn jordan_like_and_zero() {
        assert_eq!(eig_general(&CMatrix::zeros(4, 4)).unwrap(), vec![c(0.0, 0.0); 4]);
        let m = CMatrix::from_fn(6, 6, |i, j| if j == i + 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let ev = eig_general(&m).unwrap();
        assert!(ev.iter().all(|z| z.norm() < 1e-12));
    }
}
