//! Real branches of the Lambert W function.

use std::f64::consts::E;

use crate::error::{QswError, Result};

const BRANCH_POINT: f64 = -1.0 / E;

/// Halley iteration on `w e^w - x`, stopped once the step is at rounding
/// level. The caller supplies a start on the right branch.
fn halley(x: f64, mut w: f64, lo: f64, hi: f64) -> f64 {
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        // keep the iterate on its branch
        let next = (w - step).clamp(lo, hi);
        if (next - w).abs() <= 4.0 * f64::EPSILON * (1.0 + next.abs()) {
            return next;
        }
        w = next;
    }
    w
}

/// Expansion about the branch point in `p = +-sqrt(2 (e x + 1))`.
fn branch_series(p: f64) -> f64 {
    -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
}

/// Principal branch `W_0` on `[-1/e, inf)`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !(x >= BRANCH_POINT) || !x.is_finite() {
        return Err(QswError::InvalidParameter(format!("W_0 is undefined at {x}")));
    }
    if x == BRANCH_POINT {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let start = if x < -0.25 {
        branch_series((2.0 * (E * x + 1.0)).max(0.0).sqrt())
    } else if x < 3.0 {
        x.ln_1p() * (1.0 - x.ln_1p() / (2.0 + x.ln_1p()))
    } else {
        let l = x.ln();
        l - l.ln()
    };
    Ok(halley(x, start.max(-1.0), -1.0, f64::INFINITY))
}

/// Lower branch `W_{-1}` on `[-1/e, 0)`.
pub fn lambert_wm1(x: f64) -> Result<f64> {
    if !(BRANCH_POINT..0.0).contains(&x) {
        return Err(QswError::InvalidParameter(format!("W_-1 is undefined at {x}")));
    }
    if x == BRANCH_POINT {
        return Ok(-1.0);
    }
    let start = if x < -0.25 {
        branch_series(-(2.0 * (E * x + 1.0)).max(0.0).sqrt())
    } else {
        let l1 = (-x).ln();
        let l2 = (-l1).ln();
        l1 - l2 + l2 / l1
    };
    Ok(halley(x, start.min(-1.0), f64::NEG_INFINITY, -1.0))
}

/// `W_0(x) / W_{-1}(x)` with `x = (1 - p0) / (e p0)`: the limiting success
/// bound for Laplacian search on `G(n, p0 ln n / n)`. Defined for `p0 > 1`,
/// rising from 0 at `p0 = 1` to 1 as `p0` grows.
pub fn lambert_bound(p0: f64) -> Result<f64> {
    if !(p0 > 1.0 && p0.is_finite()) {
        return Err(QswError::InvalidParameter(format!("lambert_bound needs p0 > 1, got {p0}")));
    }
    let x = (1.0 - p0) / (E * p0);
    Ok(lambert_w0(x)? / lambert_wm1(x)?)
}
