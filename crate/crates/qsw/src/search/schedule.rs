//! Geometric measurement-time schedule for searches whose optimal time is
//! only known up to its growth exponent.

use serde::{Deserialize, Serialize};

use crate::error::{QswError, Result};

/// `t_k = c n^(beta0 + k beta1 / K)` with `K = k_prime ln n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleParams {
    pub beta0: f64,
    pub beta1: f64,
    pub k_prime: f64,
    pub c: f64,
}

impl ScheduleParams {
    pub fn new(beta0: f64, beta1: f64, k_prime: f64) -> Self {
        Self { beta0, beta1, k_prime, c: 1.0 }
    }

    /// Number of rounds `K = k_prime ln n` (not rounded).
    pub fn rounds(&self, n: usize) -> f64 {
        self.k_prime * (n as f64).ln()
    }

    /// `t_k` for graph order `n`.
    pub fn time(&self, n: usize, k: usize) -> f64 {
        let nf = n as f64;
        self.c * nf.powf(self.beta0) * (k as f64 * self.beta1 / self.k_prime).exp()
    }

    /// `t_{k+1} / t_k = exp(beta1 / k_prime)`.
    pub fn ratio(&self) -> f64 {
        (self.beta1 / self.k_prime).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleOutcome {
    /// Sum of all evolution times spent, the successful one included.
    pub total_time: f64,
    /// Index of the successful run.
    pub k_w: usize,
    pub times: Vec<f64>,
}

/// Runs the schedule in ascending order until `oracle(t_k)` reports
/// success. Fails when every `k <= K` was tried without success.
pub fn geometric_schedule(
    params: ScheduleParams,
    n: usize,
    mut oracle: impl FnMut(f64) -> bool,
) -> Result<ScheduleOutcome> {
    let ScheduleParams { beta0, beta1, k_prime, c } = params;
    if !(beta1 > 0.0 && k_prime > 0.0 && c > 0.0) || !beta0.is_finite() || !beta1.is_finite() {
        return Err(QswError::InvalidParameter(format!(
            "schedule needs beta1 > 0, k_prime > 0, c > 0 (got {beta1}, {k_prime}, {c})"
        )));
    }
    if n < 2 {
        return Err(QswError::InvalidParameter(format!("graph order {n} is too small for a schedule")));
    }
    let big_k = params.rounds(n);
    let mut times = Vec::new();
    let mut k = 0usize;
    while k as f64 <= big_k {
        let t = params.time(n, k);
        times.push(t);
        if oracle(t) {
            return Ok(ScheduleOutcome { total_time: times.iter().sum(), k_w: k, times });
        }
        k += 1;
    }
    Err(QswError::OracleNeverSucceeds(times.len()))
}
