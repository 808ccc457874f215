use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents and value of the Protocol-1′ abort-probability bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbortBound {
    pub k1: f64,
    pub k2: f64,
    /// `e^{−k₁n} + 2e^{−k₂n} − 2e^{−(k₁+k₂)n}`.
    pub bound: f64,
    /// `3e^{−kn}` with `k = min(k₁, k₂)`.
    pub coarse: f64,
}

/// Requires `0 ≤ ε < δ′ < δ` and `ε ≤ 1`.
pub fn abort_bound(n: usize, delta: f64, delta_prime: f64, epsilon: f64) -> Result<AbortBound> {
    if !(0.0 <= epsilon && epsilon < delta_prime && delta_prime < delta && epsilon <= 1.0) {
        return Err(Error::Domain(format!(
            "abort bound needs 0 ≤ ε < δ′ < δ and ε ≤ 1, got ε = {epsilon}, δ′ = {delta_prime}, δ = {delta}"
        )));
    }
    let k1 = ((delta_prime - delta) / (1.0 + delta)).powi(2) / 8.0;
    let k2 = 0.5 * ((2.0 * delta_prime - epsilon) / (1.0 + 2.0 * delta_prime)).powi(2);
    let n = n as f64;
    let bound = (-k1 * n).exp() + 2.0 * (-k2 * n).exp() - 2.0 * (-(k1 + k2) * n).exp();
    let coarse = 3.0 * (-k1.min(k2) * n).exp();
    Ok(AbortBound {
        k1,
        k2,
        bound,
        coarse,
    })
}

/// Hoeffding tail for the mean of `n` variables in `[0, 1]`: `e^{−2κ²n}`, or
/// `min(1, 2e^{−2κ²n})` for the two-sided deviation.
pub fn hoeffding(kappa: f64, n: usize, two_sided: bool) -> Result<f64> {
    if !(kappa >= 0.0) || n == 0 {
        return Err(Error::Domain(format!("hoeffding needs κ ≥ 0 and n ≥ 1, got κ = {kappa}, n = {n}")));
    }
    let one = (-2.0 * kappa * kappa * n as f64).exp();
    Ok(if two_sided { (2.0 * one).min(1.0) } else { one })
}
