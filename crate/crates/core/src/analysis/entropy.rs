use std::f64::consts::{LN_2, PI};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::protocol::weight_window;

/// `H(Bin(n, p))` in bits, summing the pmf in log space.
pub fn binomial_entropy_exact(n: u64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("binomial entropy needs 0 < p < 1, got {p}")));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut ln_c = 0.0; // ln C(n, k), updated incrementally
    let mut h = 0.0;
    for k in 0..=n {
        if k > 0 {
            ln_c += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        let ln_pmf = ln_c + k as f64 * lp + (n - k) as f64 * lq;
        let pmf = ln_pmf.exp();
        if pmf > 0.0 {
            h -= pmf * ln_pmf;
        }
    }
    Ok(h / LN_2)
}

/// `½ lg(2πe p(1−p) n)`.
pub fn binomial_entropy_approx(n: u64, p: f64) -> Result<f64> {
    if n == 0 || !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("approximation needs n ≥ 1 and 0 < p < 1, got n = {n}, p = {p}")));
    }
    Ok(0.5 * (2.0 * PI * std::f64::consts::E * p * (1.0 - p) * n as f64).log2())
}

/// `½ lg(1 + 1/(k−2))`.
pub fn leak_bound(k: f64) -> Result<f64> {
    if !(k > 2.0) {
        return Err(Error::Domain(format!("leak bound needs k > 2, got {k}")));
    }
    Ok(0.5 * (1.0 + 1.0 / (k - 2.0)).log2())
}

/// `H(Bin(m, ½)) − H(Bin(m − n, ½))`: what the weight of `m` uniform bits says about `n` of them.
pub fn leak_exact_bits(m: u64, n: u64) -> Result<f64> {
    if n > m {
        return Err(Error::Domain(format!("cannot hide {n} bits among {m}")));
    }
    Ok(binomial_entropy_exact(m, 0.5)? - binomial_entropy_exact(m - n, 0.5)?)
}

/// Leak at `(n, k)`: the weight covers `kn − n` bits of which `n` are INFO bits.
pub fn leak_exact(n: u64, k: u64) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain(format!("leak_exact needs kn − 2n ≥ 0, got k = {k}")));
    }
    leak_exact_bits(k * n - n, n)
}

/// `|I_{n,ε}| = Σ C(n, w)` over the allowed weights.
pub fn info_set_size(n: usize, epsilon: f64) -> Result<BigUint> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Domain(format!("epsilon must lie in [0, 1], got {epsilon}")));
    }
    let (lo, hi) = weight_window(n, epsilon);
    let row = binomial_row(n);
    Ok(row[lo..=hi].iter().sum())
}

/// `lg |I_{n,ε}|`.
pub fn info_set_entropy(n: usize, epsilon: f64) -> Result<f64> {
    Ok(big_log2(&info_set_size(n, epsilon)?))
}

/// `n − lg |I_{n,ε}|`, evaluated from the exact complement so tiny gaps keep their digits.
pub fn entropy_gap(n: usize, epsilon: f64) -> Result<f64> {
    let size = info_set_size(n, epsilon)?;
    let full = BigUint::one() << n;
    let missing = &full - &size;
    if missing.is_zero() {
        return Ok(0.0);
    }
    let ln_ratio = big_ln(&missing) - n as f64 * LN_2;
    Ok(-(-ln_ratio.exp()).ln_1p() / LN_2)
}

/// `(3/ln 2) e^{−ε² n / 2}`, valid for `n > ln 16 / ε²`.
pub fn entropy_gap_bound(n: usize, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::Domain("the gap bound needs epsilon > 0".into()));
    }
    let threshold = 16f64.ln() / (epsilon * epsilon);
    if !(n as f64 > threshold) {
        return Err(Error::Domain(format!(
            "the gap bound holds only for n > ln(16)/ε² = {threshold:.4}, got n = {n}"
        )));
    }
    Ok(3.0 / LN_2 * (-epsilon * epsilon * n as f64 / 2.0).exp())
}

/// `n − ½ lg n − ½(lg π − 1)`, the large-n entropy of `I_{n,0}`.
pub fn entropy_eps0_asymptote(n: usize) -> f64 {
    let n = n as f64;
    n - 0.5 * n.log2() - 0.5 * (PI.log2() - 1.0)
}

/// `C(n, 0), …, C(n, n)`.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 1..=n {
        c = c * BigUint::from(n - k + 1) / BigUint::from(k);
        row.push(c.clone());
    }
    row
}

/// `lg x` for a positive big integer.
pub fn big_log2(x: &BigUint) -> f64 {
    big_ln(x) / LN_2
}

fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64 bits");
    top.ln() + shift as f64 * LN_2
}
