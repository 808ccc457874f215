use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_MI_SAMPLES: usize = 1000;
pub const BOOTSTRAP_RESAMPLES: usize = 1000;
/// Standard normal quantile for a two-sided 95% interval.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Mutual information estimate from paired samples, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiEstimate {
    pub plug_in: f64,
    pub miller_madow: f64,
    /// 99% basic bootstrap interval `[2θ − q₉₉.₅, 2θ − q₀.₅]`, which undoes the upward bias
    /// of the plug-in estimate that a plain percentile interval would inherit.
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub samples: usize,
}

/// Plug-in MI of `(a, b)` pairs with a seeded bootstrap interval.
pub fn empirical_mi<A: Ord, B: Ord>(samples: &[(A, B)], seed: u64) -> Result<MiEstimate> {
    if samples.len() < MIN_MI_SAMPLES {
        return Err(Error::InsufficientSamples {
            got: samples.len(),
            need: MIN_MI_SAMPLES,
        });
    }
    let a = dense_labels(samples.iter().map(|s| &s.0));
    let b = dense_labels(samples.iter().map(|s| &s.1));
    let (ma, mb) = (a.iter().max().unwrap() + 1, b.iter().max().unwrap() + 1);
    let pairs: Vec<(usize, usize)> = a.into_iter().zip(b).collect();

    let (plug_in, occupied) = plug_in_mi(ma, mb, pairs.iter().copied());
    let n = pairs.len() as f64;
    let correction = ((occupied.0 as f64 - 1.0) + (occupied.1 as f64 - 1.0) - (occupied.2 as f64 - 1.0))
        / (2.0 * n * LN_2);
    let miller_madow = (plug_in + correction).max(0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut boot: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| {
            let draw = (0..pairs.len()).map(|_| pairs[rng.gen_range(0..pairs.len())]);
            plug_in_mi(ma, mb, draw).0
        })
        .collect();
    boot.sort_by(f64::total_cmp);
    let at = |q: f64| boot[((q * (boot.len() - 1) as f64).round() as usize).min(boot.len() - 1)];
    Ok(MiEstimate {
        plug_in,
        miller_madow,
        ci_lo: (2.0 * plug_in - at(0.995)).max(0.0),
        ci_hi: (2.0 * plug_in - at(0.005)).max(0.0),
        samples: pairs.len(),
    })
}

fn dense_labels<'a, T: Ord + 'a>(values: impl Iterator<Item = &'a T>) -> Vec<usize> {
    let mut ids: BTreeMap<&T, usize> = BTreeMap::new();
    values
        .map(|v| {
            let next = ids.len();
            *ids.entry(v).or_insert(next)
        })
        .collect()
}

/// Returns the estimate and the number of occupied cells of A, B and (A, B).
fn plug_in_mi(
    ma: usize,
    mb: usize,
    draw: impl Iterator<Item = (usize, usize)>,
) -> (f64, (usize, usize, usize)) {
    let mut joint = vec![0u64; ma * mb];
    let mut ca = vec![0u64; ma];
    let mut cb = vec![0u64; mb];
    let mut total = 0u64;
    for (x, y) in draw {
        joint[x * mb + y] += 1;
        ca[x] += 1;
        cb[y] += 1;
        total += 1;
    }
    let n = total as f64;
    let mut mi = 0.0;
    for x in 0..ma {
        for y in 0..mb {
            let c = joint[x * mb + y];
            if c > 0 {
                let c = c as f64;
                mi += c / n * (c * n / (ca[x] as f64 * cb[y] as f64)).log2();
            }
        }
    }
    let occupied = |v: &[u64]| v.iter().filter(|&&c| c > 0).count();
    (mi.max(0.0), (occupied(&ca), occupied(&cb), occupied(&joint)))
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn needs_enough_samples() {
        let s = vec![(0u8, 0u8); 999];
        assert!(matches!(empirical_mi(&s, 1), Err(Error::InsufficientSamples { .. })));
    }

    #[test]
    fn independent_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s: Vec<(u8, u8)> = (0..10_000).map(|_| (rng.gen_range(0..2), rng.gen_range(0..2))).collect();
        let e = empirical_mi(&s, 9).unwrap();
        assert!(e.plug_in < 0.01, "{e:?}");
        assert!(e.miller_madow <= e.plug_in);
        assert!(e.ci_lo <= e.plug_in + 1e-12);
    }

    #[test]
    fn copied_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s: Vec<(u8, u8)> = (0..10_000)
            .map(|_| {
                let b = rng.gen_range(0..2);
                (b, b)
            })
            .collect();
        let e = empirical_mi(&s, 9).unwrap();
        assert!((e.plug_in - 1.0).abs() < 0.01);
        assert!(e.ci_lo <= e.plug_in && e.plug_in <= e.ci_hi);
    }

    #[test]
    fn bootstrap_is_seeded() {
        let s: Vec<(u32, u32)> = (0..2000).map(|i| (i % 3, (i * 7) % 5)).collect();
        assert_eq!(empirical_mi(&s, 3).unwrap(), empirical_mi(&s, 3).unwrap());
    }

    #[test]
    fn wilson_values() {
        let (lo, hi) = wilson_interval(0, 100, Z_95);
        assert_eq!(lo, 0.0);
        assert_eq!(wilson_interval(100, 100, Z_95).1, 1.0);
        assert!((hi - 0.0370).abs() < 1e-3);
        let (lo, hi) = wilson_interval(50, 100, Z_95);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }
}
