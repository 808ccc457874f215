use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::experiment::run_experiment;
use crate::adversary::AttackChoice;
use crate::analysis::{
    abort_bound, binomial_entropy_approx, binomial_entropy_exact, binomial_row, entropy_eps0_asymptote,
    entropy_gap, entropy_gap_bound, hoeffding, info_set_entropy, info_set_size, leak_bound, leak_exact,
    lemma_sweep, BoundReport, Direction, JointDistribution,
};
use crate::error::{Error, Result};
use crate::protocol::{ProtocolKind, ProtocolParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Combinatorics,
    Entropy,
    Leakage,
    Abort,
    Hoeffding,
    All,
}

impl Scope {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "combinatorics" => Some(Self::Combinatorics),
            "entropy" => Some(Self::Entropy),
            "leakage" => Some(Self::Leakage),
            "abort" => Some(Self::Abort),
            "hoeffding" => Some(Self::Hoeffding),
            "all" => Some(Self::All),
            _ => None,
        }
    }
}

/// Runs the verification battery for `scope`.
pub fn run_verify(scope: Scope) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    let all = scope == Scope::All;
    if all || scope == Scope::Combinatorics {
        out.extend(lemma_sweep(8)?);
    }
    if all || scope == Scope::Entropy {
        out.extend(entropy_checks()?);
    }
    if all || scope == Scope::Leakage {
        out.extend(leakage_checks()?);
    }
    if all || scope == Scope::Abort {
        out.extend(abort_checks()?);
    }
    if all || scope == Scope::Hoeffding {
        out.extend(hoeffding_checks()?);
    }
    Ok(out)
}

pub fn all_satisfied(reports: &[BoundReport]) -> bool {
    reports.iter().all(|r| r.satisfied)
}

fn entropy_checks() -> Result<Vec<BoundReport>> {
    let mut out = vec![
        BoundReport::new("H(Bin(1,1/2)) = 1", binomial_entropy_exact(1, 0.5)?, 1.0, Direction::Within(1e-12)),
        BoundReport::new("H(Bin(2,1/2)) = 1.5", binomial_entropy_exact(2, 0.5)?, 1.5, Direction::Within(1e-12)),
    ];
    let diff = (binomial_entropy_exact(20, 0.5)? - binomial_entropy_approx(20, 0.5)?).abs();
    out.push(BoundReport::new("|H(Bin(20,1/2)) - approximation|", diff, 3.4e-4, Direction::AtMost).param("n", 20.0));

    for eps in [0.3, 0.5, 1.0] {
        // the closest n to violating the bound
        let threshold = 16f64.ln() / (eps * eps);
        let mut worst: Option<(usize, f64, f64)> = None;
        for n in (2..=200).step_by(2).filter(|&n| n as f64 > threshold) {
            let gap = entropy_gap(n, eps)?;
            let bound = entropy_gap_bound(n, eps)?;
            if worst.is_none_or(|(_, g, b)| bound - gap < b - g) {
                worst = Some((n, gap, bound));
            }
        }
        if let Some((n, gap, bound)) = worst {
            out.push(
                BoundReport::new("INFO-set gap <= (3/ln2)e^(-eps^2 n/2), worst even n<=200", gap, bound, Direction::AtMost)
                    .param("epsilon", eps)
                    .param("n", n as f64),
            );
        }
    }

    let asym = info_set_entropy(1024, 0.0)?;
    out.push(
        BoundReport::new("lg C(1024,512) vs asymptote", asym, entropy_eps0_asymptote(1024), Direction::Within(0.01))
            .param("n", 1024.0),
    );

    let mut full_ok = true;
    let mut central_ok = true;
    for n in (2..=64).step_by(2) {
        full_ok &= info_set_size(n, 1.0)? == BigUint::one() << n;
        central_ok &= info_set_size(n, 0.0)? == binomial_row(n)[n / 2];
    }
    out.push(BoundReport::exact("|I(n,1)| = 2^n, even n<=64", 1.0, 1.0, full_ok));
    out.push(BoundReport::exact("|I(n,0)| = C(n,n/2), even n<=64", 1.0, 1.0, central_ok));
    Ok(out)
}

/// `I(X; W)` by listing all `m` bit strings, with `X` the first `n` bits and `W` the weight.
pub fn exhaustive_weight_mi(m: usize, n: usize) -> Result<f64> {
    if n > m || m > 24 {
        return Err(Error::Domain(format!("exhaustive MI needs n <= m <= 24, got n = {n}, m = {m}")));
    }
    let mut counts = vec![0u64; (1 << n) * (m + 1)];
    for s in 0u64..(1 << m) {
        let x = (s & ((1 << n) - 1)) as usize;
        counts[x * (m + 1) + s.count_ones() as usize] += 1;
    }
    let total = (1u64 << m) as f64;
    let table = counts.iter().map(|&c| c as f64 / total).collect();
    let joint = JointDistribution::new(vec![1 << n, m + 1], vec!["X".into(), "W".into()], table)?;
    joint.mutual_information(&[0], &[1])
}

fn leakage_checks() -> Result<Vec<BoundReport>> {
    let mut out = vec![BoundReport::new("leak_bound(4) <= 0.293", leak_bound(4.0)?, 0.293, Direction::AtMost)];
    let ks = [4.0, 8.0, 16.0, 32.0].map(leak_bound);
    let ks: Vec<f64> = ks.into_iter().collect::<Result<_>>()?;
    out.push(BoundReport::exact(
        "leak_bound decreasing in k (4, 8, 16, 32)",
        ks[3],
        ks[0],
        ks.windows(2).all(|w| w[1] < w[0]),
    ));
    for n in 1..=4u64 {
        for k in 2..=6u64 {
            let m = (k * n - n) as usize;
            out.push(
                BoundReport::new(
                    "leak_exact vs exhaustive MI",
                    leak_exact(n, k)?,
                    exhaustive_weight_mi(m, n as usize)?,
                    Direction::Within(1e-9),
                )
                .param("n", n as f64)
                .param("k", k as f64),
            );
        }
    }
    out.push(
        BoundReport::new("leak_exact(1000,4) -> 1/2 lg(3/2)", leak_exact(1000, 4)?, 0.292481, Direction::Within(1e-3))
            .param("n", 1000.0)
            .param("k", 4.0),
    );
    Ok(out)
}

fn abort_checks() -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for n in [16, 64, 256, 1024] {
        let b = abort_bound(n, 0.5, 0.3, 0.1)?;
        out.push(
            BoundReport::new("abort bound <= 3e^(-kn)", b.bound, b.coarse, Direction::AtMost)
                .param("n", n as f64)
                .param("k1", b.k1)
                .param("k2", b.k2),
        );
    }
    let b = abort_bound(16, 0.5, 0.3, 0.1)?;
    let trials = 2000;
    let params = ProtocolParams::new(16, 0.5).with_epsilon(0.1).with_delta_prime(0.3).with_seed(2024);
    let cfg = ExperimentConfig::new(ProtocolKind::P1Prime, params, AttackChoice::named("no_attack"), trials);
    let summary = run_experiment(&cfg)?.summary;
    let sigma = (b.bound * (1.0 - b.bound) / trials as f64).sqrt();
    out.push(
        BoundReport::new("empirical P1' abort rate <= bound + 3 sigma", summary.abort_rate, b.bound + 3.0 * sigma, Direction::AtMost)
            .param("n", 16.0)
            .param("delta", 0.5)
            .param("delta_prime", 0.3)
            .param("epsilon", 0.1)
            .param("trials", trials as f64),
    );
    Ok(out)
}

/// Monte Carlo tail frequencies of a Bernoulli(p) sample mean over `reps` repetitions:
/// `(P[mean − p ≥ κ], P[|mean − p| ≥ κ])`.
pub fn bernoulli_tails(p: f64, n: usize, kappa: f64, reps: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut upper, mut both) = (0usize, 0usize);
    for _ in 0..reps {
        let ones = (0..n).filter(|_| rng.gen_bool(p)).count();
        let dev = ones as f64 / n as f64 - p;
        // tiny slack so that a deviation of exactly κ counts despite rounding
        upper += usize::from(dev >= kappa - 1e-12);
        both += usize::from(dev.abs() >= kappa - 1e-12);
    }
    (upper as f64 / reps as f64, both as f64 / reps as f64)
}

fn hoeffding_checks() -> Result<Vec<BoundReport>> {
    let reps = 20_000;
    let mut out = Vec::new();
    for (i, &(kappa, n, p)) in [0.1, 0.2]
        .iter()
        .flat_map(|&k| [25, 100].into_iter().flat_map(move |n| [(k, n, 0.5), (k, n, 0.3)]))
        .collect::<Vec<_>>()
        .iter()
        .enumerate()
    {
        let (upper, both) = bernoulli_tails(p, n, kappa, reps, 7 + i as u64);
        for (name, freq, two_sided) in [("one-sided", upper, false), ("two-sided", both, true)] {
            let bound = hoeffding(kappa, n, two_sided)?;
            let slack = 3.0 * (bound.min(1.0) * (1.0 - bound.min(1.0)) / reps as f64).sqrt();
            out.push(
                BoundReport::new(format!("Hoeffding {name} tail <= bound + 3 sigma"), freq, bound + slack, Direction::AtMost)
                    .param("kappa", kappa)
                    .param("n", n as f64)
                    .param("p", p),
            );
        }
    }
    Ok(out)
}
