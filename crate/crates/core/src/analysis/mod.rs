//! Entropies, mutual information, closed-form bounds and exhaustive oracles.

mod bounds;
mod combinatorics;
mod distribution;
mod entropy;
mod estimate;
mod report;

pub use bounds::{abort_bound, hoeffding, AbortBound};
pub use combinatorics::{
    factorial, for_each_arrangement, lemma_sweep, perm_count, q_count, q_count_bruteforce,
    verify_q_independence, verify_q_independence_capped, x_count, x_count_bruteforce, QIndependence,
    DEFAULT_ENUMERATION_CAP, JOINT_TABLE_LIMIT,
};
pub use distribution::{entropy_bits, JointDistribution};
pub use entropy::{
    big_log2, binomial_entropy_approx, binomial_entropy_exact, binomial_row, entropy_eps0_asymptote,
    entropy_gap, entropy_gap_bound, info_set_entropy, info_set_size, leak_bound, leak_exact,
    leak_exact_bits,
};
pub use estimate::{empirical_mi, wilson_interval, MiEstimate, BOOTSTRAP_RESAMPLES, MIN_MI_SAMPLES, Z_95};
pub use report::{render_table, BoundReport, Direction};
