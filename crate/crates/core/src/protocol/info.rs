use rand::seq::index;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::params::balanced_half;
use super::AbortReason;

/// Result of Step 7′: the balanced substring, the INFO string and its index list.
///
/// Indices are zero-based positions in `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfoSelection {
    /// Positions of the first `h` zeros and first `h` ones of `v`, ascending.
    pub e_indices: Vec<usize>,
    pub y: Vec<u8>,
    /// Distinct positions of `v`, all in `e_indices`, with `v[q_j] = y_j`.
    pub q: Vec<usize>,
}

/// Allowed Hamming weights of `I_{n,ε}`: `n − h ..= h`.
pub fn weight_window(n: usize, epsilon: f64) -> (usize, usize) {
    let h = balanced_half(n, epsilon).min(n);
    (n - h, h)
}

/// Step 7′ (a)–(c).
pub fn select_info_step7prime<R: Rng + ?Sized>(
    v: &[u8],
    n: usize,
    epsilon: f64,
    rng: &mut R,
) -> Result<InfoSelection, AbortReason> {
    let h = balanced_half(n, epsilon);
    let zeros: Vec<usize> = v.iter().enumerate().filter(|(_, &b)| b == 0).map(|(i, _)| i).take(h).collect();
    let ones: Vec<usize> = v.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| i).take(h).collect();
    if zeros.len() < h || ones.len() < h {
        return Err(AbortReason::InsufficientBalancedBits);
    }
    let mut e_indices: Vec<usize> = zeros.iter().chain(&ones).copied().collect();
    e_indices.sort_unstable();

    let y = sample_info_string(n, epsilon, rng);
    let weight = y.iter().filter(|&&b| b == 1).count();
    // a uniform injective assignment of zeros of y to E-zeros and ones of y to E-ones
    let mut zero_pool = zeros;
    let mut one_pool = ones;
    let (zero_pick, _) = zero_pool.partial_shuffle(rng, n - weight);
    let (one_pick, _) = one_pool.partial_shuffle(rng, weight);
    let (mut zi, mut oi) = (zero_pick.iter(), one_pick.iter());
    let q = y
        .iter()
        .map(|&b| *if b == 0 { zi.next() } else { oi.next() }.expect("pool sized to y"))
        .collect();
    Ok(InfoSelection { e_indices, y, q })
}

/// Uniform draw from `I_{n,ε}`: a weight with probability proportional to `C(n, w)` over the
/// window, then a uniform string of that weight.
pub fn sample_info_string<R: Rng + ?Sized>(n: usize, epsilon: f64, rng: &mut R) -> Vec<u8> {
    let (lo, hi) = weight_window(n, epsilon);
    let ln_c: Vec<f64> = (lo..=hi).map(|w| ln_binomial(n, w)).collect();
    let top = ln_c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = ln_c.iter().map(|l| (l - top).exp()).collect();
    let dist = rand::distributions::WeightedIndex::new(&weights).expect("nonempty window");
    let w = lo + rng.sample(dist);
    let mut y = vec![0u8; n];
    for i in index::sample(rng, n, w) {
        y[i] = 1;
    }
    y
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn substring_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sel = select_info_step7prime(&[0, 0, 0, 0, 1, 1], 2, 1.0, &mut rng).unwrap();
        assert_eq!(sel.e_indices, vec![0, 1, 4, 5]);
        let sel = select_info_step7prime(&[0, 1, 0, 1], 2, 1.0, &mut rng).unwrap();
        assert_eq!(sel.e_indices, vec![0, 1, 2, 3]);
        assert_eq!(
            select_info_step7prime(&[0, 0, 0, 0], 2, 1.0, &mut rng),
            Err(AbortReason::InsufficientBalancedBits)
        );
    }

    #[test]
    fn selected_positions_carry_y() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v = [1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 1, 1];
        for _ in 0..500 {
            let sel = select_info_step7prime(&v, 4, 0.5, &mut rng).unwrap();
            let mut q = sel.q.clone();
            q.sort_unstable();
            q.dedup();
            assert_eq!(q.len(), 4);
            for (j, &pos) in sel.q.iter().enumerate() {
                assert_eq!(v[pos], sel.y[j]);
                assert!(sel.e_indices.contains(&pos));
            }
        }
    }

    #[test]
    fn info_string_windows() {
        assert_eq!(weight_window(4, 0.0), (2, 2));
        assert_eq!(weight_window(4, 0.5), (1, 3));
        assert_eq!(weight_window(4, 1.0), (0, 4));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let y = sample_info_string(4, 0.0, &mut rng);
            assert_eq!(y.iter().filter(|&&b| b == 1).count(), 2);
        }
    }
}
